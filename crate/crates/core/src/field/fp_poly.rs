//! Dense polynomials over a prime field F_p, little-endian, trimmed (zero is empty).

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn from_signed(coeffs: &[i64], p: u64) -> Poly {
    trim(coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (k, &c) in m.iter().enumerate() {
            let idx = shift + k;
            r[idx] = (r[idx] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

fn pow_poly_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Poly {
    let mut acc: Poly = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

/// Every monic polynomial of exact degree `d`, in increasing integer encoding.
fn monic_of_degree(d: usize, p: u64) -> impl Iterator<Item = Poly> {
    let count = p.pow(d as u32);
    (0..count).map(move |mut k| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(k % p);
            k /= p;
        }
        c.push(1);
        c
    })
}

/// Irreducibility of a polynomial of degree >= 1. Degrees up to `brute_force_limit`
/// are decided by trial division; larger ones by the Ben-Or gcd test.
pub(crate) fn is_irreducible(f: &[u64], p: u64, brute_force_limit: usize) -> bool {
    let f = trim(f.to_vec());
    let deg = match f.len() {
        0 | 1 => return false,
        n => n - 1,
    };
    if deg == 1 {
        return true;
    }
    if deg <= brute_force_limit {
        return (1..=deg / 2).all(|d| monic_of_degree(d, p).all(|g| !rem(&f, &g, p).is_empty()));
    }
    let x: Poly = vec![0, 1];
    let mut power = x.clone();
    for _ in 1..=deg / 2 {
        power = pow_poly_mod(&power, p, &f, p);
        let g = gcd(&f, &sub(&power, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `d` with the smallest integer encoding
/// sum c_k p^k (leading coefficients compared first).
pub(crate) fn smallest_irreducible(d: usize, p: u64, brute_force_limit: usize) -> Poly {
    monic_of_degree(d, p)
        .find(|g| is_irreducible(g, p, brute_force_limit))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_and_ben_or_agree() {
        for p in [2u64, 3, 5] {
            for d in 1..=4 {
                for g in monic_of_degree(d, p) {
                    assert_eq!(is_irreducible(&g, p, 8), is_irreducible(&g, p, 0), "{g:?} mod {p}");
                }
            }
        }
    }

    #[test]
    fn counts_of_irreducibles_match_necklace_formula() {
        // number of monic irreducibles of degree d over F_p: (1/d) sum_{k|d} mu(k) p^{d/k}
        let expected = [(2u64, 4usize, 3usize), (3, 2, 3), (3, 3, 8), (5, 2, 10), (2, 5, 6)];
        for (p, d, n) in expected {
            let found = monic_of_degree(d, p).filter(|g| is_irreducible(g, p, 4)).count();
            assert_eq!(found, n, "p={p} d={d}");
        }
    }
}
