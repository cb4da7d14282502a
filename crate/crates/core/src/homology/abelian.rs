use std::collections::BTreeMap;
use std::fmt;

/// A finitely generated abelian group up to isomorphism: Z^rank plus
/// Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... | d_k and every d_i > 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianGroupClass {
    rank: usize,
    torsion: Vec<u64>,
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl AbelianGroupClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupClass { rank, torsion: Vec::new() }
    }

    /// Z/d; Z/1 is trivial and Z/0 is Z.
    pub fn cyclic(d: u64) -> Self {
        Self::new(0, &[d])
    }

    /// From any list of cyclic orders (0 meaning Z), in any order.
    pub fn new(rank: usize, cyclic_orders: &[u64]) -> Self {
        let mut rank = rank;
        let mut primes: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &d in cyclic_orders {
            if d == 0 {
                rank += 1;
                continue;
            }
            for (p, k) in factorize(d) {
                primes.entry(p).or_default().push(k);
            }
        }
        Self::from_elementary(rank, &primes)
    }

    /// From prime-power exponents, per prime.
    pub fn from_elementary(rank: usize, primes: &BTreeMap<u64, Vec<u32>>) -> Self {
        let len = primes.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for (&p, exps) in primes {
            let mut e = exps.clone();
            e.sort_unstable();
            // largest exponents go to the last invariant factors
            for (slot, &k) in torsion[len - e.len()..].iter_mut().zip(&e) {
                *slot *= p.pow(k);
            }
        }
        AbelianGroupClass { rank, torsion }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Per prime, the exponents a_1 <= a_2 <= ... of the elementary divisors.
    pub fn elementary_divisors(&self) -> BTreeMap<u64, Vec<u32>> {
        let mut primes: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &d in &self.torsion {
            for (p, k) in factorize(d) {
                primes.entry(p).or_default().push(k);
            }
        }
        for v in primes.values_mut() {
            v.sort_unstable();
        }
        primes
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.torsion.clone();
        orders.extend_from_slice(&other.torsion);
        Self::new(self.rank + other.rank, &orders)
    }

    /// The torsion subgroup.
    pub fn torsion_part(&self) -> Self {
        AbelianGroupClass { rank: 0, torsion: self.torsion.clone() }
    }

    /// Dimension of G tensor F_p.
    pub fn dim_mod(&self, p: u64) -> usize {
        self.rank + self.torsion.iter().filter(|&&d| d % p == 0).count()
    }

    /// Number of elements of a finite group.
    pub fn order(&self) -> Option<u64> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianGroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == d).count();
            parts.push(if run == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{run}") });
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot read {0:?} as an abelian group (expected e.g. \"0\", \"Z^2 + Z/3\", \"(Z/3)^3\")")]
pub struct ParseGroupError(String);

/// Reads the display format back; summands may come in any order.
impl std::str::FromStr for AbelianGroupClass {
    type Err = ParseGroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGroupError(s.to_string());
        let t = s.trim();
        if t == "0" {
            return Ok(Self::zero());
        }
        let mut orders = Vec::new();
        for part in t.split('+') {
            let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let (base, count) = match part.rsplit_once('^') {
                Some((b, k)) => (b, k.parse::<usize>().map_err(|_| err())?),
                None => (part.as_str(), 1),
            };
            let base = base.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(base);
            let d = match base {
                "Z" => 0,
                _ => base.strip_prefix("Z/").and_then(|d| d.parse::<u64>().ok()).filter(|&d| d > 0).ok_or_else(err)?,
            };
            orders.extend(std::iter::repeat_n(d, count));
        }
        Ok(Self::new(0, &orders))
    }
}
