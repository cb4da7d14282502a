use std::collections::BTreeMap;
use std::fmt;

use super::complex::{decode, encode};
use super::{AbelianGroupClass, ChainComplex, HomologyError, QuandleHomology, Variant};
use crate::quandle::{AlexanderQuandle, XSetAction};

/// One verified identity or property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub degree: usize,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    fn compare(&mut self, name: &str, degree: usize, lhs: &AbelianGroupClass, rhs: &AbelianGroupClass) {
        self.checks.push(Check { name: name.to_string(), degree, detail: format!("{lhs} vs {rhs}"), pass: lhs == rhs });
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {} (n={}): {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.degree, c.detail)?;
        }
        Ok(())
    }
}

/// Rank of H_n^R is l^n and rank of H_n^Q is l(l-1)^(n-1), l the number of orbits.
pub fn rank_report(h: &QuandleHomology) -> Result<CheckReport, HomologyError> {
    let l = h.quandle().connected_components().len();
    let mut report = CheckReport::default();
    for n in 1..h.n_max() {
        let r = h.homology(Variant::R, n)?.rank();
        let q = h.homology(Variant::Q, n)?.rank();
        let (er, eq) = (l.pow(n as u32), l * l.saturating_sub(1).pow(n as u32 - 1));
        report.checks.push(Check {
            name: "rack rank".into(),
            degree: n,
            detail: format!("{r} vs {er}"),
            pass: r == er,
        });
        report.checks.push(Check {
            name: "quandle rank".into(),
            degree: n,
            detail: format!("{q} vs {eq}"),
            pass: q == eq,
        });
    }
    Ok(report)
}

/// The splittings of rack homology into quandle, degenerate and late-degenerate parts,
/// in every degree the complexes of `h` reach:
///
/// - H_2^R = H_2^Q + Z^l and H_3^R = H_3^Q + H_2^Q + Z^(l^2);
/// - H_n^R = H_n^Q + H_n^D;
/// - H_n^D = H_(n-1)^Q + H_n^L for n >= 2 (the degenerate complex is the quandle complex
///   shifted up by one, plus the late-degenerate part).
pub fn splitting_report(h: &QuandleHomology) -> Result<CheckReport, HomologyError> {
    let l = h.quandle().connected_components().len();
    let top = h.n_max() - 1;
    let mut report = CheckReport::default();
    let get = |v, n| h.homology(v, n);
    if top >= 2 {
        let rhs = get(Variant::Q, 2)?.direct_sum(&AbelianGroupClass::free(l));
        report.compare("rack = quandle + orbits", 2, &get(Variant::R, 2)?, &rhs);
    }
    if top >= 3 {
        let rhs = get(Variant::Q, 3)?.direct_sum(&get(Variant::Q, 2)?).direct_sum(&AbelianGroupClass::free(l * l));
        report.compare("rack = quandle + lower quandle + orbit pairs", 3, &get(Variant::R, 3)?, &rhs);
    }
    for n in 1..=top {
        let rhs = get(Variant::Q, n)?.direct_sum(&get(Variant::D, n)?);
        report.compare("rack = quandle + degenerate", n, &get(Variant::R, n)?, &rhs);
    }
    for n in 2..=top {
        let rhs = get(Variant::Q, n - 1)?.direct_sum(&get(Variant::L, n)?);
        report.compare("degenerate = shifted quandle + late degenerate", n, &get(Variant::D, n)?, &rhs);
    }
    Ok(report)
}

fn require_regular(x: &AlexanderQuandle) -> Result<u64, HomologyError> {
    let reg = x.regularity();
    if !reg.regular {
        return Err(HomologyError::PreconditionNotRegular);
    }
    Ok(reg.e)
}

/// For a regular Alexander quandle, H_n with coefficients in Inn(X) and in X both
/// agree with H_(n+1)^R, for n = 1..=max_degree.
pub fn covering_shift_check(x: &AlexanderQuandle, max_degree: usize) -> Result<CheckReport, HomologyError> {
    require_regular(x)?;
    let q = x.quandle();
    let group = q.inner_group()?;
    let inner = ChainComplex::build(q, &XSetAction::inner(q, &group), Variant::R, max_degree + 1)?;
    let over_x = ChainComplex::build(q, &XSetAction::quandle(q), Variant::R, max_degree + 1)?;
    let point = ChainComplex::point(q, Variant::R, max_degree + 2)?;
    let mut report = CheckReport::default();
    for n in 1..=max_degree {
        let target = point.homology(n + 1)?;
        report.compare("inner coefficients = shifted rack", n, &inner.homology(n)?, &target);
        report.compare("quandle coefficients = shifted rack", n, &over_x.homology(n)?, &target);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UCoordinateReport {
    pub generators_checked: usize,
    /// Sign s with (change of coordinates) . boundary = s * (U-boundary) . (change of coordinates).
    pub sign: Option<i64>,
    pub witness: Option<String>,
}

impl UCoordinateReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none() && self.sign.is_some()
    }
}

type Chain = BTreeMap<u64, i64>;

fn add_term(chain: &mut Chain, code: u64, v: i64) {
    let e = chain.entry(code).or_insert(0);
    *e += v;
    if *e == 0 {
        chain.remove(&code);
    }
}

/// Rebuilds the rack complex with Inn(X) coefficients in the coordinates
/// (eps, U_0; U_1, ..., U_n), where g = (eps, x_0) with g(y) = T^eps y + g(0) - T^eps 0,
/// x_0 = g(0), U_0 = x_0 - x_1, U_i = x_i - x_(i+1), U_n = x_n, and checks that the
/// change of coordinates intertwines the two boundaries in degrees 1..=max_degree.
pub fn u_coordinate_check(x: &AlexanderQuandle, max_degree: usize) -> Result<UCoordinateReport, HomologyError> {
    let reg = x.regularity();
    if !reg.connected {
        return Err(HomologyError::HypothesisFailed("quandle is not connected".into()));
    }
    let structure = x.inn_structure_check()?;
    if let Some(w) = structure.witness {
        return Err(HomologyError::HypothesisFailed(w));
    }
    let e = reg.e;
    let m = x.module();
    let q = x.quandle();
    let nx = q.order();
    let group = q.inner_group()?;
    let action = XSetAction::inner(q, &group);

    // inner element -> (eps, g(0))
    let mut coords = Vec::with_capacity(group.order());
    for g in group.elements() {
        let base = g[0] as usize;
        let eps = (0..e).find(|&eps| (0..nx).all(|y| g[y] as usize == m.add(m.t_power_times(eps, y), base)));
        match eps {
            Some(eps) => coords.push((eps as usize, base)),
            None => return Err(HomologyError::HypothesisFailed("inner element is not affine".into())),
        }
    }
    // (eps, x0) is stored in the U-complex's coefficient slot as eps * |X| + U_0
    let to_u = |g: usize, xs: &[usize]| -> u64 {
        let (eps, x0) = coords[g];
        let mut us = Vec::with_capacity(xs.len() + 1);
        let mut prev = x0;
        for &xi in xs {
            us.push(m.sub(prev, xi));
            prev = xi;
        }
        us.push(prev);
        encode(eps * nx + us[0], &us[1..], nx)
    };
    let u_boundary = |code: u64, n: usize| -> Chain {
        let (slot, rest) = decode(code, nx, n);
        let (eps, u0) = (slot / nx, slot % nx);
        let mut us = vec![u0];
        us.extend(rest);
        let mut out = Chain::new();
        for i in 0..n {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let mut moved: Vec<usize> = us[..i].iter().map(|&u| m.t_times(u)).collect();
            moved.push(m.add(m.t_times(us[i]), us[i + 1]));
            moved.extend_from_slice(&us[i + 2..]);
            let next = ((eps as u64 + 1) % e) as usize;
            add_term(&mut out, encode(next * nx + moved[0], &moved[1..], nx), sign);
            let mut merged = us[..i].to_vec();
            merged.push(m.add(us[i], us[i + 1]));
            merged.extend_from_slice(&us[i + 2..]);
            add_term(&mut out, encode(eps * nx + merged[0], &merged[1..], nx), -sign);
        }
        out
    };

    let mut report = UCoordinateReport { generators_checked: 0, sign: None, witness: None };
    for n in 0..=max_degree {
        let mut seen = vec![false; group.order() * nx.pow(n as u32)];
        for g in 0..group.order() {
            for code in 0..nx.pow(n as u32) as u64 {
                let xs = decode(code, nx, n).1;
                let image = to_u(g, &xs) as usize;
                if std::mem::replace(&mut seen[image], true) {
                    report.witness = Some(format!("coordinate change is not injective in degree {n}"));
                    return Ok(report);
                }
                if n == 0 {
                    continue;
                }
                let mut lhs = Chain::new();
                for (s, ty, txs) in super::boundary_terms(q, &action, g, &xs) {
                    add_term(&mut lhs, to_u(ty, &txs), s);
                }
                let rhs = u_boundary(to_u(g, &xs), n);
                let sign = match report.sign {
                    Some(s) => s,
                    None if lhs.is_empty() && rhs.is_empty() => 1,
                    None => {
                        let s = if lhs.iter().all(|(c, v)| rhs.get(c) == Some(v)) { 1 } else { -1 };
                        report.sign = Some(s);
                        s
                    }
                };
                let scaled: Chain = rhs.iter().map(|(&c, &v)| (c, sign * v)).collect();
                if lhs != scaled {
                    report.witness = Some(format!("generator ({g}; {xs:?}) in degree {n}: {lhs:?} vs {scaled:?}"));
                    return Ok(report);
                }
                report.generators_checked += 1;
            }
        }
    }
    Ok(report)
}

/// Every invariant factor of H_n^R and H_n^Q (n <= max_degree) and of the homology with
/// Inn(X) coefficients (n <= inner_degree) divides |X|.
pub fn torsion_annihilation_check(
    x: &AlexanderQuandle,
    h: &QuandleHomology,
    max_degree: usize,
    inner_degree: usize,
) -> Result<CheckReport, HomologyError> {
    require_regular(x)?;
    let order = x.order() as u64;
    let mut report = CheckReport::default();
    let mut push = |name: &str, n: usize, g: AbelianGroupClass| {
        let pass = g.torsion().iter().all(|d| order.is_multiple_of(*d));
        report.checks.push(Check { name: name.into(), degree: n, detail: format!("{g}, |X| = {order}"), pass });
    };
    for n in 1..=max_degree {
        push("rack torsion divides |X|", n, h.homology(Variant::R, n)?);
        push("quandle torsion divides |X|", n, h.homology(Variant::Q, n)?);
    }
    if inner_degree > 0 {
        let q = x.quandle();
        let group = q.inner_group()?;
        let inner = ChainComplex::build(q, &XSetAction::inner(q, &group), Variant::R, inner_degree + 1)?;
        for n in 1..=inner_degree {
            push("inner-coefficient torsion divides |X|", n, inner.homology(n)?);
        }
    }
    Ok(report)
}

/// H_4^L for a regular Alexander quandle with H_2^Q = 0 (expected to be Z).
pub fn late_degenerate_check(x: &AlexanderQuandle) -> Result<AbelianGroupClass, HomologyError> {
    require_regular(x)?;
    let q = x.quandle();
    let h2 = ChainComplex::point(q, Variant::Q, 3)?.homology(2)?;
    if !h2.is_zero() {
        return Err(HomologyError::HypothesisFailed(format!("H_2^Q = {h2}, not 0")));
    }
    ChainComplex::point(q, Variant::L, 5)?.homology(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::FiniteQuandle;

    #[test]
    fn splitting_on_small_quandles() {
        for spec in ["dihedral:3", "dihedral:1"] {
            let x = AlexanderQuandle::parse(spec).unwrap();
            let h = QuandleHomology::new(x.quandle(), 5);
            let r = splitting_report(&h).unwrap();
            assert!(r.passed(), "{spec}\n{r}");
            assert!(rank_report(&h).unwrap().passed());
        }
        let t = FiniteQuandle::trivial(2);
        let h = QuandleHomology::new(&t, 5);
        assert!(splitting_report(&h).unwrap().passed());
    }

    #[test]
    fn literal_upward_shift_fails_on_d3() {
        // H_2^D is Z but H_3^Q is Z/3, so the degenerate part cannot be the quandle
        // complex shifted down.
        let x = AlexanderQuandle::parse("dihedral:3").unwrap();
        let h = QuandleHomology::new(x.quandle(), 4);
        assert_eq!(h.homology(Variant::D, 2).unwrap(), AbelianGroupClass::free(1));
        assert_eq!(h.homology(Variant::Q, 3).unwrap(), AbelianGroupClass::cyclic(3));
    }

    #[test]
    fn u_coordinates_on_d3() {
        let x = AlexanderQuandle::parse("dihedral:3").unwrap();
        let r = u_coordinate_check(&x, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.generators_checked, 6 * (3 + 9 + 27));
    }

    #[test]
    fn covering_and_late_degenerate_on_d3() {
        let x = AlexanderQuandle::parse("dihedral:3").unwrap();
        let r = covering_shift_check(&x, 2).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(late_degenerate_check(&x).unwrap(), AbelianGroupClass::free(1));
    }

    #[test]
    fn non_regular_is_rejected() {
        let x = AlexanderQuandle::parse("dihedral:4").unwrap();
        assert_eq!(late_degenerate_check(&x), Err(HomologyError::PreconditionNotRegular));
    }
}
