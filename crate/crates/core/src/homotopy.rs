//! Homotopy groups of rack and quandle spaces, read off from quandle homology.
//!
//! Everything here is an identification with homology that holds under stated
//! hypotheses; outside them the functions refuse instead of guessing.

use std::collections::BTreeMap;
use std::fmt;

use crate::homology::{AbelianGroupClass, HomologyError, QuandleHomology, Variant};
use crate::quandle::AlexanderQuandle;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error("quandle is not a regular Alexander quandle")]
    NotRegular,
    #[error("quandle has even order and nonzero second homology; pi_2 is not determined")]
    EvenOrderWithNonzeroH2,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(Hypothesis),
    #[error("group has a free part: {0}")]
    InfinitePart(AbelianGroupClass),
    #[error("{summand} is not a direct summand of {whole}")]
    NotASummand { whole: AbelianGroupClass, summand: AbelianGroupClass },
    #[error("p must be an odd prime, got {0}")]
    EvenP(u64),
    #[error("b_3 = {b3} is smaller than the exterior square part of b_2 = {b2}")]
    InconsistentCounts { b2: usize, b3: usize },
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    H2Nonzero,
    EvenOrder,
    NotRegular,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::H2Nonzero => "second quandle homology is nonzero",
            Hypothesis::EvenOrder => "quandle has even order",
            Hypothesis::NotRegular => "quandle is not regular",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// pi_2 of the quandle space
    Pi2Quandle,
    /// pi_2 of the rack space
    Pi2Rack,
    /// the quandle part of pi_3 of the rack space
    Pi3Quandle,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Pi2Quandle => "pi2(BQX)",
            Target::Pi2Rack => "pi2(BX)",
            Target::Pi3Quandle => "pi3Q(BX)",
        }
    }
}

/// Which identification produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation {
    /// H_2^Q = 0, so pi_2 of the quandle space is H_3^Q
    H2Vanishing,
    /// odd order: H_3^Q = pi_2 + exterior square of H_2^Q, split off the latter
    ExteriorSplit,
    /// H_2^Q = 0 and odd order: pi_3^Q = H_4^Q
    H4Identification,
    /// as above, for a quandle of prime order
    PrimeOrder,
}

impl Derivation {
    pub fn tag(self) -> &'static str {
        match self {
            Derivation::H2Vanishing => "h2-vanishing",
            Derivation::ExteriorSplit => "exterior-split",
            Derivation::H4Identification => "h4-identification",
            Derivation::PrimeOrder => "prime-order",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyResult {
    pub target: Target,
    pub value: AbelianGroupClass,
    pub derivation: Derivation,
    /// Hypotheses that were checked by computation, in words.
    pub verified: Vec<String>,
    /// For pi_3^Q: the whole pi_3 of the rack space, value + Z/2.
    pub rack_pi3: Option<AbelianGroupClass>,
}

/// Ranks of pi_2 of the quandle space and of pi_3^Q, rationally, for a quandle
/// with `components` connected components.
pub fn rational_ranks(components: u64) -> (u64, u64) {
    let l = components;
    if l == 0 {
        return (0, 0);
    }
    (l * (l - 1) / 2, l * (l - 1) * l.saturating_sub(2) / 3)
}

/// Second exterior power of a finite abelian group.
pub fn exterior_square(a: &AbelianGroupClass) -> Result<AbelianGroupClass, HomotopyError> {
    if !a.is_finite() {
        return Err(HomotopyError::InfinitePart(a.clone()));
    }
    let mut out: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, exps) in a.elementary_divisors() {
        // exps ascending: the pair (i, j), i < j, contributes p^exps[i]
        let k = exps.len();
        let v: Vec<u32> = exps.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(e, k - 1 - i)).collect();
        if !v.is_empty() {
            out.insert(p, v);
        }
    }
    Ok(AbelianGroupClass::from_elementary(0, &out))
}

/// The complement C with whole = C + summand, for finite groups.
pub fn split_complement(
    whole: &AbelianGroupClass,
    summand: &AbelianGroupClass,
) -> Result<AbelianGroupClass, HomotopyError> {
    for g in [whole, summand] {
        if !g.is_finite() {
            return Err(HomotopyError::InfinitePart(g.clone()));
        }
    }
    let not_summand = || HomotopyError::NotASummand { whole: whole.clone(), summand: summand.clone() };
    let mut rest = whole.elementary_divisors();
    for (p, exps) in summand.elementary_divisors() {
        let have = rest.get_mut(&p).ok_or_else(not_summand)?;
        for e in exps {
            let pos = have.iter().position(|&x| x == e).ok_or_else(not_summand)?;
            have.remove(pos);
        }
    }
    Ok(AbelianGroupClass::from_elementary(0, &rest))
}

fn check_regular(x: &AlexanderQuandle, verified: &mut Vec<String>) -> Result<(), HomotopyError> {
    let reg = x.regularity();
    if !reg.regular {
        return Err(HomotopyError::NotRegular);
    }
    verified.push(format!("regular: T has order {} coprime to |X| = {}", reg.e, x.order()));
    Ok(())
}

fn check_homology_of(x: &AlexanderQuandle, h: &QuandleHomology) {
    assert!(
        std::ptr::eq(h.quandle(), x.quandle()) || h.quandle() == x.quandle(),
        "homology was computed for a different quandle"
    );
}

/// pi_2 of the quandle space of a regular Alexander quandle.
pub fn pi2_quandle_space(x: &AlexanderQuandle) -> Result<HomotopyResult, HomotopyError> {
    pi2_quandle_space_with(x, &QuandleHomology::new(x.quandle(), 4))
}

/// As [`pi2_quandle_space`], reusing complexes already built (degree 4 or more).
pub fn pi2_quandle_space_with(x: &AlexanderQuandle, h: &QuandleHomology) -> Result<HomotopyResult, HomotopyError> {
    check_homology_of(x, h);
    let mut verified = Vec::new();
    check_regular(x, &mut verified)?;
    let h2 = h.homology(Variant::Q, 2)?;
    let h3 = h.homology(Variant::Q, 3)?;
    let (value, derivation) = if h2.is_zero() {
        verified.push("H_2^Q = 0".into());
        (h3, Derivation::H2Vanishing)
    } else if x.order() % 2 == 1 {
        verified.push(format!("|X| = {} is odd", x.order()));
        (split_complement(&h3, &exterior_square(&h2)?)?, Derivation::ExteriorSplit)
    } else {
        return Err(HomotopyError::EvenOrderWithNonzeroH2);
    };
    Ok(HomotopyResult { target: Target::Pi2Quandle, value, derivation, verified, rack_pi3: None })
}

/// pi_2 of the rack space: Z plus pi_2 of the quandle space (connected quandles only).
pub fn pi2_rack_space(x: &AlexanderQuandle) -> Result<HomotopyResult, HomotopyError> {
    pi2_rack_space_with(x, &QuandleHomology::new(x.quandle(), 4))
}

pub fn pi2_rack_space_with(x: &AlexanderQuandle, h: &QuandleHomology) -> Result<HomotopyResult, HomotopyError> {
    let mut r = pi2_quandle_space_with(x, h)?;
    r.target = Target::Pi2Rack;
    r.value = AbelianGroupClass::free(1).direct_sum(&r.value);
    Ok(r)
}

/// pi_3^Q of the rack space, for regular Alexander quandles of odd order with H_2^Q = 0.
pub fn pi3_quandle(x: &AlexanderQuandle) -> Result<HomotopyResult, HomotopyError> {
    pi3_quandle_with(x, &QuandleHomology::new(x.quandle(), 5))
}

/// As [`pi3_quandle`], reusing complexes already built (degree 5 or more).
pub fn pi3_quandle_with(x: &AlexanderQuandle, h: &QuandleHomology) -> Result<HomotopyResult, HomotopyError> {
    check_homology_of(x, h);
    let mut verified = Vec::new();
    check_regular(x, &mut verified).map_err(|_| HomotopyError::HypothesisFailed(Hypothesis::NotRegular))?;
    let n = x.order();
    if n.is_multiple_of(2) {
        return Err(HomotopyError::HypothesisFailed(Hypothesis::EvenOrder));
    }
    verified.push(format!("|X| = {n} is odd"));
    if !h.homology(Variant::Q, 2)?.is_zero() {
        return Err(HomotopyError::HypothesisFailed(Hypothesis::H2Nonzero));
    }
    verified.push("H_2^Q = 0".into());
    let value = h.homology(Variant::Q, 4)?;
    let prime = n > 1 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    let derivation = if prime { Derivation::PrimeOrder } else { Derivation::H4Identification };
    let rack_pi3 = Some(value.direct_sum(&AbelianGroupClass::cyclic(2)));
    Ok(HomotopyResult { target: Target::Pi3Quandle, value, derivation, verified, rack_pi3 })
}

/// dim over F_p of pi_2(quandle space) tensor F_p from the F_p-dimensions b2, b3 of
/// H^2_Q and H^3_Q of a regular Alexander quandle over a field of characteristic p.
pub fn pi2_dim_mod_p(p: u64, b2: usize, b3: usize) -> Result<usize, HomotopyError> {
    if p < 3 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(HomotopyError::EvenP(p));
    }
    let wedge = b2 * b2.saturating_sub(1) / 2;
    b3.checked_sub(wedge).ok_or(HomotopyError::InconsistentCounts { b2, b3 })
}

/// dim over F_p of pi_2 tensor F_p for the h-fold power of a dihedral quandle of
/// prime order p: h^2 (h^2 + 11) / 12.
pub fn dihedral_power_formula(h: u64) -> u64 {
    let num = h * h * (h * h + 11);
    assert_eq!(num % 12, 0, "h^2 (h^2 + 11) is divisible by 12");
    num / 12
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(rank: usize, t: &[u64]) -> AbelianGroupClass {
        AbelianGroupClass::new(rank, t)
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn rational_ranks_small() {
        assert_eq!(rational_ranks(1), (0, 0));
        assert_eq!(rational_ranks(2), (1, 0));
        assert_eq!(rational_ranks(3), (3, 2));
    }

    #[test]
    fn exterior_square_examples() {
        assert_eq!(exterior_square(&g(0, &[3])).unwrap(), AbelianGroupClass::zero());
        assert_eq!(exterior_square(&g(0, &[3, 3])).unwrap(), g(0, &[3]));
        assert_eq!(exterior_square(&g(0, &[3, 9])).unwrap(), g(0, &[3]));
        assert!(matches!(exterior_square(&g(1, &[])), Err(HomotopyError::InfinitePart(_))));
    }

    #[test]
    fn split_complement_examples() {
        assert_eq!(split_complement(&g(0, &[3, 3, 3]), &AbelianGroupClass::zero()).unwrap(), g(0, &[3, 3, 3]));
        assert_eq!(split_complement(&g(0, &[3, 9]), &g(0, &[3])).unwrap(), g(0, &[9]));
        assert!(matches!(split_complement(&g(0, &[5]), &g(0, &[3])), Err(HomotopyError::NotASummand { .. })));
    }

    #[test]
    fn dimension_formulas() {
        assert_eq!(pi2_dim_mod_p(3, 0, 1).unwrap(), 1);
        assert_eq!(pi2_dim_mod_p(3, 1, 3).unwrap(), 3);
        assert_eq!(pi2_dim_mod_p(3, 1, 5).unwrap(), 5);
        assert_eq!(pi2_dim_mod_p(2, 0, 1), Err(HomotopyError::EvenP(2)));
        assert_eq!([1, 2, 3].map(dihedral_power_formula), [1, 5, 15]);
    }

    #[test]
    fn dihedral_quandles() {
        let d3 = AlexanderQuandle::parse("dihedral:3").unwrap();
        let r = pi2_rack_space(&d3).unwrap();
        assert_eq!(r.value, g(1, &[3]));
        assert_eq!(r.derivation, Derivation::H2Vanishing);
        let p = pi3_quandle(&d3).unwrap();
        assert_eq!(p.value, g(0, &[3]));
        assert_eq!(p.derivation, Derivation::PrimeOrder);
        assert_eq!(p.rack_pi3, Some(g(0, &[6])));
    }

    #[test]
    fn refusals() {
        let even = AlexanderQuandle::parse("dihedral:4").unwrap();
        assert_eq!(pi2_quandle_space(&even), Err(HomotopyError::NotRegular));
        assert_eq!(pi3_quandle(&even), Err(HomotopyError::HypothesisFailed(Hypothesis::NotRegular)));
        let f4 = AlexanderQuandle::parse("gf:2^2:omega=t").unwrap();
        assert_eq!(pi3_quandle(&f4), Err(HomotopyError::HypothesisFailed(Hypothesis::EvenOrder)));
        let f9 = AlexanderQuandle::parse("gf:3^2:omega=t").unwrap();
        assert_eq!(pi3_quandle(&f9), Err(HomotopyError::HypothesisFailed(Hypothesis::H2Nonzero)));
    }

    proptest! {
        // any cyclic decomposition: the exterior square is the sum of Z/gcd(d_i, d_j), i < j
        #[test]
        fn exterior_square_matches_pairwise_gcds(ds in prop::collection::vec(1u64..50, 0..6)) {
            let mut pairs = Vec::new();
            for i in 0..ds.len() {
                for j in i + 1..ds.len() {
                    pairs.push(gcd(ds[i], ds[j]));
                }
            }
            prop_assert_eq!(exterior_square(&g(0, &ds)).unwrap(), g(0, &pairs));
        }

        #[test]
        fn split_complement_undoes_direct_sum(a in prop::collection::vec(1u64..40, 0..5), b in prop::collection::vec(1u64..40, 0..5)) {
            let (a, b) = (g(0, &a), g(0, &b));
            prop_assert_eq!(split_complement(&a.direct_sum(&b), &b).unwrap(), a);
        }

        #[test]
        fn dihedral_power_formula_is_integral(h in 1u64..2000) {
            dihedral_power_formula(h);
        }
    }
}
