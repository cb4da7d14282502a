//! Rack, degenerate, quandle and late-degenerate chain complexes and their homology.

mod abelian;
mod checks;
mod complex;
mod matrix;
mod snf;

use std::sync::OnceLock;

pub use abelian::{AbelianGroupClass, ParseGroupError};
pub use checks::{
    covering_shift_check, late_degenerate_check, rank_report, splitting_report, torsion_annihilation_check,
    u_coordinate_check, Check, CheckReport, UCoordinateReport,
};
pub(crate) use complex::boundary_terms;
pub use complex::{ChainComplex, Variant, DEFAULT_BUDGET};
pub use matrix::{field_rank, IntegerMatrix, SmithForm};

use crate::quandle::{FiniteQuandle, QuandleError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("degree {degree} needs boundaries up to {}, complex stops at {n_max}", degree + 1)]
    DegreeOutOfRange { degree: usize, n_max: usize },
    #[error("degree {degree} has {size} generators, over the budget of {budget}")]
    BudgetExceeded { degree: usize, size: u64, budget: usize },
    #[error("basis in degree {degree} is not closed under the boundary: {witness}")]
    NotSubcomplex { degree: usize, witness: String },
    #[error("boundary squares to a nonzero map into degree {}", degree - 2)]
    BoundarySquareNonzero { degree: usize },
    #[error("an invariant factor does not fit in 64 bits")]
    FactorOverflow,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("quandle is not a regular Alexander quandle")]
    PreconditionNotRegular,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error(transparent)]
    Quandle(#[from] QuandleError),
}

/// Point-coefficient complexes of one quandle, all four variants, built on demand.
pub struct QuandleHomology<'a> {
    quandle: &'a FiniteQuandle,
    n_max: usize,
    complexes: [OnceLock<Result<ChainComplex, HomologyError>>; 4],
}

impl<'a> QuandleHomology<'a> {
    /// Homology will be available in degrees up to `n_max - 1`.
    pub fn new(quandle: &'a FiniteQuandle, n_max: usize) -> Self {
        QuandleHomology { quandle, n_max, complexes: Default::default() }
    }

    pub fn quandle(&self) -> &FiniteQuandle {
        self.quandle
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn complex(&self, variant: Variant) -> Result<&ChainComplex, HomologyError> {
        let slot = match variant {
            Variant::R => 0,
            Variant::D => 1,
            Variant::Q => 2,
            Variant::L => 3,
        };
        self.complexes[slot]
            .get_or_init(|| ChainComplex::point(self.quandle, variant, self.n_max))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn homology(&self, variant: Variant, n: usize) -> Result<AbelianGroupClass, HomologyError> {
        self.complex(variant)?.homology(n)
    }

    pub fn homology_mod(&self, variant: Variant, n: usize, p: u64) -> Result<usize, HomologyError> {
        self.complex(variant)?.homology_mod(n, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::AlexanderQuandle;

    #[test]
    fn dihedral_three_quandle_homology() {
        let x = AlexanderQuandle::parse("dihedral:3").unwrap();
        let h = QuandleHomology::new(x.quandle(), 5);
        assert_eq!(h.homology(Variant::Q, 2).unwrap(), AbelianGroupClass::zero());
        assert_eq!(h.homology(Variant::Q, 3).unwrap(), AbelianGroupClass::cyclic(3));
        assert_eq!(h.homology(Variant::Q, 4).unwrap(), AbelianGroupClass::cyclic(3));
    }

    #[test]
    fn trivial_quandle_ranks() {
        for l in 1..=3usize {
            let t = FiniteQuandle::trivial(l);
            let h = QuandleHomology::new(&t, 4);
            for n in 1..=3 {
                let expected = l * (l - 1).pow(n as u32 - 1);
                assert_eq!(h.homology(Variant::Q, n).unwrap(), AbelianGroupClass::free(expected));
                assert_eq!(h.homology(Variant::R, n).unwrap(), AbelianGroupClass::free(l.pow(n as u32)));
            }
        }
    }

    #[test]
    fn field_coefficients_follow_universal_coefficients() {
        let x = AlexanderQuandle::parse("gf:3^2:omega=t").unwrap();
        let h = QuandleHomology::new(x.quandle(), 4);
        for n in 1..=3 {
            let over_z = h.homology(Variant::Q, n).unwrap();
            let below = h.homology(Variant::Q, n - 1).ok();
            let predicted =
                over_z.dim_mod(3) + below.map_or(0, |g| g.torsion().iter().filter(|&&d| d % 3 == 0).count());
            assert_eq!(h.homology_mod(Variant::Q, n, 3).unwrap(), predicted, "degree {n}");
        }
    }
}
