use proptest::prelude::*;
use quandle_homotopy::homology::{AbelianGroupClass as G, ChainComplex, QuandleHomology, Variant};
use quandle_homotopy::homotopy::{exterior_square, pi2_quandle_space_with, split_complement};
use quandle_homotopy::quandle::{AlexanderQuandle, FiniteQuandle, XSetAction};

const SMALL: &[&str] = &["dihedral:3", "dihedral:5", "alex:5:T-2", "alex:2:T^2+T+1", "dihedral:4", "alex:7:T-3"];

fn relabel(q: &FiniteQuandle, perm: &[usize]) -> FiniteQuandle {
    let n = q.order();
    let mut rows = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            rows[perm[x]][perm[y]] = perm[q.op(x, y)];
        }
    }
    FiniteQuandle::validate(&rows).unwrap()
}

fn divisible(g: &G, p: u64) -> usize {
    g.torsion().iter().filter(|&&d| d % p == 0).count()
}

#[test]
fn universal_coefficients() {
    for spec in SMALL {
        let x = AlexanderQuandle::parse(spec).unwrap();
        let h = QuandleHomology::new(x.quandle(), 4);
        for variant in [Variant::R, Variant::Q] {
            for p in [2, 3, 5, 7] {
                for n in 2..=3 {
                    let (hn, lower) = (h.homology(variant, n).unwrap(), h.homology(variant, n - 1).unwrap());
                    let want = hn.rank() + divisible(&hn, p) + divisible(&lower, p);
                    assert_eq!(h.homology_mod(variant, n, p).unwrap(), want, "{spec} {variant} n={n} p={p}");
                }
            }
        }
    }
}

// H_n with coefficients in X (quandle variant) is H_(n+1)^Q + H_n^Q for regular Alexander X
#[test]
fn quandle_coefficients_split() {
    for spec in ["dihedral:3", "dihedral:5", "alex:5:T-2"] {
        let x = AlexanderQuandle::parse(spec).unwrap();
        let q = x.quandle();
        let over_x = ChainComplex::build(q, &XSetAction::quandle(q), Variant::Q, 3).unwrap();
        let h = QuandleHomology::new(q, 4);
        for n in 1..=2 {
            let want = h.homology(Variant::Q, n + 1).unwrap().direct_sum(&h.homology(Variant::Q, n).unwrap());
            assert_eq!(over_x.homology(n).unwrap(), want, "{spec} n={n}");
        }
    }
}

#[test]
fn trivial_quandles_are_free() {
    for l in 1..=3usize {
        let t = FiniteQuandle::trivial(l);
        let h = QuandleHomology::new(&t, 4);
        for n in 1..=3 {
            assert_eq!(h.homology(Variant::R, n).unwrap(), G::free(l.pow(n as u32)));
            assert_eq!(h.homology(Variant::Q, n).unwrap(), G::free(l * (l - 1).pow(n as u32 - 1)));
        }
    }
}

#[test]
fn pi2_of_rack_space_adds_a_free_summand() {
    for spec in ["dihedral:3", "dihedral:5"] {
        let x = AlexanderQuandle::parse(spec).unwrap();
        let h = QuandleHomology::new(x.quandle(), 4);
        let q = pi2_quandle_space_with(&x, &h).unwrap().value;
        let r = quandle_homotopy::homotopy::pi2_rack_space_with(&x, &h).unwrap().value;
        assert_eq!(r, G::free(1).direct_sum(&q));
    }
}

fn finite_group() -> impl Strategy<Value = G> {
    prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 5, 8, 9, 25, 27]), 0..5).prop_map(|v| G::new(0, &v))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn homology_ignores_labels(which in 0..SMALL.len(), seed in any::<u64>()) {
        let x = AlexanderQuandle::parse(SMALL[which]).unwrap();
        let n = x.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let y = relabel(x.quandle(), &perm);
        let (a, b) = (QuandleHomology::new(x.quandle(), 4), QuandleHomology::new(&y, 4));
        for variant in [Variant::R, Variant::Q, Variant::D, Variant::L] {
            for k in 1..=3 {
                prop_assert_eq!(a.homology(variant, k).unwrap(), b.homology(variant, k).unwrap());
            }
        }
    }

    // the exterior-square summand is split back off exactly
    #[test]
    fn split_after_exterior_square(h2 in finite_group(), pi2 in finite_group()) {
        let wedge = exterior_square(&h2).unwrap();
        let whole = pi2.direct_sum(&wedge);
        prop_assert_eq!(split_complement(&whole, &wedge).unwrap(), pi2);
    }

    #[test]
    fn products_of_trivial_quandles(a in 1usize..=3, b in 1usize..=2) {
        let p = FiniteQuandle::trivial(a).product(&FiniteQuandle::trivial(b));
        let h = QuandleHomology::new(&p, 3);
        prop_assert_eq!(h.homology(Variant::R, 2).unwrap(), G::free((a * b).pow(2)));
    }
}

// base change: dim over F_q of H^2 equals dim over F_p of H_2^Q(X; F_p), no factor of h
#[test]
fn h2_dimension_is_preserved_by_base_change() {
    use quandle_homotopy::cocycles::{dim_h2, AlexanderField};
    for spec in ["gf:3^2:t^2+1:omega=t", "gf:3^2:t^2+1:omega=-1", "gf:5^2:omega=-1", "gf:3^3:omega=-1", "gf:3:omega=-1"]
    {
        let x = AlexanderQuandle::parse(spec).unwrap();
        let s = AlexanderField::of(&x).unwrap();
        let h = QuandleHomology::new(x.quandle(), 3);
        assert_eq!(dim_h2(&s), h.homology_mod(Variant::Q, 2, s.p()).unwrap(), "{spec}");
    }
}
