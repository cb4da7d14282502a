//! Fixture loading shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use quandle_homotopy::cocycles::{build_basis, dihedral_cocycle, AlexanderField};
use quandle_homotopy::link::{CocycleTable, LinkDiagram};
use quandle_homotopy::quandle::AlexanderQuandle;

pub fn fixture(rel: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures", rel].iter().collect()
}

fn rows(rel: &str) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(fixture(rel)).unwrap();
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split('|').map(|c| c.trim().to_string()).collect())
        .collect()
}

pub fn diagram(name: &str) -> LinkDiagram {
    let text = std::fs::read_to_string(fixture(&format!("links/{name}.pd"))).unwrap();
    LinkDiagram::parse_pd(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub const DIAGRAMS: &[&str] = &[
    "unknot",
    "trefoil",
    "trefoil_braid",
    "trefoil_r1_positive",
    "trefoil_r1_negative",
    "trefoil_r2",
    "figure_eight",
    "figure_eight_braid",
    "figure_eight_r1",
    "figure_eight_r2",
    "r3_left",
    "r3_right",
    "hopf",
    "torus_link_2_4",
    "cinquefoil",
];

/// (move, left, right)
pub fn moves() -> Vec<(String, String, String)> {
    rows("links/moves.txt").into_iter().map(|r| (r[0].clone(), r[1].clone(), r[2].clone())).collect()
}

/// (p, diagram, state sum text)
pub fn state_sums() -> Vec<(u64, String, String)> {
    rows("links/state_sums.txt").into_iter().map(|r| (r[0].parse().unwrap(), r[1].clone(), r[2].clone())).collect()
}

pub const ALEXANDER_FIXTURES: &[&str] = &[
    "dihedral:3",
    "dihedral:5",
    "dihedral:7",
    "dihedral:9",
    "alex:5:T-2",
    "alex:5:T-3",
    "alex:7:T-2",
    "alex:7:T-3",
    "alex:9:T+1",
    "alex:3:T^2+1",
    "alex:3:T^2+T-1",
    "alex:3:T^2-T-1",
    "alex:2:T^3+T^2+1",
    "alex:2:T^3+T+1",
    "gf:3^2:t^2+1:omega=t",
    "gf:3^2:t^2+1:omega=-1",
    "gf:5^2:omega=-1",
    "pow:dihedral:3^2",
];

/// Every explicit 3-cocycle on small field quandles, as value tables, with a label.
pub fn shadow_cocycles() -> Vec<(String, AlexanderQuandle, CocycleTable)> {
    let mut out = Vec::new();
    for p in [3, 5] {
        let (x, theta) = dihedral_cocycle(p).unwrap();
        let t = CocycleTable::from_polynomial(&theta, &x);
        out.push((format!("{} theta", x.spec()), x, t));
    }
    for spec in ["gf:3^2:t^2+1:omega=t", "gf:3^2:t^2+1:omega=-1"] {
        let x = AlexanderQuandle::parse(spec).unwrap();
        let s = AlexanderField::of(&x).unwrap();
        for m in build_basis(&s).members {
            if let Some(poly) = m.polynomial {
                let t = CocycleTable::from_polynomial(&poly, &x);
                out.push((format!("{spec} {}", m.family), x.clone(), t));
            }
        }
    }
    out
}

/// 2-cocycles (x1 - x2)^a x2^b on F_9 with omega = t for the exponent pairs that pass
/// the cocycle check.
pub fn pair_cocycles() -> Vec<(String, AlexanderQuandle, CocycleTable)> {
    let x = AlexanderQuandle::parse("gf:3^2:t^2+1:omega=t").unwrap();
    let f = x.field().unwrap().0.clone();
    let mut out = Vec::new();
    for (a, b) in [(1, 3), (3, 1), (1, 1), (3, 3)] {
        let t = CocycleTable::from_fn(&f, 9, 2, |xs| {
            let (u, v) = (f.element(xs[0]), f.element(xs[1]));
            f.mul(f.pow(f.sub(u, v), a), f.pow(v, b))
        });
        if t.check(x.quandle()).is_ok() {
            out.push((format!("(x1-x2)^{a} x2^{b}"), x.clone(), t));
        }
    }
    out
}
