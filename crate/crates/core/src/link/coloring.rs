use std::collections::VecDeque;

use num_traits::ToPrimitive;

use super::LinkDiagram;
use crate::homology::IntegerMatrix;
use crate::quandle::{AlexanderQuandle, FiniteQuandle};

/// Colors of the arcs (indexed by arc).
pub type Coloring = Vec<usize>;

/// Arc colors plus face colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowColoring {
    pub arcs: Coloring,
    pub faces: Vec<usize>,
}

/// Backtracking enumeration of colorings of one diagram by one quandle.
pub struct ColoringSearch<'a> {
    q: &'a FiniteQuandle,
    d: &'a LinkDiagram,
    divide: Vec<usize>,
    /// (source arc, over arc, target arc) per crossing
    rules: Vec<(usize, usize, usize)>,
    /// crossings touching each arc
    touching: Vec<Vec<usize>>,
}

impl<'a> ColoringSearch<'a> {
    pub fn new(q: &'a FiniteQuandle, d: &'a LinkDiagram) -> Self {
        let n = q.order();
        let mut divide = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                divide[q.op(x, y) * n + y] = x;
            }
        }
        let rules: Vec<(usize, usize, usize)> = d
            .crossings()
            .iter()
            .map(|c| {
                let (s, t) = c.under_source_target();
                (d.arc_of_edge(s), d.arc_of_edge(c.over_edge()), d.arc_of_edge(t))
            })
            .collect();
        let mut touching = vec![Vec::new(); d.arc_count()];
        for (i, &(s, o, t)) in rules.iter().enumerate() {
            for a in [s, o, t] {
                if !touching[a].contains(&i) {
                    touching[a].push(i);
                }
            }
        }
        ColoringSearch { q, d, divide, rules, touching }
    }

    /// Fills in everything forced by the assigned arcs; false on a contradiction.
    fn propagate(&self, colors: &mut [Option<usize>], trail: &mut Vec<usize>, start: usize) -> bool {
        let n = self.q.order();
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &ci in &self.touching[a] {
                let (s, o, t) = self.rules[ci];
                let (cs, co, ct) = (colors[s], colors[o], colors[t]);
                let forced = match (cs, co, ct) {
                    (Some(x), Some(y), Some(z)) => {
                        if self.q.op(x, y) != z {
                            return false;
                        }
                        None
                    }
                    (Some(x), Some(y), None) => Some((t, self.q.op(x, y))),
                    (None, Some(y), Some(z)) => Some((s, self.divide[z * n + y])),
                    _ => None,
                };
                if let Some((arc, v)) = forced {
                    match colors[arc] {
                        Some(w) if w != v => return false,
                        Some(_) => {}
                        None => {
                            colors[arc] = Some(v);
                            trail.push(arc);
                            queue.push_back(arc);
                        }
                    }
                }
            }
        }
        true
    }

    /// Unassigned arc touching the most crossings with assigned arcs.
    fn pick(&self, colors: &[Option<usize>]) -> Option<usize> {
        (0..colors.len()).filter(|&a| colors[a].is_none()).max_by_key(|&a| {
            let known = self.touching[a]
                .iter()
                .filter(|&&ci| {
                    let (s, o, t) = self.rules[ci];
                    [s, o, t].iter().any(|&b| b != a && colors[b].is_some())
                })
                .count();
            (known, usize::MAX - a)
        })
    }

    fn search(&self, colors: &mut Vec<Option<usize>>, visit: &mut dyn FnMut(&[usize])) {
        let Some(a) = self.pick(colors) else {
            let full: Vec<usize> = colors.iter().map(|c| c.expect("all assigned")).collect();
            visit(&full);
            return;
        };
        for v in 0..self.q.order() {
            let mut trail = vec![a];
            colors[a] = Some(v);
            if self.propagate(colors, &mut trail, a) {
                self.search(colors, visit);
            }
            for x in trail {
                colors[x] = None;
            }
        }
    }

    /// Calls `visit` on every coloring, optionally with one arc's color fixed.
    pub fn for_each(&self, fixed: Option<(usize, usize)>, mut visit: impl FnMut(&[usize])) {
        let mut colors = vec![None; self.d.arc_count()];
        if let Some((arc, v)) = fixed {
            colors[arc] = Some(v);
            let mut trail = Vec::new();
            if !self.propagate(&mut colors, &mut trail, arc) {
                return;
            }
        }
        self.search(&mut colors, &mut visit);
    }

    pub fn all(&self) -> Vec<Coloring> {
        let mut out = Vec::new();
        self.for_each(None, |c| out.push(c.to_vec()));
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(None, |_| n += 1);
        n
    }

    /// Face colors extending an arc coloring, with the face `base` colored `r`.
    /// None if the face system is inconsistent (cannot happen for a valid diagram).
    pub fn extend_to_faces(&self, arcs: &[usize], base: usize, r: usize) -> Option<Vec<usize>> {
        let d = self.d;
        let nf = d.face_count();
        if d.is_unknot_circle() {
            // inside and outside of the circle; the arc color acts across it
            let inner = self.q.op(r, arcs[0]);
            return Some(if base == 0 { vec![r, inner] } else { vec![self.divide[r * self.q.order() + arcs[0]], r] });
        }
        let n = self.q.order();
        let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); nf];
        for e in 0..d.edge_count() {
            let (l, rt) = d.sides(e);
            let y = arcs[d.arc_of_edge(e)];
            // left = right * y
            adj[rt].push((l, y, true));
            adj[l].push((rt, y, false));
        }
        let mut faces = vec![None; nf];
        faces[base] = Some(r);
        let mut queue = VecDeque::from([base]);
        while let Some(f) = queue.pop_front() {
            let c = faces[f].expect("queued faces are colored");
            for &(g, y, forward) in &adj[f] {
                let v = if forward { self.q.op(c, y) } else { self.divide[c * n + y] };
                match faces[g] {
                    Some(w) if w != v => return None,
                    Some(_) => {}
                    None => {
                        faces[g] = Some(v);
                        queue.push_back(g);
                    }
                }
            }
        }
        faces.into_iter().collect()
    }

    /// All shadow colorings: each arc coloring with every choice of color on face 0.
    pub fn shadow_colorings(&self) -> Vec<ShadowColoring> {
        let mut out = Vec::new();
        self.for_each(None, |arcs| {
            for r in 0..self.q.order() {
                if let Some(faces) = self.extend_to_faces(arcs, 0, r) {
                    out.push(ShadowColoring { arcs: arcs.to_vec(), faces });
                }
            }
        });
        out
    }
}

/// Number of colorings by an Alexander quandle, from the Smith form of the linear
/// system T x_source + (1 - T) x_over - x_target = 0 over the module.
pub fn count_colorings_linear(x: &AlexanderQuandle, d: &LinkDiagram) -> u128 {
    let m = x.module();
    let (modulus, dim) = (m.modulus(), m.dim());
    if d.is_unknot_circle() {
        return x.order() as u128;
    }
    let arcs = d.arc_count();
    let mut triplets = Vec::new();
    for (ci, c) in d.crossings().iter().enumerate() {
        let (s, t) = c.under_source_target();
        let (s, o, t) = (d.arc_of_edge(s), d.arc_of_edge(c.over_edge()), d.arc_of_edge(t));
        for i in 0..dim {
            let row = ci * dim + i;
            for j in 0..dim {
                let tij = m.entry(i, j) as i64;
                let id = i64::from(i == j);
                triplets.push((row, s * dim + j, tij));
                triplets.push((row, o * dim + j, id - tij));
            }
            triplets.push((row, t * dim + i, -1));
        }
    }
    let a = IntegerMatrix::from_triplets(d.crossings().len() * dim, arcs * dim, triplets);
    let snf = a.smith_form();
    let mut count = (modulus as u128).pow((arcs * dim - snf.rank) as u32);
    for s in &snf.nontrivial {
        let r = (s % modulus).to_u64().expect("remainder fits");
        count *= num_integer::gcd(r, modulus) as u128;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::tests::TREFOIL;

    #[test]
    fn trefoil_and_figure_eight_counts() {
        let d3 = AlexanderQuandle::parse("dihedral:3").unwrap();
        let t = LinkDiagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(ColoringSearch::new(d3.quandle(), &t).count(), 9);
        assert_eq!(count_colorings_linear(&d3, &t), 9);
        let d5 = AlexanderQuandle::parse("dihedral:5").unwrap();
        let f8 = LinkDiagram::from_braid(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!(ColoringSearch::new(d5.quandle(), &f8).count(), 25);
        assert_eq!(count_colorings_linear(&d5, &f8), 25);
    }

    #[test]
    fn trivial_quandle_colors_components() {
        let t2 = FiniteQuandle::trivial(2);
        let hopf = LinkDiagram::from_braid(2, &[1, 1]).unwrap();
        assert_eq!(ColoringSearch::new(&t2, &hopf).count(), 4);
        let t = LinkDiagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(ColoringSearch::new(&t2, &t).shadow_colorings().len(), 4);
    }

    #[test]
    fn shadow_counts() {
        let d3 = AlexanderQuandle::parse("dihedral:3").unwrap();
        let t = LinkDiagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(ColoringSearch::new(d3.quandle(), &t).shadow_colorings().len(), 27);
        let u = LinkDiagram::unknot();
        assert_eq!(ColoringSearch::new(d3.quandle(), &u).shadow_colorings().len(), 9);
    }
}
