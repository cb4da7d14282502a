//! Classical link diagrams, quandle colorings and cocycle state sums.
//!
//! Diagrams are PD codes. A crossing `X[a,b,c,d] s` lists its four edges
//! counterclockwise starting from the incoming under-edge, so a -> c is the under
//! strand; the sign s fixes the over direction: d -> b when positive, b -> d when
//! negative. Edges are labelled arbitrarily but each label must occur exactly twice.
//!
//! Conventions, fixed once here. Every strand has a normal pointing to its left.
//! Crossing the over-arc y along its normal multiplies by y on the right: the under
//! edge on the normal's head side is colored x * y, where x colors the edge on the
//! tail side (the source edge). The same rule colors regions: the region to the
//! left of an arc colored y is (region to its right) * y. A crossing's weight is read
//! at the source: sign * phi(x, y) for 2-cocycles and sign * theta(r, x, y) for
//! shadow 3-cocycles, where r colors the region right of both strands.

mod coloring;
mod statesum;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use coloring::{count_colorings_linear, Coloring, ColoringSearch, ShadowColoring};
pub use statesum::{
    based_reduction, mirror_check, shadow_invariant, two_cocycle_invariant, BasedReport, CocycleTable, LinkError,
    MirrorReport, StateSum,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge {label} occurs {count} times (expected 2)")]
    ArcCountMismatch { label: String, count: usize },
    #[error("edge {label} is not entered at one end and left at the other")]
    Orientation { label: String },
    #[error("faces do not satisfy the Euler count: {vertices} - {edges} + {faces} != 1 + {pieces}")]
    NonPlanar { vertices: usize, edges: usize, faces: usize, pieces: usize },
    #[error("braid generator {0} is out of range")]
    BraidIndex(i32),
    #[error("braid strand {0} has no crossings; its closure is a split unknot")]
    FreeStrand(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    /// Edge indices counterclockwise from the incoming under-edge.
    pub edges: [usize; 4],
    pub positive: bool,
}

impl Crossing {
    /// Positions (0..4) of the incoming and outgoing over-edges.
    fn over_in_out(&self) -> (usize, usize) {
        if self.positive {
            (3, 1)
        } else {
            (1, 3)
        }
    }

    /// Whether the edge at position k points into the crossing.
    fn incoming(&self, k: usize) -> bool {
        k == 0 || k == self.over_in_out().0
    }

    /// Under-edge on the tail side of the over strand's normal, and on the head side.
    pub fn under_source_target(&self) -> (usize, usize) {
        if self.positive {
            (self.edges[0], self.edges[2])
        } else {
            (self.edges[2], self.edges[0])
        }
    }

    pub fn over_edge(&self) -> usize {
        self.edges[1]
    }

    /// Corner (k, k+1) holding the region right of both strands.
    fn source_corner(&self) -> usize {
        if self.positive {
            0
        } else {
            1
        }
    }
}

/// A validated diagram with its arcs and faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    labels: Vec<String>,
    /// Over-arc of each edge.
    arc_of: Vec<usize>,
    arc_count: usize,
    /// Face to the left and right of each edge.
    left: Vec<usize>,
    right: Vec<usize>,
    face_count: usize,
    /// Closed components with no crossings (diagram circles).
    free_circles: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }

    /// Dense class ids in order of first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let mut ids = HashMap::new();
        let n = self.0.len();
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = ids.len();
            out.push(*ids.entry(r).or_insert(next));
        }
        (out, ids.len())
    }
}

impl LinkDiagram {
    /// The unknot as a single circle.
    pub fn unknot() -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            labels: Vec::new(),
            arc_of: Vec::new(),
            arc_count: 0,
            left: Vec::new(),
            right: Vec::new(),
            face_count: 2,
            free_circles: 1,
        }
    }

    /// Parses PD text: one `X[a,b,c,d] +` or `X[a,b,c,d] -` per line, `#` comments.
    /// Text without crossings is the unknot.
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: &str| DiagramError::Parse { line: i + 1, message: message.to_string() };
            let rest = line.strip_prefix("X[").ok_or_else(|| bad("expected X[a,b,c,d] followed by + or -"))?;
            let (inner, sign) = rest.split_once(']').ok_or_else(|| bad("missing ]"))?;
            let labels: Vec<String> = inner.split(',').map(|s| s.trim().to_string()).collect();
            if labels.len() != 4 || labels.iter().any(String::is_empty) {
                return Err(bad("a crossing has exactly four edge labels"));
            }
            let positive = match sign.trim() {
                "+" => true,
                "-" => false,
                _ => return Err(bad("sign must be + or -")),
            };
            raw.push((<[String; 4]>::try_from(labels).expect("length checked"), positive));
        }
        if raw.is_empty() {
            return Ok(Self::unknot());
        }
        Self::from_labelled(raw)
    }

    fn from_labelled(raw: Vec<([String; 4], bool)>) -> Result<Self, DiagramError> {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut labels = Vec::new();
        let mut crossings = Vec::new();
        for (ls, positive) in &raw {
            let mut edges = [0usize; 4];
            for (k, l) in ls.iter().enumerate() {
                edges[k] = *index.entry(l.clone()).or_insert_with(|| {
                    labels.push(l.clone());
                    labels.len() - 1
                });
            }
            crossings.push(Crossing { edges, positive: *positive });
        }
        Self::build(crossings, labels)
    }

    fn build(crossings: Vec<Crossing>, labels: Vec<String>) -> Result<Self, DiagramError> {
        let e = labels.len();
        let mut count = vec![0usize; e];
        let mut ins = vec![0usize; e];
        for c in &crossings {
            for k in 0..4 {
                count[c.edges[k]] += 1;
                ins[c.edges[k]] += usize::from(c.incoming(k));
            }
        }
        for i in 0..e {
            if count[i] != 2 {
                return Err(DiagramError::ArcCountMismatch { label: labels[i].clone(), count: count[i] });
            }
            if ins[i] != 1 {
                return Err(DiagramError::Orientation { label: labels[i].clone() });
            }
        }
        // over-arcs: the over strand does not break
        let mut arcs = UnionFind::new(e);
        for c in &crossings {
            arcs.union(c.edges[1], c.edges[3]);
        }
        let (arc_of, arc_count) = arcs.classes();
        // faces: glue the sides of consecutive edges around each crossing
        let side = |edge: usize, left: bool| 2 * edge + usize::from(!left);
        let mut faces = UnionFind::new(2 * e);
        for c in &crossings {
            for k in 0..4 {
                let (a, b) = (k, (k + 1) % 4);
                // counterclockwise after an outgoing edge lies on its left, after an
                // incoming edge on its right; before an edge it is the other way round
                let after = side(c.edges[a], !c.incoming(a));
                let before = side(c.edges[b], c.incoming(b));
                faces.union(after, before);
            }
        }
        let (face_of, face_count) = faces.classes();
        let left: Vec<usize> = (0..e).map(|i| face_of[side(i, true)]).collect();
        let right: Vec<usize> = (0..e).map(|i| face_of[side(i, false)]).collect();
        let mut pieces = UnionFind::new(crossings.len());
        let mut seen: Vec<Option<usize>> = vec![None; e];
        for (ci, c) in crossings.iter().enumerate() {
            for &ed in &c.edges {
                match seen[ed] {
                    Some(other) => pieces.union(ci, other),
                    None => seen[ed] = Some(ci),
                }
            }
        }
        let pieces = pieces.classes().1;
        let v = crossings.len();
        if v + face_count != e + 1 + pieces {
            return Err(DiagramError::NonPlanar { vertices: v, edges: e, faces: face_count, pieces });
        }
        Ok(LinkDiagram { crossings, labels, arc_of, arc_count, left, right, face_count, free_circles: 0 })
    }

    /// Closure of a braid on `strands` strands; generator i > 0 is a positive
    /// crossing of strands i and i+1, -i its inverse.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<Self, DiagramError> {
        if strands == 1 && word.is_empty() {
            return Ok(Self::unknot());
        }
        let mut current: Vec<usize> = (0..strands).collect();
        let mut next_label = strands;
        let mut raw: Vec<([usize; 4], bool)> = Vec::new();
        let mut touched = vec![false; strands];
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return Err(DiagramError::BraidIndex(g));
            }
            let (lo, hi) = (i - 1, i);
            touched[lo] = true;
            touched[hi] = true;
            let (bl, br) = (current[lo], current[hi]);
            let (tl, tr) = (next_label, next_label + 1);
            next_label += 2;
            // strands run upward; the crossing swaps positions lo and hi
            if g > 0 {
                // over strand from bottom-left to top-right
                raw.push(([br, tr, tl, bl], true));
            } else {
                raw.push(([bl, br, tr, tl], false));
            }
            current[lo] = tl;
            current[hi] = tr;
        }
        if let Some(k) = touched.iter().position(|t| !t) {
            return Err(DiagramError::FreeStrand(k + 1));
        }
        // close up: the top edge at each position is the bottom edge there
        let mut rename: HashMap<usize, usize> = HashMap::new();
        for (k, &top) in current.iter().enumerate() {
            rename.insert(top, k);
        }
        let raw =
            raw.into_iter().map(|(es, s)| (es.map(|x| rename.get(&x).copied().unwrap_or(x).to_string()), s)).collect();
        Self::from_labelled(raw)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    /// Arcs of the diagram (a crossing-free circle counts as one arc).
    pub fn arc_count(&self) -> usize {
        self.arc_count + self.free_circles
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    pub fn arc_of_edge(&self, edge: usize) -> usize {
        self.arc_of[edge]
    }

    pub fn is_unknot_circle(&self) -> bool {
        self.free_circles > 0
    }

    /// Faces to the left and right of an edge.
    pub fn sides(&self, edge: usize) -> (usize, usize) {
        (self.left[edge], self.right[edge])
    }

    /// Face right of both strands at a crossing.
    pub fn source_face(&self, c: &Crossing) -> usize {
        let k = c.source_corner();
        // the corner counterclockwise after edge k
        let e = c.edges[k];
        if c.incoming(k) {
            self.right[e]
        } else {
            self.left[e]
        }
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.labels.len());
        for c in &self.crossings {
            uf.union(c.edges[0], c.edges[2]);
            uf.union(c.edges[1], c.edges[3]);
        }
        uf.classes().1 + self.free_circles
    }

    fn relabel(&self, crossings: Vec<Crossing>) -> Self {
        Self::build(crossings, self.labels.clone()).expect("a mirror or reverse of a valid diagram is valid")
    }

    /// Mirror image: every crossing switched.
    pub fn mirror(&self) -> Self {
        if self.free_circles > 0 {
            return self.clone();
        }
        let cs = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.edges;
                // the old incoming over-edge becomes the incoming under-edge
                let edges = if c.positive { [d, a, b, cc] } else { [b, cc, d, a] };
                Crossing { edges, positive: !c.positive }
            })
            .collect();
        self.relabel(cs)
    }

    /// Same diagram with every orientation reversed.
    pub fn reverse(&self) -> Self {
        if self.free_circles > 0 {
            return self.clone();
        }
        let cs = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.edges;
                Crossing { edges: [cc, d, a, b], positive: c.positive }
            })
            .collect();
        self.relabel(cs)
    }

    pub fn to_pd(&self) -> String {
        self.crossings
            .iter()
            .map(|c| {
                let l = c.edges.map(|e| self.labels[e].as_str());
                format!("X[{},{},{},{}] {}\n", l[0], l[1], l[2], l[3], if c.positive { "+" } else { "-" })
            })
            .collect()
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}
