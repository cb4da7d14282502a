use std::collections::HashMap;

use super::{FiniteQuandle, QuandleError};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A permutation of `0..n`, stored as its image list.
pub type Perm = Vec<u32>;

/// `g` followed by `h`: x -> h(g(x)).
pub fn then(g: &[u32], h: &[u32]) -> Perm {
    g.iter().map(|&x| h[x as usize]).collect()
}

/// The group generated by the right translations of a quandle.
///
/// Products are read left to right: `mul(a, b)` applies `a` first.
#[derive(Debug, Clone)]
pub struct InnerGroup {
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl InnerGroup {
    pub(crate) fn generate(q: &FiniteQuandle, cap: usize) -> Result<InnerGroup, QuandleError> {
        let generators: Vec<Perm> = (0..q.order()).map(|y| q.right_translation(y)).collect();
        let identity: Perm = (0..q.order() as u32).collect();
        let mut distinct: Vec<&Perm> = Vec::new();
        for g in &generators {
            if *g != identity && !distinct.contains(&g) {
                distinct.push(g);
            }
        }
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut next = 0;
        while next < elements.len() {
            for s in &distinct {
                let candidate = then(&elements[next], s);
                if !index.contains_key(&candidate) {
                    if elements.len() == cap {
                        return Err(QuandleError::GroupTooLarge(cap));
                    }
                    index.insert(candidate.clone(), elements.len());
                    elements.push(candidate);
                }
            }
            next += 1;
        }
        Ok(InnerGroup { generators, elements, index })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    /// The right translation by `y`.
    pub fn generator(&self, y: usize) -> &Perm {
        &self.generators[y]
    }

    pub fn index_of(&self, g: &[u32]) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&then(&self.elements[a], &self.elements[b])]
    }

    /// Index of `g` followed by the right translation by `y`.
    pub fn mul_generator(&self, g: usize, y: usize) -> usize {
        self.index[&then(&self.elements[g], &self.generators[y])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_small_groups() {
        let d3 = FiniteQuandle::validate(&[vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).unwrap();
        let g = d3.inner_group().unwrap();
        assert_eq!(g.order(), 6);
        for a in 0..6 {
            for b in 0..6 {
                let ab = g.mul(a, b);
                assert!(ab < 6);
            }
        }
        assert_eq!(FiniteQuandle::trivial(4).inner_group().unwrap().order(), 1);
        assert_eq!(d3.inner_group_with_cap(4).unwrap_err(), QuandleError::GroupTooLarge(4));
    }
}
