use super::{FiniteQuandle, InnerGroup, QuandleError};

/// Which built-in X-set a coefficient system came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    Point,
    Quandle,
    Inner,
    Custom,
}

impl CoefficientKind {
    pub fn label(self) -> &'static str {
        match self {
            CoefficientKind::Point => "pt",
            CoefficientKind::Quandle => "X",
            CoefficientKind::Inner => "Inn",
            CoefficientKind::Custom => "custom",
        }
    }
}

/// A right action of the generators of As(X) on a finite carrier `0..size`.
///
/// `act(w, x)` is `w . x`; the relation `(w . x) . y = (w . y) . (x * y)` holds for all
/// carrier points and quandle elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XSetAction {
    kind: CoefficientKind,
    size: usize,
    n: usize,
    table: Vec<u32>,
}

impl XSetAction {
    pub fn point(q: &FiniteQuandle) -> XSetAction {
        XSetAction { kind: CoefficientKind::Point, size: 1, n: q.order(), table: vec![0; q.order()] }
    }

    /// Y = X with w . x = w * x.
    pub fn quandle(q: &FiniteQuandle) -> XSetAction {
        let n = q.order();
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for w in 0..n {
                table[x * n + w] = q.op(w, x) as u32;
            }
        }
        XSetAction { kind: CoefficientKind::Quandle, size: n, n, table }
    }

    /// Y = Inn(X) with g . x = g followed by the right translation by x.
    pub fn inner(q: &FiniteQuandle, group: &InnerGroup) -> XSetAction {
        let (n, size) = (q.order(), group.order());
        let mut table = vec![0u32; n * size];
        for x in 0..n {
            for g in 0..size {
                table[x * size + g] = group.mul_generator(g, x) as u32;
            }
        }
        XSetAction { kind: CoefficientKind::Inner, size, n, table }
    }

    /// A user action: `perms[x][w] = w . x`. The defining relation is checked.
    pub fn custom(q: &FiniteQuandle, perms: &[Vec<usize>]) -> Result<XSetAction, QuandleError> {
        let n = q.order();
        if perms.len() != n {
            return Err(QuandleError::BadSpec(format!("expected {n} permutations, found {}", perms.len())));
        }
        let size = perms[0].len();
        let mut table = Vec::with_capacity(n * size);
        for (x, perm) in perms.iter().enumerate() {
            let mut hit = vec![false; size];
            if perm.len() != size {
                return Err(QuandleError::XSetNotPermutation(x));
            }
            for &w in perm {
                if w >= size || std::mem::replace(&mut hit[w], true) {
                    return Err(QuandleError::XSetNotPermutation(x));
                }
                table.push(w as u32);
            }
        }
        let action = XSetAction { kind: CoefficientKind::Custom, size, n, table };
        action.check_relation(q)?;
        Ok(action)
    }

    pub fn check_relation(&self, q: &FiniteQuandle) -> Result<(), QuandleError> {
        for x in 0..self.n {
            for y in 0..self.n {
                let xy = q.op(x, y);
                for w in 0..self.size {
                    if self.act(self.act(w, x), y) != self.act(self.act(w, y), xy) {
                        return Err(QuandleError::XSetRelation { x, y, point: w });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, w: usize, x: usize) -> usize {
        self.table[x * self.size + w] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn built_in_actions_satisfy_relation() {
        let d3 = FiniteQuandle::validate(&[vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).unwrap();
        let g = d3.inner_group().unwrap();
        for a in [XSetAction::point(&d3), XSetAction::quandle(&d3), XSetAction::inner(&d3, &g)] {
            a.check_relation(&d3).unwrap();
        }
    }

    #[test]
    fn custom_action_is_checked() {
        let d3 = FiniteQuandle::validate(&[vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).unwrap();
        // a sign action: every x swaps the two points
        assert!(XSetAction::custom(&d3, &[vec![1, 0], vec![1, 0], vec![1, 0]]).is_ok());
        // only one generator swapping breaks the relation
        let bad = XSetAction::custom(&d3, &[vec![1, 0], vec![0, 1], vec![0, 1]]);
        assert!(matches!(bad, Err(QuandleError::XSetRelation { .. })));
        assert_eq!(
            XSetAction::custom(&d3, &[vec![0, 0], vec![0, 1], vec![0, 1]]),
            Err(QuandleError::XSetNotPermutation(0))
        );
    }
}
