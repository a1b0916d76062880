use crate::error::{Error, Result};

/// Closed axis-aligned k-cube of a grid.
///
/// `anchor` is the lattice index of the lowest corner and `axes` the strictly
/// increasing list of spanned directions. The cell carries the canonical
/// orientation `e_{a1} ∧ … ∧ e_{ak}` for `axes = [a1, …, ak]`. The derived
/// order (anchor, then axes) is the canonical file order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    anchor: Vec<i64>,
    axes: Vec<usize>,
}

impl Cell {
    pub fn new(anchor: Vec<i64>, axes: Vec<usize>) -> Result<Self> {
        if !axes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidCell(format!("axes {axes:?} are not strictly increasing")));
        }
        if let Some(a) = axes.iter().find(|&&a| a >= anchor.len()) {
            return Err(Error::InvalidCell(format!(
                "axis {a} out of range for a {}-dimensional anchor",
                anchor.len()
            )));
        }
        Ok(Self { anchor, axes })
    }

    pub(crate) fn new_unchecked(anchor: Vec<i64>, axes: Vec<usize>) -> Self {
        debug_assert!(axes.windows(2).all(|w| w[0] < w[1]));
        Self { anchor, axes }
    }

    /// A 0-cell.
    pub fn vertex(anchor: Vec<i64>) -> Self {
        Self { anchor, axes: Vec::new() }
    }

    pub fn anchor(&self) -> &[i64] {
        &self.anchor
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn spans(&self, axis: usize) -> bool {
        self.axes.binary_search(&axis).is_ok()
    }

    /// Signed faces: for the i-th spanned axis `a` (0-based), the front face
    /// (anchor + e_a) with sign (-1)^i and the back face with sign -(-1)^i.
    pub fn boundary_terms(&self) -> Vec<(Cell, i64)> {
        let mut out = Vec::with_capacity(2 * self.axes.len());
        for (i, &a) in self.axes.iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let mut axes = self.axes.clone();
            axes.remove(i);
            let mut front = self.anchor.clone();
            front[a] += 1;
            out.push((Cell::new_unchecked(front, axes.clone()), sign));
            out.push((Cell::new_unchecked(self.anchor.clone(), axes), -sign));
        }
        out
    }

    pub fn translated(&self, v: &[i64]) -> Cell {
        Cell {
            anchor: self.anchor.iter().zip(v).map(|(x, dx)| x + dx).collect(),
            axes: self.axes.clone(),
        }
    }

    pub(crate) fn with_anchor(&self, anchor: Vec<i64>) -> Cell {
        Cell { anchor, axes: self.axes.clone() }
    }

    /// Cell in the product grid: `self`'s coordinates followed by `other`'s.
    pub(crate) fn product(&self, other: &Cell) -> Cell {
        let d1 = self.anchor.len();
        Cell {
            anchor: [self.anchor.clone(), other.anchor.clone()].concat(),
            axes: self
                .axes
                .iter()
                .copied()
                .chain(other.axes.iter().map(|a| a + d1))
                .collect(),
        }
    }

    /// Drops coordinate `axis`, which the cell spans, and renumbers.
    pub(crate) fn collapse_axis(&self, axis: usize) -> Cell {
        debug_assert!(self.spans(axis));
        let mut anchor = self.anchor.clone();
        anchor.remove(axis);
        Cell {
            anchor,
            axes: self.axes.iter().filter(|&&a| a != axis).map(|&a| if a > axis { a - 1 } else { a }).collect(),
        }
    }

    /// Drops coordinate `axis` (which the cell must not span) and renumbers.
    pub(crate) fn without_axis(&self, axis: usize) -> Cell {
        debug_assert!(!self.spans(axis));
        let mut anchor = self.anchor.clone();
        anchor.remove(axis);
        Cell {
            anchor,
            axes: self.axes.iter().map(|&a| if a > axis { a - 1 } else { a }).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_axes() {
        assert!(Cell::new(vec![0, 0], vec![1, 0]).is_err());
        assert!(Cell::new(vec![0, 0], vec![0, 0]).is_err());
        assert!(Cell::new(vec![0, 0], vec![2]).is_err());
        assert!(Cell::new(vec![0, 0], vec![0, 1]).is_ok());
    }

    #[test]
    fn canonical_order_is_anchor_then_axes() {
        let a = Cell::new(vec![0, 1], vec![0]).unwrap();
        let b = Cell::new(vec![1, 0], vec![0]).unwrap();
        let c = Cell::new(vec![0, 1], vec![1]).unwrap();
        assert!(a < c && c < b);
    }
}
