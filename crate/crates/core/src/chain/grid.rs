use num_traits::{One, Signed, Zero};

use super::Cell;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Regular axis-aligned lattice over a closed box.
///
/// Axis `j` has `extents[j]` cells of width `spacing[j]` starting at
/// `origin[j]`; lattice points along it are indexed `0..=extents[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    spacing: Vec<Rational>,
    origin: Vec<Rational>,
    extents: Vec<i64>,
}

impl Grid {
    pub fn new(spacing: Vec<Rational>, origin: Vec<Rational>, extents: Vec<i64>) -> Result<Self> {
        let d = spacing.len();
        if d == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if origin.len() != d || extents.len() != d {
            return Err(Error::InvalidGrid(format!(
                "spacing/origin/extents lengths {}/{}/{} disagree",
                d,
                origin.len(),
                extents.len()
            )));
        }
        if let Some(h) = spacing.iter().find(|h| !h.is_positive()) {
            return Err(Error::InvalidGrid(format!("spacing {h} is not positive")));
        }
        if let Some(e) = extents.iter().find(|&&e| e < 1) {
            return Err(Error::InvalidGrid(format!("extent {e} is below 1")));
        }
        Ok(Self { spacing, origin, extents })
    }

    /// Unit spacing, origin at zero.
    pub fn unit(extents: &[i64]) -> Result<Self> {
        let d = extents.len();
        Self::new(vec![Rational::one(); d], vec![Rational::zero(); d], extents.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.spacing.len()
    }

    pub fn spacing(&self) -> &[Rational] {
        &self.spacing
    }

    pub fn origin(&self) -> &[Rational] {
        &self.origin
    }

    pub fn extents(&self) -> &[i64] {
        &self.extents
    }

    /// Coordinate of lattice index `i` along `axis`.
    pub fn coordinate(&self, axis: usize, i: i64) -> Rational {
        &self.origin[axis] + &self.spacing[axis] * rational::int(i)
    }

    /// k-volume of a cell spanning `axes`.
    pub fn volume(&self, axes: &[usize]) -> Rational {
        axes.iter().fold(Rational::one(), |v, &a| v * &self.spacing[a])
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        cell.anchor().len() == self.dim()
            && cell.axes().iter().all(|&a| a < self.dim())
            && cell.anchor().iter().enumerate().all(|(j, &x)| {
                let top = self.extents[j] - i64::from(cell.spans(j));
                (0..=top).contains(&x)
            })
    }

    pub fn check(&self, cell: &Cell) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(Error::OutOfBounds(format!("{cell:?} does not fit in grid with extents {:?}", self.extents)))
        }
    }

    /// All k-cells of the grid in canonical order.
    pub fn cells(&self, k: usize) -> Vec<Cell> {
        let d = self.dim();
        let mut out = Vec::new();
        if k > d {
            return out;
        }
        for axes in combinations(d, k) {
            let tops: Vec<i64> = (0..d)
                .map(|j| self.extents[j] - i64::from(axes.contains(&j)))
                .collect();
            let mut anchor = vec![0i64; d];
            'odometer: loop {
                out.push(Cell::new_unchecked(anchor.clone(), axes.clone()));
                for j in (0..d).rev() {
                    if anchor[j] < tops[j] {
                        anchor[j] += 1;
                        continue 'odometer;
                    }
                    anchor[j] = 0;
                }
                break;
            }
        }
        out.sort();
        out
    }

    /// Grid of the product space: this grid's axes followed by `other`'s.
    pub fn concat(&self, other: &Grid) -> Grid {
        Grid {
            spacing: [self.spacing.clone(), other.spacing.clone()].concat(),
            origin: [self.origin.clone(), other.origin.clone()].concat(),
            extents: [self.extents.clone(), other.extents.clone()].concat(),
        }
    }

    /// Every axis subdivided `m` times.
    pub fn refined(&self, m: i64) -> Grid {
        let mut g = self.clone();
        for j in 0..self.dim() {
            g = g.refined_axis(j, m);
        }
        g
    }

    pub fn refined_axis(&self, axis: usize, m: i64) -> Grid {
        let mut g = self.clone();
        g.spacing[axis] = &self.spacing[axis] / rational::int(m);
        g.extents[axis] = self.extents[axis] * m;
        g
    }

    /// Every axis merged in blocks of `m`; extents must be divisible by `m`.
    pub fn coarsened(&self, m: i64) -> Result<Grid> {
        if m < 1 || self.extents.iter().any(|e| e % m != 0) {
            return Err(Error::InvalidGrid(format!(
                "extents {:?} are not divisible by {m}",
                self.extents
            )));
        }
        Ok(Grid {
            spacing: self.spacing.iter().map(|h| h * rational::int(m)).collect(),
            origin: self.origin.clone(),
            extents: self.extents.iter().map(|e| e / m).collect(),
        })
    }

    /// The grid with `axis` removed; fails for one-dimensional grids.
    pub fn without_axis(&self, axis: usize) -> Result<Grid> {
        if self.dim() < 2 || axis >= self.dim() {
            return Err(Error::InvalidGrid(format!("cannot drop axis {axis} of a {}-grid", self.dim())));
        }
        let keep = |v: &[Rational]| -> Vec<Rational> {
            v.iter().enumerate().filter(|(j, _)| *j != axis).map(|(_, x)| x.clone()).collect()
        };
        Ok(Grid {
            spacing: keep(&self.spacing),
            origin: keep(&self.origin),
            extents: self
                .extents
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != axis)
                .map(|(_, e)| *e)
                .collect(),
        })
    }
}

/// Increasing k-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_counts_match_formula() {
        let g = Grid::unit(&[3, 2]).unwrap();
        assert_eq!(g.cells(0).len(), 12);
        assert_eq!(g.cells(1).len(), 3 * 3 + 4 * 2);
        assert_eq!(g.cells(2).len(), 6);
        assert!(g.cells(3).is_empty());
        let cells = g.cells(1);
        assert!(cells.windows(2).all(|w| w[0] < w[1]));
        assert!(cells.iter().all(|c| g.contains(c)));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(vec![rational::int(0)], vec![rational::int(0)], vec![1]).is_err());
        assert!(Grid::unit(&[0]).is_err());
        assert!(Grid::unit(&[]).is_err());
    }

    #[test]
    fn volume_uses_spanned_axes() {
        let g = Grid::new(
            vec![rational::ratio(1, 2), rational::ratio(1, 3)],
            vec![rational::int(0); 2],
            vec![2, 3],
        )
        .unwrap();
        assert_eq!(g.volume(&[0, 1]), rational::ratio(1, 6));
        assert_eq!(g.volume(&[1]), rational::ratio(1, 3));
        assert_eq!(g.volume(&[]), rational::int(1));
    }
}
