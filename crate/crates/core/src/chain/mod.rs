//! Grids, cells and integer-multiplicity cubical chains.

mod cell;
mod grid;
mod io;

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

pub use cell::Cell;
pub use grid::Grid;
pub use io::{ChainFile, CellEntry, GridFile};
pub(crate) use grid::combinations;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Finitely supported map from k-cells of a grid to nonzero integers.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// chains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    grid: Grid,
    k: usize,
    coeffs: BTreeMap<Cell, i64>,
}

impl Chain {
    pub fn zero(grid: &Grid, k: usize) -> Self {
        Self { grid: grid.clone(), k, coeffs: BTreeMap::new() }
    }

    /// Builds a chain from (cell, coefficient) pairs; repeated cells are summed.
    pub fn from_terms(grid: &Grid, k: usize, terms: impl IntoIterator<Item = (Cell, i64)>) -> Result<Self> {
        if k > grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), found: k });
        }
        let mut chain = Self::zero(grid, k);
        for (cell, c) in terms {
            if cell.dim() != k {
                return Err(Error::DimensionMismatch { expected: k, found: cell.dim() });
            }
            grid.check(&cell)?;
            chain.add_term(cell, c);
        }
        Ok(chain)
    }

    /// Single cell with coefficient `coeff`.
    pub fn cell(grid: &Grid, cell: Cell, coeff: i64) -> Result<Self> {
        let k = cell.dim();
        Self::from_terms(grid, k, [(cell, coeff)])
    }

    pub(crate) fn add_term(&mut self, cell: Cell, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(cell);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of cells with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, cell: &Cell) -> i64 {
        self.coeffs.get(cell).copied().unwrap_or(0)
    }

    /// Cells and coefficients in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Cell, i64)> + '_ {
        self.coeffs.iter().map(|(c, &v)| (c, v))
    }

    fn same_space(&self, other: &Chain) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("chains live on different grids".into()));
        }
        if self.k != other.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: other.k });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Chain) -> Result<Chain> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (c, v) in other.iter() {
            out.add_term(c.clone(), v);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Chain) -> Result<Chain> {
        self.try_add(&-other)
    }

    pub fn scale(&self, s: i64) -> Chain {
        if s == 0 {
            return Chain::zero(&self.grid, self.k);
        }
        Chain {
            grid: self.grid.clone(),
            k: self.k,
            coeffs: self.coeffs.iter().map(|(c, v)| (c.clone(), v * s)).collect(),
        }
    }

    /// Cubical boundary. The boundary of a 0-chain is the zero 0-chain.
    pub fn boundary(&self) -> Chain {
        if self.k == 0 {
            return Chain::zero(&self.grid, 0);
        }
        let mut out = Chain::zero(&self.grid, self.k - 1);
        for (cell, c) in self.iter() {
            for (face, s) in cell.boundary_terms() {
                out.add_term(face, s * c);
            }
        }
        out
    }

    /// Σ |coeff| · vol(cell).
    pub fn mass(&self) -> Rational {
        self.iter().fold(Rational::zero(), |m, (cell, c)| {
            m + self.grid.volume(cell.axes()) * rational::int(c.abs())
        })
    }

    /// Product chain on the concatenated grid. Concatenating the axis lists
    /// keeps them increasing, so every product cell has sign +1.
    pub fn product(&self, other: &Chain) -> Chain {
        let grid = self.grid.concat(&other.grid);
        let mut coeffs = BTreeMap::new();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                coeffs.insert(a.product(b), ca * cb);
            }
        }
        Chain { grid, k: self.k + other.k, coeffs }
    }

    /// Pushforward under the lattice translation by `v`.
    pub fn translate(&self, v: &[i64]) -> Result<Chain> {
        if v.len() != self.grid.dim() {
            return Err(Error::DimensionMismatch { expected: self.grid.dim(), found: v.len() });
        }
        let mut coeffs = BTreeMap::new();
        for (cell, c) in self.iter() {
            let moved = cell.translated(v);
            if !self.grid.contains(&moved) {
                return Err(Error::OutOfBounds(format!("translating {cell:?} by {v:?} leaves the box")));
            }
            coeffs.insert(moved, c);
        }
        Ok(Chain { grid: self.grid.clone(), k: self.k, coeffs })
    }

    /// Splits every cell into m^k subcells on the grid refined by `m`.
    pub fn refine(&self, m: i64) -> Result<Chain> {
        if m < 1 {
            return Err(Error::Precondition(format!("refinement factor {m} must be at least 1")));
        }
        let grid = self.grid.refined(m);
        let mut coeffs = BTreeMap::new();
        for (cell, c) in self.iter() {
            for sub in subdivide(cell, m) {
                coeffs.insert(sub, c);
            }
        }
        Ok(Chain { grid, k: self.k, coeffs })
    }

    /// Same cells viewed on another grid that contains them.
    pub fn rehome(&self, grid: &Grid) -> Result<Chain> {
        if grid.dim() != self.grid.dim() {
            return Err(Error::DimensionMismatch { expected: self.grid.dim(), found: grid.dim() });
        }
        for cell in self.coeffs.keys() {
            grid.check(cell)?;
        }
        Ok(Chain { grid: grid.clone(), k: self.k, coeffs: self.coeffs.clone() })
    }
}

/// The m^k subcells of `cell` on the grid refined by `m`, in canonical order.
pub(crate) fn subdivide(cell: &Cell, m: i64) -> Vec<Cell> {
    let base: Vec<i64> = cell.anchor().iter().map(|x| x * m).collect();
    let axes = cell.axes();
    let mut out = Vec::new();
    let mut offs = vec![0i64; axes.len()];
    'odometer: loop {
        let mut a = base.clone();
        for (i, &ax) in axes.iter().enumerate() {
            a[ax] += offs[i];
        }
        out.push(cell.with_anchor(a));
        for i in (0..axes.len()).rev() {
            if offs[i] + 1 < m {
                offs[i] += 1;
                continue 'odometer;
            }
            offs[i] = 0;
        }
        break;
    }
    out.sort();
    out
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scale(-1)
    }
}

impl Neg for Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scale(-1)
    }
}

/// Panics when the operands live on different grids or dimensions; use
/// [`Chain::try_add`] for a fallible version.
impl Add<&Chain> for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        self.try_add(rhs).expect("adding chains from different spaces")
    }
}

impl Sub<&Chain> for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        self.try_sub(rhs).expect("subtracting chains from different spaces")
    }
}

#[cfg(test)]
mod tests;
