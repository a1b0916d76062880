//! Space-time chains: chains on a (1+d)-grid whose axis 0 is time.
//!
//! A cell is *temporal* when it spans axis 0 and *spatial* otherwise. Spatial
//! cells are the jump transients; only they contribute to the variation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::chain::{Cell, Chain, ChainFile, Grid};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Interval of times with independently open or closed ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl TimeInterval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition(format!(
                "interval lower end {} exceeds upper end {}",
                rational::format(&lo),
                rational::format(&hi)
            )));
        }
        Ok(Self { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    /// `[lo, hi)`.
    pub fn right_open(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, true, false)
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let above = if self.lo_closed { *t >= self.lo } else { *t > self.lo };
        let below = if self.hi_closed { *t <= self.hi } else { *t < self.hi };
        above && below
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            rational::format(&self.lo),
            rational::format(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Parses `a,b` optionally followed by end codes: one letter (`o` or `c`)
/// for both ends or two letters for lower then upper end. Bracket notation
/// such as `[0,1/2)` is also accepted.
impl FromStr for TimeInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse interval {s:?}"));
        if let (Some(first), Some(last)) = (s.chars().next(), s.chars().last()) {
            if matches!(first, '[' | '(') && matches!(last, ']' | ')') {
                let inner = &s[1..s.len() - 1];
                let (a, b) = inner.split_once(',').ok_or_else(bad)?;
                return Self::new(rational::parse(a)?, rational::parse(b)?, first == '[', last == ']');
            }
        }
        let codes_start = s.find(['o', 'c']).unwrap_or(s.len());
        let (body, codes) = s.split_at(codes_start);
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        let flags: Vec<bool> = codes
            .chars()
            .map(|c| match c {
                'c' => Ok(true),
                'o' => Ok(false),
                _ => Err(bad()),
            })
            .collect::<Result<_>>()?;
        let (lc, hc) = match flags.as_slice() {
            [] => (true, true),
            [x] => (*x, *x),
            [x, y] => (*x, *y),
            _ => return Err(bad()),
        };
        Self::new(rational::parse(a)?, rational::parse(b)?, lc, hc)
    }
}

/// Temporal and spatial parts of the mass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MassDecomposition {
    #[serde(with = "crate::rational")]
    pub temporal: Rational,
    #[serde(with = "crate::rational")]
    pub spatial: Rational,
}

/// Nonnegative weights for oriented spatial cells, keyed by the spanned
/// spatial axes (numbered without the time axis) and the orientation sign.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrientationWeights {
    weights: BTreeMap<(Vec<usize>, i8), Rational>,
}

impl OrientationWeights {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every oriented m-wedge in d spatial dimensions weighted by `value`.
    pub fn uniform(d: usize, m: usize, value: Rational) -> Self {
        let mut w = Self::new();
        for axes in crate::chain::combinations(d, m) {
            w.set(axes.clone(), 1, value.clone());
            w.set(axes, -1, value.clone());
        }
        w
    }

    pub fn set(&mut self, axes: Vec<usize>, sign: i8, value: Rational) {
        self.weights.insert((axes, sign.signum()), value);
    }

    pub fn get(&self, axes: &[usize], sign: i8) -> Option<&Rational> {
        self.weights.get(&(axes.to_vec(), sign.signum()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vec<usize>, i8), &Rational)> {
        self.weights.iter()
    }
}

/// A chain on a grid of dimension at least 2 whose axis 0 is time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpacetimeChain {
    chain: Chain,
}

/// Time grid on `[0, 1]` with `columns` cells.
pub fn unit_time_grid(columns: i64) -> Result<Grid> {
    if columns < 1 {
        return Err(Error::InvalidGrid(format!("need at least one time column, got {columns}")));
    }
    Grid::new(vec![rational::ratio(1, columns)], vec![rational::int(0)], vec![columns])
}

pub fn is_temporal(cell: &Cell) -> bool {
    cell.spans(0)
}

impl SpacetimeChain {
    pub fn new(chain: Chain) -> Result<Self> {
        if chain.grid().dim() < 2 {
            return Err(Error::InvalidGrid(format!(
                "space-time grid needs a time axis and at least one spatial axis, got dimension {}",
                chain.grid().dim()
            )));
        }
        Ok(Self { chain })
    }

    /// Zero chain of dimension `dim` on `time × spatial`.
    pub fn zero(time: &Grid, spatial: &Grid, dim: usize) -> Result<Self> {
        Self::new(Chain::zero(&time.concat(spatial), dim))
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn into_chain(self) -> Chain {
        self.chain
    }

    pub fn grid(&self) -> &Grid {
        self.chain.grid()
    }

    pub fn dim(&self) -> usize {
        self.chain.dim()
    }

    pub fn time_spacing(&self) -> &Rational {
        &self.grid().spacing()[0]
    }

    pub fn columns(&self) -> i64 {
        self.grid().extents()[0]
    }

    pub fn lo(&self) -> Rational {
        self.grid().coordinate(0, 0)
    }

    pub fn hi(&self) -> Rational {
        self.grid().coordinate(0, self.columns())
    }

    pub fn full_range(&self) -> TimeInterval {
        TimeInterval::closed(self.lo(), self.hi()).expect("grid range is ordered")
    }

    /// Grid time at level `i`.
    pub fn time_at(&self, i: i64) -> Rational {
        self.grid().coordinate(0, i)
    }

    /// The one-axis time grid.
    pub fn time_grid(&self) -> Grid {
        let g = self.grid();
        Grid::new(vec![g.spacing()[0].clone()], vec![g.origin()[0].clone()], vec![g.extents()[0]])
            .expect("sub-grid of a valid grid")
    }

    pub fn spatial_grid(&self) -> Grid {
        self.grid().without_axis(0).expect("space-time grid has a spatial part")
    }

    pub fn boundary(&self) -> SpacetimeChain {
        SpacetimeChain { chain: self.chain.boundary() }
    }

    /// Σ |coeff| · vol over spatial cells whose time lies in `interval`.
    pub fn variation(&self, interval: &TimeInterval) -> Rational {
        let grid = self.grid();
        let mut total = Rational::zero();
        for (cell, c) in self.chain.iter() {
            if is_temporal(cell) {
                continue;
            }
            if interval.contains(&grid.coordinate(0, cell.anchor()[0])) {
                total += grid.volume(cell.axes()) * rational::int(c.abs());
            }
        }
        total
    }

    /// Variation over the whole time range.
    pub fn total_variation(&self) -> Rational {
        self.variation(&self.full_range())
    }

    pub fn boundary_variation(&self, interval: &TimeInterval) -> Rational {
        self.boundary().variation(interval)
    }

    /// Position of `t` in grid-cell units from the lower end.
    fn level(&self, t: &Rational) -> Rational {
        (t - self.lo()) / self.time_spacing()
    }

    fn check_range(&self, t: &Rational, lo_ok: bool, hi_ok: bool) -> Result<()> {
        let (lo, hi) = (self.lo(), self.hi());
        let inside = (*t > lo || (lo_ok && *t == lo)) && (*t < hi || (hi_ok && *t == hi));
        if inside {
            Ok(())
        } else {
            Err(Error::OutOfBounds(format!(
                "time {} outside the admissible range of [{}, {}]",
                rational::format(t),
                rational::format(&lo),
                rational::format(&hi)
            )))
        }
    }

    /// The spatial k-chain carried by column `i` (the slice at any time
    /// strictly inside it).
    pub fn column_slice(&self, i: i64) -> Chain {
        let spatial = self.spatial_grid();
        let k = self.dim().saturating_sub(1);
        let mut out = Chain::zero(&spatial, k);
        for (cell, c) in self.chain.iter() {
            if is_temporal(cell) && cell.anchor()[0] == i {
                out.add_term(cell.collapse_axis(0), c);
            }
        }
        out
    }

    /// Spatial cells sitting at grid level `i`, as a chain on the spatial grid.
    pub fn spatial_at(&self, i: i64) -> Chain {
        let spatial = self.spatial_grid();
        let mut out = Chain::zero(&spatial, self.dim());
        for (cell, c) in self.chain.iter() {
            if !is_temporal(cell) && cell.anchor()[0] == i {
                out.add_term(cell.without_axis(0), c);
            }
        }
        out
    }

    fn require_positive_dim(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(())
    }

    /// Slice at a generic (non-grid) time strictly inside the range.
    pub fn slice(&self, t: &Rational) -> Result<Chain> {
        self.require_positive_dim()?;
        self.check_range(t, false, false)?;
        let u = self.level(t);
        if rational::is_integer(&u) {
            return Err(Error::SliceAtGridTime(rational::format(t)));
        }
        Ok(self.column_slice(floor_i64(&u)))
    }

    /// S(t+): the slice just after `t`, for `t` in `[lo, hi)`.
    pub fn slice_right(&self, t: &Rational) -> Result<Chain> {
        self.require_positive_dim()?;
        self.check_range(t, true, false)?;
        Ok(self.column_slice(floor_i64(&self.level(t))))
    }

    /// S(t−): the slice just before `t`, for `t` in `(lo, hi]`.
    pub fn slice_left(&self, t: &Rational) -> Result<Chain> {
        self.require_positive_dim()?;
        self.check_range(t, false, true)?;
        Ok(self.column_slice(ceil_i64(&self.level(t)) - 1))
    }

    /// Sum of the spatial cells pushed to space, a (k+1)-chain on the
    /// spatial grid.
    pub fn spatial_projection(&self) -> Chain {
        let spatial = self.spatial_grid();
        let mut out = Chain::zero(&spatial, self.dim());
        for (cell, c) in self.chain.iter() {
            if !is_temporal(cell) {
                out.add_term(cell.without_axis(0), c);
            }
        }
        out
    }

    pub fn mass_decomposition(&self) -> MassDecomposition {
        let grid = self.grid();
        let mut temporal = Rational::zero();
        let mut spatial = Rational::zero();
        for (cell, c) in self.chain.iter() {
            let m = grid.volume(cell.axes()) * rational::int(c.abs());
            if is_temporal(cell) {
                temporal += m;
            } else {
                spatial += m;
            }
        }
        MassDecomposition { temporal, spatial }
    }

    /// Σ R(±orientation) · |coeff| · vol over spatial cells.
    pub fn weighted_variation(&self, weights: &OrientationWeights) -> Result<Rational> {
        let grid = self.grid();
        let mut total = Rational::zero();
        for (cell, c) in self.chain.iter() {
            if is_temporal(cell) {
                continue;
            }
            let axes: Vec<usize> = cell.axes().iter().map(|a| a - 1).collect();
            let sign: i8 = if c > 0 { 1 } else { -1 };
            let w = weights.get(&axes, sign).ok_or_else(|| {
                Error::Precondition(format!(
                    "no weight for orientation {}e{:?}",
                    if sign > 0 { "+" } else { "-" },
                    axes
                ))
            })?;
            if *w < Rational::zero() {
                return Err(Error::Precondition(format!("negative weight for orientation {axes:?}")));
            }
            total += w * grid.volume(cell.axes()) * rational::int(c.abs());
        }
        Ok(total)
    }

    /// Per-column variation divided by h_t, maximized over columns. Spatial
    /// cells at level i belong to column i; those at the final time belong to
    /// the last column.
    pub fn discrete_lipschitz_constant(&self) -> Rational {
        let n = self.columns();
        let grid = self.grid();
        let mut per_column: BTreeMap<i64, Rational> = BTreeMap::new();
        for (cell, c) in self.chain.iter() {
            if is_temporal(cell) {
                continue;
            }
            let col = cell.anchor()[0].min(n - 1);
            *per_column.entry(col).or_insert_with(Rational::zero) +=
                grid.volume(cell.axes()) * rational::int(c.abs());
        }
        per_column
            .into_values()
            .max()
            .map(|v| v / self.time_spacing())
            .unwrap_or_else(Rational::zero)
    }

    /// Largest slice mass over all columns.
    pub fn max_slice_mass(&self) -> Rational {
        (0..self.columns())
            .map(|i| self.column_slice(i).mass())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// End traces read off the boundary: `(T0, T1)` with the spatial part of
    /// ∂S at the end levels equal to `δ₁×T1 − δ₀×T0`.
    pub fn end_traces(&self) -> (Chain, Chain) {
        let b = self.boundary();
        (-b.spatial_at(0), b.spatial_at(self.columns()))
    }

    /// Part of ∂S that is neither an end cap: temporal cells and spatial
    /// cells at interior levels.
    pub fn lateral_boundary(&self) -> Chain {
        let b = self.chain.boundary();
        let n = self.columns();
        let mut out = Chain::zero(b.grid(), b.dim());
        for (cell, c) in b.iter() {
            let end = !is_temporal(cell) && (cell.anchor()[0] == 0 || cell.anchor()[0] == n);
            if !end {
                out.add_term(cell.clone(), c);
            }
        }
        out
    }

    /// The stationary chain `[lo, hi] × T` over every column of `time`.
    pub fn stationary(time: &Grid, t: &Chain) -> Result<Self> {
        let mut acc = Chain::zero(&time.concat(t.grid()), t.dim() + 1);
        for i in 0..time.extents()[0] {
            acc = &acc + &Self::extrude_column(time, i, t);
        }
        Self::new(acc)
    }

    /// Embeds a spatial chain at grid level `i`.
    pub fn embed_at(time: &Grid, i: i64, spatial: &Chain) -> Chain {
        let point = Chain::from_terms(time, 0, [(Cell::vertex(vec![i]), 1)]).expect("level inside time grid");
        point.product(spatial)
    }

    /// `[t_i, t_{i+1}] × spatial`.
    pub fn extrude_column(time: &Grid, i: i64, spatial: &Chain) -> Chain {
        let edge = Chain::from_terms(time, 1, [(Cell::new_unchecked(vec![i], vec![0]), 1)]).expect("column inside time grid");
        edge.product(spatial)
    }

    pub fn to_file(&self) -> ChainFile {
        let mut f = ChainFile::from(&self.chain);
        f.time_axis = Some(0);
        f
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("chain files serialize")
    }

    pub fn from_file(f: &ChainFile) -> Result<Self> {
        match f.time_axis {
            Some(0) | None => Self::new(Chain::try_from(f)?),
            Some(a) => Err(Error::Parse(format!("time axis must be 0, got {a}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ChainFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&f)
    }
}

pub(crate) fn floor_i64(r: &Rational) -> i64 {
    r.numer().div_floor(r.denom()).to_i64().expect("time level fits in i64")
}

pub(crate) fn ceil_i64(r: &Rational) -> i64 {
    r.numer().div_ceil(r.denom()).to_i64().expect("time level fits in i64")
}
