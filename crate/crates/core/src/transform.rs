//! Space-time constructions: sweeps, concatenation, reversal, time
//! refinement and translation prisms.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chain::{Cell, Chain, ChainFile};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::spacetime::{unit_time_grid, SpacetimeChain};

/// A base cycle, a filling chain, and the columns in which pieces of the
/// filling are flipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPlan {
    base: Chain,
    fill: Chain,
    schedule: Vec<(usize, Chain)>,
    time_columns: usize,
}

impl SweepPlan {
    /// Validates that the schedule splits `fill` without cancellation.
    pub fn new(base: Chain, fill: Chain, schedule: Vec<(usize, Chain)>, time_columns: usize) -> Result<Self> {
        if base.grid() != fill.grid() {
            return Err(Error::GridMismatch("base and fill live on different grids".into()));
        }
        if fill.dim() != base.dim() + 1 {
            return Err(Error::DimensionMismatch { expected: base.dim() + 1, found: fill.dim() });
        }
        if !base.boundary().is_zero() {
            return Err(Error::Precondition("sweep base must have zero boundary".into()));
        }
        if time_columns == 0 {
            return Err(Error::Precondition("a sweep needs at least one time column".into()));
        }
        let mut total = Chain::zero(fill.grid(), fill.dim());
        let mut mass = Rational::zero();
        for (col, piece) in &schedule {
            if *col >= time_columns {
                return Err(Error::Precondition(format!(
                    "schedule column {col} is outside 0..{time_columns}"
                )));
            }
            total = total.try_add(piece)?;
            mass += piece.mass();
        }
        if total != fill {
            return Err(Error::Precondition(format!(
                "schedule does not sum to the fill; difference {:?}",
                (&fill - &total).iter().collect::<Vec<_>>()
            )));
        }
        if mass != fill.mass() {
            return Err(Error::Precondition(format!(
                "schedule pieces cancel: their masses sum to {} but the fill has mass {}",
                rational::format(&mass),
                rational::format(&fill.mass())
            )));
        }
        Ok(Self { base, fill, schedule, time_columns })
    }

    /// Every unit flip of `fill` in its own column, in canonical cell order.
    pub fn one_flip_per_column(base: Chain, fill: Chain) -> Result<Self> {
        let mut schedule = Vec::new();
        for (cell, c) in fill.iter() {
            for _ in 0..c.abs() {
                schedule.push((schedule.len(), Chain::cell(fill.grid(), cell.clone(), c.signum())?));
            }
        }
        let n = schedule.len().max(1);
        Self::new(base, fill, schedule, n)
    }

    /// The whole fill flipped at once.
    pub fn single_column(base: Chain, fill: Chain) -> Result<Self> {
        let schedule = if fill.is_zero() { Vec::new() } else { vec![(0, fill.clone())] };
        Self::new(base, fill, schedule, 1)
    }

    pub fn base(&self) -> &Chain {
        &self.base
    }

    pub fn fill(&self) -> &Chain {
        &self.fill
    }

    pub fn schedule(&self) -> &[(usize, Chain)] {
        &self.schedule
    }

    pub fn time_columns(&self) -> usize {
        self.time_columns
    }

    /// Sum of the pieces scheduled in column `i`.
    pub fn column_piece(&self, i: usize) -> Chain {
        self.schedule
            .iter()
            .filter(|(c, _)| *c == i)
            .fold(Chain::zero(self.fill.grid(), self.fill.dim()), |acc, (_, p)| &acc + p)
    }

    pub fn to_file(&self) -> SweepPlanFile {
        SweepPlanFile {
            base: ChainFile::from(&self.base),
            fill: ChainFile::from(&self.fill),
            schedule: self
                .schedule
                .iter()
                .map(|(column, chain)| ScheduleEntry { column: *column, chain: ChainFile::from(chain) })
                .collect(),
            time_columns: self.time_columns,
        }
    }

    pub fn from_file(f: &SweepPlanFile) -> Result<Self> {
        let schedule = f
            .schedule
            .iter()
            .map(|e| Ok((e.column, Chain::try_from(&e.chain)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(Chain::try_from(&f.base)?, Chain::try_from(&f.fill)?, schedule, f.time_columns)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plans serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: SweepPlanFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub column: usize,
    pub chain: ChainFile,
}

/// File form of a [`SweepPlan`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlanFile {
    pub base: ChainFile,
    pub fill: ChainFile,
    pub schedule: Vec<ScheduleEntry>,
    pub time_columns: usize,
}

/// Builds the sweep on `[0, 1]`. Plan column `i` occupies grid columns `2i`
/// and `2i + 1`; its flips sit at the shared grid time `(2i + 1) / 2N`.
pub fn sweep(plan: &SweepPlan) -> Result<SpacetimeChain> {
    let n = plan.time_columns as i64;
    let time = unit_time_grid(2 * n)?;
    let spatial = plan.base.grid();
    let mut acc = Chain::zero(&time.concat(spatial), plan.base.dim() + 1);
    let mut current = plan.base.clone();
    for i in 0..n {
        let piece = plan.column_piece(i as usize);
        acc = &acc + &SpacetimeChain::extrude_column(&time, 2 * i, &current);
        acc = &acc + &SpacetimeChain::embed_at(&time, 2 * i + 1, &piece);
        current = &current + &piece.boundary();
        acc = &acc + &SpacetimeChain::extrude_column(&time, 2 * i + 1, &current);
    }
    let s = SpacetimeChain::new(acc)?;
    verify_sweep(plan, &s)?;
    Ok(s)
}

/// Checks the sweep contract: end slices, per-column updates, variation and
/// the boundary identity.
pub fn verify_sweep(plan: &SweepPlan, s: &SpacetimeChain) -> Result<()> {
    let fail = |what: &str| Err(Error::Certificate(format!("sweep contract violated: {what}")));
    let end = &plan.base + &plan.fill.boundary();
    if s.slice_right(&s.lo())? != plan.base {
        return fail("initial slice differs from the base");
    }
    if s.slice_left(&s.hi())? != end {
        return fail("final slice differs from base + boundary of the fill");
    }
    for i in 0..plan.time_columns as i64 {
        let jump = &s.column_slice(2 * i + 1) - &s.column_slice(2 * i);
        if jump != plan.column_piece(i as usize).boundary() {
            return fail(&format!("column {i} does not change the slice by the boundary of its piece"));
        }
    }
    if s.total_variation() != plan.fill.mass() {
        return fail("variation differs from the mass of the fill");
    }
    let (t0, t1) = s.end_traces();
    if t0 != plan.base || t1 != end || !s.lateral_boundary().is_zero() {
        return fail("boundary is not the difference of the end caps");
    }
    Ok(())
}

/// Cone-like collapse of a cycle `t` through a filling with `∂fill = −t`.
pub fn collapse_cone(t: &Chain, fill: &Chain) -> Result<SpacetimeChain> {
    if !t.boundary().is_zero() {
        return Err(Error::Precondition("collapsed chain must have zero boundary".into()));
    }
    if fill.boundary() != -t {
        return Err(Error::Precondition("the fill's boundary must equal the negated chain".into()));
    }
    sweep(&SweepPlan::one_flip_per_column(t.clone(), fill.clone())?)
}

/// Runs `s1` then `s2`, each compressed to half of `[0, 1]`. The end trace of
/// `s1` must equal the start trace of `s2`.
pub fn concatenate(s1: &SpacetimeChain, s2: &SpacetimeChain) -> Result<SpacetimeChain> {
    if s1.spatial_grid() != s2.spatial_grid() {
        return Err(Error::GridMismatch("concatenated chains need the same spatial grid".into()));
    }
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch { expected: s1.dim(), found: s2.dim() });
    }
    let (_, end) = s1.end_traces();
    let (start, _) = s2.end_traces();
    if end != start {
        let diff = &end - &start;
        return Err(Error::Precondition(format!(
            "end trace of the first chain differs from the start trace of the second by {:?}",
            diff.iter().collect::<Vec<_>>()
        )));
    }
    let (n1, n2) = (s1.columns(), s2.columns());
    let l = n1.lcm(&n2);
    let a = rescale_time(s1, l / n1)?;
    let b = rescale_time(s2, l / n2)?;
    let time = unit_time_grid(2 * l)?;
    let grid = time.concat(&s1.spatial_grid());
    let mut out = Chain::zero(&grid, s1.dim());
    for (cell, c) in a.chain().iter() {
        out.add_term(cell.clone(), c);
    }
    for (cell, c) in b.chain().iter() {
        let mut anchor = cell.anchor().to_vec();
        anchor[0] += l;
        out.add_term(cell.with_anchor(anchor), c);
    }
    SpacetimeChain::new(out)
}

/// Time reversal `t ↦ lo + hi − t`, with orientation fixed so that the
/// boundary swaps the end traces.
pub fn reverse(s: &SpacetimeChain) -> SpacetimeChain {
    let n = s.columns();
    let mut out = Chain::zero(s.grid(), s.dim());
    for (cell, c) in s.chain().iter() {
        let mut anchor = cell.anchor().to_vec();
        if cell.spans(0) {
            anchor[0] = n - 1 - anchor[0];
            out.add_term(cell.with_anchor(anchor), c);
        } else {
            anchor[0] = n - anchor[0];
            out.add_term(cell.with_anchor(anchor), -c);
        }
    }
    SpacetimeChain::new(out).expect("same grid")
}

/// Refines the time axis by `m`: every temporal cell splits into `m` cells,
/// spatial cells keep their times.
pub fn rescale_time(s: &SpacetimeChain, m: i64) -> Result<SpacetimeChain> {
    if m < 1 {
        return Err(Error::Precondition(format!("time stretch {m} must be a positive integer")));
    }
    let grid = s.grid().refined_axis(0, m);
    let mut out = Chain::zero(&grid, s.dim());
    for (cell, c) in s.chain().iter() {
        let mut anchor = cell.anchor().to_vec();
        anchor[0] *= m;
        if cell.spans(0) {
            for j in 0..m {
                let mut a = anchor.clone();
                a[0] += j;
                out.add_term(cell.with_anchor(a), c);
            }
        } else {
            out.add_term(cell.with_anchor(anchor), c);
        }
    }
    SpacetimeChain::new(out)
}

/// The (k+1)-chain swept by `t` under one lattice step along `axis`, with
/// `∂W = translate(t) − t − prism(∂t)`.
pub fn prism(t: &Chain, axis: usize, positive: bool) -> Result<Chain> {
    let grid = t.grid();
    if axis >= grid.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), found: axis + 1 });
    }
    let mut v = vec![0i64; grid.dim()];
    v[axis] = if positive { 1 } else { -1 };
    t.translate(&v)?;
    let mut out = Chain::zero(grid, t.dim() + 1);
    for (cell, c) in t.iter() {
        if cell.spans(axis) {
            continue;
        }
        let mut axes = cell.axes().to_vec();
        let pos = axes.partition_point(|&a| a < axis);
        axes.insert(pos, axis);
        let mut anchor = cell.anchor().to_vec();
        if !positive {
            anchor[axis] -= 1;
        }
        let parity = if pos % 2 == 0 { 1 } else { -1 };
        let sign = if positive { parity } else { -parity };
        out.add_term(Cell::new(anchor, axes)?, sign * c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
