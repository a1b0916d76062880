//! Seeded instance generators shared by the property suites and `check`.
//!
//! All randomness flows through `ChaCha8Rng` seeded with
//! [`instance_rng`]`(seed, stream, index)`, so every instance is reproducible
//! from the suite seed alone and independent of evaluation order.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bv::StepFunction;
use crate::chain::{Cell, Chain, Grid};
use crate::rational::{self, Rational};
use crate::spacetime::SpacetimeChain;
use crate::transform::SweepPlan;

pub type InstanceRng = ChaCha8Rng;

/// RNG for instance `index` of stream `stream` under suite seed `seed`.
///
/// The 64-bit seed is `seed ⊕ (stream · 0x9E3779B97F4A7C15) ⊕ (index · 0xD1B54A32D192ED03)`
/// (wrapping), fed to `ChaCha8Rng::seed_from_u64`.
pub fn instance_rng(seed: u64, stream: u64, index: u64) -> InstanceRng {
    let mixed = seed
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Grid of dimension `dim` with extents in `1..=max_extent` and spacings
/// drawn from {1, 1/2, 1/3, 2}.
pub fn grid(rng: &mut impl Rng, dim: usize, max_extent: i64) -> Grid {
    let choices = [rational::int(1), rational::ratio(1, 2), rational::ratio(1, 3), rational::int(2)];
    let spacing: Vec<Rational> = (0..dim).map(|_| choices.choose(rng).unwrap().clone()).collect();
    let origin: Vec<Rational> = (0..dim).map(|_| rational::int(rng.random_range(-1..=1))).collect();
    let extents: Vec<i64> = (0..dim).map(|_| rng.random_range(1..=max_extent)).collect();
    Grid::new(spacing, origin, extents).expect("valid random grid")
}

/// Random k-chain with up to `max_cells` cells and coefficients in
/// `-max_coeff..=max_coeff` (zero draws are dropped).
pub fn chain(rng: &mut impl Rng, grid: &Grid, k: usize, max_cells: usize, max_coeff: i64) -> Chain {
    let cells = grid.cells(k);
    if cells.is_empty() {
        return Chain::zero(grid, k);
    }
    let n = rng.random_range(0..=max_cells);
    let terms: Vec<(Cell, i64)> = (0..n)
        .map(|_| {
            let c = cells.choose(rng).unwrap().clone();
            (c, rng.random_range(-max_coeff..=max_coeff))
        })
        .collect();
    Chain::from_terms(grid, k, terms).expect("cells come from the grid")
}

/// Boundary of a random (k+1)-chain: a k-cycle that bounds inside the box.
pub fn bounding_cycle(rng: &mut impl Rng, grid: &Grid, k: usize, max_cells: usize, max_coeff: i64) -> Chain {
    chain(rng, grid, k + 1, max_cells, max_coeff).boundary()
}

/// Random space-time (1+k)-chain on a (1+d)-grid over `[0, 1]` with
/// `columns` time cells.
pub fn spacetime_chain(
    rng: &mut impl Rng,
    spatial: &Grid,
    k: usize,
    columns: i64,
    max_cells: usize,
) -> SpacetimeChain {
    let time = Grid::new(vec![rational::ratio(1, columns)], vec![rational::int(0)], vec![columns]).unwrap();
    let g = time.concat(spatial);
    let c = chain(rng, &g, k + 1, max_cells, 2);
    SpacetimeChain::new(c).expect("time axis present")
}

/// Random sweep plan: a bounding base cycle, a random fill, and a schedule
/// splitting the fill's unit flips over `columns` columns.
pub fn sweep_plan(rng: &mut impl Rng, spatial: &Grid, k: usize, max_cells: usize) -> SweepPlan {
    let base = bounding_cycle(rng, spatial, k, max_cells, 1);
    let fill = chain(rng, spatial, k + 1, max_cells, 2);
    let mut units: Vec<(Cell, i64)> = Vec::new();
    for (c, v) in fill.iter() {
        for _ in 0..v.abs() {
            units.push((c.clone(), v.signum()));
        }
    }
    let columns = rng.random_range(1..=units.len().max(1)) as i64;
    let mut schedule: Vec<Vec<(Cell, i64)>> = vec![Vec::new(); columns as usize];
    for u in units {
        let col = rng.random_range(0..columns) as usize;
        schedule[col].push(u);
    }
    let schedule = schedule
        .into_iter()
        .enumerate()
        .filter(|(_, terms)| !terms.is_empty())
        .map(|(i, terms)| (i, Chain::from_terms(spatial, k + 1, terms).unwrap()))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    SweepPlan::new(base, fill, schedule, columns as usize).expect("random plan is valid")
}

/// Random step function on breakpoints with denominator `time_den` and
/// values in `(1/space_den) · Z ∩ [-2, 2]`.
pub fn step_function(rng: &mut impl Rng, time_den: i64, space_den: i64) -> StepFunction {
    let mut interior: Vec<i64> = (1..time_den).filter(|_| rng.random_bool(0.4)).collect();
    interior.sort_unstable();
    let mut breakpoints = vec![rational::int(0)];
    breakpoints.extend(interior.iter().map(|&i| rational::ratio(i, time_den)));
    breakpoints.push(rational::int(1));
    let values = (0..breakpoints.len() - 1)
        .map(|_| rational::ratio(rng.random_range(-2 * space_den..=2 * space_den), space_den))
        .collect();
    StepFunction::new(breakpoints, values).expect("valid random step function")
}

/// Boundary of a signed sum of `1..=max_blocks` random rectangles with sides
/// in `1..=max_side` on a planar grid.
pub fn rectangle_cycle(rng: &mut impl Rng, grid: &Grid, max_blocks: usize, max_side: i64) -> Chain {
    let ext = grid.extents();
    let mut region = Chain::zero(grid, 2);
    for _ in 0..rng.random_range(1..=max_blocks) {
        let w = rng.random_range(1..=max_side.min(ext[0]));
        let h = rng.random_range(1..=max_side.min(ext[1]));
        let anchor = [rng.random_range(0..=ext[0] - w), rng.random_range(0..=ext[1] - h)];
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        region = &region + &crate::fixtures::block(grid, anchor, w, h).expect("block fits").scale(sign);
    }
    region.boundary()
}
