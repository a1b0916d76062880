//! Named instances used by the examples, the suites and the CLI.

use crate::chain::{Cell, Chain, Grid};
use crate::error::Result;
use crate::rational;
use crate::spacetime::SpacetimeChain;
use crate::transform::{self, SweepPlan};

/// Positively oriented boundary of the `w × h` block of unit cells anchored
/// at `anchor` on a planar grid.
pub fn rectangle_cycle(grid: &Grid, anchor: [i64; 2], w: i64, h: i64) -> Result<Chain> {
    Ok(block(grid, anchor, w, h)?.boundary())
}

/// Sum of the 2-cells in the `w × h` block anchored at `anchor`.
pub fn block(grid: &Grid, anchor: [i64; 2], w: i64, h: i64) -> Result<Chain> {
    let mut terms = Vec::new();
    for i in 0..w {
        for j in 0..h {
            terms.push((Cell::new(vec![anchor[0] + i, anchor[1] + j], vec![0, 1])?, 1));
        }
    }
    Chain::from_terms(grid, 2, terms)
}

/// Boundary of the unit square anchored at `anchor`.
pub fn square_cycle(grid: &Grid, anchor: [i64; 2]) -> Result<Chain> {
    rectangle_cycle(grid, anchor, 1, 1)
}

/// Checkerboard region with unit mass and long boundary: the "black" cells
/// of a `2j × j` grid of spacing `1/j`. Its boundary has `4j²` edges.
pub fn checkerboard(j: i64) -> Result<Chain> {
    let h = rational::ratio(1, j);
    let grid = Grid::new(vec![h.clone(), h], vec![rational::int(0), rational::int(0)], vec![2 * j, j])?;
    let mut terms = Vec::new();
    for x in 0..2 * j {
        for y in 0..j {
            if (x + y) % 2 == 0 {
                terms.push((Cell::new(vec![x, y], vec![0, 1])?, 1));
            }
        }
    }
    Chain::from_terms(&grid, 2, terms)
}

/// Grows the checkerboard cell by cell from nothing and then shrinks it
/// back: variation `2·𝐌(R)`, while the slice in the middle carries all of
/// `∂R`.
pub fn ragged_cone(j: i64) -> Result<(Chain, SpacetimeChain)> {
    let r = checkerboard(j)?;
    let zero = Chain::zero(r.grid(), 1);
    let grow = transform::sweep(&SweepPlan::one_flip_per_column(zero, r.clone())?)?;
    let s = transform::concatenate(&grow, &transform::reverse(&grow))?;
    Ok((r, s))
}
