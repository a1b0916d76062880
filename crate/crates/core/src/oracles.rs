//! Reference computations that take a different route from the library code
//! they check. Used by the property suites and by `check`.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::chain::{Cell, Chain};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::spacetime::SpacetimeChain;

/// Slice at generic `t` via the cylinder identity
/// `{t} × S|_t = ∂(S ⌞ {𝐭 < t}) − (∂S) ⌞ {𝐭 < t}`.
///
/// The time axis is refined until `t` is a grid time, the chain is restricted
/// to cells below `t`, and the residue must sit entirely at time `t`.
pub fn cylinder_slice(s: &SpacetimeChain, t: &Rational) -> Result<Chain> {
    let u = (t - s.lo()) / s.time_spacing();
    let q = u.denom().to_i64().ok_or_else(|| Error::Precondition("time denominator too large".into()))?;
    let p = u.numer().to_i64().ok_or_else(|| Error::Precondition("time numerator too large".into()))?;
    if q == 1 || p <= 0 || p >= s.columns() * q {
        return Err(Error::Precondition(format!("{} is not a generic interior time", rational::format(t))));
    }
    let g = s.grid();
    let fine_grid = g.refined_axis(0, q);
    let mut fine: BTreeMap<Cell, i64> = BTreeMap::new();
    for (cell, c) in s.chain().iter() {
        let mut anchor = cell.anchor().to_vec();
        anchor[0] *= q;
        if cell.spans(0) {
            for j in 0..q {
                let mut a = anchor.clone();
                a[0] += j;
                fine.insert(Cell::new(a, cell.axes().to_vec())?, c);
            }
        } else {
            fine.insert(Cell::new(anchor, cell.axes().to_vec())?, c);
        }
    }
    let fine = Chain::from_terms(&fine_grid, s.dim(), fine)?;
    let below = |chain: &Chain| -> Chain {
        let terms = chain.iter().filter(|(cell, _)| cell.anchor()[0] < p).map(|(cell, c)| (cell.clone(), c));
        Chain::from_terms(chain.grid(), chain.dim(), terms).expect("subset of a valid chain")
    };
    let residue = &below(&fine).boundary() - &below(&fine.boundary());
    let spatial = g.without_axis(0)?;
    let mut terms = Vec::new();
    for (cell, c) in residue.iter() {
        if cell.spans(0) || cell.anchor()[0] != p {
            return Err(Error::Certificate(format!("cylinder residue has a cell off time {}: {cell:?}", rational::format(t))));
        }
        let mut anchor = cell.anchor().to_vec();
        anchor.remove(0);
        let axes: Vec<usize> = cell.axes().iter().map(|a| a - 1).collect();
        terms.push((Cell::new(anchor, axes)?, c));
    }
    Chain::from_terms(&spatial, s.dim() - 1, terms)
}

/// Variation recomputed from the mass of the chain with temporal cells
/// removed and the time window applied by level index.
pub fn variation_by_filtering(s: &SpacetimeChain, lo_level: i64, hi_level: i64) -> Rational {
    let terms = s
        .chain()
        .iter()
        .filter(|(cell, _)| !cell.spans(0) && (lo_level..=hi_level).contains(&cell.anchor()[0]))
        .map(|(cell, c)| (cell.clone(), c));
    Chain::from_terms(s.grid(), s.dim(), terms).expect("subset of a valid chain").mass()
}

/// Flat norm by enumerating every integer (k+1)-chain with coefficients in
/// `-bound..=bound`; R is then forced to `T − ∂Q`. Only for tiny grids.
pub fn flat_norm_by_enumeration(t: &Chain, bound: i64) -> Rational {
    let cells = t.grid().cells(t.dim() + 1);
    let mut best: Option<Rational> = None;
    let mut coeffs = vec![-bound; cells.len()];
    loop {
        let q = Chain::from_terms(t.grid(), t.dim() + 1, cells.iter().cloned().zip(coeffs.iter().copied()))
            .expect("grid cells");
        let r = t - &q.boundary();
        let v = q.mass() + r.mass();
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return best.unwrap_or_else(Rational::zero);
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// Minimal filling mass by enumeration, `None` when nothing in the
/// coefficient range fills `t`.
pub fn filling_by_enumeration(t: &Chain, bound: i64) -> Option<Rational> {
    let cells = t.grid().cells(t.dim() + 1);
    let mut best: Option<Rational> = None;
    let mut coeffs = vec![-bound; cells.len()];
    loop {
        let q = Chain::from_terms(t.grid(), t.dim() + 1, cells.iter().cloned().zip(coeffs.iter().copied()))
            .expect("grid cells");
        if q.boundary() == *t {
            let v = q.mass();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return best;
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// Total variation of a step function from its value list, restricted to
/// jumps at breakpoints inside the interval (jump at `b_i` is
/// `values[i] − values[i−1]`).
pub fn step_variation(breakpoints: &[Rational], values: &[Rational], inside: impl Fn(&Rational) -> bool) -> Rational {
    let mut total = Rational::zero();
    for i in 1..values.len() {
        if inside(&breakpoints[i]) {
            total += rational::abs(&(&values[i] - &values[i - 1]));
        }
    }
    total
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}
