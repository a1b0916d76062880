//! Deformation of fine cycles onto a coarse grid, and isoperimetric fillings.
//!
//! The deformation is computed as an optimal homological rounding: find a
//! coarse cycle `P` and a fine filling `W` with `T + ∂W = embed(P)`, first
//! minimizing `𝐌(W)` and then, among those, `𝐌(P)`.

use num_traits::Zero;
use serde::Serialize;

use crate::chain::{subdivide, Chain, Grid};
use crate::error::{Error, Result};
use crate::exact_lp::{solve_ilp_with, IlpOptions, LpModel, Relation, Status};
use crate::flatnorm::{boundary_block, CellRows, Solver, SplitBlock};
use crate::rational::{self, Rational};
use crate::spacetime::SpacetimeChain;
use crate::transform::{self, SweepPlan};

/// Output of [`deform_to_coarse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationResult {
    /// Cycle on the coarse grid.
    pub p: Chain,
    /// Fine (k+1)-chain with `T + ∂W = embed(P)`.
    pub w: Chain,
    /// Sweep of `W` starting from `T`.
    pub s: SpacetimeChain,
    /// Coarsening factor.
    pub m: i64,
    /// Largest coarse spacing.
    pub rho: Rational,
    pub mass_t: Rational,
    /// `𝐌(P) / 𝐌(T)`, absent for `T = 0`.
    pub mass_ratio: Option<Rational>,
    /// `Var(S) / (ρ 𝐌(T))`, absent for `T = 0`.
    pub variation_ratio: Option<Rational>,
}

/// Coarse cycle pushed to the fine grid.
pub fn embed(p: &Chain, m: i64) -> Result<Chain> {
    p.refine(m)
}

impl DeformationResult {
    /// Re-checks `∂P = 0`, `T + ∂W = embed(P)`, `Var(S) = 𝐌(W)` and
    /// `∂S = δ₁×embed(P) − δ₀×T`.
    pub fn verify(&self, t: &Chain) -> Result<()> {
        let fail = |m: &str| Err(Error::Certificate(format!("deformation check: {m}")));
        let e = embed(&self.p, self.m)?;
        if !self.p.boundary().is_zero() {
            return fail("P has a boundary");
        }
        if e.grid() != t.grid() || t + &self.w.boundary() != e {
            return fail("T + ∂W differs from embed(P)");
        }
        if self.s.total_variation() != self.w.mass() {
            return fail("Var(S) differs from 𝐌(W)");
        }
        let (t0, t1) = self.s.end_traces();
        if &t0 != t || t1 != e || !self.s.lateral_boundary().is_zero() {
            return fail("∂S differs from δ₁×embed(P) − δ₀×T");
        }
        Ok(())
    }

    pub fn csv_row(&self, id: &str) -> String {
        let opt = |r: &Option<Rational>| r.as_ref().map(rational::format).unwrap_or_else(|| "-".into());
        format!(
            "{id},{},{},{},{},{},{},{}",
            rational::format(&self.mass_t),
            rational::format(&self.rho),
            rational::format(&self.p.mass()),
            rational::format(&self.w.mass()),
            rational::format(&self.s.total_variation()),
            opt(&self.mass_ratio),
            opt(&self.variation_ratio)
        )
    }
}

pub const CSV_HEADER: &str = "instance,mass_t,rho,mass_p,mass_w,var_s,mass_ratio,variation_ratio";

/// Rounds a fine cycle onto the grid coarsened by `m`.
pub fn deform_to_coarse(t: &Chain, m: i64) -> Result<DeformationResult> {
    deform_to_coarse_with(t, m, IlpOptions::default())
}

pub fn deform_to_coarse_with(t: &Chain, m: i64, options: IlpOptions) -> Result<DeformationResult> {
    if !t.boundary().is_zero() {
        return Err(Error::Precondition("deformation needs a chain with zero boundary".into()));
    }
    let fine = t.grid();
    let coarse = fine.coarsened(m)?;
    let k = t.dim();
    if k >= fine.dim() {
        return Err(Error::Precondition("cannot deform a top-dimensional chain".into()));
    }

    let mut model = LpModel::new();
    let mut rows = CellRows::default();
    let w = boundary_block(&mut model, &mut rows, fine, fine.cells(k + 1));
    let p_first = model.num_vars;
    let p_cells = coarse.cells(k);
    for c in &p_cells {
        let vol = coarse.volume(c.axes());
        let plus = model.add_var(vol.clone(), Some(Rational::zero()), true);
        let minus = model.add_var(vol, Some(Rational::zero()), true);
        for sub in subdivide(c, m) {
            rows.push(sub.clone(), plus, -1);
            rows.push(sub, minus, 1);
        }
    }
    let p = SplitBlock { cells: p_cells, first: p_first };
    rows.finish(&mut model, &-t);

    let p_range = p.first..p.first + 2 * p.cells.len();
    let full_costs = model.objective.clone();

    // Stage one: least filling mass.
    let mut stage = model.clone();
    for j in p_range.clone() {
        stage.objective[j] = Rational::zero();
    }
    let first = solve_ilp_with(&stage, options)?;
    if first.status != Status::Optimal {
        return Err(Error::Infeasible("no coarse cycle is homologous to T inside the box".into()));
    }
    let best_w = first.value.clone();

    // Stage two: least coarse mass among least fillings.
    let mut stage = model;
    stage.add_constraint(w.mass_row(fine), Relation::Le, best_w);
    for (j, (cost, full)) in stage.objective.iter_mut().zip(&full_costs).enumerate() {
        *cost = if p_range.contains(&j) { full.clone() } else { Rational::zero() };
    }
    let second = solve_ilp_with(&stage, options)?;
    if second.status != Status::Optimal {
        return Err(Error::Certificate("second deformation stage lost feasibility".into()));
    }

    let w_chain = w.chain(fine, k + 1, &second.assignment);
    let p_chain = p.chain(&coarse, k, &second.assignment);
    let s = transform::sweep(&SweepPlan::one_flip_per_column(t.clone(), w_chain.clone())?)?;
    let rho = coarse.spacing().iter().max().cloned().expect("nonempty grid");
    let mass_t = t.mass();
    let (mass_ratio, variation_ratio) = if mass_t.is_zero() {
        (None, None)
    } else {
        (Some(p_chain.mass() / &mass_t), Some(s.total_variation() / (&rho * &mass_t)))
    };
    let out = DeformationResult { p: p_chain, w: w_chain, s, m, rho, mass_t, mass_ratio, variation_ratio };
    out.verify(t)?;
    Ok(out)
}

/// A filling found by deforming onto the coarsest grid that admits `P = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoperimetricFill {
    /// Collapse record with `∂S = −δ₀×T`.
    pub s: SpacetimeChain,
    /// Filling with `∂W = −T`.
    pub w: Chain,
    /// Coarsening factor that produced the filling.
    pub m: i64,
    /// Whether no factor rounded T to zero, so the coarse remainder was
    /// filled on the coarse grid and added to W.
    pub remainder_filled: bool,
    /// `Var(S) / 𝐌(T)^{(k+1)/k}`, absent for `T = 0`.
    pub constant: Option<f64>,
}

/// Common divisors of all extents, largest first.
pub fn coarsening_factors(grid: &Grid) -> Vec<i64> {
    let max = grid.extents().iter().copied().min().unwrap_or(1);
    (1..=max).rev().filter(|m| grid.extents().iter().all(|e| e % m == 0)).collect()
}

/// Finds the coarsest deformation with `P = 0` and returns its filling.
pub fn isoperimetric_fill(t: &Chain) -> Result<IsoperimetricFill> {
    isoperimetric_fill_with(t, IlpOptions::default())
}

pub fn isoperimetric_fill_with(t: &Chain, options: IlpOptions) -> Result<IsoperimetricFill> {
    let k = t.dim();
    if k == 0 {
        return Err(Error::Precondition("isoperimetric filling needs k >= 1".into()));
    }
    if !t.boundary().is_zero() {
        return Err(Error::Precondition("isoperimetric filling needs a chain with zero boundary".into()));
    }
    let factors = coarsening_factors(t.grid());
    let mut coarsest: Option<DeformationResult> = None;
    for &m in &factors {
        let d = deform_to_coarse_with(t, m, options)?;
        if d.p.is_zero() {
            return finish_fill(t, d.w, m, false);
        }
        coarsest.get_or_insert(d);
    }
    // No factor rounds T away: fill the coarsest remainder on its own grid.
    let d = coarsest.expect("the factor 1 is always tried");
    let q = Solver::new(options).flat_norm_boundaryless(&-&d.p)?;
    let Some(q) = q.witness.q else {
        return Err(Error::Infeasible(format!(
            "T does not bound inside the box; coarse remainder has mass {} on {} cells",
            rational::format(&d.p.mass()),
            d.p.len()
        )));
    };
    let w = &d.w + &q.refine(d.m)?.rehome(t.grid())?;
    finish_fill(t, w, d.m, true)
}

fn finish_fill(t: &Chain, w: Chain, m: i64, remainder_filled: bool) -> Result<IsoperimetricFill> {
    let k = t.dim();
    if w.boundary() != -t {
        return Err(Error::Certificate("isoperimetric filling fails ∂W = −T".into()));
    }
    let s = transform::sweep(&SweepPlan::one_flip_per_column(t.clone(), w.clone())?)?;
    if s.total_variation() != w.mass() {
        return Err(Error::Certificate("isoperimetric filling fails Var(S) = 𝐌(W)".into()));
    }
    let constant = (!t.is_zero()).then(|| {
        let mass = rational::to_f64(&t.mass());
        rational::to_f64(&s.total_variation()) / mass.powf((k as f64 + 1.0) / k as f64)
    });
    Ok(IsoperimetricFill { s, w, m, remainder_filled, constant })
}

/// One line of a batch report, serializable for the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct DeformationSummary {
    pub m: i64,
    #[serde(with = "crate::rational")]
    pub rho: Rational,
    #[serde(with = "crate::rational")]
    pub mass_t: Rational,
    #[serde(with = "crate::rational")]
    pub mass_p: Rational,
    #[serde(with = "crate::rational")]
    pub mass_w: Rational,
    #[serde(with = "crate::rational")]
    pub variation: Rational,
}

impl From<&DeformationResult> for DeformationSummary {
    fn from(d: &DeformationResult) -> Self {
        Self {
            m: d.m,
            rho: d.rho.clone(),
            mass_t: d.mass_t.clone(),
            mass_p: d.p.mass(),
            mass_w: d.w.mass(),
            variation: d.s.total_variation(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{block, rectangle_cycle, square_cycle};
    use crate::random;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn aligned_cycle_is_kept() {
        let g = Grid::unit(&[4, 4]).unwrap();
        let t = rectangle_cycle(&g, [2, 0], 2, 2).unwrap();
        let d = deform_to_coarse(&t, 2).unwrap();
        assert!(d.w.is_zero());
        assert_eq!(d.s.total_variation(), int(0));
        let coarse = g.coarsened(2).unwrap();
        assert_eq!(d.p, square_cycle(&coarse, [1, 0]).unwrap());
        assert_eq!(d.mass_ratio, Some(int(1)));
    }

    #[test]
    fn unit_square_collapses() {
        let g = Grid::unit(&[4, 4]).unwrap();
        let t = square_cycle(&g, [1, 1]).unwrap();
        let d = deform_to_coarse(&t, 2).unwrap();
        assert!(d.p.is_zero());
        assert_eq!(d.w.mass(), int(1));
        assert_eq!(d.w, -block(&g, [1, 1], 1, 1).unwrap());
        assert_eq!(d.s.total_variation(), int(1));
        assert_eq!(d.rho, int(2));
        assert!(d.csv_row("sq").starts_with("sq,4,2,0,1,1,0,1/8"));
    }

    #[test]
    fn invalid_inputs() {
        let g = Grid::unit(&[3, 3]).unwrap();
        let t = square_cycle(&g, [0, 0]).unwrap();
        assert!(matches!(deform_to_coarse(&t, 2), Err(Error::InvalidGrid(_))));
        let open = Chain::cell(&g, crate::chain::Cell::new(vec![0, 0], vec![0]).unwrap(), 1).unwrap();
        assert!(matches!(deform_to_coarse(&open, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn square_is_filled_by_one_cell() {
        let g = Grid::unit(&[4, 4]).unwrap();
        let t = square_cycle(&g, [1, 1]).unwrap();
        let f = isoperimetric_fill(&t).unwrap();
        assert_eq!(f.m, 4);
        assert_eq!(f.w.mass(), int(1));
        assert_eq!(f.s.total_variation(), int(1));
        assert_eq!(f.constant, Some(1.0 / 16.0));
        let (t0, t1) = f.s.end_traces();
        assert_eq!((t0, t1.is_zero()), (t, true));
    }

    #[test]
    fn coprime_box_fills_through_the_remainder() {
        let g = Grid::unit(&[3, 2]).unwrap();
        let t = square_cycle(&g, [0, 0]).unwrap();
        let f = isoperimetric_fill(&t).unwrap();
        assert!(f.remainder_filled);
        assert_eq!((f.m, f.w.mass()), (1, int(1)));
        assert_eq!(f.s.end_traces(), (t, Chain::zero(&g, 1)));
    }

    #[test]
    fn zero_cycle_fills_with_nothing() {
        let g = Grid::unit(&[2, 2]).unwrap();
        let f = isoperimetric_fill(&Chain::zero(&g, 1)).unwrap();
        assert!(f.w.is_zero());
        assert!(f.s.chain().is_zero());
        assert_eq!(f.constant, None);
    }

    #[test]
    fn factors_are_descending_common_divisors() {
        assert_eq!(coarsening_factors(&Grid::unit(&[12, 8]).unwrap()), vec![4, 2, 1]);
        assert_eq!(coarsening_factors(&Grid::unit(&[12, 12]).unwrap()), vec![12, 6, 4, 3, 2, 1]);
    }

    #[test]
    fn refinement_keeps_variation_within_half_rho_mass() {
        let g = Grid::unit(&[4, 4]).unwrap();
        let t = rectangle_cycle(&g, [1, 1], 3, 3).unwrap();
        let mut vars = Vec::new();
        for f in 1..=4 {
            let d = deform_to_coarse(&t.refine(f).unwrap(), 2).unwrap();
            assert_eq!(d.rho, ratio(2, f));
            assert!(d.variation_ratio.clone().unwrap() <= ratio(1, 2), "f = {f}");
            vars.push(d.s.total_variation());
        }
        // Aligned refinements need no motion at all.
        assert_eq!(vars[1], int(0));
        assert_eq!(vars[3], int(0));
        assert_eq!(vars[0], int(5));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn random_deformations_verify(seed in any::<u64>(), m in 2i64..=3) {
            let mut rng = random::instance_rng(seed, 20, 0);
            let g = Grid::unit(&[2 * m, 2 * m]).unwrap();
            let t = random::bounding_cycle(&mut rng, &g, 1, 4, 1);
            let d = deform_to_coarse(&t, m).unwrap();
            d.verify(&t).unwrap();
            prop_assert!(d.p.boundary().is_zero());
        }
    }
}
