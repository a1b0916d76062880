//! Exact flat norms and the Lipschitz deformation distance as integer
//! programs over cell multiplicities.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::chain::{Cell, Chain, ChainFile, Grid};
use crate::error::{Error, Result};
use crate::exact_lp::{solve_ilp_with, IlpOptions, LpModel, LpSolution, Relation, Status};
use crate::rational::{self, Rational};
use crate::spacetime::{unit_time_grid, SpacetimeChain};
use crate::transform::{self, SweepPlan};

/// Optimal chains attached to a [`NormResult`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    pub q: Option<Chain>,
    pub r: Option<Chain>,
    pub s: Option<SpacetimeChain>,
}

/// Outcome of one of the norm programs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormResult {
    pub status: Status,
    /// Integer optimum; `None` when infeasible.
    pub value: Option<Rational>,
    /// Value of the LP relaxation; `None` when infeasible.
    pub relaxation: Option<Rational>,
    /// Whether the LP optimum was already integral.
    pub integral: bool,
    pub witness: Witness,
    pub nodes: usize,
}

impl NormResult {
    pub fn is_feasible(&self) -> bool {
        self.status == Status::Optimal
    }

    /// The value, or an `Infeasible` error naming `what`.
    pub fn require_value(&self, what: &str) -> Result<&Rational> {
        self.value.as_ref().ok_or_else(|| Error::Infeasible(what.to_string()))
    }

    pub fn to_file(&self) -> NormResultFile {
        let fmt = |r: &Option<Rational>| r.as_ref().map(rational::format);
        NormResultFile {
            value: fmt(&self.value),
            relaxation: fmt(&self.relaxation),
            witness: WitnessFile {
                q: self.witness.q.as_ref().map(ChainFile::from),
                r: self.witness.r.as_ref().map(ChainFile::from),
                s: self.witness.s.as_ref().map(SpacetimeChain::to_file),
            },
            status: self.status.to_string(),
            integral: self.integral,
            nodes: self.nodes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("results serialize")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<ChainFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<ChainFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<ChainFile>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormResultFile {
    pub value: Option<String>,
    pub relaxation: Option<String>,
    pub witness: WitnessFile,
    pub status: String,
    pub integral: bool,
    pub nodes: usize,
}

/// A block of split variables `x = x⁺ − x⁻`, one pair per cell.
pub(crate) struct SplitBlock {
    pub(crate) cells: Vec<Cell>,
    pub(crate) first: usize,
}

impl SplitBlock {
    pub(crate) fn chain(&self, grid: &Grid, k: usize, x: &[Rational]) -> Chain {
        let terms = self.cells.iter().enumerate().map(|(i, c)| {
            let v = &x[self.first + 2 * i] - &x[self.first + 2 * i + 1];
            (c.clone(), v.to_integer().to_i64().expect("multiplicity fits in i64"))
        });
        Chain::from_terms(grid, k, terms).expect("cells of the grid")
    }

    pub(crate) fn mass_row(&self, grid: &Grid) -> Vec<(usize, Rational)> {
        let mut row = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            let v = grid.volume(c.axes());
            row.push((self.first + 2 * i, v.clone()));
            row.push((self.first + 2 * i + 1, v));
        }
        row
    }
}

/// Collects linear rows indexed by cells: one equality per cell.
#[derive(Default)]
pub(crate) struct CellRows {
    rows: BTreeMap<Cell, Vec<(usize, Rational)>>,
}

impl CellRows {
    pub(crate) fn push(&mut self, cell: Cell, var: usize, coeff: i64) {
        self.rows.entry(cell).or_default().push((var, rational::int(coeff)));
    }

    /// Adds `Σ coeffs · vars = target(cell)` for every touched cell and for
    /// every cell in the target's support.
    pub(crate) fn finish(mut self, model: &mut LpModel, target: &Chain) {
        for (cell, _) in target.iter() {
            self.rows.entry(cell.clone()).or_default();
        }
        for (cell, row) in self.rows {
            model.add_constraint(row, Relation::Eq, rational::int(target.coeff(&cell)));
        }
    }
}

/// Adds a split variable pair per cell, charged by volume, with boundary
/// coefficients recorded in `rows`.
pub(crate) fn boundary_block(model: &mut LpModel, rows: &mut CellRows, grid: &Grid, cells: Vec<Cell>) -> SplitBlock {
    let first = model.num_vars;
    for c in &cells {
        let cost = grid.volume(c.axes());
        let p = model.add_var(cost.clone(), Some(Rational::zero()), true);
        let m = model.add_var(cost, Some(Rational::zero()), true);
        for (face, s) in c.boundary_terms() {
            rows.push(face.clone(), p, s);
            rows.push(face, m, -s);
        }
    }
    SplitBlock { cells, first }
}

/// Exact solvers with a shared branch-and-bound node limit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Solver {
    pub options: IlpOptions,
}

fn base_result(sol: &LpSolution) -> NormResult {
    let ok = sol.status == Status::Optimal;
    NormResult {
        status: sol.status,
        value: ok.then(|| sol.value.clone()),
        relaxation: if ok { sol.relaxation_value.clone() } else { None },
        // Branch-and-bound stops at the root exactly when its relaxation is integral.
        integral: ok && sol.nodes == 1,
        witness: Witness::default(),
        nodes: sol.nodes,
    }
}

impl Solver {
    pub fn new(options: IlpOptions) -> Self {
        Self { options }
    }

    /// `min 𝐌(Q) + 𝐌(R)` subject to `T = ∂Q + R`.
    pub fn flat_norm(&self, t: &Chain) -> Result<NormResult> {
        let grid = t.grid();
        let k = t.dim();
        let mut model = LpModel::new();
        let mut rows = CellRows::default();
        let q_cells = if k < grid.dim() { grid.cells(k + 1) } else { Vec::new() };
        let q = boundary_block(&mut model, &mut rows, grid, q_cells);
        let r_first = model.num_vars;
        let r_cells = grid.cells(k);
        for c in &r_cells {
            let v = grid.volume(c.axes());
            let p = model.add_var(v.clone(), Some(Rational::zero()), true);
            let m = model.add_var(v, Some(Rational::zero()), true);
            rows.push(c.clone(), p, 1);
            rows.push(c.clone(), m, -1);
        }
        let r = SplitBlock { cells: r_cells, first: r_first };
        rows.finish(&mut model, t);
        let sol = solve_ilp_with(&model, self.options)?;
        let mut out = base_result(&sol);
        if sol.status == Status::Optimal {
            out.witness.q = Some(q.chain(grid, k + 1, &sol.assignment));
            out.witness.r = Some(r.chain(grid, k, &sol.assignment));
        }
        Ok(out)
    }

    /// `min 𝐌(Q)` subject to `∂Q = T`; infeasible when `T` bounds nothing in
    /// the box.
    pub fn flat_norm_boundaryless(&self, t: &Chain) -> Result<NormResult> {
        require_cycle(t, "boundaryless flat norm")?;
        let grid = t.grid();
        let k = t.dim();
        let mut model = LpModel::new();
        let mut rows = CellRows::default();
        let cells = if k < grid.dim() { grid.cells(k + 1) } else { Vec::new() };
        let q = boundary_block(&mut model, &mut rows, grid, cells);
        rows.finish(&mut model, t);
        let sol = solve_ilp_with(&model, self.options)?;
        let mut out = base_result(&sol);
        if sol.status == Status::Optimal {
            out.witness.q = Some(q.chain(grid, k + 1, &sol.assignment));
        }
        Ok(out)
    }

    /// Minimal variation of a space-time chain on `columns` time columns over
    /// `[0, 1]` with `∂S = δ₁×T1 − δ₀×T0` and, when `budget` is given,
    /// per-column variation at most `budget`.
    ///
    /// Only the spatial flips `Q_0, …, Q_N` at the grid times are unknowns:
    /// the temporal part is forced to carry `C_i = T0 + ∂(Q_0 + … + Q_i)`
    /// through column `i`, which leaves the single condition
    /// `T0 + Σ ∂Q_i = T1`. Flips at the final time count towards the last
    /// column.
    pub fn dist_lip(&self, t0: &Chain, t1: &Chain, columns: i64, budget: Option<&Rational>) -> Result<NormResult> {
        check_endpoints(t0, t1, columns, budget)?;
        let grid = t0.grid();
        let k = t0.dim();
        let mut model = LpModel::new();
        let mut rows = CellRows::default();
        let cells = if k < grid.dim() { grid.cells(k + 1) } else { Vec::new() };
        let levels: Vec<SplitBlock> = (0..=columns)
            .map(|_| boundary_block(&mut model, &mut rows, grid, cells.clone()))
            .collect();
        rows.finish(&mut model, &(t1 - t0));
        if let Some(b) = budget {
            for i in 0..columns as usize {
                let mut row = levels[i].mass_row(grid);
                if i + 1 == columns as usize {
                    row.extend(levels[i + 1].mass_row(grid));
                }
                model.add_constraint(row, Relation::Le, b.clone());
            }
        }
        let sol = solve_ilp_with(&model, self.options)?;
        let mut out = base_result(&sol);
        if sol.status == Status::Optimal {
            let flips: Vec<Chain> = levels.iter().map(|l| l.chain(grid, k + 1, &sol.assignment)).collect();
            out.witness.s = Some(assemble_spacetime(t0, &flips)?);
        }
        Ok(out)
    }

    /// The same program with every space-time cell as an unknown: temporal
    /// multiplicities are free integers, spatial ones are split and charged.
    /// Much larger than [`Solver::dist_lip`]; kept as an independent check.
    pub fn dist_lip_full(&self, t0: &Chain, t1: &Chain, columns: i64, budget: Option<&Rational>) -> Result<NormResult> {
        check_endpoints(t0, t1, columns, budget)?;
        let time = unit_time_grid(columns)?;
        let spatial = t0.grid();
        let grid = time.concat(spatial);
        let k = t0.dim();
        let cells = grid.cells(k + 1);
        let (temporal, spatial_cells): (Vec<Cell>, Vec<Cell>) = cells.into_iter().partition(|c| c.spans(0));
        let mut model = LpModel::new();
        let mut rows = CellRows::default();
        let temporal_first = model.num_vars;
        for c in &temporal {
            let x = model.add_var(Rational::zero(), None, true);
            for (face, s) in c.boundary_terms() {
                rows.push(face, x, s);
            }
        }
        let flips = boundary_block(&mut model, &mut rows, &grid, spatial_cells);
        let target = &SpacetimeChain::embed_at(&time, columns, t1) - &SpacetimeChain::embed_at(&time, 0, t0);
        rows.finish(&mut model, &target);
        if let Some(b) = budget {
            for i in 0..columns {
                let row: Vec<(usize, Rational)> = flips
                    .cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.anchor()[0] == i || (i == columns - 1 && c.anchor()[0] == columns))
                    .flat_map(|(j, c)| {
                        let v = grid.volume(c.axes());
                        [(flips.first + 2 * j, v.clone()), (flips.first + 2 * j + 1, v)]
                    })
                    .collect();
                model.add_constraint(row, Relation::Le, b.clone());
            }
        }
        let sol = solve_ilp_with(&model, self.options)?;
        let mut out = base_result(&sol);
        if sol.status == Status::Optimal {
            let mut terms: Vec<(Cell, i64)> = temporal
                .iter()
                .enumerate()
                .map(|(j, c)| (c.clone(), sol.assignment[temporal_first + j].to_integer().to_i64().expect("fits")))
                .collect();
            terms.extend(flips.chain(&grid, k + 1, &sol.assignment).iter().map(|(c, v)| (c.clone(), v)));
            out.witness.s = Some(SpacetimeChain::new(Chain::from_terms(&grid, k + 1, terms)?)?);
        }
        Ok(out)
    }

    /// Computes `𝐅₀(T1 − T0)` and `dist_Lip(T0, T1)` with columns and budget
    /// chosen so that a unit-flip sweep of an optimal filling fits, and checks
    /// both one-sided certificates.
    pub fn verify_equality(&self, t0: &Chain, t1: &Chain) -> Result<EqualityReport> {
        require_cycle(t0, "equality check")?;
        require_cycle(t1, "equality check")?;
        if t0.grid() != t1.grid() || t0.dim() != t1.dim() {
            return Err(Error::GridMismatch("both cycles must live on the same grid in the same dimension".into()));
        }
        let diff = t1 - t0;
        let f0 = self.flat_norm_boundaryless(&diff)?;
        let v0 = f0.require_value("T1 - T0 does not bound inside the box")?.clone();
        let grid = t0.grid();
        let k = t0.dim();
        let vols: Vec<Rational> = crate::chain::combinations(grid.dim(), k + 1).iter().map(|a| grid.volume(a)).collect();
        let min_vol = vols.iter().min().cloned().unwrap_or_else(|| rational::int(1));
        let max_vol = vols.iter().max().cloned().unwrap_or_else(|| rational::int(1));
        let ratio = &v0 / &min_vol;
        let columns = ratio.numer().div_ceil(ratio.denom()).to_i64().expect("column count fits").max(1);
        let dist = self.dist_lip(t0, t1, columns, Some(&max_vol))?;
        let dump = || format!("T0 = {}\nT1 = {}", t0.to_json(), t1.to_json());
        let v1 = dist
            .value
            .clone()
            .ok_or_else(|| Error::Certificate(format!("distance program infeasible although F0 = {}\n{}", rational::format(&v0), dump())))?;
        verify_result(&f0, &Problem::Boundaryless(diff.clone()))?;
        verify_result(&dist, &Problem::DistLip { t0: t0.clone(), t1: t1.clone(), columns, budget: Some(max_vol.clone()) })?;
        if v1 != v0 {
            return Err(Error::Certificate(format!(
                "dist_Lip = {} differs from F0 = {}\n{}",
                rational::format(&v1),
                rational::format(&v0),
                dump()
            )));
        }
        // Lower bound: the projected flips fill T1 − T0 and weigh at most Var.
        let s = dist.witness.s.as_ref().expect("optimal result carries S");
        let projection = s.spatial_projection();
        let projection_mass = projection.mass();
        if projection.boundary() != diff || projection_mass > v1 || projection_mass < v0 {
            return Err(Error::Certificate(format!("projection certificate fails\n{}", dump())));
        }
        // Upper bound: sweeping the optimal filling attains F0.
        let q = f0.witness.q.clone().expect("optimal result carries Q");
        let sweep = transform::sweep(&SweepPlan::one_flip_per_column(t0.clone(), q)?)?;
        let sweep_variation = sweep.total_variation();
        if sweep_variation != v0 {
            return Err(Error::Certificate(format!("sweep certificate fails\n{}", dump())));
        }
        Ok(EqualityReport {
            flat_norm_boundaryless: f0,
            dist_lip: dist,
            columns,
            budget: max_vol,
            projection_mass,
            sweep_variation,
        })
    }

    /// `𝐅(T) ≤ 𝐅₀(T)` for a cycle, with the empirical ratio
    /// `𝐅₀ / (𝐅 + 𝐅^{(k+1)/k})` when both are finite and positive.
    pub fn inequality_certificates(&self, t: &Chain) -> Result<InequalityReport> {
        require_cycle(t, "inequality certificates")?;
        let f = self.flat_norm(t)?;
        let f0 = self.flat_norm_boundaryless(t)?;
        verify_result(&f, &Problem::Flat(t.clone()))?;
        verify_result(&f0, &Problem::Boundaryless(t.clone()))?;
        let fv = f.require_value("flat norm")?.clone();
        let holds = match &f0.value {
            Some(v0) => fv <= *v0,
            None => true,
        };
        let ratio = match (&f0.value, t.dim()) {
            (Some(v0), k) if k >= 1 && !fv.is_zero() => {
                let x = rational::to_f64(&fv);
                Some(rational::to_f64(v0) / (x + x.powf((k as f64 + 1.0) / k as f64)))
            }
            _ => None,
        };
        if !holds {
            return Err(Error::Certificate(format!(
                "F = {} exceeds F0 = {}",
                rational::format(&fv),
                rational::format(f0.value.as_ref().expect("finite"))
            )));
        }
        Ok(InequalityReport { flat_norm: f, flat_norm_boundaryless: f0, holds, empirical_ratio: ratio })
    }
}

/// Result of [`Solver::verify_equality`].
#[derive(Debug, Clone)]
pub struct EqualityReport {
    pub flat_norm_boundaryless: NormResult,
    pub dist_lip: NormResult,
    pub columns: i64,
    pub budget: Rational,
    pub projection_mass: Rational,
    pub sweep_variation: Rational,
}

impl EqualityReport {
    pub fn value(&self) -> &Rational {
        self.flat_norm_boundaryless.value.as_ref().expect("verified report is feasible")
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "equal": true,
            "value": rational::format(self.value()),
            "flat_norm_boundaryless": self.flat_norm_boundaryless.to_file(),
            "dist_lip": self.dist_lip.to_file(),
            "columns": self.columns,
            "budget": rational::format(&self.budget),
            "projection_mass": rational::format(&self.projection_mass),
            "sweep_variation": rational::format(&self.sweep_variation),
        });
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }
}

/// Result of [`Solver::inequality_certificates`].
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub flat_norm: NormResult,
    pub flat_norm_boundaryless: NormResult,
    pub holds: bool,
    pub empirical_ratio: Option<f64>,
}

fn require_cycle(t: &Chain, what: &str) -> Result<()> {
    if t.boundary().is_zero() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} needs a chain with zero boundary")))
    }
}

fn check_endpoints(t0: &Chain, t1: &Chain, columns: i64, budget: Option<&Rational>) -> Result<()> {
    require_cycle(t0, "T0")?;
    require_cycle(t1, "T1")?;
    if t0.grid() != t1.grid() {
        return Err(Error::GridMismatch("T0 and T1 live on different grids".into()));
    }
    if t0.dim() != t1.dim() {
        return Err(Error::DimensionMismatch { expected: t0.dim(), found: t1.dim() });
    }
    if columns < 1 {
        return Err(Error::Precondition(format!("need at least one time column, got {columns}")));
    }
    if budget.is_some_and(|b| *b < Rational::zero()) {
        return Err(Error::Precondition("column budget must be nonnegative".into()));
    }
    Ok(())
}

/// Space-time chain with flips `Q_i` at grid times `t_i` and the slice
/// carried forward through each column.
fn assemble_spacetime(t0: &Chain, flips: &[Chain]) -> Result<SpacetimeChain> {
    let columns = flips.len() as i64 - 1;
    let time = unit_time_grid(columns)?;
    let mut acc = Chain::zero(&time.concat(t0.grid()), t0.dim() + 1);
    let mut current = t0.clone();
    for (i, q) in flips.iter().enumerate() {
        acc = &acc + &SpacetimeChain::embed_at(&time, i as i64, q);
        if (i as i64) < columns {
            current = &current + &q.boundary();
            acc = &acc + &SpacetimeChain::extrude_column(&time, i as i64, &current);
        }
    }
    SpacetimeChain::new(acc)
}

/// The program a [`NormResult`] claims to solve.
#[derive(Debug, Clone)]
pub enum Problem {
    Flat(Chain),
    Boundaryless(Chain),
    DistLip { t0: Chain, t1: Chain, columns: i64, budget: Option<Rational> },
}

/// Recomputes boundaries and masses from the witness and compares with the
/// claimed value; also checks `relaxation ≤ value`.
pub fn verify_result(result: &NormResult, problem: &Problem) -> Result<()> {
    let fail = |m: &str| Err(Error::Certificate(format!("witness check: {m}")));
    if result.status != Status::Optimal {
        return Ok(());
    }
    let value = result.value.as_ref().expect("optimal results have values");
    if let Some(r) = &result.relaxation {
        if r > value {
            return fail("relaxation exceeds the integer optimum");
        }
    }
    match problem {
        Problem::Flat(t) => {
            let (Some(q), Some(r)) = (&result.witness.q, &result.witness.r) else {
                return fail("flat norm result lacks Q or R");
            };
            if &(&q.boundary() + r) != t {
                return fail("T differs from ∂Q + R");
            }
            if &(q.mass() + r.mass()) != value {
                return fail("𝐌(Q) + 𝐌(R) differs from the value");
            }
        }
        Problem::Boundaryless(t) => {
            let Some(q) = &result.witness.q else {
                return fail("boundaryless result lacks Q");
            };
            if &q.boundary() != t {
                return fail("∂Q differs from T");
            }
            if &q.mass() != value {
                return fail("𝐌(Q) differs from the value");
            }
        }
        Problem::DistLip { t0, t1, columns, budget } => {
            let Some(s) = &result.witness.s else {
                return fail("distance result lacks S");
            };
            if s.columns() != *columns || s.lo() != Rational::zero() || s.hi() != rational::int(1) {
                return fail("S lives on the wrong time grid");
            }
            let time = s.time_grid();
            let expected = &SpacetimeChain::embed_at(&time, *columns, t1) - &SpacetimeChain::embed_at(&time, 0, t0);
            if s.chain().boundary() != expected {
                return fail("∂S differs from δ₁×T1 − δ₀×T0");
            }
            if &s.total_variation() != value {
                return fail("Var(S) differs from the value");
            }
            if let Some(b) = budget {
                if s.discrete_lipschitz_constant() * s.time_spacing() > *b {
                    return fail("a column exceeds the budget");
                }
            }
        }
    }
    Ok(())
}

pub fn flat_norm(t: &Chain) -> Result<NormResult> {
    Solver::default().flat_norm(t)
}

pub fn flat_norm_boundaryless(t: &Chain) -> Result<NormResult> {
    Solver::default().flat_norm_boundaryless(t)
}

pub fn dist_lip(t0: &Chain, t1: &Chain, columns: i64, budget: Option<&Rational>) -> Result<NormResult> {
    Solver::default().dist_lip(t0, t1, columns, budget)
}

pub fn verify_equality(t0: &Chain, t1: &Chain) -> Result<EqualityReport> {
    Solver::default().verify_equality(t0, t1)
}

pub fn inequality_certificates(t: &Chain) -> Result<InequalityReport> {
    Solver::default().inequality_certificates(t)
}
