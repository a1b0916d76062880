//! The acceptance suite: twelve property checks over seeded random instances
//! and fixtures, shared by the `acceptance` test target and `stc check`.
//!
//! The transcript carries no timings, so two runs with the same seed print
//! identical bytes regardless of execution mode.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;

use crate::bv::{cantor_stage, graph_current, pointwise_variation};
use crate::chain::{Chain, Grid};
use crate::deform::{self, DeformationResult};
use crate::exact_lp::IlpOptions;
use crate::exec::Exec;
use crate::fixtures::{self, square_cycle};
use crate::flatnorm::{verify_result, NormResult, Problem, Solver};
use crate::oracles;
use crate::random::{self, instance_rng};
use crate::rational::{self, int, ratio, Rational};
use crate::spacetime::{is_temporal, SpacetimeChain, TimeInterval};
use crate::transform::{self, SweepPlan};

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub seed: u64,
    pub exec: Exec,
    pub options: IlpOptions,
}

impl Default for Config {
    fn default() -> Self {
        Self { seed: 42, exec: Exec::default(), options: IlpOptions::default() }
    }
}

/// Name and runtime budget of each criterion, indexed from 1.
pub const CRITERIA: [(&str, u64); 12] = [
    ("chain complex soundness", 10),
    ("mass decomposition", 10),
    ("slicing soundness", 30),
    ("projection bound and Poincare estimate", 300),
    ("transform identities", 30),
    ("sweep contract", 10),
    ("equality of dist_Lip and F0", 900),
    ("deformation", 600),
    ("isoperimetric scaling", 120),
    ("BV bridge", 10),
    ("ragged cone", 30),
    ("solver integrity", 60),
];

#[derive(Debug, Clone)]
pub struct Outcome {
    pub index: usize,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        CRITERIA.get(self.index.wrapping_sub(1)).map_or("unknown criterion", |c| c.0)
    }

    pub fn limit(&self) -> Duration {
        Duration::from_secs(CRITERIA.get(self.index.wrapping_sub(1)).map_or(0, |c| c.1))
    }

    pub fn within_limit(&self) -> bool {
        self.elapsed <= self.limit()
    }

    /// Deterministic transcript line.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{:>2} {verdict} {}: {}", self.index, self.name(), self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn transcript(&self) -> String {
        let mut out = format!("check seed={}\n", self.seed);
        for o in &self.outcomes {
            out.push_str(&o.line());
            out.push('\n');
        }
        let passed = self.outcomes.iter().filter(|o| o.passed).count();
        out.push_str(&format!("{passed}/{} criteria passed\n", self.outcomes.len()));
        out
    }
}

/// Runs every criterion in index order.
pub fn run_all(cfg: &Config) -> Report {
    run_selected(cfg, &(1..=CRITERIA.len()).collect::<Vec<_>>())
}

/// Runs the listed criteria (1-based) in the given order.
pub fn run_selected(cfg: &Config, indices: &[usize]) -> Report {
    let mut outcomes: Vec<Outcome> = Vec::new();
    for &i in indices {
        let earlier: Vec<Outcome> = outcomes.iter().filter(|o| o.index < 12).cloned().collect();
        outcomes.push(if i == 12 { integrity(cfg, &earlier) } else { run_criterion(cfg, i) });
    }
    Report { seed: cfg.seed, outcomes }
}

/// Runs a single criterion (1-based).
pub fn run_criterion(cfg: &Config, index: usize) -> Outcome {
    let start = Instant::now();
    let result = match index {
        1 => chain_complex(cfg),
        2 => mass_decomposition(cfg),
        3 => slicing(cfg),
        4 => projection_and_poincare(cfg),
        5 => transforms(cfg),
        6 => sweep_contract(cfg),
        7 => equality(cfg),
        8 => deformation(cfg),
        9 => isoperimetric(cfg),
        10 => bv_bridge(cfg),
        11 => ragged_cone(cfg),
        12 => return integrity(cfg, &[]),
        _ => Err(format!("no criterion {index}")),
    };
    finish(index, result, start)
}

fn finish(index: usize, result: Check, start: Instant) -> Outcome {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e),
    };
    Outcome { index, passed, detail, elapsed: start.elapsed() }
}

type Check = std::result::Result<String, String>;

/// Runs `n` instances through `f` and returns their results in index order,
/// or the first failure.
fn instances<R: Send>(cfg: &Config, n: u64, f: impl Fn(u64) -> Result<R, String> + Sync + Send) -> Result<Vec<R>, String> {
    cfg.exec.map_indices(n, f).into_iter().enumerate().map(|(i, r)| r.map_err(|e| format!("instance {i}: {e}"))).collect()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn lib<T>(r: crate::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn fmt(r: &Rational) -> String {
    rational::format(r)
}

fn chain_complex(cfg: &Config) -> Check {
    let nonzero = instances(cfg, 1000, |i| {
        let mut rng = instance_rng(cfg.seed, 101, i);
        let d = rng.random_range(1..=4usize);
        let g = random::grid(&mut rng, d, 3);
        let k = rng.random_range(0..=d.min(3));
        let c = random::chain(&mut rng, &g, k, 10, 3);
        let b = c.boundary();
        ensure(b.boundary().is_zero(), || format!("∂∂ ≠ 0 for {}", c.to_json()))?;
        Ok(u64::from(!b.is_zero()))
    })?;
    Ok(format!("1000 chains (d ≤ 4, k ≤ 3), ∂∂ = 0 on all, {} with nonzero ∂", nonzero.iter().sum::<u64>()))
}

fn random_spacetime(rng: &mut impl Rng, max_dim: usize) -> SpacetimeChain {
    let d = rng.random_range(1..=max_dim);
    let spatial = random::grid(rng, d, 3);
    let k = rng.random_range(0..d);
    let columns = rng.random_range(1..=4i64);
    random::spacetime_chain(rng, &spatial, k, columns, 10)
}

fn mass_decomposition(cfg: &Config) -> Check {
    let totals = instances(cfg, 500, |i| {
        let mut rng = instance_rng(cfg.seed, 102, i);
        let s = random_spacetime(&mut rng, 3);
        let dec = s.mass_decomposition();
        let g = s.grid();
        let temporal: Rational = s
            .chain()
            .iter()
            .filter(|(c, _)| is_temporal(c))
            .map(|(c, v)| g.volume(c.axes()) * int(v.abs()))
            .sum();
        let spatial = oracles::variation_by_filtering(&s, 0, s.columns());
        ensure(&dec.temporal + &dec.spatial == s.chain().mass(), || format!("parts do not add up for {}", s.to_json()))?;
        ensure(dec.temporal == temporal && dec.spatial == spatial, || format!("parts differ from recount for {}", s.to_json()))?;
        Ok(s.chain().mass())
    })?;
    Ok(format!("500 space-time chains, temporal + spatial = 𝐌 exactly, total mass {}", fmt(&totals.iter().sum())))
}

fn generic_time(rng: &mut impl Rng, s: &SpacetimeChain) -> Rational {
    let col = rng.random_range(0..s.columns());
    let q = rng.random_range(2..=7i64);
    let p = rng.random_range(1..q);
    s.time_at(col) + s.time_spacing() * ratio(p, q)
}

fn slicing(cfg: &Config) -> Check {
    let counts = instances(cfg, 200, |i| {
        let mut rng = instance_rng(cfg.seed, 103, i);
        let s = random_spacetime(&mut rng, 2);
        let b = s.boundary();
        let mut formula = 0u64;
        for _ in 0..5 {
            let t = generic_time(&mut rng, &s);
            let slice = lib(s.slice(&t))?;
            let cyl = lib(oracles::cylinder_slice(&s, &t))?;
            ensure(slice == cyl, || format!("cylinder identity fails at t = {} for {}", fmt(&t), s.to_json()))?;
            if s.dim() >= 2 {
                ensure(slice.boundary() == -&lib(b.slice(&t))?, || {
                    format!("∂(S|t) ≠ −(∂S)|t at t = {} for {}", fmt(&t), s.to_json())
                })?;
                formula += 1;
            }
        }
        Ok(formula)
    })?;
    Ok(format!(
        "200 chains × 5 generic times, cylinder identity on 1000 slices, boundary formula on {}",
        counts.iter().sum::<u64>()
    ))
}

fn projection_and_poincare(cfg: &Config) -> Check {
    let solver = Solver::new(cfg.options);
    let slack = instances(cfg, 100, |i| {
        let mut rng = instance_rng(cfg.seed, 104, i);
        let spatial = random::grid(&mut rng, 2, 3);
        let k = rng.random_range(0..=1usize);
        let columns = rng.random_range(2..=4i64);
        let s = random::spacetime_chain(&mut rng, &spatial, k, columns, 8);
        let var = s.total_variation();
        ensure(s.spatial_projection().mass() <= var, || format!("𝐌(𝐩S) > Var(S) for {}", s.to_json()))?;
        let (mut a, mut b) = (generic_time(&mut rng, &s), generic_time(&mut rng, &s));
        while a == b {
            b = generic_time(&mut rng, &s);
        }
        if b < a {
            std::mem::swap(&mut a, &mut b);
        }
        let diff = &lib(s.slice(&b))? - &lib(s.slice(&a))?;
        let f = lib(solver.flat_norm(&diff))?;
        lib(verify_result(&f, &Problem::Flat(diff.clone())))?;
        let window = lib(TimeInterval::closed(a.clone(), b.clone()))?;
        let rhs = s.variation(&window) + s.boundary_variation(&window);
        let lhs = f.value.clone().ok_or("flat norm without value")?;
        ensure(lhs <= rhs, || format!("𝐅(S(t) − S(s)) = {} > {} on [{}, {}] for {}", fmt(&lhs), fmt(&rhs), fmt(&a), fmt(&b), s.to_json()))?;
        Ok(rhs - lhs)
    })?;
    let tight = slack.iter().filter(|x| x.is_zero()).count();
    Ok(format!("100 instances, 𝐌(𝐩S) ≤ Var(S) and Poincaré estimate hold, {tight} tight"))
}

fn random_plan(cfg: &Config, stream: u64, i: u64) -> SweepPlan {
    let mut rng = instance_rng(cfg.seed, stream, i);
    let spatial = random::grid(&mut rng, 2, 4);
    random::sweep_plan(&mut rng, &spatial, 1, 6)
}

fn transforms(cfg: &Config) -> Check {
    let totals = instances(cfg, 200, |i| {
        let p1 = random_plan(cfg, 105, i);
        let s1 = lib(transform::sweep(&p1))?;
        let end = p1.base() + &p1.fill().boundary();
        let mut rng = instance_rng(cfg.seed, 205, i);
        let fill2 = random::chain(&mut rng, p1.base().grid(), 2, 5, 1);
        let s2 = lib(transform::sweep(&lib(SweepPlan::one_flip_per_column(end.clone(), fill2.clone()))?))?;
        let c = lib(transform::concatenate(&s1, &s2))?;
        ensure(c.total_variation() == s1.total_variation() + s2.total_variation(), || "Var not additive".into())?;
        ensure(c.end_traces() == (p1.base().clone(), &end + &fill2.boundary()), || "concatenated traces".into())?;
        let r = transform::reverse(&s1);
        ensure(r.total_variation() == s1.total_variation(), || "reversal changes Var".into())?;
        ensure(r.end_traces() == (end.clone(), p1.base().clone()), || "reversed traces".into())?;
        let m = rng.random_range(2..=4i64);
        let f = lib(transform::rescale_time(&s1, m))?;
        ensure(f.total_variation() == s1.total_variation(), || "rescaling changes Var".into())?;
        ensure(f.end_traces() == s1.end_traces(), || "rescaled traces".into())?;
        for col in 0..s1.columns() {
            let t = s1.time_at(col) + s1.time_spacing() * ratio(1, 2 * m + 1);
            ensure(lib(f.slice(&t))? == lib(s1.slice(&t))?, || format!("rescaled slice differs at {}", fmt(&t)))?;
        }
        Ok(c.total_variation())
    })?;
    Ok(format!(
        "200 random sweeps, concatenation adds Var, reversal and rescaling keep it, traces consistent; Σ Var = {}",
        fmt(&totals.iter().sum())
    ))
}

/// Independent checks of one sweep: Var by filtering, end slice, traces and
/// the full boundary identity.
fn check_sweep(plan: &SweepPlan) -> Result<Rational, String> {
    let s = lib(transform::sweep(plan))?;
    let end = plan.base() + &plan.fill().boundary();
    let var = oracles::variation_by_filtering(&s, 0, s.columns());
    ensure(var == plan.fill().mass(), || format!("Var = {} ≠ 𝐌(fill) = {}", fmt(&var), fmt(&plan.fill().mass())))?;
    ensure(lib(s.slice_left(&s.hi()))? == end, || "end slice differs from base + ∂fill".into())?;
    let time = s.time_grid();
    let expected = &SpacetimeChain::embed_at(&time, s.columns(), &end) - &SpacetimeChain::embed_at(&time, 0, plan.base());
    ensure(s.chain().boundary() == expected, || "∂S ≠ δ₁×T₁ − δ₀×T₀".into())?;
    Ok(var)
}

fn sweep_contract(cfg: &Config) -> Check {
    let mut total = Rational::zero();
    for v in instances(cfg, 200, |i| check_sweep(&random_plan(cfg, 106, i)))? {
        total += v;
    }
    let g = Grid::unit(&[4, 4]).map_err(|e| e.to_string())?;
    let t = lib(square_cycle(&g, [0, 0]))?;
    let one = lib(fixtures::block(&g, [0, 0], 1, 1))?;
    let right = lib(fixtures::block(&g, [1, 0], 1, 1))?;
    let fixed = [
        lib(SweepPlan::single_column(t.clone(), -&one))?,
        lib(SweepPlan::one_flip_per_column(t.clone(), &right - &one))?,
        lib(SweepPlan::single_column(t, Chain::zero(&g, 2)))?,
        lib(SweepPlan::one_flip_per_column(Chain::zero(&g, 1), lib(fixtures::block(&g, [0, 0], 4, 4))?))?,
    ];
    for plan in &fixed {
        total += check_sweep(plan)?;
    }
    Ok(format!("204 sweeps (200 random, 4 fixtures), Var = 𝐌(fill) and boundary identity exact; Σ Var = {}", fmt(&total)))
}

fn equality(cfg: &Config) -> Check {
    let solver = Solver::new(cfg.options);
    let planar = instances(cfg, 50, |i| {
        let mut rng = instance_rng(cfg.seed, 107, i);
        let spacing = random::grid(&mut rng, 2, 1).spacing().to_vec();
        let extents = vec![rng.random_range(3..=6i64), rng.random_range(3..=6i64)];
        let g = lib(Grid::new(spacing, vec![int(0); 2], extents))?;
        let t0 = random::bounding_cycle(&mut rng, &g, 1, 8, 2);
        let t1 = random::bounding_cycle(&mut rng, &g, 1, 8, 2);
        let rep = lib(solver.verify_equality(&t0, &t1))?;
        let mut full = 0u64;
        if rep.columns <= 4 {
            let f = lib(solver.dist_lip_full(&t0, &t1, rep.columns, Some(&rep.budget)))?;
            ensure(f.value.as_ref() == Some(rep.value()), || format!("full program gives {:?}", f.value.as_ref().map(fmt)))?;
            full = 1;
        }
        Ok((rep.value().clone(), rep.columns, full))
    })?;
    let spatial = instances(cfg, 10, |i| {
        let mut rng = instance_rng(cfg.seed, 207, i);
        let g = lib(Grid::unit(&[4, 4, 4]))?;
        let t0 = random::bounding_cycle(&mut rng, &g, 1, 6, 2);
        let t1 = random::bounding_cycle(&mut rng, &g, 1, 6, 2);
        let rep = lib(solver.verify_equality(&t0, &t1))?;
        Ok((rep.value().clone(), rep.columns, 0))
    })?;
    let all: Vec<_> = planar.iter().chain(&spatial).collect();
    let sum: Rational = all.iter().map(|r| r.0.clone()).sum();
    let max_columns = all.iter().map(|r| r.1).max().unwrap_or(0);
    let full: u64 = all.iter().map(|r| r.2).sum();
    Ok(format!(
        "60 instances (50 planar up to 6×6, 10 on 4³), dist_Lip = F0 exactly with both certificates; Σ value = {}, max columns {max_columns}, {full} cross-checked by the full program",
        fmt(&sum)
    ))
}

fn recheck_deformation(t: &Chain, d: &DeformationResult) -> Result<(), String> {
    ensure(d.p.boundary().is_zero(), || "∂P ≠ 0".into())?;
    let embedded = lib(lib(d.p.refine(d.m))?.rehome(t.grid()))?;
    ensure(t + &d.w.boundary() == embedded, || "T + ∂W ≠ embed(P)".into())?;
    let var = oracles::variation_by_filtering(&d.s, 0, d.s.columns());
    ensure(var == d.w.mass(), || "Var(S) ≠ 𝐌(W)".into())?;
    ensure(d.s.end_traces() == (t.clone(), embedded), || "traces of S".into())?;
    Ok(())
}

fn deformation(cfg: &Config) -> Check {
    let sizes = [6i64, 12];
    let runs = instances(cfg, 100, |i| {
        let size = sizes[(i % 2) as usize];
        let m = 2 + ((i / 2) % 2) as i64;
        let mut rng = instance_rng(cfg.seed, 108, i);
        let g = lib(Grid::unit(&[size, size]))?;
        let t = random::rectangle_cycle(&mut rng, &g, (size * size / 12) as usize, 3);
        let d = lib(deform::deform_to_coarse_with(&t, m, cfg.options))?;
        recheck_deformation(&t, &d).map_err(|e| format!("{e} for {}", t.to_json()))?;
        Ok((size, d.mass_ratio, d.variation_ratio))
    })?;
    let mut lines = Vec::new();
    let mut means = Vec::new();
    for &size in &sizes {
        let rows: Vec<_> = runs.iter().filter(|r| r.0 == size && r.1.is_some()).collect();
        let n = int(rows.len().max(1) as i64);
        let mass: Rational = rows.iter().map(|r| r.1.clone().unwrap()).sum::<Rational>() / &n;
        let var: Rational = rows.iter().map(|r| r.2.clone().unwrap()).sum::<Rational>() / &n;
        let max_mass = rows.iter().filter_map(|r| r.1.clone()).max().unwrap_or_else(Rational::zero);
        let max_var = rows.iter().filter_map(|r| r.2.clone()).max().unwrap_or_else(Rational::zero);
        lines.push(format!(
            "{size}×{size}: mean 𝐌(P)/𝐌(T) {:.4}, max {:.4}, mean Var/(ρ𝐌(T)) {:.4}, max {:.4}",
            rational::to_f64(&mass),
            rational::to_f64(&max_mass),
            rational::to_f64(&var),
            rational::to_f64(&max_var)
        ));
        means.push((mass, var));
    }
    // Over a 2× range of sizes, a slope above 1/2 counts as growth.
    let grows = |a: &Rational, b: &Rational| {
        if a.is_zero() {
            !b.is_zero()
        } else {
            rational::to_f64(b) / rational::to_f64(a) > 2f64.sqrt()
        }
    };
    let summary = format!("100 cycles, identities exact; {}", lines.join("; "));
    if grows(&means[0].0, &means[1].0) || grows(&means[0].1, &means[1].1) {
        return Err(format!("ratios grow with the grid: {summary}"));
    }
    Ok(summary)
}

fn isoperimetric(cfg: &Config) -> Check {
    let g = lib(Grid::unit(&[12, 12]))?;
    let mut points = Vec::new();
    let mut constants = Vec::new();
    for r in 1..=5i64 {
        let t = lib(fixtures::rectangle_cycle(&g, [3, 3], r, r))?;
        let fill = lib(deform::isoperimetric_fill_with(&t, cfg.options))?;
        let var = fill.s.total_variation();
        ensure(var == int(r * r), || format!("r = {r}: Var(fill) = {} ≠ {}", fmt(&var), r * r))?;
        ensure(!fill.remainder_filled, || format!("r = {r}: no coarsening rounds T to zero"))?;
        ensure(var == fill.w.mass() && fill.w.boundary() == -&t, || format!("r = {r}: filling identities"))?;
        ensure(fill.s.end_traces() == (t.clone(), Chain::zero(&g, 1)), || format!("r = {r}: ∂S ≠ −δ₀×T"))?;
        points.push((rational::to_f64(&t.mass()), rational::to_f64(&var)));
        constants.push(fill.constant.unwrap_or(0.0));
    }
    let slope = oracles::log_log_slope(&points);
    let max_c = constants.iter().cloned().fold(0.0, f64::max);
    let detail = format!("r×r cycles r = 1..5, Var = r², log-log slope {slope:.4}, max Var/𝐌(T)² {max_c:.4}");
    ensure((slope - 2.0).abs() <= 0.05, || format!("slope off: {detail}"))?;
    Ok(detail)
}

fn bv_bridge(cfg: &Config) -> Check {
    let sums = instances(cfg, 100, |i| {
        let mut rng = instance_rng(cfg.seed, 110, i);
        let time_den = rng.random_range(2..=12i64);
        let space_den = rng.random_range(1..=4i64);
        let u = random::step_function(&mut rng, time_den, space_den);
        let s = graph_current(&u);
        let mut total = Rational::zero();
        for _ in 0..3 {
            let mut a = ratio(rng.random_range(0..=24), 24);
            let mut b = ratio(rng.random_range(0..=24), 24);
            if b < a {
                std::mem::swap(&mut a, &mut b);
            }
            let (lc, hc) = (rng.random_bool(0.5), rng.random_bool(0.5));
            let interval = match TimeInterval::new(a.clone(), b.clone(), lc || a == b, hc || a == b) {
                Ok(iv) => iv,
                Err(_) => continue,
            };
            let v = s.variation(&interval);
            let pointwise = pointwise_variation(&u, &interval);
            let recount = oracles::step_variation(u.breakpoints(), u.values(), |t| interval.contains(t));
            ensure(v == pointwise && v == recount, || {
                format!("Var(S_u; {interval}) = {} but |Du| = {} / {}", fmt(&v), fmt(&pointwise), fmt(&recount))
            })?;
            total += v;
        }
        Ok(total)
    })?;
    for n in 0..=5u32 {
        let f = lib(cantor_stage(n))?;
        let s = graph_current(&f);
        ensure(s.total_variation().is_one(), || format!("Cantor stage {n}: total variation {}", fmt(&s.total_variation())))?;
        if n >= 1 {
            let third = lib(TimeInterval::closed(int(0), ratio(1, 3)))?;
            ensure(s.variation(&third) == ratio(1, 2), || format!("Cantor stage {n}: Var on [0, 1/3] is {}", fmt(&s.variation(&third))))?;
        }
    }
    Ok(format!(
        "100 step functions × 3 intervals agree with |Du|, Σ = {}; Cantor stages 0..5 have Var 1 and 1/2 on [0, 1/3]",
        fmt(&sums.iter().sum())
    ))
}

fn ragged_cone(_cfg: &Config) -> Check {
    let mut masses = Vec::new();
    for j in 1..=5i64 {
        let (r, s) = lib(fixtures::ragged_cone(j))?;
        let n = r.boundary().len() as i64;
        ensure(s.total_variation() == r.mass() * int(2), || format!("j = {j}: Var = {}", fmt(&s.total_variation())))?;
        ensure(s.boundary_variation(&s.full_range()).is_zero(), || format!("j = {j}: ∂S moves"))?;
        let max = s.max_slice_mass();
        let bound = int(n) * ratio(1, j) / int(2);
        ensure(max >= bound, || format!("j = {j}: max slice mass {} below {}", fmt(&max), fmt(&bound)))?;
        masses.push(format!("N = {n}: {}", fmt(&max)));
    }
    Ok(format!("j = 1..5, Var = 2𝐌(R) = 2 throughout; max slice mass {}", masses.join(", ")))
}

/// Pool of solver results on small instances, serialized for comparison.
fn solver_pool(cfg: &Config, exec: Exec) -> Result<Vec<(String, bool)>, String> {
    let solver = Solver::new(cfg.options);
    let cfg = Config { exec, ..*cfg };
    let pools = instances(&cfg, 60, |i| {
        let mut rng = instance_rng(cfg.seed, 112, i);
        let g = random::grid(&mut rng, 2, 4);
        let mut out: Vec<(NormResult, Problem)> = Vec::new();
        let t = random::chain(&mut rng, &g, 1, 6, 2);
        out.push((lib(solver.flat_norm(&t))?, Problem::Flat(t)));
        let z = random::bounding_cycle(&mut rng, &g, 1, 5, 2);
        out.push((lib(solver.flat_norm_boundaryless(&z))?, Problem::Boundaryless(z.clone())));
        let z1 = random::bounding_cycle(&mut rng, &g, 1, 5, 2);
        let columns = rng.random_range(1..=4i64);
        let budget = match rng.random_range(0..3) {
            0 => None,
            1 => Some(g.volume(&[0, 1])),
            _ => Some(g.volume(&[0, 1]) * int(2)),
        };
        let res = lib(solver.dist_lip(&z, &z1, columns, budget.as_ref()))?;
        out.push((res, Problem::DistLip { t0: z, t1: z1, columns, budget }));
        let mut rows = Vec::new();
        for (res, problem) in &out {
            if res.is_feasible() {
                lib(verify_result(res, problem))?;
                let (v, r) = (res.value.as_ref().unwrap(), res.relaxation.as_ref().unwrap());
                ensure(r <= v, || format!("relaxation {} above value {}", fmt(r), fmt(v)))?;
            }
            let gap = matches!((&res.value, &res.relaxation), (Some(v), Some(r)) if r < v);
            rows.push((res.to_json(), gap));
        }
        Ok(rows)
    })?;
    Ok(pools.into_iter().flatten().collect())
}

fn integrity(cfg: &Config, earlier: &[Outcome]) -> Outcome {
    let start = Instant::now();
    let result = (|| {
        let first = solver_pool(cfg, cfg.exec)?;
        let second = solver_pool(cfg, cfg.exec.alternate())?;
        ensure(first == second, || "solver results differ between runs".into())?;
        let gaps = first.iter().filter(|r| r.1).count();
        let mut lines = Vec::new();
        for i in 1..=11 {
            let a = match earlier.iter().find(|o| o.index == i) {
                Some(o) => o.line(),
                None => run_criterion(cfg, i).line(),
            };
            let b = run_criterion(&Config { exec: cfg.exec.alternate(), ..*cfg }, i).line();
            ensure(a == b, || format!("criterion {i} is not reproducible:\n  {a}\n  {b}"))?;
            lines.push(a);
        }
        Ok(format!(
            "{} results re-verified from witnesses, relaxation ≤ value on all, {gaps} integrality gaps; solver pool and criteria 1-11 reproduce byte for byte ({} vs {})",
            first.len(),
            cfg.exec.name(),
            cfg.exec.alternate().name()
        ))
    })();
    finish(12, result, start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass_and_reproduce() {
        let cfg = Config { seed: 7, ..Config::default() };
        let a = run_selected(&cfg, &[1, 6, 10, 11]);
        assert!(a.all_passed(), "{}", a.transcript());
        let b = run_selected(&Config { exec: cfg.exec.alternate(), ..cfg }, &[1, 6, 10, 11]);
        assert_eq!(a.transcript(), b.transcript());
        assert!(a.transcript().ends_with("4/4 criteria passed\n"));
    }

    #[test]
    fn unknown_criterion_fails() {
        let o = run_criterion(&Config::default(), 13);
        assert!(!o.passed);
    }
}
