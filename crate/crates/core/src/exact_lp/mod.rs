//! Exact rational linear and integer programming.
//!
//! Models are minimization problems over rational variables with optional
//! lower bounds (a missing bound means the variable is free), linear
//! constraints with `=`, `<=` or `>=`, and per-variable integrality flags.
//! [`solve_lp`] runs a two-phase tableau simplex with Bland's rule and
//! returns a certificate (dual solution, Farkas multipliers or an improving
//! ray) that [`verify_certificate`] re-checks against the original model.
//! [`solve_ilp`] runs depth-first branch-and-bound over the exact relaxation.

mod branch;
mod format;
mod scalar;
mod simplex;

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use branch::{solve_ilp, solve_ilp_with, IlpOptions, DEFAULT_NODE_LIMIT};
pub use simplex::solve_lp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Sparse row; indices refer to model variables.
    pub row: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.row
            .iter()
            .fold(Rational::zero(), |acc, (j, a)| acc + a * &x[*j])
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// A minimization problem in exact rationals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LpModel {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub integer: Vec<bool>,
    /// `None` marks a free variable.
    pub lower: Vec<Option<Rational>>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable and returns its index.
    pub fn add_var(&mut self, cost: Rational, lower: Option<Rational>, integer: bool) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.integer.push(integer);
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn add_constraint(&mut self, row: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { row, relation, rhs });
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        if self.objective.len() != n || self.integer.len() != n || self.lower.len() != n {
            return Err(Error::MalformedModel(format!(
                "num_vars = {n} but objective/integer/lower have lengths {}/{}/{}",
                self.objective.len(),
                self.integer.len(),
                self.lower.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.row.iter().find(|(j, _)| *j >= n) {
                return Err(Error::MalformedModel(format!(
                    "constraint {i} references variable {j} but num_vars = {n}"
                )));
            }
        }
        Ok(())
    }

    /// True when `x` satisfies every constraint, bound and integrality flag.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self.constraints.iter().all(|c| c.holds(x))
            && self
                .lower
                .iter()
                .zip(x)
                .all(|(l, v)| l.as_ref().is_none_or(|l| v >= l))
            && self
                .integer
                .iter()
                .zip(x)
                .all(|(int, v)| !int || v.is_integer())
    }

    /// Copy with all integrality flags cleared.
    pub fn relaxation(&self) -> LpModel {
        LpModel {
            integer: vec![false; self.num_vars],
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        })
    }
}

/// Data that lets a caller re-verify the solver's claim by substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// One multiplier per constraint, proving optimality of a pure LP.
    Dual(Vec<Rational>),
    /// One multiplier per constraint whose combination is contradictory.
    Farkas(Vec<Rational>),
    /// A feasible point plus an improving direction of unbounded descent.
    Ray { point: Vec<Rational>, direction: Vec<Rational> },
    /// Optimality established by exhaustive branch-and-bound.
    BranchAndBound { nodes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: Status,
    /// Objective value; zero unless `status` is `Optimal`.
    pub value: Rational,
    /// Optimal point; empty unless `status` is `Optimal`.
    pub assignment: Vec<Rational>,
    pub certificate: Certificate,
    /// Value of the root LP relaxation (for integer programs).
    pub relaxation_value: Option<Rational>,
    pub nodes: usize,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

fn sign_ok(rel: Relation, y: &Rational) -> bool {
    // Minimization: `<=` rows carry y <= 0, `>=` rows y >= 0; equalities are free.
    match rel {
        Relation::Eq => true,
        Relation::Le => !y.is_positive(),
        Relation::Ge => !y.is_negative(),
    }
}

fn column_sums(model: &LpModel, y: &[Rational]) -> Vec<Rational> {
    let mut g = vec![Rational::zero(); model.num_vars];
    for (c, yi) in model.constraints.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        for (j, a) in &c.row {
            g[*j] += a * yi;
        }
    }
    g
}

/// Re-checks a solution against `model` using only the model's own data.
///
/// Optimal solutions must be feasible with the claimed value; a dual
/// certificate must be dual feasible with matching objective; a Farkas
/// certificate must prove infeasibility; a ray must be a feasible improving
/// direction from a feasible point.
pub fn verify_certificate(model: &LpModel, sol: &LpSolution) -> Result<()> {
    let fail = |m: String| Err(Error::Certificate(m));
    if sol.status == Status::Optimal {
        if !model.is_feasible(&sol.assignment) {
            return fail("optimal assignment violates the model".into());
        }
        if model.objective_value(&sol.assignment) != sol.value {
            return fail("assignment does not achieve the reported value".into());
        }
    }
    match &sol.certificate {
        Certificate::Dual(y) => {
            if sol.status != Status::Optimal || y.len() != model.constraints.len() {
                return fail("dual certificate shape mismatch".into());
            }
            if model.integer.iter().any(|&b| b) {
                return fail("dual certificate offered for an integer program".into());
            }
            let mut dual_value = Rational::zero();
            for (c, yi) in model.constraints.iter().zip(y) {
                if !sign_ok(c.relation, yi) {
                    return fail(format!("dual multiplier {yi} has the wrong sign for {}", c.relation));
                }
                dual_value += yi * &c.rhs;
            }
            let g = column_sums(model, y);
            for (j, (cost, gj)) in model.objective.iter().zip(&g).enumerate() {
                let reduced = cost - gj;
                match &model.lower[j] {
                    None if !reduced.is_zero() => {
                        return fail(format!("free variable {j} has reduced cost {reduced}"))
                    }
                    Some(_) if reduced.is_negative() => {
                        return fail(format!("variable {j} has negative reduced cost {reduced}"))
                    }
                    Some(l) => dual_value += reduced * l,
                    None => {}
                }
            }
            if dual_value != sol.value {
                return fail(format!("dual value {dual_value} != primal value {}", sol.value));
            }
            Ok(())
        }
        Certificate::Farkas(y) => {
            if sol.status != Status::Infeasible || y.len() != model.constraints.len() {
                return fail("Farkas certificate shape mismatch".into());
            }
            let mut combo = Rational::zero();
            for (c, yi) in model.constraints.iter().zip(y) {
                if !sign_ok(c.relation, yi) {
                    return fail("Farkas multiplier has the wrong sign".into());
                }
                combo += yi * &c.rhs;
            }
            let g = column_sums(model, y);
            for (gj, lower) in g.iter().zip(&model.lower) {
                match lower {
                    None if !gj.is_zero() => return fail("Farkas combination touches a free variable".into()),
                    Some(_) if gj.is_positive() => return fail("Farkas combination has a positive column".into()),
                    Some(l) => combo -= gj * l,
                    None => {}
                }
            }
            if !combo.is_positive() {
                return fail("Farkas combination is not contradictory".into());
            }
            Ok(())
        }
        Certificate::Ray { point, direction } => {
            if sol.status != Status::Unbounded {
                return fail("ray offered for a bounded problem".into());
            }
            if !model.relaxation().is_feasible(point) || direction.len() != model.num_vars {
                return fail("ray base point is infeasible".into());
            }
            for c in &model.constraints {
                let a = c.lhs(direction);
                let ok = match c.relation {
                    Relation::Eq => a.is_zero(),
                    Relation::Le => !a.is_positive(),
                    Relation::Ge => !a.is_negative(),
                };
                if !ok {
                    return fail("ray leaves the feasible region".into());
                }
            }
            if model
                .lower
                .iter()
                .zip(direction)
                .any(|(l, d)| l.is_some() && d.is_negative())
            {
                return fail("ray decreases a bounded variable".into());
            }
            if !model.objective_value(direction).is_negative() {
                return fail("ray does not improve the objective".into());
            }
            Ok(())
        }
        Certificate::BranchAndBound { .. } => Ok(()),
    }
}
