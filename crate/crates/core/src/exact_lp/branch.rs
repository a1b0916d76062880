//! Depth-first branch-and-bound over exact LP relaxations.

use num_traits::Zero;

use super::{solve_lp, Certificate, LpModel, LpSolution, Relation, Status};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IlpOptions {
    /// Maximum number of LP relaxations solved before giving up.
    pub node_limit: usize,
}

impl Default for IlpOptions {
    fn default() -> Self {
        Self { node_limit: DEFAULT_NODE_LIMIT }
    }
}

/// Branch bound added on top of the base model: `x[var] <= value` or `>= value`.
#[derive(Debug, Clone)]
struct Bound {
    var: usize,
    relation: Relation,
    value: Rational,
}

/// Positive `g` such that every integral solution has objective in `g * Z`,
/// if one exists (all costed variables integral).
fn objective_granularity(model: &LpModel) -> Option<Rational> {
    let mut g = Rational::zero();
    for (c, &int) in model.objective.iter().zip(&model.integer) {
        if c.is_zero() {
            continue;
        }
        if !int {
            return None;
        }
        g = rational::gcd(&g, c);
    }
    (!g.is_zero()).then_some(g)
}

pub fn solve_ilp(model: &LpModel) -> Result<LpSolution> {
    solve_ilp_with(model, IlpOptions::default())
}

/// Exact branch-and-bound.
///
/// Node order is fixed: depth first, branching on the lowest-index
/// fractional integer variable, floor branch explored first. A node is
/// pruned when its relaxation bound cannot beat the incumbent.
pub fn solve_ilp_with(model: &LpModel, options: IlpOptions) -> Result<LpSolution> {
    model.validate()?;
    let granularity = objective_granularity(model);
    let mut stack: Vec<Vec<Bound>> = vec![Vec::new()];
    let mut incumbent: Option<(Rational, Vec<Rational>)> = None;
    let mut root_value: Option<Rational> = None;
    let mut nodes = 0usize;
    let mut pivots = 0usize;

    while let Some(bounds) = stack.pop() {
        if nodes >= options.node_limit {
            return Err(Error::NodeLimit { limit: options.node_limit });
        }
        nodes += 1;
        let mut node = model.clone();
        for b in &bounds {
            node.add_constraint(vec![(b.var, rational::int(1))], b.relation, b.value.clone());
        }
        let relax = solve_lp(&node)?;
        pivots += relax.pivots;
        match relax.status {
            Status::Infeasible => {
                if bounds.is_empty() {
                    return Ok(LpSolution { nodes, pivots, ..relax });
                }
                continue;
            }
            Status::Unbounded => {
                if bounds.is_empty() {
                    return Ok(LpSolution { nodes, pivots, ..relax });
                }
                return Err(Error::Unbounded("branch relaxation is unbounded".into()));
            }
            Status::Optimal => {}
        }
        if bounds.is_empty() {
            root_value = Some(relax.value.clone());
        }
        if let Some((best, _)) = &incumbent {
            let bound = match &granularity {
                Some(g) => rational::ceil_to_multiple(&relax.value, g),
                None => relax.value.clone(),
            };
            if &bound >= best {
                continue;
            }
        }
        let fractional = (0..model.num_vars)
            .find(|&j| model.integer[j] && !relax.assignment[j].is_integer());
        match fractional {
            None => {
                let better = incumbent.as_ref().is_none_or(|(best, _)| relax.value < *best);
                if better {
                    incumbent = Some((relax.value, relax.assignment));
                }
            }
            Some(j) => {
                let v = &relax.assignment[j];
                let floor = v.floor();
                let ceil = &floor + rational::int(1);
                let mut up = bounds.clone();
                up.push(Bound { var: j, relation: Relation::Ge, value: ceil });
                let mut down = bounds;
                down.push(Bound { var: j, relation: Relation::Le, value: floor });
                stack.push(up);
                stack.push(down);
            }
        }
    }

    match incumbent {
        Some((value, assignment)) => Ok(LpSolution {
            status: Status::Optimal,
            value,
            assignment,
            certificate: Certificate::BranchAndBound { nodes },
            relaxation_value: root_value,
            nodes,
            pivots,
        }),
        None => Ok(LpSolution {
            status: Status::Infeasible,
            value: Rational::zero(),
            assignment: Vec::new(),
            certificate: Certificate::BranchAndBound { nodes },
            relaxation_value: root_value,
            nodes,
            pivots,
        }),
    }
}

