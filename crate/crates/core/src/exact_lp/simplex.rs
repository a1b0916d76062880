//! Two-phase dense tableau simplex with Bland's rule.

use num_traits::Zero;

use super::scalar::Scalar;
use super::{Certificate, LpModel, LpSolution, Relation, Status};
use crate::error::Result;
use crate::rational::Rational;

/// How an original variable maps onto nonnegative standard-form columns.
#[derive(Debug, Clone)]
enum VarMap {
    /// x = lower + col
    Shift { col: usize, lower: Rational },
    /// x = pos - neg
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Scalar>>,
    /// Reduced costs; the last entry holds minus the current objective.
    obj: Vec<Scalar>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Scalar {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        self.pivots += 1;
        let piv = self.rows[pr][pc].clone();
        let mut nz = Vec::new();
        {
            let row = &mut self.rows[pr];
            for (j, v) in row.iter_mut().enumerate() {
                if !v.is_zero() {
                    *v = v.div(&piv);
                    nz.push(j);
                }
            }
        }
        let prow = std::mem::take(&mut self.rows[pr]);
        let update = |row: &mut Vec<Scalar>| {
            let f = row[pc].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                row[j] = row[j].sub_mul(&f, &prow[j]);
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != pr {
                update(row);
            }
        }
        update(&mut self.obj);
        self.rows[pr] = prow;
        self.basis[pr] = pc;
    }

    /// Runs simplex iterations on the current objective row. Columns flagged
    /// in `banned` never enter the basis.
    fn run(&mut self, banned: &[bool]) -> Phase {
        loop {
            // Bland: lowest-index improving column
            let Some(enter) = (0..self.ncols).find(|&j| !banned[j] && self.obj[j].is_negative())
            else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Scalar)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r).div(a);
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => match ratio.cmp(best) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.basis[r] < self.basis[*lr],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                None => return Phase::Unbounded(enter),
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }

    /// Overwrites the objective row with reduced costs of `cost` for the current basis.
    fn price(&mut self, cost: &[Scalar]) {
        let mut obj: Vec<Scalar> = cost.to_vec();
        obj.push(Scalar::ZERO);
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    obj[j] = obj[j].sub_mul(cb, v);
                }
            }
        }
        self.obj = obj;
    }

    fn primal(&self) -> Vec<Scalar> {
        let mut x = vec![Scalar::ZERO; self.ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(r).clone();
        }
        x
    }
}

/// Solves the LP relaxation of `model` exactly (integrality flags are ignored).
///
/// Deterministic: identical models produce identical solutions, pivots and
/// certificates.
pub fn solve_lp(model: &LpModel) -> Result<LpSolution> {
    model.validate()?;
    let m = model.constraints.len();

    let mut maps = Vec::with_capacity(model.num_vars);
    let mut nstruct = 0;
    for l in &model.lower {
        match l {
            Some(l) => {
                maps.push(VarMap::Shift { col: nstruct, lower: l.clone() });
                nstruct += 1;
            }
            None => {
                maps.push(VarMap::Split { pos: nstruct, neg: nstruct + 1 });
                nstruct += 2;
            }
        }
    }

    // Shifted right-hand sides and row signs (rows are negated to make rhs >= 0).
    let mut rhs = Vec::with_capacity(m);
    for c in &model.constraints {
        let mut b = c.rhs.clone();
        for (j, a) in &c.row {
            if let VarMap::Shift { lower, .. } = &maps[*j] {
                b -= a * lower;
            }
        }
        rhs.push(b);
    }
    let negated: Vec<bool> = rhs.iter().map(|b| b < &Rational::zero()).collect();

    let nslack = model
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    // A row can start with its slack basic when the slack enters with +1.
    let mut slack_col = vec![None; m];
    let mut slack_sign = vec![Scalar::ZERO; m];
    let mut next = nstruct;
    for (r, c) in model.constraints.iter().enumerate() {
        let s = match c.relation {
            Relation::Eq => continue,
            Relation::Le => 1i64,
            Relation::Ge => -1,
        };
        let s = if negated[r] { -s } else { s };
        slack_col[r] = Some(next);
        slack_sign[r] = Scalar::from_big(&crate::rational::int(s));
        next += 1;
    }
    debug_assert_eq!(next, nstruct + nslack);
    let mut id_col = vec![0; m];
    let mut is_art = vec![false; nstruct + nslack];
    for r in 0..m {
        if slack_col[r].is_some() && slack_sign[r].is_positive() {
            id_col[r] = slack_col[r].unwrap();
        } else {
            id_col[r] = next;
            is_art.push(true);
            next += 1;
        }
    }
    let ncols = next;
    is_art.resize(ncols, false);

    let mut rows = Vec::with_capacity(m);
    for (r, c) in model.constraints.iter().enumerate() {
        let mut row = vec![Scalar::ZERO; ncols + 1];
        let flip = |a: &Rational| if negated[r] { -a } else { a.clone() };
        for (j, a) in &c.row {
            match &maps[*j] {
                VarMap::Shift { col, .. } => {
                    row[*col] = row[*col].add(&Scalar::from_big(&flip(a)));
                }
                VarMap::Split { pos, neg } => {
                    let v = Scalar::from_big(&flip(a));
                    row[*pos] = row[*pos].add(&v);
                    row[*neg] = row[*neg].sub(&v);
                }
            }
        }
        if let Some(s) = slack_col[r] {
            row[s] = slack_sign[r].clone();
        }
        if is_art[id_col[r]] {
            row[id_col[r]] = Scalar::one();
        }
        row[ncols] = Scalar::from_big(&flip(&rhs[r]));
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis: id_col.clone(),
        ncols,
        pivots: 0,
    };

    // Phase 1: minimize the sum of artificials.
    let phase1_cost: Vec<Scalar> = is_art
        .iter()
        .map(|&a| if a { Scalar::one() } else { Scalar::ZERO })
        .collect();
    let no_ban = vec![false; ncols];
    let row_dual = |tab: &Tableau, cost: &[Scalar]| -> Vec<Rational> {
        (0..m)
            .map(|r| {
                let j = id_col[r];
                let y = cost[j].sub(&tab.obj[j]).to_big();
                if negated[r] { -y } else { y }
            })
            .collect()
    };
    if is_art.iter().any(|&a| a) {
        tab.price(&phase1_cost);
        tab.run(&no_ban);
        let infeas = tab.obj[ncols].neg();
        if infeas.is_positive() {
            let y = row_dual(&tab, &phase1_cost);
            return Ok(LpSolution {
                status: Status::Infeasible,
                value: Rational::zero(),
                assignment: Vec::new(),
                certificate: Certificate::Farkas(y),
                relaxation_value: None,
                nodes: 0,
                pivots: tab.pivots,
            });
        }
        // Drive remaining (zero-valued) artificials out of the basis where possible.
        for r in 0..m {
            if is_art[tab.basis[r]] {
                if let Some(j) = (0..ncols).find(|&j| !is_art[j] && !tab.rows[r][j].is_zero()) {
                    tab.pivot(r, j);
                }
            }
        }
    }

    // Phase 2.
    let mut cost = vec![Scalar::ZERO; ncols];
    for (j, map) in maps.iter().enumerate() {
        let c = Scalar::from_big(&model.objective[j]);
        match map {
            VarMap::Shift { col, .. } => cost[*col] = c,
            VarMap::Split { pos, neg } => {
                cost[*neg] = c.neg();
                cost[*pos] = c;
            }
        }
    }
    tab.price(&cost);
    let outcome = tab.run(&is_art);
    let xs = tab.primal();
    let to_original = |xs: &[Scalar]| -> Vec<Rational> {
        maps.iter()
            .map(|map| match map {
                VarMap::Shift { col, lower } => lower + xs[*col].to_big(),
                VarMap::Split { pos, neg } => xs[*pos].to_big() - xs[*neg].to_big(),
            })
            .collect()
    };
    let point = to_original(&xs);
    match outcome {
        Phase::Optimal => {
            let value = model.objective_value(&point);
            let y = row_dual(&tab, &cost);
            Ok(LpSolution {
                status: Status::Optimal,
                value,
                assignment: point,
                certificate: Certificate::Dual(y),
                relaxation_value: None,
                nodes: 0,
                pivots: tab.pivots,
            })
        }
        Phase::Unbounded(enter) => {
            let mut dir = vec![Scalar::ZERO; ncols];
            dir[enter] = Scalar::one();
            for (r, &b) in tab.basis.iter().enumerate() {
                dir[b] = tab.rows[r][enter].neg();
            }
            let direction = maps
                .iter()
                .map(|map| match map {
                    VarMap::Shift { col, .. } => dir[*col].to_big(),
                    VarMap::Split { pos, neg } => dir[*pos].to_big() - dir[*neg].to_big(),
                })
                .collect();
            Ok(LpSolution {
                status: Status::Unbounded,
                value: Rational::zero(),
                assignment: Vec::new(),
                certificate: Certificate::Ray { point, direction },
                relaxation_value: None,
                nodes: 0,
                pivots: tab.pivots,
            })
        }
    }
}
