//! Plain-text dump of a model for offline inspection.
//!
//! The layout follows the common `Minimize / Subject To / Bounds / General`
//! sections; coefficients are exact rationals.

use std::fmt::{self, Write};

use num_traits::{One, Signed, Zero};

use super::LpModel;
use crate::rational::Rational;

fn term(out: &mut String, first: bool, coef: &Rational, var: usize) {
    let neg = coef.is_negative();
    let mag = coef.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if !mag.is_one() {
        let _ = write!(out, "{mag} ");
    }
    let _ = write!(out, "x{var}");
}

impl fmt::Display for LpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut obj = String::new();
        for (j, c) in self.objective.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let first = obj.is_empty();
            term(&mut obj, first, c, j);
        }
        if obj.is_empty() {
            obj.push('0');
        }
        writeln!(f, "Minimize\n obj: {obj}\nSubject To")?;
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = String::new();
            for (j, a) in &c.row {
                let first = row.is_empty();
                term(&mut row, first, a, *j);
            }
            if row.is_empty() {
                row.push('0');
            }
            writeln!(f, " c{i}: {row} {} {}", c.relation, c.rhs)?;
        }
        writeln!(f, "Bounds")?;
        for (j, l) in self.lower.iter().enumerate() {
            match l {
                Some(l) => writeln!(f, " x{j} >= {l}")?,
                None => writeln!(f, " x{j} free")?,
            }
        }
        let ints: Vec<String> = (0..self.num_vars)
            .filter(|&j| self.integer[j])
            .map(|j| format!("x{j}"))
            .collect();
        if !ints.is_empty() {
            writeln!(f, "General\n {}", ints.join(" "))?;
        }
        writeln!(f, "End")
    }
}
