//! JSON chain files.
//!
//! ```json
//! {"grid": {"dim": 2, "spacing": ["1", "1"], "origin": ["0", "0"], "extents": [2, 2]},
//!  "k": 1,
//!  "cells": [{"anchor": [0, 0], "axes": [0], "coeff": 1}]}
//! ```
//!
//! Rationals are strings `"p/q"`; cells are written in canonical order.
//! Space-time chains add `"time_axis": 0`.

use serde::{Deserialize, Serialize};

use super::{Cell, Chain, Grid};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub dim: usize,
    #[serde(with = "crate::rational::vec")]
    pub spacing: Vec<Rational>,
    #[serde(with = "crate::rational::vec")]
    pub origin: Vec<Rational>,
    pub extents: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub anchor: Vec<i64>,
    pub axes: Vec<usize>,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_axis: Option<usize>,
    pub grid: GridFile,
    pub k: usize,
    pub cells: Vec<CellEntry>,
}

impl From<&Grid> for GridFile {
    fn from(g: &Grid) -> Self {
        GridFile {
            dim: g.dim(),
            spacing: g.spacing().to_vec(),
            origin: g.origin().to_vec(),
            extents: g.extents().to_vec(),
        }
    }
}

impl TryFrom<&GridFile> for Grid {
    type Error = Error;
    fn try_from(f: &GridFile) -> Result<Grid> {
        if f.spacing.len() != f.dim {
            return Err(Error::InvalidGrid(format!(
                "dim {} but {} spacings",
                f.dim,
                f.spacing.len()
            )));
        }
        Grid::new(f.spacing.clone(), f.origin.clone(), f.extents.clone())
    }
}

pub(crate) fn cell_entries(chain: &Chain) -> Vec<CellEntry> {
    chain
        .iter()
        .map(|(c, v)| CellEntry { anchor: c.anchor().to_vec(), axes: c.axes().to_vec(), coeff: v })
        .collect()
}

pub(crate) fn cells_from_entries(grid: &Grid, k: usize, cells: &[CellEntry]) -> Result<Chain> {
    let terms = cells
        .iter()
        .map(|e| Ok((Cell::new(e.anchor.clone(), e.axes.clone())?, e.coeff)))
        .collect::<Result<Vec<_>>>()?;
    Chain::from_terms(grid, k, terms)
}

impl From<&Chain> for ChainFile {
    fn from(c: &Chain) -> Self {
        ChainFile { time_axis: None, grid: c.grid().into(), k: c.dim(), cells: cell_entries(c) }
    }
}

impl TryFrom<&ChainFile> for Chain {
    type Error = Error;
    fn try_from(f: &ChainFile) -> Result<Chain> {
        let grid = Grid::try_from(&f.grid)?;
        cells_from_entries(&grid, f.k, &f.cells)
    }
}

impl Chain {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ChainFile::from(self)).expect("chain serializes")
    }

    pub fn from_json(text: &str) -> Result<Chain> {
        let f: ChainFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Chain::try_from(&f)
    }
}
