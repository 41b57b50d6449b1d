use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest number of cells accepted for the reference grid.
pub const MIN_CELLS: usize = 8;

/// Uniform mesh of an interval `[left, right]` split into `n_cells` cells.
///
/// Only the `n_cells - 1` interior nodes carry amplitudes; the end points are
/// Dirichlet zeros and are never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub left: f64,
    pub right: f64,
    pub n_cells: usize,
}

impl Mesh {
    pub fn new(left: f64, right: f64, n_cells: usize) -> Result<Self> {
        if n_cells < 2 || !(right > left) {
            return Err(Error::InvalidGrid(format!(
                "mesh [{left}, {right}] with {n_cells} cells"
            )));
        }
        Ok(Self { left, right, n_cells })
    }

    pub fn spacing(&self) -> f64 {
        (self.right - self.left) / self.n_cells as f64
    }

    pub fn interior_len(&self) -> usize {
        self.n_cells - 1
    }

    /// Interior node `j = 1..n_cells-1`, addressed by its storage index `j - 1`.
    pub fn node(&self, index: usize) -> f64 {
        self.left + (index + 1) as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.interior_len()).map(|i| self.node(i)).collect()
    }

    pub fn length(&self) -> f64 {
        self.right - self.left
    }
}

/// The reference box `I = [-1/2, 1/2]` with `N` cells, `Δξ = 1/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedGrid {
    n_cells: usize,
}

impl FixedGrid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < MIN_CELLS {
            return Err(Error::InvalidGrid(format!(
                "reference grid needs N >= {MIN_CELLS}, got {n_cells}"
            )));
        }
        Ok(Self { n_cells })
    }

    /// Skips the `N >= 8` floor; only for stencil checks on tiny grids.
    #[cfg(test)]
    pub(crate) fn with_cells_unchecked(n_cells: usize) -> Self {
        Self { n_cells }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Number of stored amplitudes, `N - 1`.
    pub fn dim(&self) -> usize {
        self.n_cells - 1
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// `ξ_j = -1/2 + j Δξ` for storage index `j - 1`.
    pub fn node(&self, index: usize) -> f64 {
        -0.5 + (index + 1) as f64 / self.n_cells as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.node(i)).collect()
    }

    pub fn mesh(&self) -> Mesh {
        Mesh { left: -0.5, right: 0.5, n_cells: self.n_cells }
    }

    /// Samples `f` at the interior nodes.
    pub fn sample<T>(&self, f: impl Fn(f64) -> T) -> Vec<T> {
        (0..self.dim()).map(|i| f(self.node(i))).collect()
    }
}
