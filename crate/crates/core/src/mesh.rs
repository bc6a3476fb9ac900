//! Uniform primal grid and its staggered dual.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform partition of `[a, b]` into `N` cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    h: f64,
}

impl Mesh1D {
    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.nodes[0], self.nodes[self.cells()])
    }

    pub fn cell_bounds(&self, cell: usize) -> (f64, f64) {
        (self.nodes[cell], self.nodes[cell + 1])
    }

    pub fn cell_center(&self, cell: usize) -> f64 {
        0.5 * (self.nodes[cell] + self.nodes[cell + 1])
    }

    /// Cell containing `x`, and the reference coordinate of `x` in it.
    /// Interior nodes belong to the cell on their left.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let (a, b) = self.domain();
        if !(a..=b).contains(&x) {
            return Err(Error::param(format!("point {x} is outside [{a}, {b}]")));
        }
        let n = self.cells();
        let s = (x - a) / self.h;
        let mut cell = (s.floor() as usize).min(n - 1);
        // on a node: take the left cell's limit
        if cell > 0 && x == self.nodes[cell] {
            cell -= 1;
        }
        let (xl, xr) = self.cell_bounds(cell);
        let t = ((x - xl) / (xr - xl)).clamp(0.0, 1.0);
        Ok((cell, t))
    }
}

pub fn uniform_mesh(domain: (f64, f64), cells: usize) -> Result<Mesh1D> {
    let (a, b) = domain;
    if cells < 2 {
        return Err(Error::param(format!(
            "the mesh needs at least 2 cells, got {cells}"
        )));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::param(format!("degenerate interval [{a}, {b}]")));
    }
    let h = (b - a) / cells as f64;
    let mut nodes: Vec<f64> = (0..=cells).map(|i| a + i as f64 * h).collect();
    nodes[cells] = b;
    Ok(Mesh1D { nodes, h })
}

/// Dual grid: cell `D_i = (y_i, y_{i+1})` is centred at primal node `x_i`,
/// with half cells at both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualMesh {
    points: Vec<f64>,
    centers: Vec<f64>,
}

impl DualMesh {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.points[i], self.points[i + 1])
    }

    pub fn width(&self, i: usize) -> f64 {
        self.points[i + 1] - self.points[i]
    }
}

pub fn build_dual(mesh: &Mesh1D) -> DualMesh {
    let x = mesh.nodes();
    let n = mesh.cells();
    let mut points = Vec::with_capacity(n + 2);
    points.push(x[0]);
    points.extend((1..=n).map(|i| 0.5 * (x[i] + x[i - 1])));
    points.push(x[n]);
    DualMesh {
        points,
        centers: x.to_vec(),
    }
}
