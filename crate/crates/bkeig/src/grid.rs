//! Grids and grid functions.
//!
//! Continuous functions are represented by their values on a fixed grid:
//! a uniform partition of `[0,1]` or a polar product grid on the closed
//! unit disk. The sup-norm of a grid function is the max of `|value|`
//! over the nodes. All types here are immutable after construction and
//! safe to share across threads.

use crate::error::{Error, Result};
use std::sync::Arc;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn dist_sq(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Uniform grid on `[0,1]` with at least 3 nodes, `t_0 = 0`, `t_{n-1} = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
}

impl Grid1D {
    /// Uniform grid with `n` nodes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!(
                "interval grid needs at least 3 nodes, got {n}"
            )));
        }
        let h = 1.0 / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        nodes[n - 1] = 1.0;
        Ok(Grid1D { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Node spacing.
    pub fn h(&self) -> f64 {
        1.0 / (self.nodes.len() - 1) as f64
    }
}

/// Polar product grid on the closed unit disk.
///
/// Radial nodes are ring midpoints `r_a = (a + 1/2) / n_r`, angular nodes
/// `theta_b = 2 pi b / n_theta`; the quadrature weight of every node on
/// ring `a` is `(2 pi / n_theta) * (r_a / n_r)` (area measure with the
/// polar Jacobian). Weights are positive and sum to `pi` exactly.
/// Nodes are stored ring-major: index `a * n_theta + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    n_r: usize,
    n_theta: usize,
    points: Vec<Point2>,
    weights: Vec<f64>,
    radii: Vec<f64>,
    ring_weight: Vec<f64>,
}

impl DiskGrid {
    pub fn new(n_r: usize, n_theta: usize) -> Result<Self> {
        if n_r < 2 || n_theta < 4 {
            return Err(Error::InvalidInput(format!(
                "disk grid needs n_r >= 2 and n_theta >= 4, got {n_r} x {n_theta}"
            )));
        }
        let h = 1.0 / n_r as f64;
        let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
        let radii: Vec<f64> = (0..n_r).map(|a| (a as f64 + 0.5) * h).collect();
        let ring_weight: Vec<f64> = radii.iter().map(|&r| dtheta * h * r).collect();
        let mut points = Vec::with_capacity(n_r * n_theta);
        let mut weights = Vec::with_capacity(n_r * n_theta);
        for a in 0..n_r {
            for b in 0..n_theta {
                let theta = dtheta * b as f64;
                points.push(Point2::new(radii[a] * theta.cos(), radii[a] * theta.sin()));
                weights.push(ring_weight[a]);
            }
        }
        Ok(DiskGrid {
            n_r,
            n_theta,
            points,
            weights,
            radii,
            ring_weight,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Midpoint radii of the rings.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Quadrature weight shared by all nodes of one ring.
    pub fn ring_weight(&self) -> &[f64] {
        &self.ring_weight
    }
}

/// Either of the two supported grids.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Interval(Grid1D),
    Disk(DiskGrid),
}

impl Grid {
    pub fn interval(n: usize) -> Result<Arc<Self>> {
        Ok(Arc::new(Grid::Interval(Grid1D::uniform(n)?)))
    }

    pub fn disk(n_r: usize, n_theta: usize) -> Result<Arc<Self>> {
        Ok(Arc::new(Grid::Disk(DiskGrid::new(n_r, n_theta)?)))
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Interval(g) => g.len(),
            Grid::Disk(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_interval(&self) -> Option<&Grid1D> {
        match self {
            Grid::Interval(g) => Some(g),
            Grid::Disk(_) => None,
        }
    }

    pub fn as_disk(&self) -> Option<&DiskGrid> {
        match self {
            Grid::Disk(g) => Some(g),
            Grid::Interval(_) => None,
        }
    }

    /// Human-readable coordinates of a node, for error messages.
    pub fn describe_node(&self, index: usize) -> String {
        match self {
            Grid::Interval(g) => format!("t = {}", g.nodes()[index]),
            Grid::Disk(g) => {
                let p = g.points()[index];
                format!("x = {}, y = {}", p.x, p.y)
            }
        }
    }
}

fn same_grid(a: &Arc<Grid>, b: &Arc<Grid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A real-valued function sampled on a grid.
#[derive(Debug, Clone)]
pub struct GridFn {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "value vector has length {} but the grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value at node {bad} ({})",
                grid.describe_node(bad)
            )));
        }
        Ok(GridFn { grid, values })
    }

    pub fn constant(grid: Arc<Grid>, c: f64) -> Result<Self> {
        let n = grid.len();
        GridFn::new(grid, vec![c; n])
    }

    pub fn zero(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        GridFn {
            grid,
            values: vec![0.0; n],
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Max of `|value|` over the nodes.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Node-wise `alpha * self + beta * other`.
    pub fn axpy(&self, alpha: f64, other: &GridFn, beta: f64) -> Result<GridFn> {
        if !same_grid(&self.grid, &other.grid) {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(GridFn {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn add(&self, other: &GridFn) -> Result<GridFn> {
        self.axpy(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &GridFn) -> Result<GridFn> {
        self.axpy(1.0, other, -1.0)
    }

    pub fn scale(&self, alpha: f64) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| alpha * v).collect(),
        }
    }

    /// Rescale so the sup-norm equals `|target|` exactly (the max node
    /// maps to `target` with no rounding); a negative target also flips
    /// the sign. Errors when the function is zero.
    pub fn rescale_to_norm(&self, target: f64) -> Result<GridFn> {
        let norm = self.sup_norm();
        if norm == 0.0 {
            return Err(Error::DegenerateIterate);
        }
        if norm == target {
            return Ok(self.clone());
        }
        let values = self.values.iter().map(|v| v / norm * target).collect();
        Ok(GridFn {
            grid: self.grid.clone(),
            values,
        })
    }

    /// Sup-norm of the difference, without allocating.
    pub fn sup_dist(&self, other: &GridFn) -> Result<f64> {
        if !same_grid(&self.grid, &other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub(crate) fn on_grid(&self, grid: &Arc<Grid>) -> bool {
        same_grid(&self.grid, grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_grid_endpoints_and_spacing() {
        let g = Grid1D::uniform(201).unwrap();
        assert_eq!(g.len(), 201);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.nodes()[200], 1.0);
        for w in g.nodes().windows(2) {
            assert_abs_diff_eq!(w[1] - w[0], g.h(), epsilon = 1e-12);
        }
        assert!(Grid1D::uniform(2).is_err());
    }

    #[test]
    fn disk_grid_weights_sum_to_pi() {
        let g = DiskGrid::new(64, 128).unwrap();
        assert_eq!(g.len(), 64 * 128);
        let total: f64 = g.weights().iter().sum();
        assert_abs_diff_eq!(total, std::f64::consts::PI, epsilon = 1e-6);
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(g
            .points()
            .iter()
            .all(|p| p.norm_sq() <= 1.0 + 1e-12));
    }

    #[test]
    fn sup_norm_examples() {
        let g = Grid::interval(5).unwrap();
        let c = GridFn::constant(g.clone(), 2.0).unwrap();
        assert_eq!(c.sup_norm(), 2.0);

        let g3 = Grid::interval(3).unwrap();
        let f = GridFn::new(g3.clone(), vec![1.0, -3.0, 2.0]).unwrap();
        assert_eq!(f.sup_norm(), 3.0);

        assert_eq!(GridFn::zero(g3).sup_norm(), 0.0);
    }

    #[test]
    fn axpy_and_friends() {
        let g = Grid::interval(3).unwrap();
        let f = GridFn::new(g.clone(), vec![1.0, 2.0, 5.0]).unwrap();
        let zero = f.axpy(1.0, &f, -1.0).unwrap();
        assert_eq!(zero.sup_norm(), 0.0);

        let doubled = f.scale(2.0);
        assert_eq!(doubled.values(), &[2.0, 4.0, 10.0]);

        let a = GridFn::new(g.clone(), vec![1.0, 2.0, 0.0]).unwrap();
        let b = GridFn::new(g.clone(), vec![3.0, 4.0, 0.0]).unwrap();
        assert_eq!(a.add(&b).unwrap().values(), &[4.0, 6.0, 0.0]);

        let other = Grid::interval(4).unwrap();
        let c = GridFn::constant(other, 1.0).unwrap();
        assert!(matches!(a.add(&c), Err(Error::GridMismatch)));
    }

    #[test]
    fn rejects_non_finite_values() {
        let g = Grid::interval(3).unwrap();
        assert!(GridFn::new(g, vec![0.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn rescale_hits_target_exactly() {
        let g = Grid::interval(5).unwrap();
        let f = GridFn::new(g, vec![0.1, -0.7, 0.3, 0.2, 0.05]).unwrap();
        let r = f.rescale_to_norm(2.5).unwrap();
        assert_eq!(r.sup_norm(), 2.5);
    }
}
