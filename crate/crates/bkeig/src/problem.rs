//! Assembled Hammerstein operator systems.
//!
//! A [`HammersteinProblem`] bundles everything one system needs: the grid,
//! the two kernels (precomputed into Nystrom operators), the nonlinearity
//! expressions, the prescribed norms, the cones, and the retraction
//! directions. It is immutable after assembly, so concurrent solves with
//! different sign patterns or radii can share it freely.

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr};
use crate::grid::{Grid, GridFn};
use crate::kernels::{KernelId, NystromOp};
use std::sync::Arc;

/// Everything needed to assemble one system; `build` turns it into a
/// [`HammersteinProblem`] with precomputed Nystrom operators.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub grid: Arc<Grid>,
    pub kernel1: KernelId,
    pub kernel2: KernelId,
    pub f: Expr,
    pub g: Expr,
    pub r1: f64,
    pub r2: f64,
    pub cone1: ConeSpec,
    pub cone2: ConeSpec,
    /// Retraction direction for the first component; defaults to the
    /// constant one function, which lies in every built-in cone.
    pub h1: Option<GridFn>,
    pub h2: Option<GridFn>,
}

impl ProblemSpec {
    pub fn build(self) -> Result<HammersteinProblem> {
        let op1 = Arc::new(NystromOp::assemble(self.kernel1, &self.grid)?);
        let op2 = if self.kernel2 == self.kernel1 {
            op1.clone()
        } else {
            Arc::new(NystromOp::assemble(self.kernel2, &self.grid)?)
        };
        HammersteinProblem::from_parts(self, op1, op2)
    }
}

#[derive(Debug, Clone)]
pub struct HammersteinProblem {
    grid: Arc<Grid>,
    f: Expr,
    g: Expr,
    r1: f64,
    r2: f64,
    cone1: ConeSpec,
    cone2: ConeSpec,
    h1: GridFn,
    h2: GridFn,
    op1: Arc<NystromOp>,
    op2: Arc<NystromOp>,
}

/// Tolerance used when validating that a retraction direction lies in its
/// cone.
const H_CONE_TOL: f64 = 1e-12;

impl HammersteinProblem {
    fn from_parts(
        spec: ProblemSpec,
        op1: Arc<NystromOp>,
        op2: Arc<NystromOp>,
    ) -> Result<Self> {
        if spec.r1 <= 0.0 || spec.r2 <= 0.0 || !spec.r1.is_finite() || !spec.r2.is_finite() {
            return Err(Error::InvalidInput(format!(
                "prescribed norms must be positive, got r1 = {}, r2 = {}",
                spec.r1, spec.r2
            )));
        }
        let h1 = match spec.h1 {
            Some(h) => h,
            None => GridFn::constant(spec.grid.clone(), 1.0)?,
        };
        let h2 = match spec.h2 {
            Some(h) => h,
            None => GridFn::constant(spec.grid.clone(), 1.0)?,
        };
        for (i, (h, cone)) in [(&h1, &spec.cone1), (&h2, &spec.cone2)].into_iter().enumerate() {
            if !h.on_grid(&spec.grid) {
                return Err(Error::GridMismatch);
            }
            if h.sup_norm() == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "retraction direction h{} must be nonzero",
                    i + 1
                )));
            }
            if !cone.contains(h, H_CONE_TOL)? {
                return Err(Error::InvalidInput(format!(
                    "retraction direction h{} does not lie in the {} of component {}",
                    i + 1,
                    cone,
                    i + 1
                )));
            }
        }
        Ok(HammersteinProblem {
            grid: spec.grid,
            f: spec.f,
            g: spec.g,
            r1: spec.r1,
            r2: spec.r2,
            cone1: spec.cone1,
            cone2: spec.cone2,
            h1,
            h2,
            op1,
            op2,
        })
    }

    /// Same system with different prescribed norms, reusing the assembled
    /// operators (assembly is the expensive part of a radius sweep).
    pub fn with_radii(&self, r1: f64, r2: f64) -> Result<Self> {
        let mut p = self.clone();
        if r1 <= 0.0 || r2 <= 0.0 || !r1.is_finite() || !r2.is_finite() {
            return Err(Error::InvalidInput(format!(
                "prescribed norms must be positive, got r1 = {r1}, r2 = {r2}"
            )));
        }
        p.r1 = r1;
        p.r2 = r2;
        Ok(p)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn cone1(&self) -> &ConeSpec {
        &self.cone1
    }

    pub fn cone2(&self) -> &ConeSpec {
        &self.cone2
    }

    pub fn h1(&self) -> &GridFn {
        &self.h1
    }

    pub fn h2(&self) -> &GridFn {
        &self.h2
    }

    pub fn op1(&self) -> &Arc<NystromOp> {
        &self.op1
    }

    pub fn op2(&self) -> &Arc<NystromOp> {
        &self.op2
    }

    /// Node values of a spatial expression (`f_lower`, `h1`, ... — anything
    /// in the spatial variables and the radii only).
    pub fn eval_spatial(&self, expr: &Expr) -> Result<GridFn> {
        let base = EvalEnv::new().with_radii(self.r1, self.r2);
        let values: Result<Vec<f64>> = match self.grid.as_ref() {
            Grid::Interval(g) => g
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    expr.eval(&base.with_t(t)).map_err(|e| self.at_node(i, e))
                })
                .collect(),
            Grid::Disk(g) => g
                .points()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    expr.eval(&base.with_xy(p.x, p.y))
                        .map_err(|e| self.at_node(i, e))
                })
                .collect(),
        };
        GridFn::new(self.grid.clone(), values?)
    }

    /// Node values of `f(space, u, v)` for one of the two nonlinearities.
    fn density(&self, expr: &Expr, u: &GridFn, v: &GridFn) -> Result<Vec<f64>> {
        let base = EvalEnv::new().with_radii(self.r1, self.r2);
        match self.grid.as_ref() {
            Grid::Interval(g) => g
                .nodes()
                .iter()
                .zip(u.values().iter().zip(v.values()))
                .enumerate()
                .map(|(i, (&t, (&uv, &vv)))| {
                    expr.eval(&base.with_t(t).with_uv(uv, vv))
                        .map_err(|e| self.at_node(i, e))
                })
                .collect(),
            Grid::Disk(g) => g
                .points()
                .iter()
                .zip(u.values().iter().zip(v.values()))
                .enumerate()
                .map(|(i, (p, (&uv, &vv)))| {
                    expr.eval(&base.with_xy(p.x, p.y).with_uv(uv, vv))
                        .map_err(|e| self.at_node(i, e))
                })
                .collect(),
        }
    }

    fn at_node(&self, index: usize, source: Error) -> Error {
        Error::EvalAtNode {
            index,
            location: self.grid.describe_node(index),
            source: Box::new(source),
        }
    }

    /// Apply the system operator: `(T1(u,v), T2(u,v))` through the
    /// precomputed Nystrom rows.
    pub fn apply_t(&self, u: &GridFn, v: &GridFn) -> Result<(GridFn, GridFn)> {
        if !u.on_grid(&self.grid) || !v.on_grid(&self.grid) {
            return Err(Error::GridMismatch);
        }
        let phi1 = GridFn::new(self.grid.clone(), self.density(&self.f, u, v)?)?;
        let phi2 = GridFn::new(self.grid.clone(), self.density(&self.g, u, v)?)?;
        if Arc::ptr_eq(&self.op1, &self.op2) {
            self.op1.apply_pair(&phi1, &phi2)
        } else {
            Ok((self.op1.apply(&phi1)?, self.op2.apply(&phi2)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ode_operator_closed_forms() {
        // f == 1 and g == 1 turn T1, T2 into pure kernel integrals
        let spec = ProblemSpec {
            grid: Grid::interval(201).unwrap(),
            kernel1: KernelId::K1Dirichlet,
            kernel2: KernelId::K2Mixed,
            f: Expr::parse("1").unwrap(),
            g: Expr::parse("1").unwrap(),
            r1: 1.0,
            r2: 1.0,
            cone1: ConeSpec::guo_quarter(),
            cone2: ConeSpec::WholeSpace,
            h1: None,
            h2: None,
        };
        let p = spec.build().unwrap();
        let zero = GridFn::zero(p.grid().clone());
        let (t1, t2) = p.apply_t(&zero, &zero).unwrap();
        let nodes = p.grid().as_interval().unwrap().nodes().to_vec();
        for (t, v) in nodes.iter().zip(t1.values()) {
            assert_abs_diff_eq!(*v, t * (1.0 - t) / 2.0, epsilon = 1e-12);
        }
        for (t, v) in nodes.iter().zip(t2.values()) {
            assert_abs_diff_eq!(*v, -t * t / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn disk_operator_constant_density() {
        let spec = ProblemSpec {
            grid: Grid::disk(16, 32).unwrap(),
            kernel1: KernelId::DiskLaplacian,
            kernel2: KernelId::DiskLaplacian,
            f: Expr::parse("1").unwrap(),
            g: Expr::parse("1").unwrap(),
            r1: 1.0,
            r2: 1.0,
            cone1: ConeSpec::Positive,
            cone2: ConeSpec::Positive,
            h1: None,
            h2: None,
        };
        let p = spec.build().unwrap();
        let zero = GridFn::zero(p.grid().clone());
        let (t1, _) = p.apply_t(&zero, &zero).unwrap();
        let disk = p.grid().as_disk().unwrap();
        for (pt, v) in disk.points().iter().zip(t1.values()) {
            assert_abs_diff_eq!(*v, (1.0 - pt.norm_sq()) / 4.0, epsilon = 1e-3);
        }
    }

    #[test]
    fn eval_errors_carry_node_location() {
        let spec = ProblemSpec {
            grid: Grid::interval(11).unwrap(),
            kernel1: KernelId::K1Dirichlet,
            kernel2: KernelId::K2Mixed,
            f: Expr::parse("ln(t - 0.5)").unwrap(), // bad for t <= 0.5
            g: Expr::parse("1").unwrap(),
            r1: 1.0,
            r2: 1.0,
            cone1: ConeSpec::WholeSpace,
            cone2: ConeSpec::WholeSpace,
            h1: None,
            h2: None,
        };
        let p = spec.build().unwrap();
        let zero = GridFn::zero(p.grid().clone());
        let err = p.apply_t(&zero, &zero).unwrap_err();
        assert!(matches!(err, Error::EvalAtNode { index: 0, .. }), "{err}");
    }

    #[test]
    fn h_must_lie_in_the_cone() {
        let grid = Grid::interval(101).unwrap();
        let nodes = grid.as_interval().unwrap().nodes().to_vec();
        let ramp = GridFn::new(
            grid.clone(),
            nodes.iter().map(|t| (1.0 - 4.0 * t).max(0.0)).collect(),
        )
        .unwrap();
        let spec = ProblemSpec {
            grid,
            kernel1: KernelId::K1Dirichlet,
            kernel2: KernelId::K2Mixed,
            f: Expr::parse("1").unwrap(),
            g: Expr::parse("1").unwrap(),
            r1: 1.0,
            r2: 1.0,
            cone1: ConeSpec::guo_quarter(),
            cone2: ConeSpec::WholeSpace,
            h1: Some(ramp),
            h2: None,
        };
        assert!(spec.build().is_err());
    }
}
