//! Retraction onto the sphere-in-cone, the normalized auxiliary maps, and
//! the damped fixed-point iteration that extracts component-wise
//! eigenpairs.
//!
//! The central objects are the auxiliary maps
//!
//! ```text
//! N(x, y) = ( s1 r1 T1(rho1(x), y) / |T1(rho1(x), y)| ,
//!             s2 r2 T2(x, rho2(y)) / |T2(x, rho2(y))| )
//! ```
//!
//! for a sign pattern `(s1, s2)`: every output lies on the product of
//! spheres `|x| = r1`, `|y| = r2`, and a fixed point `(x0, y0)` of `N`
//! solves `x0 = lambda1 T1(x0,y0)`, `y0 = lambda2 T2(x0,y0)` with
//! `lambda_i = s_i r_i / |T_i(x0, y0)|`. Fixed points are found by damped
//! Picard iteration with radial renormalization after every step; the
//! iteration is plain (no acceleration) so that runs are bit-reproducible.

use crate::cone::{ConeSpec, SignPattern};
use crate::error::{Error, Result};
use crate::grid::GridFn;
use crate::problem::HammersteinProblem;

/// Parameters of the explicit retraction
/// `rho(z) = r (z + (r - |z|)^2 h) / |z + (r - |z|)^2 h|`
/// mapping the ball-in-cone of radius `r` onto its sphere part.
#[derive(Debug, Clone)]
pub struct RetractionSpec {
    pub r: f64,
    pub h: GridFn,
    pub cone: ConeSpec,
}

/// Operator norms below this are treated as a numerical failure of the
/// boundary inf-condition.
pub const VANISHING_NORM_FLOOR: f64 = 1e-14;

const RETRACT_DENOM_FLOOR: f64 = 1e-12;

/// Retract `z` (with `|z| <= r`, inputs marginally outside are clamped)
/// onto the sphere of radius `r`. The output norm equals `r` exactly; a
/// `z` already on the sphere is returned unchanged; cone membership is
/// preserved whenever `z` and `h` share the cone.
pub fn retract(z: &GridFn, spec: &RetractionSpec) -> Result<GridFn> {
    let norm = z.sup_norm();
    let z = if norm > spec.r {
        // quadrature slop can push iterates marginally outside the ball
        z.rescale_to_norm(spec.r)?
    } else {
        z.clone()
    };
    let norm = z.sup_norm();
    if norm == spec.r {
        return Ok(z);
    }
    let shift = (spec.r - norm) * (spec.r - norm);
    let combined = z.axpy(1.0, &spec.h, shift)?;
    let denom = combined.sup_norm();
    if denom >= RETRACT_DENOM_FLOOR {
        return combined.rescale_to_norm(spec.r);
    }
    // z nearly cancels (r - |z|)^2 h; only reachable for whole-space
    // components. Retry once with a fixed ramp direction before giving up.
    let fallback = fallback_direction(&z);
    let combined = z.axpy(1.0, &fallback, shift)?;
    if combined.sup_norm() >= RETRACT_DENOM_FLOOR {
        combined.rescale_to_norm(spec.r)
    } else {
        Err(Error::DegenerateRetraction)
    }
}

/// Deterministic direction linearly independent from any constant
/// function: a ramp over the node index.
fn fallback_direction(like: &GridFn) -> GridFn {
    let n = like.len();
    let values = (0..n)
        .map(|i| 1.0 + i as f64 / (n.max(2) - 1) as f64)
        .collect();
    GridFn::new(like.grid().clone(), values).expect("ramp values are finite")
}

/// Controls for [`HammersteinProblem::solve`].
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Damping factor in `(0, 1]`; 1 is plain Picard.
    pub theta: f64,
    /// Stop when the post-renormalization step difference falls below this.
    pub tol_step: f64,
    /// ... and both eigen-residuals fall below this.
    pub tol_res: f64,
    pub max_iter: usize,
    /// Initial pair; defaults to `(r1 h1/|h1|, r2 h2/|h2|)`.
    pub init: Option<(GridFn, GridFn)>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            theta: 1.0,
            tol_step: 1e-10,
            tol_res: 1e-8,
            max_iter: 500,
            init: None,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "damping theta must lie in (0, 1], got {}",
                self.theta
            )));
        }
        let tol_ok = |t: f64| t.is_finite() && t > 0.0;
        if !tol_ok(self.tol_step) || !tol_ok(self.tol_res) {
            return Err(Error::InvalidInput(
                "solver tolerances must be positive".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// One component-wise eigenpair with its diagnostics.
#[derive(Debug, Clone)]
pub struct EigenPairResult {
    pub lambda1: f64,
    pub lambda2: f64,
    pub x0: GridFn,
    pub y0: GridFn,
    /// `|x0 - lambda1 T1(x0,y0)|` in the sup-norm.
    pub residual1: f64,
    pub residual2: f64,
    pub iterations: usize,
    pub converged: bool,
    pub pattern: SignPattern,
}

/// `lambda_i = s_i r_i / |T_i|`; errors when a norm vanishes.
pub fn extract_eigen(
    r1: f64,
    r2: f64,
    t1: &GridFn,
    t2: &GridFn,
    pattern: SignPattern,
) -> Result<(f64, f64)> {
    let n1 = t1.sup_norm();
    let n2 = t2.sup_norm();
    if n1 < VANISHING_NORM_FLOOR {
        return Err(Error::VanishingOperator {
            component: 1,
            floor: VANISHING_NORM_FLOOR,
        });
    }
    if n2 < VANISHING_NORM_FLOOR {
        return Err(Error::VanishingOperator {
            component: 2,
            floor: VANISHING_NORM_FLOOR,
        });
    }
    Ok((pattern.sign1() * r1 / n1, pattern.sign2() * r2 / n2))
}

impl HammersteinProblem {
    fn retraction1(&self) -> RetractionSpec {
        RetractionSpec {
            r: self.r1(),
            h: self.h1().clone(),
            cone: *self.cone1(),
        }
    }

    fn retraction2(&self) -> RetractionSpec {
        RetractionSpec {
            r: self.r2(),
            h: self.h2().clone(),
            cone: *self.cone2(),
        }
    }

    /// One application of the auxiliary map `N` for the given sign
    /// pattern. Both outputs land exactly on their spheres.
    pub fn apply_n(
        &self,
        x: &GridFn,
        y: &GridFn,
        pattern: SignPattern,
    ) -> Result<(GridFn, GridFn)> {
        pattern.check_legal(self.cone1(), self.cone2())?;
        let rx = retract(x, &self.retraction1())?;
        let ry = retract(y, &self.retraction2())?;
        // T1 sees the retracted first component with the original second,
        // and T2 the original first with the retracted second. On-sphere
        // inputs make both retractions the identity and one operator pass
        // serves both components.
        let (t1, t2) = if rx.values() == x.values() && ry.values() == y.values() {
            self.apply_t(x, y)?
        } else {
            let (t1, _) = self.apply_t(&rx, y)?;
            let (_, t2) = self.apply_t(x, &ry)?;
            (t1, t2)
        };
        let n1 = t1.sup_norm();
        if n1 < VANISHING_NORM_FLOOR {
            return Err(Error::VanishingOperator {
                component: 1,
                floor: VANISHING_NORM_FLOOR,
            });
        }
        let n2 = t2.sup_norm();
        if n2 < VANISHING_NORM_FLOOR {
            return Err(Error::VanishingOperator {
                component: 2,
                floor: VANISHING_NORM_FLOOR,
            });
        }
        let out1 = t1.rescale_to_norm(pattern.sign1() * self.r1())?;
        let out2 = t2.rescale_to_norm(pattern.sign2() * self.r2())?;
        // rescale_to_norm targets a signed value; the sup-norm is |target|
        Ok((out1, out2))
    }

    /// Damped Picard iteration on `N`, with radial renormalization of both
    /// components after every damped step.
    ///
    /// The damping factor halves (down to 1/16) whenever the step
    /// differences have not decreased over a 20-iteration window, which
    /// rescues 2-cycles. Non-convergence within `max_iter` is an error
    /// carrying the best iterate seen.
    pub fn solve(&self, pattern: SignPattern, opts: &SolverOptions) -> Result<EigenPairResult> {
        pattern.check_legal(self.cone1(), self.cone2())?;
        opts.validate()?;

        let (mut x, mut y) = match &opts.init {
            Some((x0, y0)) => (
                x0.rescale_to_norm(self.r1())?,
                y0.rescale_to_norm(self.r2())?,
            ),
            None => (
                self.h1().rescale_to_norm(self.r1())?,
                self.h2().rescale_to_norm(self.r2())?,
            ),
        };

        let mut theta = opts.theta;
        let mut prev_step = 0.0f64;
        let mut steps: Vec<f64> = Vec::with_capacity(opts.max_iter);
        let mut best: Option<(f64, GridFn, GridFn, f64, f64)> = None;

        for it in 1..=opts.max_iter {
            let (n1, n2) = self.apply_n(&x, &y, pattern)?;
            // on the sphere the retraction is the identity, so the
            // eigen-residual at (x, y) is exactly the fixed-point defect
            let res1 = x.sup_dist(&n1)?;
            let res2 = y.sup_dist(&n2)?;

            let worst = res1.max(res2);
            if best.as_ref().is_none_or(|(b, ..)| worst < *b) {
                best = Some((worst, x.clone(), y.clone(), res1, res2));
            }

            if res1 <= opts.tol_res && res2 <= opts.tol_res && prev_step <= opts.tol_step {
                return self.finish(x, y, it - 1, true, pattern);
            }

            let next_x = if theta == 1.0 {
                n1
            } else {
                x.axpy(1.0 - theta, &n1, theta)?.rescale_to_norm(self.r1())?
            };
            let next_y = if theta == 1.0 {
                n2
            } else {
                y.axpy(1.0 - theta, &n2, theta)?.rescale_to_norm(self.r2())?
            };
            // negative patterns leave |.| = r but flip the attained sign,
            // so measure steps after the update
            prev_step = next_x.sup_dist(&x)?.max(next_y.sup_dist(&y)?);
            steps.push(prev_step);
            x = next_x;
            y = next_y;

            // 2-cycle guard: no decrease across a 20-iteration window
            let k = steps.len();
            if k >= 21 && k.is_multiple_of(20) && steps[k - 1] >= steps[k - 21] && theta > 1.0 / 16.0 {
                theta = (theta / 2.0).max(1.0 / 16.0);
            }
        }

        let (_, bx, by, _, _) = best.expect("at least one iteration ran");
        let result = self.finish(bx, by, opts.max_iter, false, pattern)?;
        Err(Error::NonConvergence(Box::new(result)))
    }

    fn finish(
        &self,
        x: GridFn,
        y: GridFn,
        iterations: usize,
        converged: bool,
        pattern: SignPattern,
    ) -> Result<EigenPairResult> {
        let (t1, t2) = self.apply_t(&x, &y)?;
        let (lambda1, lambda2) = extract_eigen(self.r1(), self.r2(), &t1, &t2, pattern)?;
        let residual1 = x.axpy(1.0, &t1, -lambda1)?.sup_norm();
        let residual2 = y.axpy(1.0, &t2, -lambda2)?.sup_norm();
        Ok(EigenPairResult {
            lambda1,
            lambda2,
            x0: x,
            y0: y,
            residual1,
            residual2,
            iterations,
            converged,
            pattern,
        })
    }
}
