//! Cones of grid functions and the sign patterns of the auxiliary maps.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFn};
use std::fmt;

/// Membership rules for one solution component.
///
/// `Positive` is the cone of nonnegative functions; `Guo { a, b, c }` is the
/// sub-cone whose minimum over the window `[a,b]` dominates `c` times the
/// sup-norm; `WholeSpace` imposes nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeSpec {
    Positive,
    Guo { a: f64, b: f64, c: f64 },
    WholeSpace,
}

impl ConeSpec {
    /// The window/constant combination used by the interval application:
    /// `min over [1/4, 3/4] >= (1/4) * sup-norm`.
    pub fn guo_quarter() -> Self {
        ConeSpec::Guo {
            a: 0.25,
            b: 0.75,
            c: 0.25,
        }
    }

    pub fn guo(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(0.0 < a && a < b && b < 1.0) {
            return Err(Error::InvalidInput(format!(
                "Guo window must satisfy 0 < a < b < 1, got [{a}, {b}]"
            )));
        }
        if !(0.0 < c && c <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "Guo constant must lie in (0, 1], got {c}"
            )));
        }
        Ok(ConeSpec::Guo { a, b, c })
    }

    pub fn is_whole_space(&self) -> bool {
        matches!(self, ConeSpec::WholeSpace)
    }

    /// Cone membership up to tolerance `tol`.
    ///
    /// For the Guo cone the minimum is taken over the grid nodes inside the
    /// window; a grid with no node there cannot express the constraint and
    /// yields a `CoarseGrid` error.
    pub fn contains(&self, f: &GridFn, tol: f64) -> Result<bool> {
        match *self {
            ConeSpec::WholeSpace => Ok(true),
            ConeSpec::Positive => Ok(f.values().iter().all(|&v| v >= -tol)),
            ConeSpec::Guo { a, b, c } => {
                let grid = match f.grid().as_ref() {
                    Grid::Interval(g) => g,
                    Grid::Disk(_) => {
                        return Err(Error::InvalidInput(
                            "the Guo cone is defined for interval grids only".into(),
                        ))
                    }
                };
                if f.values().iter().any(|&v| v < -tol) {
                    return Ok(false);
                }
                let window_min = grid
                    .nodes()
                    .iter()
                    .zip(f.values())
                    .filter(|(t, _)| **t >= a && **t <= b)
                    .map(|(_, v)| *v)
                    .fold(f64::INFINITY, f64::min);
                if window_min == f64::INFINITY {
                    return Err(Error::CoarseGrid(format!(
                        "no grid node falls inside the Guo window [{a}, {b}]"
                    )));
                }
                Ok(window_min >= c * f.sup_norm() - tol)
            }
        }
    }
}

impl fmt::Display for ConeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeSpec::Positive => write!(f, "positive cone"),
            ConeSpec::Guo { a, b, c } => write!(f, "Guo cone (window [{a}, {b}], constant {c})"),
            ConeSpec::WholeSpace => write!(f, "whole space"),
        }
    }
}

/// Pair of signs selecting one of the four auxiliary maps. A negative sign
/// for a component is legal only when that component ranges over the whole
/// space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignPattern {
    pub sigma1: i8,
    pub sigma2: i8,
}

impl SignPattern {
    pub const PP: SignPattern = SignPattern::new(1, 1);
    pub const PM: SignPattern = SignPattern::new(1, -1);
    pub const MP: SignPattern = SignPattern::new(-1, 1);
    pub const MM: SignPattern = SignPattern::new(-1, -1);

    /// All four patterns, in the deterministic order `++`, `+-`, `-+`, `--`.
    pub const ALL: [SignPattern; 4] = [Self::PP, Self::PM, Self::MP, Self::MM];

    const fn new(sigma1: i8, sigma2: i8) -> Self {
        SignPattern { sigma1, sigma2 }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "++" => Ok(Self::PP),
            "+-" => Ok(Self::PM),
            "-+" => Ok(Self::MP),
            "--" => Ok(Self::MM),
            other => Err(Error::InvalidInput(format!(
                "unknown sign pattern `{other}` (expected ++, +-, -+ or --)"
            ))),
        }
    }

    pub fn sign1(&self) -> f64 {
        self.sigma1 as f64
    }

    pub fn sign2(&self) -> f64 {
        self.sigma2 as f64
    }

    /// Check the pattern against the cones of the two components.
    pub fn check_legal(&self, cone1: &ConeSpec, cone2: &ConeSpec) -> Result<()> {
        for (i, (sigma, cone)) in [(self.sigma1, cone1), (self.sigma2, cone2)]
            .into_iter()
            .enumerate()
        {
            if sigma < 0 && !cone.is_whole_space() {
                return Err(Error::IllegalSignPattern {
                    pattern: self.to_string(),
                    component: i + 1,
                    cone: cone.to_string(),
                });
            }
        }
        Ok(())
    }

    /// The patterns legal for the given cones, in deterministic order.
    pub fn legal_for(cone1: &ConeSpec, cone2: &ConeSpec) -> Vec<SignPattern> {
        Self::ALL
            .into_iter()
            .filter(|p| p.check_legal(cone1, cone2).is_ok())
            .collect()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |s: i8| if s > 0 { '+' } else { '-' };
        write!(f, "{}{}", c(self.sigma1), c(self.sigma2))
    }
}
