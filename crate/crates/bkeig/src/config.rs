//! Declarative run configuration.
//!
//! Problems are described in a small sectioned TOML file; unknown keys are
//! rejected. Two built-in presets reproduce the bundled example systems.
//!
//! ```toml
//! [problem]
//! kind = "ode"              # or "pde_disk"
//! f = "t*(1+u^2*v^2)"
//! g = "t*exp(u*v)"
//! r1 = 1.0
//! r2 = 1.0
//! # h1 = "1"                # optional retraction directions
//! # h2 = "1"
//!
//! [solver]
//! # grid_n = 201            # interval problems
//! # n_r = 64                # disk problems
//! # n_theta = 128
//! # theta = 1.0
//! # tol_step = 1e-10
//! # tol_res = 1e-8
//! # max_iter = 500
//! # sign = "++"
//!
//! [hypothesis]
//! f_lower = "1/4"
//! g_lower = "t*exp(-r1*r2)"
//!
//! [sweep]
//! r1_min = 0.5
//! r1_max = 1.0
//! r1_steps = 2
//! r2_min = 0.5
//! r2_max = 1.0
//! r2_steps = 2
//!
//! [output]
//! # csv_path = "solution.csv"
//! # precision = 12
//! ```
//!
//! The `kind` fixes the kernels and cones: `"ode"` pairs the interval
//! kernels with a Guo cone (window `[1/4, 3/4]`, constant `1/4`) times the
//! whole space, so `++` and `+-` are the legal signs; `"pde_disk"` uses
//! the disk Laplacian kernel with two positive cones, so only `++` is
//! legal.

use crate::cone::{ConeSpec, SignPattern};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grid::{Grid, GridFn};
use crate::kernels::KernelId;
use crate::problem::{HammersteinProblem, ProblemSpec};
use crate::solver::SolverOptions;
use crate::verify::HypothesisSpec;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "ode")]
    Ode,
    #[serde(rename = "pde_disk")]
    PdeDisk,
}

impl ProblemKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProblemKind::Ode => "ode",
            ProblemKind::PdeDisk => "pde_disk",
        }
    }

    pub fn cones(&self) -> (ConeSpec, ConeSpec) {
        match self {
            ProblemKind::Ode => (ConeSpec::guo_quarter(), ConeSpec::WholeSpace),
            ProblemKind::PdeDisk => (ConeSpec::Positive, ConeSpec::Positive),
        }
    }

    pub fn kernels(&self) -> (KernelId, KernelId) {
        match self {
            ProblemKind::Ode => (KernelId::K1Dirichlet, KernelId::K2Mixed),
            ProblemKind::PdeDisk => (KernelId::DiskLaplacian, KernelId::DiskLaplacian),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub kind: ProblemKind,
    pub f: String,
    pub g: String,
    pub r1: f64,
    pub r2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_theta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_res: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_lower: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_lower: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub r1_min: f64,
    pub r1_max: f64,
    pub r1_steps: usize,
    pub r2_min: f64,
    pub r2_max: f64,
    pub r2_steps: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

pub const PRESET_NAMES: [&str; 2] = ["ode-example", "pde-example"];

const ODE_EXAMPLE: &str = r#"
[problem]
kind = "ode"
f = "t*(1+u^2*v^2)"
g = "t*exp(u*v)"
r1 = 1.0
r2 = 1.0

[hypothesis]
f_lower = "1/4"
g_lower = "t*exp(-r1*r2)"
"#;

const PDE_EXAMPLE: &str = r#"
[problem]
kind = "pde_disk"
f = "(1+x^2)*exp(u)*(2+cos(v))"
g = "(1+y^2)*(1+v^2)*(2+sin(u))"
r1 = 1.0
r2 = 1.0

[hypothesis]
f_lower = "1"
g_lower = "1"
"#;

impl RunConfig {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    /// One of the built-in presets: `ode-example` (interval system,
    /// Guo cone times whole space) or `pde-example` (disk system,
    /// positive cones).
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "ode-example" => Self::from_toml_str(ODE_EXAMPLE),
            "pde-example" => Self::from_toml_str(PDE_EXAMPLE),
            other => Err(Error::Config(format!(
                "unknown preset `{other}` (available: {})",
                PRESET_NAMES.join(", ")
            ))),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// The same configuration with every optional knob filled in with its
    /// default, so two runs of an effective config are identical byte for
    /// byte.
    pub fn effective(&self) -> RunConfig {
        let mut cfg = self.clone();
        match cfg.problem.kind {
            ProblemKind::Ode => {
                cfg.solver.grid_n = Some(cfg.solver.grid_n.unwrap_or(201));
            }
            ProblemKind::PdeDisk => {
                cfg.solver.n_r = Some(cfg.solver.n_r.unwrap_or(64));
                cfg.solver.n_theta = Some(cfg.solver.n_theta.unwrap_or(128));
            }
        }
        cfg.problem.h1 = Some(cfg.problem.h1.unwrap_or_else(|| "1".into()));
        cfg.problem.h2 = Some(cfg.problem.h2.unwrap_or_else(|| "1".into()));
        cfg.solver.theta = Some(cfg.solver.theta.unwrap_or(1.0));
        cfg.solver.tol_step = Some(cfg.solver.tol_step.unwrap_or(1e-10));
        cfg.solver.tol_res = Some(cfg.solver.tol_res.unwrap_or(1e-8));
        cfg.solver.max_iter = Some(cfg.solver.max_iter.unwrap_or(500));
        cfg.solver.sign = Some(cfg.solver.sign.unwrap_or_else(|| "++".into()));
        cfg.output.precision = Some(cfg.output.precision.unwrap_or(12));
        cfg
    }

    fn expr(field: &str, src: &str) -> Result<Expr> {
        Expr::parse(src)
            .map_err(|e| Error::Config(format!("in key `{field}` = \"{src}\": {e}")))
    }

    pub fn build_grid(&self) -> Result<std::sync::Arc<Grid>> {
        match self.problem.kind {
            ProblemKind::Ode => {
                if self.solver.n_r.is_some() || self.solver.n_theta.is_some() {
                    return Err(Error::Config(
                        "`n_r`/`n_theta` apply to kind = \"pde_disk\"; use `grid_n` for \"ode\"".into(),
                    ));
                }
                Grid::interval(self.solver.grid_n.unwrap_or(201))
            }
            ProblemKind::PdeDisk => {
                if self.solver.grid_n.is_some() {
                    return Err(Error::Config(
                        "`grid_n` applies to kind = \"ode\"; use `n_r`/`n_theta` for \"pde_disk\"".into(),
                    ));
                }
                Grid::disk(
                    self.solver.n_r.unwrap_or(64),
                    self.solver.n_theta.unwrap_or(128),
                )
            }
        }
    }

    pub fn build_problem(&self) -> Result<HammersteinProblem> {
        let grid = self.build_grid()?;
        let (cone1, cone2) = self.problem.kind.cones();
        let (kernel1, kernel2) = self.problem.kind.kernels();
        let f = Self::expr("problem.f", &self.problem.f)?;
        let g = Self::expr("problem.g", &self.problem.g)?;

        // h expressions need an assembled problem to evaluate on, so
        // build once with the default directions and rebuild if custom
        // ones are configured
        let spec = ProblemSpec {
            grid: grid.clone(),
            kernel1,
            kernel2,
            f,
            g,
            r1: self.problem.r1,
            r2: self.problem.r2,
            cone1,
            cone2,
            h1: None,
            h2: None,
        };
        let base = spec.clone().build()?;
        let h_fn = |field: &str, src: &Option<String>| -> Result<Option<GridFn>> {
            match src.as_deref() {
                None | Some("1") => Ok(None),
                Some(text) => {
                    let expr = Self::expr(field, text)?;
                    Ok(Some(base.eval_spatial(&expr)?))
                }
            }
        };
        let h1 = h_fn("problem.h1", &self.problem.h1)?;
        let h2 = h_fn("problem.h2", &self.problem.h2)?;
        if h1.is_none() && h2.is_none() {
            return Ok(base);
        }
        ProblemSpec { h1, h2, ..spec }.build()
    }

    pub fn solver_options(&self) -> SolverOptions {
        let d = SolverOptions::default();
        SolverOptions {
            theta: self.solver.theta.unwrap_or(d.theta),
            tol_step: self.solver.tol_step.unwrap_or(d.tol_step),
            tol_res: self.solver.tol_res.unwrap_or(d.tol_res),
            max_iter: self.solver.max_iter.unwrap_or(d.max_iter),
            init: None,
        }
    }

    pub fn sign(&self) -> Result<SignPattern> {
        SignPattern::parse(self.solver.sign.as_deref().unwrap_or("++"))
            .map_err(|e| Error::Config(e.to_string()))
    }

    /// Sign patterns legal for this problem kind, deterministic order.
    pub fn legal_signs(&self) -> Vec<SignPattern> {
        let (c1, c2) = self.problem.kind.cones();
        SignPattern::legal_for(&c1, &c2)
    }

    pub fn hypothesis_spec(&self) -> Result<HypothesisSpec> {
        let section = self.hypothesis.as_ref().ok_or_else(|| {
            Error::Config("a [hypothesis] section with f_lower and g_lower is required".into())
        })?;
        let f_lower = section.f_lower.as_deref().ok_or_else(|| {
            Error::Config("missing key `hypothesis.f_lower`".into())
        })?;
        let g_lower = section.g_lower.as_deref().ok_or_else(|| {
            Error::Config("missing key `hypothesis.g_lower`".into())
        })?;
        Ok(HypothesisSpec {
            f_lower: Self::expr("hypothesis.f_lower", f_lower)?,
            g_lower: Self::expr("hypothesis.g_lower", g_lower)?,
        })
    }

    pub fn precision(&self) -> usize {
        self.output.precision.unwrap_or(12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_build() {
        for name in PRESET_NAMES {
            let cfg = RunConfig::preset(name).unwrap();
            cfg.build_problem().unwrap();
            cfg.hypothesis_spec().unwrap();
        }
        assert!(RunConfig::preset("nope").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = r#"
[problem]
kind = "ode"
f = "1"
g = "1"
r1 = 1.0
r2 = 1.0
frobnicate = 3
"#;
        assert!(matches!(
            RunConfig::from_toml_str(bad),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn effective_round_trips_through_toml() {
        let cfg = RunConfig::preset("ode-example").unwrap().effective();
        let text = cfg.to_toml();
        let reparsed = RunConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg, reparsed);
    }

    #[test]
    fn kind_grid_key_mismatch_is_an_error() {
        let bad = r#"
[problem]
kind = "ode"
f = "1"
g = "1"
r1 = 1.0
r2 = 1.0

[solver]
n_r = 8
"#;
        let cfg = RunConfig::from_toml_str(bad).unwrap();
        assert!(cfg.build_problem().is_err());
    }

    #[test]
    fn ode_legal_signs() {
        let cfg = RunConfig::preset("ode-example").unwrap();
        let signs = cfg.legal_signs();
        assert_eq!(signs, vec![SignPattern::PP, SignPattern::PM]);
        let cfg = RunConfig::preset("pde-example").unwrap();
        assert_eq!(cfg.legal_signs(), vec![SignPattern::PP]);
    }

    #[test]
    fn custom_h_expression_is_used() {
        let src = r#"
[problem]
kind = "ode"
f = "t*(1+u^2*v^2)"
g = "t*exp(u*v)"
r1 = 1.0
r2 = 1.0
h1 = "1 + t*(1-t)"
"#;
        let cfg = RunConfig::from_toml_str(src).unwrap();
        let p = cfg.build_problem().unwrap();
        assert!(p.h1().values()[100] > 1.2); // midpoint of 201-node grid
        assert_eq!(p.h2().values()[0], 1.0);
    }
}
