//! Command implementations behind the `bkeig` binary.
//!
//! Everything here is a thin orchestration layer over the library: load a
//! config (or preset), run the requested computation, print a report and
//! emit CSV. Exit codes: 0 success, 1 configuration/validation error,
//! 2 non-convergence (or a computed result failing verification).
//!
//! CSV output is comma-separated with a header row, LF line endings and
//! `.` as the decimal separator; numeric fields are formatted at the
//! configured number of significant digits (default 12).

use crate::cone::SignPattern;
use crate::config::{ProblemKind, RunConfig};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernels::{k1, k2, KernelId, NystromOp};
use crate::problem::HammersteinProblem;
use crate::solver::EigenPairResult;
use crate::verify::{
    self, common_eigenvalue, estimate_inf_boundary, Component, HypothesisReport, SolutionReport,
};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Tolerance at which a solve's result is re-verified before reporting
/// success.
pub const SOLVE_VERIFY_TOL: f64 = 1e-6;

/// Significant-digit formatting used for every CSV numeric field.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{:.*e}", digits.saturating_sub(1), v)
}

fn writer_for(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn csv_line<W: Write>(w: &mut W, fields: &[String]) -> Result<()> {
    writeln!(w, "{}", fields.join(",")).map_err(Error::from)
}

fn solution_csv_path(out_override: Option<&Path>, cfg: &RunConfig, default: &str) -> PathBuf {
    out_override
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.csv_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default))
}

fn write_eigenfunctions<W: Write>(
    w: &mut W,
    p: &HammersteinProblem,
    res: &EigenPairResult,
    digits: usize,
) -> Result<()> {
    match p.grid().as_ref() {
        Grid::Interval(g) => {
            csv_line(w, &["t".into(), "u".into(), "v".into()])?;
            for ((t, u), v) in g
                .nodes()
                .iter()
                .zip(res.x0.values())
                .zip(res.y0.values())
            {
                csv_line(
                    w,
                    &[
                        format_sig(*t, digits),
                        format_sig(*u, digits),
                        format_sig(*v, digits),
                    ],
                )?;
            }
        }
        Grid::Disk(g) => {
            csv_line(w, &["x".into(), "y".into(), "u".into(), "v".into()])?;
            for ((pt, u), v) in g
                .points()
                .iter()
                .zip(res.x0.values())
                .zip(res.y0.values())
            {
                csv_line(
                    w,
                    &[
                        format_sig(pt.x, digits),
                        format_sig(pt.y, digits),
                        format_sig(*u, digits),
                        format_sig(*v, digits),
                    ],
                )?;
            }
        }
    }
    Ok(())
}

fn print_solution(
    cfg: &RunConfig,
    res: &EigenPairResult,
    report: &SolutionReport,
    digits: usize,
) {
    println!(
        "problem kind = {}, sign = {}, r1 = {}, r2 = {}",
        cfg.problem.kind.label(),
        res.pattern,
        cfg.problem.r1,
        cfg.problem.r2
    );
    println!("converged = {} after {} iterations", res.converged, res.iterations);
    println!("lambda1 = {}", format_sig(res.lambda1, digits));
    println!("lambda2 = {}", format_sig(res.lambda2, digits));
    println!(
        "|u|_inf = {}, residual1 = {}",
        format_sig(res.x0.sup_norm(), digits),
        format_sig(res.residual1, digits)
    );
    println!(
        "|v|_inf = {}, residual2 = {}",
        format_sig(res.y0.sup_norm(), digits),
        format_sig(res.residual2, digits)
    );
    println!("verification: {}", if report.pass { "PASS" } else { "FAIL" });
}

/// `solve`: run the fixed-point iteration for the configured sign pattern,
/// re-verify the result, print a summary and write the eigenfunctions as
/// CSV.
pub fn cmd_solve(
    cfg: &RunConfig,
    out_override: Option<&Path>,
    quiet: bool,
) -> Result<EigenPairResult> {
    let eff = cfg.effective();
    let problem = eff.build_problem()?;
    let pattern = eff.sign()?;
    let opts = eff.solver_options();
    let res = problem.solve(pattern, &opts)?;
    let report = verify::verify_solution(&problem, &res, SOLVE_VERIFY_TOL)?;
    let digits = eff.precision();

    if !quiet {
        print_solution(&eff, &res, &report, digits);
    }

    let path = solution_csv_path(out_override, &eff, "solution.csv");
    let mut w = writer_for(&path)?;
    write_eigenfunctions(&mut w, &problem, &res, digits)?;
    w.flush()?;
    if !quiet {
        println!("eigenfunctions -> {}", path.display());
    }

    if !report.pass {
        return Err(Error::VerificationFailed(format!("{report:?}")));
    }
    Ok(res)
}

/// What `verify` computed: the rigorous lower-bound route plus a sampled
/// upper probe of the two boundary inf-conditions.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub report: HypothesisReport,
    pub probe1: f64,
    pub probe2: f64,
    pub probe_samples: usize,
}

/// `verify`: evaluate the lower-bound route for the configured hypothesis
/// functions and probe the inf-conditions by sampling. Passing means both
/// bounds are positive and the domination checks hold.
pub fn cmd_verify(
    cfg: &RunConfig,
    seed: u64,
    out_override: Option<&Path>,
    quiet: bool,
) -> Result<VerifyOutcome> {
    let eff = cfg.effective();
    let problem = eff.build_problem()?;
    let hyp = eff.hypothesis_spec()?;
    let report = verify::check_lower_bound_route(&problem, &hyp)?;
    let digits = eff.precision();

    let probe_samples = match eff.problem.kind {
        ProblemKind::Ode => 200,
        ProblemKind::PdeDisk => 32,
    };
    let probe1 = estimate_inf_boundary(&problem, Component::First, probe_samples, seed)?;
    let probe2 = estimate_inf_boundary(&problem, Component::Second, probe_samples, seed)?;

    if !quiet {
        println!(
            "hypothesis check ({}), r1 = {}, r2 = {}",
            eff.problem.kind.label(),
            eff.problem.r1,
            eff.problem.r2
        );
        println!(
            "domination f >= f_lower (sampled): {}",
            if report.domination_ok1 { "OK" } else { "FAIL" }
        );
        println!(
            "domination g >= g_lower (sampled): {}",
            if report.domination_ok2 { "OK" } else { "FAIL" }
        );
        println!("bound1 = {}", format_sig(report.bound1, digits));
        if let Some(g_int) = report.g_lower_integral {
            println!("g_lower integral = {}", format_sig(g_int, digits));
        }
        println!("bound2 = {}", format_sig(report.bound2, digits));
        println!(
            "inf-condition lower bounds positive: {}",
            if report.positive { "yes" } else { "no" }
        );
        println!(
            "sampled inf probe (upper bound, {} samples, seed {}): |T1| min = {}, |T2| min = {}",
            probe_samples,
            seed,
            format_sig(probe1, digits),
            format_sig(probe2, digits)
        );
    }

    if let Some(path) = out_override
        .map(Path::to_path_buf)
        .or_else(|| eff.output.csv_path.as_ref().map(PathBuf::from))
    {
        let mut w = writer_for(&path)?;
        csv_line(&mut w, &["item".into(), "value".into()])?;
        csv_line(&mut w, &["domination_ok1".into(), report.domination_ok1.to_string()])?;
        csv_line(&mut w, &["domination_ok2".into(), report.domination_ok2.to_string()])?;
        csv_line(&mut w, &["bound1".into(), format_sig(report.bound1, digits)])?;
        if let Some(g_int) = report.g_lower_integral {
            csv_line(&mut w, &["g_lower_integral".into(), format_sig(g_int, digits)])?;
        }
        csv_line(&mut w, &["bound2".into(), format_sig(report.bound2, digits)])?;
        csv_line(&mut w, &["positive".into(), report.positive.to_string()])?;
        csv_line(&mut w, &["probe1".into(), format_sig(probe1, digits)])?;
        csv_line(&mut w, &["probe2".into(), format_sig(probe2, digits)])?;
        w.flush()?;
        if !quiet {
            println!("report -> {}", path.display());
        }
    }

    Ok(VerifyOutcome {
        report,
        probe1,
        probe2,
        probe_samples,
    })
}

/// One lattice cell of a radius sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub r1: f64,
    pub r2: f64,
    pub sign: SignPattern,
    pub lambda1: f64,
    pub lambda2: f64,
    pub residual1: f64,
    pub residual2: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SweepRow {
    fn from_result(r1: f64, r2: f64, res: &EigenPairResult) -> Self {
        SweepRow {
            r1,
            r2,
            sign: res.pattern,
            lambda1: res.lambda1,
            lambda2: res.lambda2,
            residual1: res.residual1,
            residual2: res.residual2,
            iterations: res.iterations,
            converged: res.converged,
        }
    }

    fn csv_fields(&self, digits: usize) -> Vec<String> {
        vec![
            format_sig(self.r1, digits),
            format_sig(self.r2, digits),
            self.sign.to_string(),
            format_sig(self.lambda1, digits),
            format_sig(self.lambda2, digits),
            format_sig(self.residual1, digits),
            format_sig(self.residual2, digits),
            self.iterations.to_string(),
            self.converged.to_string(),
        ]
    }
}

pub const SWEEP_CSV_HEADER: [&str; 9] = [
    "r1",
    "r2",
    "sign",
    "lambda1",
    "lambda2",
    "residual1",
    "residual2",
    "iterations",
    "converged",
];

/// `sweep`: solve over the `(r1, r2)` lattice for every sign pattern legal
/// for the problem kind. Cells run in parallel; rows are emitted in the
/// deterministic order r1 outer, r2 inner, sign innermost. Non-converged
/// cells are recorded, not fatal.
pub fn cmd_sweep(
    cfg: &RunConfig,
    out_override: Option<&Path>,
    quiet: bool,
) -> Result<Vec<SweepRow>> {
    let eff = cfg.effective();
    let sweep = eff
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("a [sweep] section is required".into()))?;
    if sweep.r1_steps == 0 || sweep.r2_steps == 0 {
        return Err(Error::Config(
            "sweep step counts must be at least 1".into(),
        ));
    }
    let r1s = verify::linspace(sweep.r1_min, sweep.r1_max, sweep.r1_steps);
    let r2s = verify::linspace(sweep.r2_min, sweep.r2_max, sweep.r2_steps);
    let signs = eff.legal_signs();
    let base = eff.build_problem()?;
    let opts = eff.solver_options();

    let mut cells = Vec::new();
    for &r1 in &r1s {
        for &r2 in &r2s {
            for &sign in &signs {
                cells.push((r1, r2, sign));
            }
        }
    }

    let rows: Result<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(r1, r2, sign)| {
            let p = base.with_radii(r1, r2)?;
            match p.solve(sign, &opts) {
                Ok(res) => Ok(SweepRow::from_result(r1, r2, &res)),
                Err(Error::NonConvergence(res)) => Ok(SweepRow::from_result(r1, r2, &res)),
                Err(e) => Err(e),
            }
        })
        .collect();
    let rows = rows?;

    let digits = eff.precision();
    let path = solution_csv_path(out_override, &eff, "sweep.csv");
    let mut w = writer_for(&path)?;
    csv_line(
        &mut w,
        &SWEEP_CSV_HEADER.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    )?;
    for row in &rows {
        csv_line(&mut w, &row.csv_fields(digits))?;
    }
    w.flush()?;

    if !quiet {
        let converged = rows.iter().filter(|r| r.converged).count();
        println!(
            "sweep: {} cells ({} converged) -> {}",
            rows.len(),
            converged,
            path.display()
        );
    }
    Ok(rows)
}

/// `kernel-table`: dump kernel samples as CSV. Interval problems emit both
/// built-in kernels on the solver grid with columns `kernel,t,s,value`;
/// disk problems emit `kernel,tx,ty,sx,sy,value` with the singular
/// diagonal omitted, on a deliberately small table grid (8 x 16) unless
/// `n_r`/`n_theta` are set explicitly.
pub fn cmd_kernel_table(
    cfg: &RunConfig,
    out_override: Option<&Path>,
    quiet: bool,
) -> Result<()> {
    let path = out_override
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.csv_path.as_ref().map(PathBuf::from));
    let digits = cfg.precision();

    let mut body = String::new();
    let mut emit = |fields: &[String]| {
        let mut line = fields.join(",");
        line.push('\n');
        body.write_str(&line).expect("string write");
    };

    match cfg.problem.kind {
        ProblemKind::Ode => {
            let n = cfg.solver.grid_n.unwrap_or(201);
            let grid = Grid::interval(n)?;
            let nodes = grid.as_interval().expect("interval grid").nodes().to_vec();
            emit(&["kernel".into(), "t".into(), "s".into(), "value".into()]);
            for (kernel, kf) in [
                (KernelId::K1Dirichlet, k1 as fn(f64, f64) -> Result<f64>),
                (KernelId::K2Mixed, k2 as fn(f64, f64) -> Result<f64>),
            ] {
                for &t in &nodes {
                    for &s in &nodes {
                        emit(&[
                            kernel.label().into(),
                            format_sig(t, digits),
                            format_sig(s, digits),
                            format_sig(kf(t, s)?, digits),
                        ]);
                    }
                }
            }
        }
        ProblemKind::PdeDisk => {
            let n_r = cfg.solver.n_r.unwrap_or(8);
            let n_theta = cfg.solver.n_theta.unwrap_or(16);
            let grid = Grid::disk(n_r, n_theta)?;
            let op = NystromOp::assemble(KernelId::DiskLaplacian, &grid)?;
            let points = grid.as_disk().expect("disk grid").points().to_vec();
            emit(&[
                "kernel".into(),
                "tx".into(),
                "ty".into(),
                "sx".into(),
                "sy".into(),
                "value".into(),
            ]);
            for (i, target) in points.iter().enumerate() {
                let row = op.row(i);
                let weights = grid.as_disk().expect("disk grid").weights();
                for (j, source) in points.iter().enumerate() {
                    if i == j {
                        continue; // singular diagonal
                    }
                    emit(&[
                        KernelId::DiskLaplacian.label().into(),
                        format_sig(target.x, digits),
                        format_sig(target.y, digits),
                        format_sig(source.x, digits),
                        format_sig(source.y, digits),
                        format_sig(row[j] / weights[j], digits),
                    ]);
                }
            }
        }
    }

    match path {
        Some(p) => {
            let mut w = writer_for(&p)?;
            w.write_all(body.as_bytes())?;
            w.flush()?;
            if !quiet {
                println!("kernel table -> {}", p.display());
            }
        }
        None => {
            io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

/// Numbers behind the two-by-two demonstration that component-wise
/// eigenvalues can exist where a single scalar eigenvalue does not.
#[derive(Debug, Clone, Copy)]
pub struct RemarkDemo {
    pub t_at_ones: (f64, f64),
    pub common: Option<f64>,
    pub pair: (f64, f64),
    pub residuals: (f64, f64),
}

/// `demo-remark`: for `T(x, y) = (2x + y, x + 3y)` on the positive
/// quadrant with `r1 = r2 = 1`, no scalar `lambda > 0` solves
/// `(1,1) = lambda T(1,1)`, but the component-wise pair `(1/3, 1/4)`
/// solves the system with residuals exactly zero.
pub fn cmd_demo_remark(quiet: bool) -> RemarkDemo {
    let t = |x: f64, y: f64| (2.0 * x + y, x + 3.0 * y);
    let t11 = t(1.0, 1.0);
    let common = common_eigenvalue((1.0, 1.0), t11, 1e-12);
    let pair = (1.0 / t11.0, 1.0 / t11.1);
    let residuals = (
        (1.0 - pair.0 * t11.0).abs(),
        (1.0 - pair.1 * t11.1).abs(),
    );
    if !quiet {
        println!("T(x, y) = (2x + y, x + 3y) on [0,1] x [0,1], r1 = r2 = 1");
        println!("T(1,1) = ({}, {})", t11.0, t11.1);
        match common {
            Some(l) => println!("common eigenvalue: {l}"),
            None => println!(
                "no common eigenvalue: the ratios 1/{} and 1/{} differ",
                t11.0, t11.1
            ),
        }
        println!(
            "component-wise pair: lambda = (1/{}, 1/{}) = ({}, {})",
            t11.0, t11.1, pair.0, pair.1
        );
        println!("residuals = ({}, {})", residuals.0, residuals.1);
    }
    RemarkDemo {
        t_at_ones: t11,
        common,
        pair,
        residuals,
    }
}

/// Exit code for an error, per the CLI contract.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence(_) | Error::VerificationFailed(_) => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_sig_is_stable() {
        assert_eq!(format_sig(0.0234375, 12), "2.34375000000e-2");
        assert_eq!(format_sig(1.0, 12), "1.00000000000e0");
        assert_eq!(format_sig(-0.5, 6), "-5.00000e-1");
        assert_eq!(format_sig(0.0, 12), "0");
    }

    #[test]
    fn demo_remark_values() {
        let demo = cmd_demo_remark(true);
        assert_eq!(demo.t_at_ones, (3.0, 4.0));
        assert_eq!(demo.common, None);
        assert_eq!(demo.pair, (1.0 / 3.0, 0.25));
        // exact zeros: 3 * (1/3) rounds to 1.0 and 4 * (1/4) is exact
        assert_eq!(demo.residuals, (0.0, 0.0));
    }
}
