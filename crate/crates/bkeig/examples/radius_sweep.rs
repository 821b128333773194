//! Sweep the prescribed norms (r1, r2) over a lattice.
//!
//! Each lattice cell is an independent eigenpair computation; the
//! assembled kernels are shared across cells, and cells run in parallel
//! with deterministic output order. For the interval system every cell is
//! solved for both legal sign patterns, giving the two families of
//! eigenvalue pairs (positive/positive and positive/negative).
//!
//! ```bash
//! cargo run --example radius_sweep
//! ```

use bkeig::cli::cmd_sweep;
use bkeig::config::{RunConfig, SweepSection};

fn main() -> bkeig::Result<()> {
    let mut cfg = RunConfig::preset("ode-example")?;
    cfg.sweep = Some(SweepSection {
        r1_min: 0.5,
        r1_max: 2.0,
        r1_steps: 4,
        r2_min: 0.5,
        r2_max: 2.0,
        r2_steps: 4,
    });

    let out = std::env::temp_dir().join("bkeig_radius_sweep.csv");
    let rows = cmd_sweep(&cfg, Some(&out), true)?;

    println!("r1      r2      sign  lambda1       lambda2       iters");
    for row in &rows {
        println!(
            "{:<7.3} {:<7.3} {}    {:<13.6} {:<13.6} {}",
            row.r1, row.r2, row.sign, row.lambda1, row.lambda2, row.iterations
        );
    }
    let converged = rows.iter().filter(|r| r.converged).count();
    println!("\n{converged}/{} cells converged; CSV at {}", rows.len(), out.display());
    Ok(())
}
