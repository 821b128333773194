//! Build a system from scratch and exercise all four sign patterns.
//!
//! When both components range over the whole space, the auxiliary map can
//! be prefixed with any of the four sign combinations, each yielding its
//! own eigenpair: `(+,+)`, `(+,-)`, `(-,+)`, `(-,-)` with the eigenvalue
//! signs to match. The nonlinearities here are bounded away from zero so
//! the boundary inf-conditions hold for free.
//!
//! ```bash
//! cargo run --example custom_problem
//! ```

use bkeig::cone::{ConeSpec, SignPattern};
use bkeig::expr::Expr;
use bkeig::grid::Grid;
use bkeig::kernels::KernelId;
use bkeig::problem::ProblemSpec;
use bkeig::solver::SolverOptions;

fn main() -> bkeig::Result<()> {
    let problem = ProblemSpec {
        grid: Grid::interval(201)?,
        kernel1: KernelId::K1Dirichlet,
        kernel2: KernelId::K2Mixed,
        f: Expr::parse("2 + sin(u) + cos(v)")?,
        g: Expr::parse("3 + sin(t) + sin(u)*cos(v)")?,
        r1: 1.0,
        r2: 0.5,
        cone1: ConeSpec::WholeSpace,
        cone2: ConeSpec::WholeSpace,
        h1: None,
        h2: None,
    }
    .build()?;

    let opts = SolverOptions::default();
    println!("pattern   lambda1        lambda2        iterations");
    for pattern in SignPattern::ALL {
        let res = problem.solve(pattern, &opts)?;
        println!(
            "{}        {:+.8}    {:+.8}    {}",
            pattern, res.lambda1, res.lambda2, res.iterations
        );
        assert_eq!(res.lambda1 > 0.0, pattern.sigma1 > 0);
        assert_eq!(res.lambda2 > 0.0, pattern.sigma2 > 0);
    }
    println!("\neigenvalue signs follow the requested pattern in every case");
    Ok(())
}
