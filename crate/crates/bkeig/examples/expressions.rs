//! Tour of the expression language used in config files.
//!
//! Nonlinearities, retraction directions and hypothesis lower bounds are
//! all plain text expressions over `t` (interval) or `x`, `y` (disk), the
//! component values `u`, `v`, and the prescribed norms `r1`, `r2`.
//!
//! ```bash
//! cargo run --example expressions
//! ```

use bkeig::expr::{EvalEnv, Expr};

fn main() -> bkeig::Result<()> {
    // precedence: ^ binds tightest and associates right, then unary
    // minus, then * /, then + -
    for src in ["2+3*4^2", "2^3^2", "-2^2", "2^-3", "2*-3"] {
        let e = Expr::parse(src)?;
        println!("{src:>10} = {}", e.eval(&EvalEnv::new())?);
    }

    // the built-in nonlinearities of the two example systems
    let f = Expr::parse("t*(1+u^2*v^2)")?;
    let env = EvalEnv::new().with_t(0.5).with_uv(1.0, -1.0);
    println!("\nf(t=0.5, u=1, v=-1) = {}", f.eval(&env)?);

    let g = Expr::parse("(1+x^2)*exp(u)*(2+cos(v))")?;
    let env = EvalEnv::new().with_xy(0.6, 0.0).with_uv(0.0, 0.0);
    println!("g(x=0.6, y=0, u=v=0) = {}", g.eval(&env)?);

    // printing is parse-stable: the reparsed tree is identical
    let printed = g.to_string();
    assert_eq!(Expr::parse(&printed)?, g);
    println!("\nprinted form: {printed}");

    // errors carry positions and the offending subexpression
    println!("\nerror reporting:");
    for bad in ["2 +* u", "ln(0-1)", "w+1", "min(u)"] {
        let outcome = Expr::parse(bad).and_then(|e| e.eval(&EvalEnv::new().with_uv(1.0, 1.0)));
        println!("  {bad:>8} -> {}", outcome.unwrap_err());
    }
    Ok(())
}
