//! Why component-wise eigenvalues, not one scalar?
//!
//! Take the linear map `T(x, y) = (2x + y, x + 3y)` on the positive
//! quadrant of the plane with target norms r1 = r2 = 1. The candidate
//! point (1, 1) maps to (3, 4): no single `lambda > 0` can satisfy
//! `(1,1) = lambda (3,4)` because the component ratios 1/3 and 1/4
//! disagree. The component-wise pair `lambda = (1/3, 1/4)` solves the
//! system exactly.
//!
//! ```bash
//! cargo run --example no_common_eigenvalue
//! ```

use bkeig::verify::common_eigenvalue;

fn main() {
    let t = |x: f64, y: f64| (2.0 * x + y, x + 3.0 * y);
    let x = (1.0, 1.0);
    let tx = t(x.0, x.1);
    println!("T(1,1) = ({}, {})", tx.0, tx.1);

    match common_eigenvalue(x, tx, 1e-12) {
        Some(l) => println!("scalar eigenvalue found: {l} (unexpected!)"),
        None => println!("no scalar lambda: ratios {} and {} differ", x.0 / tx.0, x.1 / tx.1),
    }

    let pair = (x.0 / tx.0, x.1 / tx.1);
    println!("component-wise pair: ({}, {})", pair.0, pair.1);
    println!(
        "residuals: ({}, {})",
        (x.0 - pair.0 * tx.0).abs(),
        (x.1 - pair.1 * tx.1).abs()
    );

    // proportional images do admit a scalar eigenvalue
    let prop = common_eigenvalue((2.0, 2.0), (1.0, 1.0), 1e-12);
    println!("but for x = (2,2), Tx = (1,1): scalar lambda = {prop:?}");
}
