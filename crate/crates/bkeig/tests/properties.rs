//! Property-based invariants for the value types and quadrature.

use bkeig::cone::ConeSpec;
use bkeig::expr::Expr;
use bkeig::grid::{Grid, GridFn};
use bkeig::kernels::QuadratureRule;
use proptest::prelude::*;

fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, n)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn sup_norm_absolutely_homogeneous(vals in values(37), alpha in -100.0..100.0f64) {
        let grid = Grid::interval(37).unwrap();
        let f = GridFn::new(grid, vals).unwrap();
        let lhs = f.scale(alpha).sup_norm();
        let rhs = alpha.abs() * f.sup_norm();
        prop_assert!(rel_close(lhs, rhs, 1e-14), "{lhs} vs {rhs}");
    }

    #[test]
    fn sup_norm_triangle_inequality(a in values(37), b in values(37)) {
        let grid = Grid::interval(37).unwrap();
        let f = GridFn::new(grid.clone(), a).unwrap();
        let g = GridFn::new(grid, b).unwrap();
        prop_assert!(f.add(&g).unwrap().sup_norm() <= f.sup_norm() + g.sup_norm() + 1e-14);
    }

    #[test]
    fn positive_cone_closed_under_addition(a in prop::collection::vec(0.0..100.0f64, 37),
                                           b in prop::collection::vec(0.0..100.0f64, 37)) {
        let grid = Grid::interval(37).unwrap();
        let f = GridFn::new(grid.clone(), a).unwrap();
        let g = GridFn::new(grid, b).unwrap();
        let cone = ConeSpec::Positive;
        prop_assert!(cone.contains(&f, 0.0).unwrap());
        prop_assert!(cone.contains(&g, 0.0).unwrap());
        prop_assert!(cone.contains(&f.add(&g).unwrap(), 0.0).unwrap());
    }

    #[test]
    fn cones_closed_under_nonnegative_scaling(vals in prop::collection::vec(0.0..100.0f64, 41),
                                              mu in 0.0..50.0f64,
                                              blend in 0.0..1.0f64) {
        let grid = Grid::interval(41).unwrap();
        // blending toward the constant keeps the sample inside the Guo cone
        let ones = GridFn::constant(grid.clone(), 1.0).unwrap();
        let raw = GridFn::new(grid, vals).unwrap();
        let f = raw.scale(1.0 - blend).add(&ones.scale(blend * raw.sup_norm().max(1.0))).unwrap();
        for cone in [ConeSpec::Positive, ConeSpec::guo_quarter(), ConeSpec::WholeSpace] {
            if cone.contains(&f, 0.0).unwrap() {
                prop_assert!(cone.contains(&f.scale(mu), 1e-12).unwrap());
            }
        }
    }

    #[test]
    fn trapezoid_exact_on_linear_functions(a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let grid = Grid::interval(101).unwrap();
        let rule = QuadratureRule::for_grid(&grid);
        let nodes = grid.as_interval().unwrap().nodes().to_vec();
        let f = GridFn::new(grid, nodes.iter().map(|t| a + b * t).collect()).unwrap();
        let exact = a + b / 2.0;
        prop_assert!((rule.integrate(&f).unwrap() - exact).abs() <= 1e-13 * (1.0 + exact.abs()));
    }

    #[test]
    fn builtin_expressions_eval_everywhere_on_their_domains(t in 0.0..1.0f64,
                                                          u in -2.0..2.0f64,
                                                          v in -2.0..2.0f64) {
        let env = bkeig::expr::EvalEnv::new().with_t(t).with_xy(t, t).with_uv(u, v);
        for src in [
            "t*(1+u^2*v^2)",
            "t*exp(u*v)",
            "(1+x^2)*exp(u)*(2+cos(v))",
            "(1+y^2)*(1+v^2)*(2+sin(u))",
        ] {
            let e = Expr::parse(src).unwrap();
            let val = e.eval(&env).unwrap();
            prop_assert!(val.is_finite());
        }
    }
}
