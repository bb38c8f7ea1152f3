use proptest::prelude::*;
use transmission_solver::band::{banded_qr, cgls, BandRow};
use transmission_solver::grid::lagrange_weights;
use transmission_solver::reduce::apply4;
use transmission_solver::transmission_matrix;

proptest! {
    #[test]
    fn transmission_matrices_compose(f1 in -3.0f64..3.0, f2 in -3.0f64..3.0, u in prop::array::uniform4(-1.0f64..1.0)) {
        let a = apply4(&transmission_matrix(f1), &apply4(&transmission_matrix(f2), &u));
        let b = apply4(&transmission_matrix(f1 + f2), &u);
        let scale = (f1.abs() + f2.abs()).exp();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-13 * scale);
        }
    }

    #[test]
    fn lagrange_weights_reproduce_cubics(c in prop::array::uniform4(-2.0f64..2.0), x in 0.0f64..5.0) {
        let xs = [0.0, 1.1, 2.0, 3.5, 5.0];
        let p = |t: f64| c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t;
        let dp = |t: f64| c[1] + 2.0 * c[2] * t + 3.0 * c[3] * t * t;
        let (w, dw) = lagrange_weights(&xs, x);
        let v: f64 = w.iter().zip(&xs).map(|(a, t)| a * p(*t)).sum();
        let d: f64 = dw.iter().zip(&xs).map(|(a, t)| a * p(*t)).sum();
        prop_assert!((v - p(x)).abs() < 1e-10);
        prop_assert!((d - dp(x)).abs() < 1e-9);
    }

    #[test]
    fn qr_and_cgls_agree_on_banded_systems(
        diag in prop::collection::vec(2.0f64..4.0, 12),
        off in prop::collection::vec(-1.0f64..1.0, 24),
        rhs in prop::collection::vec(-1.0f64..1.0, 18),
    ) {
        let n = 12;
        let mut rows = Vec::new();
        for i in 0..n {
            let mut values = vec![diag[i]];
            if i + 1 < n { values.push(off[i]); }
            rows.push(BandRow { first: i, values, rhs: rhs[i] });
        }
        for i in 0..6 {
            rows.push(BandRow { first: 2 * i, values: vec![off[12 + i], off[18 + i]], rhs: rhs[12 + i] });
        }
        let qr = banded_qr(n, &rows).unwrap();
        let cg = cgls(n, &rows, 1e-13, 500).unwrap();
        for (a, b) in qr.solution.iter().zip(&cg.solution) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        prop_assert!(cg.residual_log.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        prop_assert!((cg.residual_log.last().unwrap() - qr.residual).abs() < 1e-9);
    }
}
