use clifford_core::{CliffordRep, Complex64, Error, HyperbolicRotation, Spinor, spinor_rotation};
use flux_integrals::{crease_boundary_terms, SpinorField};
use geometry_catalog::catalog::{graph_slice, miao_corner, minkowski_slice, rotated_crease, trivial_crease};
use geometry_catalog::AngleFunction;
use transmission_solver::band::{banded_qr, cgls, BandRow, SymBand};
use transmission_solver::reduce::{amplitude_basis, SideProfile};
use transmission_solver::{
    assemble, reduce_radial, solve, transmission_matrix, truncation_residual, RadialGrid, Side, SolverKind,
};

fn rep3() -> CliffordRep {
    CliffordRep::new(3).unwrap()
}

fn unit_spinor(dim: usize) -> Spinor {
    let mut s = Spinor::zeros(dim);
    s[0] = Complex64::new(0.6, 0.0);
    s[1] = Complex64::new(0.0, 0.8);
    s
}

#[test]
fn reduction_matches_full_operator_on_miao_corner() {
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    let prob = reduce_radial(&cd, &rep3(), 0).unwrap();
    for o in &prob.oracle {
        assert_eq!(o.samples, 20);
        assert!(o.max_deviation <= 1e-8, "{}", o.max_deviation);
    }
}

#[test]
fn reduction_matches_full_operator_with_curvature_terms() {
    // Graph slice: nonzero k and nontrivial metric on both sides.
    let base = graph_slice(3, 0.4, 1.0).unwrap();
    let cd = rotated_crease(&trivial_crease(&base, 1.5).unwrap(), AngleFunction::constant(0.3));
    let prob = reduce_radial(&cd, &rep3(), 0).unwrap();
    assert!(prob.oracle.iter().all(|o| o.max_deviation <= 1e-8));
    let c = prob.plus.coefficients(1.7);
    assert!(c.trk.abs() > 1e-3 && c.v.abs() > 1e-3);
}

#[test]
fn reduction_rejects_unsupported_requests() {
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    assert!(matches!(reduce_radial(&cd, &rep3(), 1), Err(Error::Unsupported(_))));
    let bent = rotated_crease(&cd, AngleFunction::cos_theta(0.0, 0.2));
    assert!(matches!(reduce_radial(&bent, &rep3(), 0), Err(Error::Unsupported(_))));
    assert!(matches!(reduce_radial(&cd, &CliffordRep::new(4).unwrap(), 0), Err(Error::Argument(_))));
}

#[test]
fn flat_reduced_operator_annihilates_constant_mode() {
    let cd = trivial_crease(&minkowski_slice(3), 2.0).unwrap();
    let prob = reduce_radial(&cd, &rep3(), 0).unwrap();
    for r in [0.3, 1.0, 5.0] {
        let side = if r < 2.0 { &prob.minus } else { &prob.plus };
        let e = side.coefficients(r).apply(3, r, &[1.0, 0.0, 0.0, 0.0], &[0.0; 4]);
        assert!(e.iter().all(|v| v.abs() < 1e-15));
    }
}

#[test]
fn schwarzschild_coefficients_match_closed_form() {
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    let side = SideProfile::from_data(&cd.plus).unwrap();
    for r in [5.0, 10.0] {
        let c = side.coefficients(r);
        let b = (1.0 - 2.0 / r).sqrt();
        assert!((c.a - 1.0).abs() < 1e-14);
        assert!((c.b - b).abs() < 1e-14);
        assert!((c.v - 2.0 * (b - 1.0) / r).abs() < 1e-14);
        assert_eq!(c.trk, 0.0);
    }
}

#[test]
fn transmission_block_equals_spinor_rotation() {
    let rep = rep3();
    let f = 2f64.ln();
    let cd = rotated_crease(&miao_corner(3, 1.0, 4.0).unwrap(), AngleFunction::constant(f));
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(4.0, 40.0, 64).unwrap();
    let asm = assemble(&prob, &grid, 1.0).unwrap();
    let t = asm.transmission_block();
    assert_eq!(t, transmission_matrix(f));
    let s = spinor_rotation(&rep, &HyperbolicRotation::new(f), 3).unwrap();
    let basis = amplitude_basis(&rep, &[0.0, 0.0, 1.0]);
    for l in 0..4 {
        let lhs = &s * &basis[l];
        let mut rhs = basis[0].clone() * Complex64::new(0.0, 0.0);
        for c in 0..4 {
            rhs += &basis[c] * Complex64::new(t[c][l], 0.0);
        }
        assert!((lhs - rhs).camax() < 1e-15);
    }
}

#[test]
fn trivial_crease_transmission_is_trace_continuity() {
    let cd = trivial_crease(&minkowski_slice(3), 2.0).unwrap();
    let prob = reduce_radial(&cd, &rep3(), 0).unwrap();
    let grid = RadialGrid::new(2.0, 50.0, 64).unwrap();
    let asm = assemble(&prob, &grid, 1.0).unwrap();
    let t = asm.transmission_block();
    for (i, row) in t.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert_eq!(*v, if i == j { 1.0 } else { 0.0 });
        }
    }
    assert_eq!(asm.ncols, asm.rows.len());
}

#[test]
fn grid_rejects_coarse_or_inverted_input() {
    assert!(matches!(RadialGrid::new(1.0, 10.0, 32), Err(Error::Argument(_))));
    assert!(matches!(RadialGrid::new(1.0, 0.5, 128), Err(Error::Argument(_))));
}

#[test]
fn staggered_scheme_is_fourth_order() {
    let cd = rotated_crease(&trivial_crease(&graph_slice(3, 0.4, 1.0).unwrap(), 1.5).unwrap(), AngleFunction::constant(0.3));
    let prob = reduce_radial(&cd, &rep3(), 0).unwrap();
    let exact = |side: Side, r: f64| match side {
        Side::Minus => (
            [r.cos(), r.sin() / (1.0 + r), (-0.3 * r).exp(), r / (1.0 + r * r)],
            [
                -r.sin(),
                (r.cos() * (1.0 + r) - r.sin()) / (1.0 + r).powi(2),
                -0.3 * (-0.3 * r).exp(),
                (1.0 - r * r) / (1.0 + r * r).powi(2),
            ],
        ),
        Side::Plus => (
            [1.0 + 1.0 / r, r.powi(-2), 1.0 / (1.0 + r), r / (1.0 + r * r)],
            [-r.powi(-2), -2.0 * r.powi(-3), -1.0 / (1.0 + r).powi(2), (1.0 - r * r) / (1.0 + r * r).powi(2)],
        ),
    };
    let res: Vec<_> = [64, 128, 256, 512]
        .iter()
        .map(|&n| truncation_residual(&prob, &RadialGrid::new(1.5, 30.0, n).unwrap(), exact))
        .collect();
    let l2: Vec<f64> = res.iter().map(|t| t.weighted_l2).collect();
    assert!(l2.windows(2).all(|w| w[0] / w[1] > 14.0 && w[0] / w[1] < 18.0), "{l2:?}");
    // The 1/r coupling at the first interval costs one order in the maximum norm.
    let mx: Vec<f64> = res.iter().map(|t| t.max).collect();
    assert!(mx[2] / mx[3] > 7.0, "{mx:?}");
}

#[test]
fn flat_trivial_crease_reproduces_constant_spinor() {
    let rep = rep3();
    let cd = trivial_crease(&minkowski_slice(3), 2.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(2.0, 200.0, 128).unwrap();
    let sol = solve(&prob, &unit_spinor(rep.dim()), &grid, SolverKind::Qr).unwrap();
    assert!(sol.max_deviation_from_constant() <= 1e-8, "{}", sol.max_deviation_from_constant());
    assert!(sol.interior_residual.iter().all(|v| *v < 1e-10));
}

#[test]
fn zero_datum_gives_zero_solution() {
    let rep = rep3();
    let cd = rotated_crease(&miao_corner(3, 1.0, 4.0).unwrap(), AngleFunction::constant(0.4));
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(4.0, 100.0, 128).unwrap();
    let sol = solve(&prob, &Spinor::zeros(rep.dim()), &grid, SolverKind::Qr).unwrap();
    assert_eq!(sol.max_amplitude(), 0.0);
    assert!(sol.pivot_ratio.unwrap() > 1e-13);
}

#[test]
fn miao_corner_solution_diagnostics() {
    let rep = rep3();
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(4.0, 400.0, 2048).unwrap();
    let psi = unit_spinor(rep.dim());
    let sol = solve(&prob, &psi, &grid, SolverKind::Qr).unwrap();
    assert!(sol.interior_residual.iter().all(|v| *v <= 1e-6), "{:?}", sol.interior_residual);
    assert!(sol.transmission_defect <= 1e-10);
    assert_eq!(sol.origin_defect, 0.0);
    assert!(sol.asymptotic_defect < 1e-14);

    // Spinor traces built from the stored amplitudes satisfy the transmission condition.
    let fm = sol.field(&rep, Side::Minus);
    let fp = sol.field(&rep, Side::Plus);
    let terms = crease_boundary_terms(&cd, &rep, &fm, &fp, 8).unwrap();
    assert!(terms.transmission_defect < 1e-10);
    let x = [0.0, 0.0, 4.0];
    assert!((fm.value(&x) - fp.value(&x)).camax() < 1e-12);
}

#[test]
fn cgls_agrees_with_qr_and_decreases_monotonically() {
    let rep = rep3();
    let cd = rotated_crease(&miao_corner(3, 1.0, 4.0).unwrap(), AngleFunction::constant(0.2));
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(4.0, 40.0, 64).unwrap();
    let psi = unit_spinor(rep.dim());
    let qr = solve(&prob, &psi, &grid, SolverKind::Qr).unwrap();
    let cg = solve(&prob, &psi, &grid, SolverKind::Cgls { tol: 1e-12, max_iter: 200_000 }).unwrap();
    assert!(cg.iteration_log.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    let diff = qr
        .u_plus
        .iter()
        .zip(&cg.u_plus)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    assert!(diff < 1e-6, "{diff}");
}

#[test]
fn cgls_reports_history_when_capped() {
    let rep = rep3();
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(4.0, 40.0, 64).unwrap();
    let err = solve(&prob, &unit_spinor(rep.dim()), &grid, SolverKind::Cgls { tol: 1e-14, max_iter: 3 }).unwrap_err();
    match err {
        Error::Numeric(msg) => assert!(msg.contains("residuals")),
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn banded_qr_detects_rank_deficiency() {
    let rows = vec![
        BandRow { first: 0, values: vec![1.0, 2.0], rhs: 1.0 },
        BandRow { first: 0, values: vec![2.0, 4.0], rhs: 2.0 },
    ];
    assert!(matches!(banded_qr(2, &rows), Err(Error::Numeric(_))));
    let rows = vec![
        BandRow { first: 0, values: vec![2.0, 1.0], rhs: 3.0 },
        BandRow { first: 0, values: vec![1.0, 3.0], rhs: 5.0 },
        BandRow { first: 1, values: vec![1.0], rhs: 1.5 },
    ];
    let qr = banded_qr(2, &rows).unwrap();
    let cg = cgls(2, &rows, 1e-14, 100).unwrap();
    for (a, b) in qr.solution.iter().zip(&cg.solution) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn band_cholesky_solves_tridiagonal_system() {
    let n = 50;
    let mut a = SymBand::zeros(n, 1);
    for i in 0..n {
        a.add(i, i, 2.0);
        if i > 0 {
            a.add(i, i - 1, -1.0);
        }
    }
    let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
    let b = a.mul(&x);
    let y = a.cholesky().unwrap().solve(&b);
    assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-11));
}
