use clifford_core::{CliffordRep, Complex64, Spinor};
use flux_integrals::adm_energy_momentum;
use geometry_catalog::catalog::{conformal_bump, miao_corner, minkowski_slice, trivial_crease};
use transmission_solver::{mass_gap, reduce_radial, solve, GapOptions, RadialGrid, SolverKind};

fn unit(dim: usize) -> Spinor {
    let mut s = Spinor::zeros(dim);
    s[0] = Complex64::new(1.0, 0.0);
    s
}

#[test]
fn flat_trivial_crease_has_zero_gap() {
    let rep = CliffordRep::new(3).unwrap();
    let cd = trivial_crease(&minkowski_slice(3), 2.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(2.0, 100.0, 64).unwrap();
    let sol = solve(&prob, &unit(rep.dim()), &grid, SolverKind::Qr).unwrap();
    let mass = adm_energy_momentum(&cd.plus, &[25.0, 50.0, 100.0], 8).unwrap();
    let g = mass_gap(&prob, &rep, &sol, &mass, &GapOptions::default()).unwrap();
    assert!(g.flux.abs() < 1e-8 && g.bulk.abs() < 1e-8 && g.gap.abs() < 1e-8, "{g:?}");
    assert!(g.flags.is_empty(), "{:?}", g.flags);
}

#[test]
fn miao_corner_gap_is_nonnegative() {
    let rep = CliffordRep::new(3).unwrap();
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(4.0, 400.0, 2048).unwrap();
    let sol = solve(&prob, &unit(rep.dim()), &grid, SolverKind::Qr).unwrap();
    let mass = adm_energy_momentum(&cd.plus, &[100.0, 200.0, 400.0], 8).unwrap();
    let g = mass_gap(&prob, &rep, &sol, &mass, &GapOptions::default()).unwrap();
    let four_pi = 4.0 * std::f64::consts::PI;
    assert!((g.energy - 1.0).abs() < 1e-3);
    assert!((g.flux - four_pi * g.energy).abs() < 1e-9);
    assert!(g.gap >= -1e-4 * g.flux);
    assert!(g.crease_term <= 0.0);
    assert!(g.interior_dec && g.exterior_dec && g.crease_condition && g.gap_nonnegative);
    assert!(g.flags.is_empty());
    assert!(g.identity_defect.abs() < 1e-6 * g.bulk);
    assert!((g.crease_term - g.crease_formula).abs() < 1e-8 * g.crease_term.abs());
}

#[test]
fn dec_violation_is_flagged() {
    let rep = CliffordRep::new(3).unwrap();
    let base = conformal_bump(3, 0.5, 1.0).unwrap();
    let cd = trivial_crease(&base, 3.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(3.0, 200.0, 256).unwrap();
    let sol = solve(&prob, &unit(rep.dim()), &grid, SolverKind::Qr).unwrap();
    let mass = adm_energy_momentum(&cd.plus, &[50.0, 100.0, 200.0], 8).unwrap();
    let g = mass_gap(&prob, &rep, &sol, &mass, &GapOptions::default()).unwrap();
    assert!(!g.interior_dec);
    assert!(g.flags.iter().any(|f| f.contains("dominant energy")));
}

#[test]
fn negative_mass_corner_violates_crease_condition() {
    let rep = CliffordRep::new(3).unwrap();
    let cd = miao_corner(3, -0.5, 4.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let grid = RadialGrid::new(4.0, 400.0, 512).unwrap();
    let sol = solve(&prob, &unit(rep.dim()), &grid, SolverKind::Qr).unwrap();
    let mass = adm_energy_momentum(&cd.plus, &[100.0, 200.0, 400.0], 8).unwrap();
    let g = mass_gap(&prob, &rep, &sol, &mass, &GapOptions::default()).unwrap();
    assert!(g.energy < 0.0);
    assert!(g.interior_dec && g.exterior_dec && !g.crease_condition);
    assert!(g.crease_term > 0.0 && g.gap < 0.0);
    assert!(g.flags.iter().any(|f| f.contains("crease condition")));
    assert!(g.identity_defect.abs() < 1e-6 * g.bulk.abs().max(1.0));
}

#[test]
fn gap_truncation_error_decays_like_inverse_radius() {
    let rep = CliffordRep::new(3).unwrap();
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let mass = adm_energy_momentum(&cd.plus, &[200.0, 400.0, 800.0], 8).unwrap();
    let study = transmission_solver::truncation_study(
        &prob,
        &rep,
        &unit(rep.dim()),
        &mass,
        &[200.0, 400.0, 800.0],
        512,
        &GapOptions::default(),
    )
    .unwrap();
    let p = study.fit.exponent.expect("power-law tail");
    assert!(study.fit.monotone);
    assert!((p - 1.0).abs() < 0.1, "{study:?}");
}
