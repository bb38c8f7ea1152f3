use clifford_core::CliffordRep;
use geometry_catalog::catalog::{graph_slice, miao_corner, minkowski_slice, trivial_crease};
use transmission_solver::poincare::{gradient_density, gradient_density_at};
use transmission_solver::{poincare_estimate, reduce_radial, RadialGrid};

#[test]
fn flat_estimate_is_positive_and_stable_under_refinement() {
    let rep = CliffordRep::new(3).unwrap();
    let cd = trivial_crease(&minkowski_slice(3), 2.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let a = poincare_estimate(&prob, &rep, &RadialGrid::new(2.0, 200.0, 256).unwrap()).unwrap();
    let b = poincare_estimate(&prob, &rep, &RadialGrid::new(2.0, 200.0, 512).unwrap()).unwrap();
    assert!(a.lambda > 0.0 && b.lambda > 0.0);
    assert!((a.lambda / b.lambda - 1.0).abs() < 0.2);
    assert!((a.constant * a.lambda - 1.0).abs() < 1e-12);
}

#[test]
fn schwarzschild_corner_estimate_is_positive() {
    let rep = CliffordRep::new(3).unwrap();
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    let prob = reduce_radial(&cd, &rep, 0).unwrap();
    let e = poincare_estimate(&prob, &rep, &RadialGrid::new(4.0, 400.0, 256).unwrap()).unwrap();
    assert!(e.lambda > 0.0 && e.constant.is_finite());
}

#[test]
fn small_second_fundamental_form_perturbs_estimate_by_order_rk() {
    let rep = CliffordRep::new(3).unwrap();
    let grid = RadialGrid::new(2.0, 200.0, 256).unwrap();
    let lambda = |a: f64| {
        let cd = trivial_crease(&graph_slice(3, a, 1.0).unwrap(), 2.0).unwrap();
        let prob = reduce_radial(&cd, &rep, 0).unwrap();
        let rk = (1..4000)
            .map(|i| {
                let r = i as f64 * 0.005;
                let c = prob.plus.profile.curvature(r);
                r * (c[0].abs() + c[2].abs())
            })
            .fold(0.0, f64::max);
        (poincare_estimate(&prob, &rep, &grid).unwrap().lambda, rk)
    };
    let (l0, _) = lambda(0.0);
    for a in [0.01, 0.02, 0.04, 0.08] {
        let (l, rk) = lambda(a);
        assert!(rk > 0.0);
        assert!((l - l0).abs() <= l0 * rk, "a = {a}: {l} vs {l0}, |rk| = {rk}");
    }
}

#[test]
fn gradient_density_is_the_same_in_every_direction() {
    let rep = CliffordRep::new(3).unwrap();
    let data = graph_slice(3, 0.3, 1.0).unwrap();
    let g0 = gradient_density(&data, &rep, 1.3).unwrap();
    for dir in [[1.0, 0.0, 0.0], [0.3, -0.5, 0.2], [-0.7, 0.1, -0.4]] {
        let l = (dir.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let xh: Vec<f64> = dir.iter().map(|v| v / l).collect();
        let g1 = gradient_density_at(&data, &rep, 1.3, &xh).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                assert!((g0[a][b] - g1[a][b]).abs() < 1e-10, "{a} {b}: {} {}", g0[a][b], g1[a][b]);
            }
        }
    }
    for k in 4..8 {
        assert!(g0[k][k] > 0.0);
    }
}
