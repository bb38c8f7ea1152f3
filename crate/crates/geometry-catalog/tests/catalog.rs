use std::f64::consts::PI;

use clifford_core::Error;
use geometry_catalog::catalog::{
    conformal_bump, graph_slice, miao_corner, minkowski_slice, plane_rotation, schwarzschild_area_radius,
    schwarzschild_isotropic, vacuum_models,
};
use geometry_catalog::linalg::{sym_sqrt, Mat};
use geometry_catalog::quadrature::{gauss_gegenbauer, gauss_legendre};
use geometry_catalog::{
    catalog, constraint_fields, fit_decay, hypersurface_geometry, unit_sphere_volume, CatalogSpec,
    InitialData, Orientation, PointGeometry, SphereRule,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, n: usize, r_min: f64, r_max: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let l = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if l > 0.1 && l <= 1.0 {
            let r = rng.gen_range(r_min..r_max);
            return v.iter().map(|a| a * r / l).collect();
        }
    }
}

fn fd_partials(data: &InitialData, x: &[f64], l: usize, h: f64) -> (Mat, Mat) {
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[l] += h;
    xm[l] -= h;
    let fp = data.eval_unchecked(&xp);
    let fm = data.eval_unchecked(&xm);
    ((fp.g - fm.g) / (2.0 * h), (fp.k - fm.k) / (2.0 * h))
}

#[test]
fn minkowski_slice_is_flat_and_static() {
    let d = minkowski_slice(3);
    let x = [0.3, -1.2, 2.0];
    let f = d.eval(&x).unwrap();
    assert_eq!(f.g, Mat::identity(3, 3));
    assert_eq!(f.k, Mat::zeros(3, 3));
    assert!(f.dg.iter().chain(&f.dk).all(|m| m.amax() == 0.0));
}

#[test]
fn schwarzschild_isotropic_closed_form() {
    let d = schwarzschild_isotropic(3, 1.0).unwrap();
    let x = [1.0, 2.0, -2.0];
    let r: f64 = 3.0;
    let expect = (1.0 + 1.0 / (2.0 * r)).powi(4);
    let g = d.g(&x).unwrap();
    assert!((&g - Mat::identity(3, 3) * expect).amax() < 1e-14);
    assert_eq!(d.k(&x).unwrap().amax(), 0.0);
}

#[test]
fn analytic_first_derivatives_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut models: Vec<(InitialData, f64, f64)> =
        vacuum_models(3).unwrap().into_iter().map(|s| (s.data, s.r_min, s.r_max)).collect();
    models.push((conformal_bump(3, 0.5, 2.0).unwrap(), 0.5, 8.0));
    models.push((schwarzschild_isotropic(4, 1.0).unwrap(), 1.0, 8.0));
    models.push((graph_slice(4, 0.5, 4.0).unwrap(), 0.5, 8.0));
    let rot = plane_rotation(3, 0, 2, 0.7) * plane_rotation(3, 0, 1, -0.4);
    models.push((graph_slice(3, 0.5, 4.0).unwrap().rotated(rot).unwrap(), 0.5, 8.0));
    for (d, r0, r1) in models {
        for _ in 0..10 {
            let x = random_point(&mut rng, d.dim(), r0, r1);
            let f = d.eval(&x).unwrap();
            for l in 0..d.dim() {
                let (g1, k1) = fd_partials(&d, &x, l, 1e-5);
                assert!((&f.dg[l] - g1).amax() < 1e-7, "{} dg", d.label);
                assert!((&f.dk[l] - k1).amax() < 1e-7, "{} dk", d.label);
            }
        }
    }
}

#[test]
fn rotated_data_transforms_as_a_tensor() {
    let d = graph_slice(3, 0.5, 4.0).unwrap();
    let rot = plane_rotation(3, 1, 2, 1.1);
    let dr = d.rotated(rot.clone()).unwrap();
    let x = nalgebra::DVector::from_vec(vec![0.7, 1.3, -0.4]);
    let y = &rot * &x;
    let a = d.eval(x.as_slice()).unwrap();
    let b = dr.eval(y.as_slice()).unwrap();
    assert!((&rot * &a.k * rot.transpose() - &b.k).amax() < 1e-14);
    assert!((&rot * &a.g * rot.transpose() - &b.g).amax() < 1e-14);
}

#[test]
fn vacuum_constraints_vanish_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for s in vacuum_models(3).unwrap() {
        for _ in 0..100 {
            let x = random_point(&mut rng, 3, s.r_min, s.r_max);
            let c = constraint_fields(&s.data, &x).unwrap();
            assert!(c.mu.abs() < 1e-6 && c.j_norm < 1e-6, "{} at {x:?}: {c:?}", s.data.label);
        }
    }
}

#[test]
fn schwarzschild_constraint_example() {
    let d = schwarzschild_isotropic(3, 1.0).unwrap();
    let c = constraint_fields(&d, &[3.0, 0.0, 0.0]).unwrap();
    assert!(c.mu.abs() < 1e-7 && c.j_norm < 1e-7);
}

#[test]
fn graph_slice_satisfies_dominant_energy() {
    let d = graph_slice(3, 0.5, 4.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let x = random_point(&mut rng, 3, 0.2, 9.0);
        let c = constraint_fields(&d, &x).unwrap();
        assert!(c.mu >= c.j_norm - 1e-7);
    }
}

#[test]
fn conformal_bump_scalar_curvature_matches_conformal_formula() {
    // R = -8 phi^{-5} Laplacian(phi) for g = phi^4 delta in three dimensions.
    let (a, w) = (0.5, 2.0);
    let d = conformal_bump(3, a, w).unwrap();
    let mut found_negative = false;
    for r in [0.5, 1.0, 2.0, 3.0, 4.0] {
        let x = [0.0, r * 0.6, r * 0.8];
        let e = a * (-r * r / (w * w)).exp();
        let lap = e * (4.0 * r * r / w.powi(4) - 6.0 / (w * w));
        let expect = -8.0 * (1.0 + e).powi(-5) * lap;
        let c = constraint_fields(&d, &x).unwrap();
        assert!((c.scalar_curvature - expect).abs() < 1e-7, "r = {r}");
        found_negative |= c.mu < 0.0;
    }
    assert!(found_negative);
}

#[test]
fn constraints_reject_points_near_the_chart_boundary() {
    let miao = miao_corner(3, 1.0, 4.0).unwrap();
    let err = constraint_fields(&miao.minus, &[0.0, 0.0, 4.0 - 1e-7]).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
}

#[test]
fn flat_unit_sphere_mean_curvature() {
    let d = minkowski_slice(3);
    let hs = hypersurface_geometry(&d, 1.0, &[0.2, 0.3, 0.9], Orientation::Outward).unwrap();
    assert!((hs.mean_curvature - 2.0).abs() < 1e-13);
    let d4 = minkowski_slice(4);
    let hs4 = hypersurface_geometry(&d4, 2.0, &[0.2, 0.3, 0.9, 0.1], Orientation::Outward).unwrap();
    assert!((hs4.mean_curvature - 1.5).abs() < 1e-13);
}

#[test]
fn schwarzschild_area_radius_sphere_mean_curvature() {
    let d = schwarzschild_area_radius(3, 1.0).unwrap();
    let hs = hypersurface_geometry(&d, 4.0, &[0.1, -0.5, 0.3], Orientation::Outward).unwrap();
    assert!((hs.mean_curvature - 0.35355339059327373).abs() < 1e-12);
    let nu2: f64 = {
        let x = &hs.point;
        let g = d.g(x).unwrap();
        let v = nalgebra::DVector::from_column_slice(&hs.nu);
        (v.transpose() * g * &v)[(0, 0)]
    };
    assert!((nu2 - 1.0).abs() < 1e-14);
}

#[test]
fn schwarzschild_isotropic_sphere_mean_curvature() {
    let d = schwarzschild_isotropic(3, 1.0).unwrap();
    for r in [0.8f64, 2.0, 7.0] {
        let psi = 1.0 + 0.5 / r;
        let dpsi = -0.5 / (r * r);
        let expect = psi.powi(-2) * (2.0 / r + 4.0 * dpsi / psi);
        let hs = hypersurface_geometry(&d, r, &[0.3, 0.4, -0.2], Orientation::Outward).unwrap();
        assert!((hs.mean_curvature - expect).abs() < 1e-12);
    }
}

#[test]
fn graph_slice_beta_matches_direct_contraction() {
    let d = graph_slice(3, 0.5, 4.0).unwrap();
    let omega = [0.48, -0.6, 0.64];
    let r0 = 3.0;
    let hs = hypersurface_geometry(&d, r0, &omega, Orientation::Outward).unwrap();
    let x: Vec<f64> = omega.iter().map(|v| r0 * v).collect();
    let g = d.g(&x).unwrap();
    let k = d.k(&x).unwrap();
    let gi = g.clone().try_inverse().unwrap();
    let xh = nalgebra::DVector::from_column_slice(&omega);
    let up = &gi * &xh;
    let nu = &up / (xh.dot(&up)).sqrt();
    for (t, b) in hs.tangents.iter().zip(&hs.beta) {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += k[(i, j)] * nu[i] * t[j];
            }
        }
        assert!((s - b).abs() < 1e-14);
    }
    assert!(hs.beta.iter().any(|b| b.abs() > 1e-6) || hs.trace_k.abs() > 1e-6);
}

#[test]
fn orientation_flip_negates_mean_curvature_and_beta() {
    let d = graph_slice(3, 0.5, 4.0).unwrap();
    let rot = plane_rotation(3, 0, 2, 0.3);
    let d = d.rotated(rot).unwrap();
    let om = [0.3, 0.5, -0.81];
    let a = hypersurface_geometry(&d, 2.5, &om, Orientation::Outward).unwrap();
    let b = hypersurface_geometry(&d, 2.5, &om, Orientation::Inward).unwrap();
    assert!((a.mean_curvature + b.mean_curvature).abs() < 1e-13);
    assert!((a.trace_k - b.trace_k).abs() < 1e-13);
    for (x, y) in a.beta.iter().zip(&b.beta) {
        assert!((x + y).abs() < 1e-14);
    }
    assert_eq!(a.gamma, b.gamma);
}

#[test]
fn miao_corner_induced_metrics_match() {
    let cd = miao_corner(3, 1.0, 4.0).unwrap();
    let rule = SphereRule::new(3, 6).unwrap();
    assert!(rule.len() >= 64);
    for p in &rule.points {
        let a = hypersurface_geometry(&cd.minus, 4.0, p, Orientation::Outward).unwrap();
        let b = hypersurface_geometry(&cd.plus, 4.0, p, Orientation::Outward).unwrap();
        for (ra, rb) in a.gamma.iter().zip(&b.gamma) {
            for (u, v) in ra.iter().zip(rb) {
                assert!((u - v).abs() < 1e-12);
            }
        }
    }
    assert!(cd.matching_defect(6).unwrap() < 1e-12);
}

#[test]
fn graph_slice_with_zero_amplitude_is_minkowski() {
    let a = graph_slice(3, 0.0, 4.0).unwrap();
    let b = minkowski_slice(3);
    for x in [[0.0, 0.0, 0.0], [1.0, 2.0, 3.0], [-0.5, 0.1, 0.0]] {
        let fa = a.eval(&x).unwrap();
        let fb = b.eval(&x).unwrap();
        assert_eq!(fa.g, fb.g);
        assert_eq!(fa.k, fb.k);
        assert_eq!(fa.dg, fb.dg);
        assert_eq!(fa.dk, fb.dk);
    }
    let ha = hypersurface_geometry(&a, 2.0, &[0.0, 0.6, 0.8], Orientation::Outward).unwrap();
    let hb = hypersurface_geometry(&b, 2.0, &[0.0, 0.6, 0.8], Orientation::Outward).unwrap();
    assert_eq!(ha.mean_curvature, hb.mean_curvature);
    assert_eq!(ha.beta, hb.beta);
}

#[test]
fn decay_fit_examples() {
    let iso = schwarzschild_isotropic(3, 1.0).unwrap();
    let fit = fit_decay(&iso, &[20.0, 40.0, 80.0, 160.0]).unwrap();
    let q = fit.q_est.unwrap();
    assert!((0.95..=1.05).contains(&q), "q = {q}");

    let flat = fit_decay(&minkowski_slice(3), &[20.0, 40.0, 80.0]).unwrap();
    assert!(flat.exact_flat && flat.q_est.is_none());

    let miao = miao_corner(3, 1.0, 4.0).unwrap();
    let fit = fit_decay(&miao.plus, &[20.0, 40.0, 80.0]).unwrap();
    assert!(fit.agrees_with(1.0, 0.1));

    let err = fit_decay(&iso, &[20.0, 40.0]).unwrap_err();
    assert!(matches!(err, Error::Argument(_)));
}

#[test]
fn sphere_rule_examples() {
    let rule = SphereRule::new(3, 12).unwrap();
    let area = rule.integrate(2.0, |_| 1.0).unwrap();
    assert!((area - 16.0 * PI).abs() < 1e-12);
    let odd = rule.integrate(2.0, |x| x[2] / 2.0).unwrap();
    assert!(odd.abs() < 1e-12);
    let second = rule.integrate(1.0, |x| x[2] * x[2]).unwrap();
    assert!((second - 4.0 * PI / 3.0).abs() < 1e-10);
    // n = 3 points are (sin t cos p, sin t sin p, cos t).
    for (p, a) in rule.points.iter().zip(&rule.angles) {
        let (t, ph) = (a[0], a[1]);
        assert!((p[0] - t.sin() * ph.cos()).abs() < 1e-15);
        assert!((p[2] - t.cos()).abs() < 1e-15);
    }
}

#[test]
fn higher_dimensional_sphere_moments() {
    for n in 3..=6 {
        let rule = SphereRule::new(n, 8).unwrap();
        let vol = rule.integrate(1.0, |_| 1.0).unwrap();
        assert!((vol - unit_sphere_volume(n)).abs() < 1e-12, "n = {n}");
        // Integral of x_i^2 over S^{n-1} equals vol / n for every axis.
        for i in 0..n {
            let m = rule.integrate(1.0, |x| x[i] * x[i]).unwrap();
            assert!((m - vol / n as f64).abs() < 1e-12, "n = {n}, i = {i}");
        }
    }
    assert!((unit_sphere_volume(4) - 2.0 * PI * PI).abs() < 1e-13);
}

#[test]
fn gauss_rules_are_exact_on_polynomials() {
    let (x, w) = gauss_legendre(10);
    for deg in 0..20 {
        let q: f64 = x.iter().zip(&w).map(|(t, v)| v * t.powi(deg)).sum();
        let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
        assert!((q - exact).abs() < 1e-14);
    }
    // Weight sqrt(1 - t^2): integral of t^2 is pi/8.
    let (x, w) = gauss_gegenbauer(6, 0.5);
    let q: f64 = x.iter().zip(&w).map(|(t, v)| v * t * t).sum();
    assert!((q - PI / 8.0).abs() < 1e-14);
}

#[test]
fn catalog_errors() {
    let horizon = catalog(&CatalogSpec::new("miao_corner").with("m", 2.0).with("rho0", 4.0)).unwrap_err();
    assert!(matches!(horizon, Error::Domain(_)));
    let unknown = catalog(&CatalogSpec::new("kerr")).unwrap_err();
    assert!(matches!(unknown, Error::Config(_)));
    let bad_key = catalog(&CatalogSpec::new("schwarzschild_isotropic").with("mass", 1.0)).unwrap_err();
    assert!(matches!(bad_key, Error::Config(_)));
    let steep = catalog(&CatalogSpec::new("graph_slice").with("a", 10.0).with("w", 1.0)).unwrap_err();
    assert!(matches!(steep, Error::InvalidData(_)));
}

#[test]
fn catalog_builds_every_name() {
    for name in geometry_catalog::catalog::CATALOG_NAMES {
        catalog(&CatalogSpec::new(name)).unwrap();
    }
    let rot = catalog(
        &CatalogSpec::new("rotated_crease")
            .with("f1", 0.2)
            .with_base(CatalogSpec::new("miao_corner").with("m", 1.0).with("rho0", 4.0)),
    )
    .unwrap()
    .into_creased()
    .unwrap();
    assert_eq!(rot.f.c1, 0.2);
    assert!(!rot.is_spherically_symmetric());
}

#[test]
fn frame_is_orthonormal_and_connection_is_metric_and_torsion_free() {
    let d = graph_slice(3, 0.5, 4.0).unwrap().rotated(plane_rotation(3, 0, 1, 0.5)).unwrap();
    let iso = schwarzschild_isotropic(3, 1.0).unwrap();
    let x = vec![1.1, -0.7, 1.9];
    for data in [&d, &iso] {
        let pg = PointGeometry::new(data, &x).unwrap();
        let e = &pg.frame;
        let gram = e * &pg.fields.g * e.transpose();
        assert!((gram - Mat::identity(3, 3)).amax() < 1e-14);
        for w in &pg.omega {
            assert!((w + w.transpose()).amax() < 1e-13);
        }
        // [e_i, e_j] = nabla_{e_i} e_j - nabla_{e_j} e_i, bracket by central differences.
        let h = 1e-5;
        let frame_at = |y: &[f64]| PointGeometry::new(data, y).unwrap().frame;
        let de: Vec<Mat> = (0..3)
            .map(|l| {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[l] += h;
                xm[l] -= h;
                (frame_at(&xp) - frame_at(&xm)) / (2.0 * h)
            })
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                // bracket^b = e_i^a d_a e_j^b - e_j^a d_a e_i^b
                let br: Vec<f64> = (0..3)
                    .map(|b| (0..3).map(|a| e[(i, a)] * de[a][(j, b)] - e[(j, a)] * de[a][(i, b)]).sum())
                    .collect();
                let brf = pg.vector_to_frame(&br);
                for l in 0..3 {
                    let tor = pg.omega[i][(j, l)] - pg.omega[j][(i, l)];
                    assert!((tor - brf[l]).abs() < 1e-8);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn symmetric_square_root_and_derivative(a in proptest::collection::vec(-0.4f64..0.4, 9),
                                            b in proptest::collection::vec(-1.0f64..1.0, 9)) {
        let m = Mat::from_vec(3, 3, a);
        let g = Mat::identity(3, 3) + (&m + m.transpose()) * 0.5;
        let bm = Mat::from_vec(3, 3, b);
        let dg = (&bm + bm.transpose()) * 0.5;
        let s = sym_sqrt(&g, std::slice::from_ref(&dg)).unwrap();
        prop_assert!((&s.sqrt * &s.sqrt - &g).amax() < 1e-13);
        prop_assert!((&s.sqrt * &s.inv_sqrt - Mat::identity(3, 3)).amax() < 1e-13);
        let h = 1e-6;
        let sp = sym_sqrt(&(&g + &dg * h), &[]).unwrap().sqrt;
        let sm = sym_sqrt(&(&g - &dg * h), &[]).unwrap().sqrt;
        prop_assert!(((sp - sm) / (2.0 * h) - &s.d_sqrt[0]).amax() < 1e-7);
    }

    #[test]
    fn mean_curvature_is_rotation_invariant(angle in 0.0f64..6.28, t in 0.1f64..3.0, p in 0.0f64..6.28) {
        let d = graph_slice(3, 0.5, 4.0).unwrap();
        let rot = plane_rotation(3, 0, 2, angle);
        let dr = d.rotated(rot.clone()).unwrap();
        let om = nalgebra::DVector::from_vec(vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]);
        let a = hypersurface_geometry(&d, 2.0, om.as_slice(), Orientation::Outward).unwrap();
        let rom = &rot * &om;
        let b = hypersurface_geometry(&dr, 2.0, rom.as_slice(), Orientation::Outward).unwrap();
        prop_assert!((a.mean_curvature - b.mean_curvature).abs() < 1e-12);
        prop_assert!((a.trace_k - b.trace_k).abs() < 1e-12);
    }
}
