use clifford_core::suite::identity_suite;
use clifford_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_spinor(rng: &mut ChaCha8Rng, dim: usize) -> Spinor {
    Spinor::from_fn(dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

#[test]
fn n3_dimension_and_anticommutators() {
    let rep = build_rep(3).unwrap();
    assert_eq!(rep.dim(), 4);
    let id = rep.identity();
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { 2.0 } else { 0.0 };
            let r = rep.gamma(i) * rep.gamma(j) + rep.gamma(j) * rep.gamma(i) + &id * c(d);
            assert!(max_abs(&r) < 1e-14);
        }
    }
}

#[test]
fn n3_tau_squared_exact() {
    let rep = build_rep(3).unwrap();
    assert_eq!(rep.tau() * rep.tau(), rep.identity());
}

#[test]
fn n4_dimension_and_spot_check() {
    let rep = build_rep(4).unwrap();
    assert_eq!(rep.dim(), 8);
    let r = rep.gamma(1) * rep.gamma(3) + rep.gamma(3) * rep.gamma(1);
    assert!(max_abs(&r) < 1e-14);
}

#[test]
fn dimensions_up_to_six() {
    for (n, dim) in [(3, 4), (4, 8), (5, 8), (6, 16)] {
        let rep = build_rep(n).unwrap();
        assert_eq!(rep.dim(), dim);
        for r in clifford_core::suite::structure_residuals(&rep) {
            assert!(r.residual < 1e-14, "{} n={} {}", r.name, n, r.residual);
        }
    }
}

#[test]
fn unsupported_dimension_is_config_error() {
    assert!(matches!(build_rep(2), Err(Error::Config(_))));
    assert!(matches!(build_rep(7), Err(Error::Config(_))));
}

#[test]
fn construction_is_deterministic() {
    assert_eq!(build_rep(5).unwrap(), build_rep(5).unwrap());
}

#[test]
fn block_convention_is_respected() {
    let rep = build_rep(3).unwrap();
    let h = rep.block_convention().half_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = random_spinor(&mut rng, 4);
    let swapped = rep.tau() * &psi;
    for k in 0..h {
        assert_eq!(swapped[k], psi[h + k]);
        assert_eq!(swapped[h + k], psi[k]);
    }
    // X acts as X (+) -X: the lower block of gamma is minus the upper block.
    for i in 0..3 {
        let g = rep.gamma(i);
        for a in 0..h {
            for b in 0..h {
                assert_eq!(g[(h + a, h + b)], -g[(a, b)]);
                assert_eq!(g[(a, h + b)], c(0.0));
            }
        }
    }
}

#[test]
fn e1_twice_is_minus_identity() {
    let rep = build_rep(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut psi = random_spinor(&mut rng, 4);
    psi /= c(psi.norm());
    let e1 = FiberVector::basis(3, 0);
    let once = clifford_mul(&rep, &e1, &psi).unwrap();
    let twice = clifford_mul(&rep, &e1, &once).unwrap();
    assert!((twice + &psi).norm() < 1e-15);
}

#[test]
fn tau_swaps_blocks_through_clifford_mul() {
    let rep = build_rep(3).unwrap();
    let psi = Spinor::from_vec((0..4).map(|k| c(k as f64 + 1.0)).collect());
    let out = clifford_mul(&rep, &FiberVector::tau(3), &psi).unwrap();
    let expect = Spinor::from_vec(vec![c(3.0), c(4.0), c(1.0), c(2.0)]);
    assert_eq!(out, expect);
}

#[test]
fn clifford_mul_matches_direct_matrix_product() {
    let rep = build_rep(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let t = rng.gen_range(-1.0..1.0);
        let psi = random_spinor(&mut rng, 8);
        let fv = FiberVector { components: v.clone(), timelike: t };
        let got = clifford_mul(&rep, &fv, &psi).unwrap();
        let mut direct = Spinor::zeros(8);
        for i in 0..4 {
            direct += rep.gamma(i) * &psi * c(v[i]);
        }
        direct += rep.tau() * &psi * c(t);
        assert!((got - direct).norm() < 1e-13);
        // norm scaling for the spatial part
        let spatial = FiberVector::spatial(v.clone());
        let x = clifford_mul(&rep, &spatial, &psi).unwrap();
        let len2: f64 = v.iter().map(|a| a * a).sum();
        assert!((hermitian(&x, &x).re - len2 * hermitian(&psi, &psi).re).abs() < 1e-12);
        // causal length consistent with the matrix square: (c tau + X)^2 = (c^2 - |X|^2) Id
        let m = fv.matrix(&rep);
        let sq = &m * &m + rep.identity() * c(fv.causal_length_sq());
        assert!(max_abs(&sq) < 1e-12);
    }
}

#[test]
fn clifford_mul_dimension_mismatch() {
    let rep = build_rep(3).unwrap();
    let psi = Spinor::zeros(8);
    assert!(matches!(clifford_mul(&rep, &FiberVector::basis(3, 0), &psi), Err(Error::Argument(_))));
    let psi = Spinor::zeros(4);
    assert!(matches!(clifford_mul(&rep, &FiberVector::basis(4, 0), &psi), Err(Error::Argument(_))));
}

#[test]
fn epsilon_properties_and_trace() {
    for n in [3, 4] {
        let rep = build_rep(n).unwrap();
        let id = rep.identity();
        for k in 1..=n {
            let eps = epsilon_action(&rep, k).unwrap();
            let nu = rep.gamma(k - 1);
            assert!(max_abs(&(&eps * &eps - &id)) < 1e-14);
            assert!(max_abs(&(&eps * nu + nu * &eps)) < 1e-14);
            assert!(max_abs(&(&eps * nu - rep.tau())) < 1e-14);
        }
    }
    let rep = build_rep(3).unwrap();
    let eps = epsilon_action(&rep, 3).unwrap();
    let direct = rep.gamma(2) * rep.tau();
    assert!((eps.trace() - direct.trace()).norm() < 1e-15);
    assert!(epsilon_action(&rep, 0).is_err());
    assert!(epsilon_action(&rep, 4).is_err());
}

#[test]
fn rotation_examples() {
    let rep = build_rep(3).unwrap();
    let r0 = spinor_rotation(&rep, &HyperbolicRotation::new(0.0), 3).unwrap();
    assert!(max_abs(&(r0 - rep.identity())) < 1e-15);

    let rot = HyperbolicRotation::new(std::f64::consts::LN_2);
    // Oracle: cosh(ln 2 / 2) = (sqrt2 + 1/sqrt2)/2 = 3/(2 sqrt 2), sinh = 1/(2 sqrt 2).
    let s2 = 2f64.sqrt();
    assert!((rot.big_a - 3.0 / (2.0 * s2)).abs() < 1e-15);
    assert!((rot.big_b - 1.0 / (2.0 * s2)).abs() < 1e-15);
    assert!((rot.big_a - 1.0606602).abs() < 1e-7);
    assert!((rot.big_b - 0.3535534).abs() < 1e-7);
    assert!((rot.big_a * rot.big_a - rot.big_b * rot.big_b - 1.0).abs() < 1e-15);

    let rot = HyperbolicRotation::new(1.7);
    let r = spinor_rotation(&rep, &rot, 3).unwrap();
    let eps = epsilon_action(&rep, 3).unwrap();
    let rinv = rep.identity() * c(rot.big_a) - eps * c(rot.big_b);
    assert!(max_abs(&(r * rinv - rep.identity())) < 1e-13);
}

#[test]
fn pairing_examples() {
    let rep = build_rep(3).unwrap();
    let mut e = Spinor::zeros(4);
    e[0] = c(1.0);
    let (h, _) = pairings(&rep, &e, &e).unwrap();
    assert_eq!(h, c(1.0));

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let psi = random_spinor(&mut rng, 4);
        let phi = random_spinor(&mut rng, 4);
        let (_, ind) = pairings(&rep, &psi, &phi).unwrap();
        let (_, ind_t) = pairings(&rep, &(rep.tau() * &psi), &(rep.tau() * &phi)).unwrap();
        assert!((ind - ind_t).norm() < 1e-14);
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let len2: f64 = x.iter().map(|a| a * a).sum();
        let xm = rep.vector_matrix(&x);
        let (hx, _) = pairings(&rep, &(&xm * &psi), &(&xm * &phi)).unwrap();
        let (h0, _) = pairings(&rep, &psi, &phi).unwrap();
        assert!((hx - h0 * c(len2)).norm() < 1e-13);
    }
    assert!(pairings(&rep, &Spinor::zeros(4), &Spinor::zeros(8)).is_err());
}

#[test]
fn indefinite_pairing_sign_pattern() {
    // Records the behaviour of (psi, phi) = <tau psi, phi> under X and tau.
    let rep = build_rep(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let psi = random_spinor(&mut rng, 4);
    let phi = random_spinor(&mut rng, 4);
    let x = rep.vector_matrix(&[0.3, -0.4, 1.2]);
    let len2 = 0.09 + 0.16 + 1.44;
    let (_, base) = pairings(&rep, &psi, &phi).unwrap();
    let (_, with_x) = pairings(&rep, &(&x * &psi), &(&x * &phi)).unwrap();
    // X anticommutes with tau and is anti-Hermitian: <tau X psi, X phi> = -|X|^2 <tau psi, phi>.
    assert!((with_x + base * c(len2)).norm() < 1e-13);
}

#[test]
fn suite_passes_on_acceptance_grid() {
    let angles = [0.0, 0.3, -0.3, std::f64::consts::LN_2, 1.7];
    for r in identity_suite(&[3, 4], &angles).unwrap() {
        assert!(r.residual < 1e-13, "{} n={} f={:?}: {}", r.name, r.n, r.f, r.residual);
    }
}

proptest! {
    #[test]
    fn rotation_composes_additively(f1 in -2.0f64..2.0, f2 in -2.0f64..2.0, k in 1usize..=4) {
        let rep = build_rep(4).unwrap();
        let r1 = spinor_rotation(&rep, &HyperbolicRotation::new(f1), k).unwrap();
        let r2 = spinor_rotation(&rep, &HyperbolicRotation::new(f2), k).unwrap();
        let r12 = spinor_rotation(&rep, &HyperbolicRotation::new(f1 + f2), k).unwrap();
        prop_assert!(max_abs(&(r1 * r2 - r12)) < 1e-12);
    }

    #[test]
    fn rotation_identities_hold(f in -3.0f64..3.0, k in 1usize..=3) {
        let rep = build_rep(3).unwrap();
        let rot = HyperbolicRotation::new(f);
        let eps = epsilon_action(&rep, k).unwrap();
        let r = spinor_rotation(&rep, &rot, k).unwrap();
        let rinv = rep.identity() * c(rot.big_a) - &eps * c(rot.big_b);
        let scale = rot.a;
        prop_assert!(max_abs(&(&r * rinv - rep.identity())) < 1e-13 * scale);
        prop_assert!(max_abs(&(&r * &r - (rep.identity() * c(rot.a) + &eps * c(rot.b)))) < 1e-13 * scale);
        prop_assert!(rot.identity_defect() < 1e-13);
    }

    #[test]
    fn hermitian_symmetry(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_spinor(&mut rng, 8);
        let phi = random_spinor(&mut rng, 8);
        prop_assert!((hermitian(&psi, &phi) - hermitian(&phi, &psi).conj()).norm() < 1e-14);
    }

    #[test]
    fn epsilon_is_self_adjoint_under_real_combinations(s in -2.0f64..2.0, t in -2.0f64..2.0, seed in 0u64..500) {
        let rep = build_rep(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_spinor(&mut rng, 4);
        let phi = random_spinor(&mut rng, 4);
        let m = rep.identity() * c(s) + epsilon_action(&rep, 2).unwrap() * c(t);
        let lhs = hermitian(&phi, &(&m * &psi));
        let rhs = hermitian(&(&m * &phi), &psi);
        prop_assert!((lhs - rhs).norm() < 1e-13);
    }
}
