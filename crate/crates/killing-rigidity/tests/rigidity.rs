use std::sync::Arc;

use clifford_core::{CliffordRep, Complex64, Error, Spinor};
use flux_integrals::field::{ConstantSpinor, PolynomialSpinor, TransmittedField};
use flux_integrals::SpinorField;
use geometry_catalog::catalog::{graph_slice, minkowski_slice, rotated_crease, schwarzschild_isotropic, trivial_crease};
use geometry_catalog::{AngleFunction, InitialData};
use killing_rigidity::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_spinor(r: &mut ChaCha8Rng, dim: usize) -> Spinor {
    Spinor::from_fn(dim, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
}

fn random_points(r: &mut ChaCha8Rng, n: usize, count: usize, r_lo: f64, r_hi: f64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-3);
            let rad = r.gen_range(r_lo..r_hi);
            v.iter().map(|a| a * rad / norm).collect()
        })
        .collect()
}

fn constant_ls(rep: &CliffordRep, data: &InitialData, psi: Spinor) -> LapseShift {
    lapse_shift_from_spinor(rep, Arc::new(ConstantSpinor { psi }), data)
}

const GRAPH_A: f64 = 0.5;
const GRAPH_W: f64 = 1.0;

/// Restriction of the time translation of Minkowski space to the graph `t = h(x)`:
/// `u = 1 / W`, `Y^i = -d_i h / W^2`, `W = sqrt(1 - |grad h|^2)`.
fn graph_killing() -> LapseShift {
    LapseShift::new("graph time translation", |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let h = GRAPH_A * (-r2 / (GRAPH_W * GRAPH_W)).exp();
        let grad: Vec<f64> = x.iter().map(|v| -2.0 * v / (GRAPH_W * GRAPH_W) * h).collect();
        let w2 = 1.0 - grad.iter().map(|v| v * v).sum::<f64>();
        Ok(LapseShiftValue { u: 1.0 / w2.sqrt(), y: grad.iter().map(|g| -g / w2).collect(), imag: 0.0 })
    })
}

#[test]
fn upper_block_spinor_on_flat_data_gives_unit_lapse_and_zero_shift() {
    let rep = CliffordRep::new(3).unwrap();
    let data = minkowski_slice(3);
    let mut psi = Spinor::zeros(rep.dim());
    psi[0] = Complex64::new(0.6, 0.0);
    psi[1] = Complex64::new(0.0, 0.8);
    let ls = constant_ls(&rep, &data, psi);
    let v = ls.eval(&[0.3, -1.2, 2.0]).unwrap();
    assert!((v.u - 1.0).abs() < 1e-15);
    assert!(v.y.iter().all(|a| a.abs() < 1e-15), "{:?}", v.y);
}

#[test]
fn lapse_shift_is_quadratic_in_the_spinor() {
    let rep = CliffordRep::new(4).unwrap();
    let data = schwarzschild_isotropic(4, 1.0).unwrap();
    let mut r = rng(7);
    let psi = Arc::new(PolynomialSpinor::random(&mut r, 4, rep.dim(), 2, 0.5));
    let lam = Complex64::new(1.3, -0.7);
    let scaled = PolynomialSpinor {
        center: psi.center.clone(),
        terms: psi.terms.iter().map(|(e, s)| (e.clone(), s * lam)).collect(),
    };
    let a = lapse_shift_from_spinor(&rep, psi, &data);
    let b = lapse_shift_from_spinor(&rep, Arc::new(scaled), &data);
    for x in random_points(&mut r, 4, 10, 1.0, 5.0) {
        let (va, vb) = (a.eval(&x).unwrap(), b.eval(&x).unwrap());
        let l2 = lam.norm_sqr();
        assert!((vb.u - l2 * va.u).abs() <= 1e-12 * vb.u);
        for (ya, yb) in va.y.iter().zip(&vb.y) {
            assert!((yb - l2 * ya).abs() <= 1e-12 * vb.u);
        }
    }
}

#[test]
fn lapse_dominates_shift_and_shift_is_real() {
    let mut r = rng(11);
    for n in [3, 4] {
        let rep = CliffordRep::new(n).unwrap();
        let data = schwarzschild_isotropic(n, 1.0).unwrap();
        let psi = Arc::new(PolynomialSpinor::random(&mut r, n, rep.dim(), 2, 1.0));
        let ls = lapse_shift_from_spinor(&rep, psi, &data);
        for x in random_points(&mut r, n, 100, 1.0, 10.0) {
            let v = ls.eval(&x).unwrap();
            let g = data.g(&x).unwrap();
            assert!(v.u + 1e-12 * v.u >= shift_norm_sq(&g, &v.y).sqrt(), "u < |Y| at {x:?}");
            assert!(v.imag < 1e-12 * v.u.max(1.0));
        }
    }
}

fn transmitted_pair(rep: &CliffordRep, f: AngleFunction, seed: u64) -> (Arc<dyn SpinorField>, TransmittedField) {
    let mut r = rng(seed);
    let plus: Arc<dyn SpinorField> = Arc::new(PolynomialSpinor::random(&mut r, rep.n(), rep.dim(), 2, 0.3));
    let minus = TransmittedField::new(rep, plus.clone(), f);
    (plus, minus)
}

#[test]
fn lorentz_relations_hold_at_a_rotated_crease() {
    for n in [3, 4] {
        let rep = CliffordRep::new(n).unwrap();
        let base = trivial_crease(&minkowski_slice(n), 2.0).unwrap();
        let f = AngleFunction::constant(2f64.ln());
        let cd = rotated_crease(&base, f.clone());
        let (plus, minus) = transmitted_pair(&rep, f, 3);
        let rep_ = crease_lorentz_check(&cd, &rep, &minus, plus.as_ref(), 8).unwrap();
        assert!(rep_.max_residual() < 1e-10 && rep_.causal < 1e-10, "{rep_:?}");
        assert!(rep_.scale > 0.1);
    }
}

#[test]
fn lorentz_relations_hold_for_a_varying_angle_on_the_corner() {
    let rep = CliffordRep::new(3).unwrap();
    let base = geometry_catalog::catalog::miao_corner(3, 1.0, 4.0).unwrap();
    let extra = AngleFunction::cos_theta(0.2, 0.4);
    let cd = rotated_crease(&base, extra);
    let (plus, minus) = transmitted_pair(&rep, cd.f.clone(), 5);
    let rep_ = crease_lorentz_check(&cd, &rep, &minus, plus.as_ref(), 8).unwrap();
    assert!(rep_.max_residual() < 1e-10 * rep_.scale.max(1.0) && rep_.causal < 1e-10 * rep_.scale.max(1.0).powi(2), "{rep_:?}");
}

#[test]
fn zero_angle_gives_equal_pairs() {
    let rep = CliffordRep::new(3).unwrap();
    let cd = trivial_crease(&minkowski_slice(3), 1.5).unwrap();
    let (plus, minus) = transmitted_pair(&rep, AngleFunction::zero(), 9);
    let rep_ = crease_lorentz_check(&cd, &rep, &minus, plus.as_ref(), 6).unwrap();
    assert!(rep_.max_residual() < 1e-14 && rep_.causal < 1e-14, "{rep_:?}");
}

struct Offset {
    base: TransmittedField,
    delta: Spinor,
}

impl SpinorField for Offset {
    fn spinor_dim(&self) -> usize {
        self.delta.len()
    }
    fn value(&self, x: &[f64]) -> Spinor {
        self.base.value(x) + &self.delta
    }
}

#[test]
fn lorentz_residuals_scale_with_the_squared_spinor_modulus() {
    // A trace offset below the transmission tolerance gives residuals well above rounding.
    let rep = CliffordRep::new(3).unwrap();
    let f = AngleFunction::constant(0.5);
    let cd = rotated_crease(&trivial_crease(&minkowski_slice(3), 2.0).unwrap(), f.clone());
    let mut r = rng(13);
    let psi = random_spinor(&mut r, rep.dim()) * Complex64::new(0.3, 0.0);
    let delta = random_spinor(&mut r, rep.dim()) * Complex64::new(5e-12, 0.0);
    let run = |s: f64| {
        let c = Complex64::new(s, 0.0);
        let plus: Arc<dyn SpinorField> = Arc::new(ConstantSpinor { psi: &psi * c });
        let minus = Offset { base: TransmittedField::new(&rep, plus.clone(), f.clone()), delta: &delta * c };
        crease_lorentz_check(&cd, &rep, &minus, plus.as_ref(), 6).unwrap()
    };
    let (a, b) = (run(1.0), run(3.0));
    assert!(a.max_residual() > 1e-13, "{a:?}");
    for (ra, rb) in [(a.tangential, b.tangential), (a.normal, b.normal), (a.lapse, b.lapse)] {
        assert!((rb / ra - 9.0).abs() < 1e-2, "{ra:e} -> {rb:e}");
    }
    assert!((b.scale / a.scale - 9.0).abs() < 1e-12);
}

#[test]
fn transmission_violation_is_rejected() {
    let rep = CliffordRep::new(3).unwrap();
    let base = trivial_crease(&minkowski_slice(3), 2.0).unwrap();
    let cd = rotated_crease(&base, AngleFunction::constant(0.5));
    let (plus, _) = transmitted_pair(&rep, AngleFunction::zero(), 17);
    let err = crease_lorentz_check(&cd, &rep, plus.as_ref(), plus.as_ref(), 6).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)), "{err}");
}

#[test]
fn constant_spinor_on_flat_data_satisfies_the_killing_conditions() {
    let mut r = rng(19);
    for n in [3, 4] {
        let rep = CliffordRep::new(n).unwrap();
        let data = minkowski_slice(n);
        let ls = constant_ls(&rep, &data, random_spinor(&mut r, rep.dim()));
        let res = killing_conditions_residual(&data, &ls, &random_points(&mut r, n, 20, 0.5, 8.0)).unwrap();
        assert!(res.tensor < 1e-9 && res.covector < 1e-9, "{res:?}");
        assert!(res.parallel < 1e-8 && res.symmetry < 1e-8);
        assert!(res.max_imag < 1e-12);
    }
}

#[test]
fn graph_time_translation_satisfies_the_killing_conditions() {
    let data = graph_slice(3, GRAPH_A, GRAPH_W).unwrap();
    let mut r = rng(23);
    let res = killing_conditions_residual(&data, &graph_killing(), &random_points(&mut r, 3, 30, 0.1, 3.0)).unwrap();
    assert!(res.tensor < 1e-9 && res.covector < 1e-9, "{res:?}");
    assert!(res.parallel < 1e-9 && res.symmetry < 1e-9);
}

#[test]
fn static_pair_is_killing_only_where_k_vanishes() {
    let ls = LapseShift::constant(1.0, vec![0.0; 3]);
    let pts = vec![vec![3.0, 0.0, 0.0], vec![0.5, 1.0, -2.0]];
    let schw = schwarzschild_isotropic(3, 1.0).unwrap();
    let res = killing_conditions_residual(&schw, &ls, &pts).unwrap();
    assert!(res.tensor == 0.0 && res.covector == 0.0, "{res:?}");
    let graph = graph_slice(3, GRAPH_A, GRAPH_W).unwrap();
    let res = killing_conditions_residual(&graph, &ls, &[vec![0.4, 0.3, 0.2]]).unwrap();
    assert!(res.tensor > 0.1, "{res:?}");
}

#[test]
fn killing_stencil_outside_the_chart_is_rejected() {
    let ball = geometry_catalog::catalog::miao_corner(3, 1.0, 4.0).unwrap().minus;
    let ls = LapseShift::constant(1.0, vec![0.0; 3]);
    let err = killing_conditions_residual(&ball, &ls, &[vec![4.0 - 1e-7, 0.0, 0.0]]).unwrap_err();
    assert!(matches!(err, Error::Domain(_)), "{err}");
}

#[test]
fn flat_static_development_is_minkowski() {
    let data = minkowski_slice(3);
    let dm = killing_development(&data, &LapseShift::constant(1.0, vec![0.0; 3])).unwrap();
    assert!(dm.t_independent);
    let m = dm.metric(&[0.7, 1.0, -2.0, 0.5]).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let want = if i != j { 0.0 } else if i == 0 { -1.0 } else { 1.0 };
            assert_eq!(m[(i, j)], want);
        }
    }
    assert!(riemann_norm(&dm, &[0.0, 1.0, 2.0, -0.5]).unwrap() < 1e-6);
}

#[test]
fn development_components_and_causal_character() {
    let mut r = rng(29);
    let rep = CliffordRep::new(3).unwrap();
    let data = schwarzschild_isotropic(3, 1.0).unwrap();
    let psi: Arc<dyn SpinorField> = Arc::new(PolynomialSpinor::random(&mut r, 3, rep.dim(), 1, 0.5));
    let ls = lapse_shift_from_spinor(&rep, psi, &data);
    let dm = killing_development(&data, &ls).unwrap();
    for x in random_points(&mut r, 3, 50, 1.0, 6.0) {
        let t = r.gen_range(-5.0..5.0);
        let tx: Vec<f64> = std::iter::once(t).chain(x.iter().copied()).collect();
        let m = dm.metric(&tx).unwrap();
        let v = ls.eval(&x).unwrap();
        let g = data.g(&x).unwrap();
        let y2 = shift_norm_sq(&g, &v.y);
        assert!((m[(0, 0)] + (v.u * v.u - y2)).abs() < 1e-12 * v.u * v.u);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[(i + 1, j + 1)], g[(i, j)]);
            }
        }
        if v.u > y2.sqrt() * (1.0 + 1e-9) {
            assert!(m[(0, 0)] < 0.0);
        }
    }
}

#[test]
fn nonpositive_lapse_is_rejected() {
    let err = killing_development(&minkowski_slice(3), &LapseShift::constant(-1.0, vec![0.0; 3])).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)), "{err}");
}

#[test]
fn developments_of_killing_pairs_are_flat() {
    let mut r = rng(31);
    let rep = CliffordRep::new(3).unwrap();
    let flat = minkowski_slice(3);
    let dm = killing_development(&flat, &constant_ls(&rep, &flat, random_spinor(&mut r, rep.dim()))).unwrap();
    let graph = graph_slice(3, GRAPH_A, GRAPH_W).unwrap();
    let dg = killing_development(&graph, &graph_killing()).unwrap();
    for x in random_points(&mut r, 3, 5, 0.2, 3.0) {
        let tx: Vec<f64> = std::iter::once(0.3).chain(x.iter().copied()).collect();
        assert!(riemann_norm(&dm, &tx).unwrap() < 1e-6);
        let rn = riemann_norm(&dg, &tx).unwrap();
        assert!(rn < 1e-6, "graph development curvature {rn:e} at {x:?}");
    }
}

#[test]
fn static_schwarzschild_development_is_curved() {
    let data = schwarzschild_isotropic(3, 1.0).unwrap();
    let dm = killing_development(&data, &LapseShift::constant(1.0, vec![0.0; 3])).unwrap();
    let rn = riemann_norm(&dm, &[0.0, 3.0, 0.0, 0.0]).unwrap();
    assert!(rn > 1e-2, "{rn:e}");
}

#[test]
fn creased_development_is_flat_away_from_the_crease_only() {
    let rep = CliffordRep::new(3).unwrap();
    let f = AngleFunction::constant(0.4);
    let cd = rotated_crease(&trivial_crease(&minkowski_slice(3), 2.0).unwrap(), f.clone());
    let mut r = rng(37);
    let plus: Arc<dyn SpinorField> = Arc::new(ConstantSpinor { psi: random_spinor(&mut r, rep.dim()) });
    let minus: Arc<dyn SpinorField> = Arc::new(TransmittedField::new(&rep, plus.clone(), f));
    let dm = killing_development_creased(
        &cd,
        &lapse_shift_from_spinor(&rep, minus, &cd.minus),
        &lapse_shift_from_spinor(&rep, plus, &cd.plus),
    )
    .unwrap();
    assert!(riemann_norm(&dm, &[0.0, 4.0, 1.0, 0.0]).unwrap() < 1e-6);
    let err = riemann_norm(&dm, &[0.0, 2.0 + 1e-4, 0.0, 0.0]).unwrap_err();
    assert!(matches!(err, Error::Domain(_)), "{err}");
}

#[test]
fn lorentz_length_is_conserved_for_killing_pairs() {
    let rep = CliffordRep::new(3).unwrap();
    let flat = minkowski_slice(3);
    let xh = [0.6, 0.0, 0.8];
    let curve = radial_curve(&xh, 1.0, 10.0, 200);
    let trivial = lorentz_length_drift(&flat, &LapseShift::constant(1.0, vec![0.0; 3]), &curve).unwrap();
    assert_eq!(trivial.drift, 0.0);
    assert!((trivial.length - 9.0).abs() < 1e-12);
    let mut r = rng(41);
    let ls = constant_ls(&rep, &flat, random_spinor(&mut r, rep.dim()));
    let d = lorentz_length_drift(&flat, &ls, &curve).unwrap();
    assert!(d.drift < 1e-8, "{d:?}");
    let graph = graph_slice(3, GRAPH_A, GRAPH_W).unwrap();
    let d = lorentz_length_drift(&graph, &graph_killing(), &radial_curve(&xh, 0.0, 3.0, 200)).unwrap();
    assert!(d.drift < 1e-8 && d.residual_integral < 1e-7, "{d:?}");
}

#[test]
fn perturbed_shift_drifts_by_its_residual_integral() {
    let flat = minkowski_slice(3);
    let base = LapseShift::constant(1.0, vec![0.0; 3]);
    let eps = 1e-3;
    let ls = base.with_shift_perturbation(move |x| vec![eps * x[0] * x[0], 0.0, 0.0]);
    let curve = radial_curve(&[1.0, 0.0, 0.0], 1.0, 10.0, 400);
    let d = lorentz_length_drift(&flat, &ls, &curve).unwrap();
    let res = killing_conditions_residual(&flat, &ls, &curve[1..3]).unwrap();
    assert!(res.tensor > 1e-3);
    let ratio = d.drift / d.residual_integral;
    assert!((0.1..=1.0).contains(&ratio), "{d:?}");
}

#[test]
fn curve_leaving_the_chart_is_rejected() {
    let ball = geometry_catalog::catalog::miao_corner(3, 1.0, 4.0).unwrap().minus;
    let curve = radial_curve(&[0.0, 1.0, 0.0], 1.0, 5.0, 10);
    let err = lorentz_length_drift(&ball, &LapseShift::constant(1.0, vec![0.0; 3]), &curve).unwrap_err();
    assert!(matches!(err, Error::Domain(_)), "{err}");
}
