//! Lowest-mode reduction of `D_W` on spherically symmetric data.
//!
//! A separated spinor is `psi = (alpha + beta X + gamma tau + delta X tau) psi_inf` with
//! `X = xhat . gamma` in the symmetric orthonormal frame. For `g = p delta + s dr dr` put
//! `a = p^{-1/2}`, `b = (p + s)^{-1/2}`, `H` the mean curvature of the coordinate sphere and
//! `v = H - (n-1) a / r`. Then `D_W psi = (E1 + E2 X + E3 tau + E4 X tau) psi_inf` with
//!
//! ```text
//! E1 = -b beta'  - ((n-1) a / r + v/2) beta  - (tr k / 2) gamma
//! E2 =  b alpha' + (v/2) alpha                + (tr k / 2) delta
//! E3 = -b delta' - ((n-1) a / r + v/2) delta - (tr k / 2) alpha
//! E4 =  b gamma' + (v/2) gamma                + (tr k / 2) beta
//! ```
//!
//! Regularity at the origin forces `beta(0) = delta(0) = 0`.

use std::sync::Arc;

use clifford_core::{CMat, CliffordRep, Complex64, Error, Result, Spinor};
use flux_integrals::{dirac_witten_apply, SpinorField};
use geometry_catalog::{CreasedData, InitialData, RadialProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Amplitudes `(alpha, beta, gamma, delta)`.
pub type Amp = [f64; 4];

/// Tolerance of the full-operator check of the reduction.
pub const ORACLE_TOL: f64 = 1e-8;
/// Number of random radii in the full-operator check.
pub const ORACLE_SAMPLES: usize = 20;

/// Reduced coefficients at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub v: f64,
    pub trk: f64,
}

impl Coefficients {
    /// `C` in `E = D u' + C u`.
    pub fn matrix(&self, n: usize, r: f64) -> [[f64; 4]; 4] {
        let w = (n as f64 - 1.0) * self.a / r + 0.5 * self.v;
        let (hv, ht) = (0.5 * self.v, 0.5 * self.trk);
        [[0.0, -w, -ht, 0.0], [hv, 0.0, 0.0, ht], [-ht, 0.0, 0.0, -w], [0.0, ht, hv, 0.0]]
    }

    /// `D` in `E = D u' + C u`.
    pub fn derivative_matrix(&self) -> [[f64; 4]; 4] {
        let b = self.b;
        [[0.0, -b, 0.0, 0.0], [b, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, -b], [0.0, 0.0, b, 0.0]]
    }

    /// Reduced `D_W` applied to amplitudes `u` with radial derivatives `du`.
    pub fn apply(&self, n: usize, r: f64, u: &Amp, du: &Amp) -> Amp {
        let c = self.matrix(n, r);
        let d = self.derivative_matrix();
        let mut e = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 {
                e[i] += d[i][j] * du[j] + c[i][j] * u[j];
            }
        }
        e
    }
}

/// Coefficients of one side of the crease.
#[derive(Debug, Clone)]
pub struct SideProfile {
    pub n: usize,
    pub profile: Arc<dyn RadialProfile>,
}

impl SideProfile {
    pub fn from_data(data: &InitialData) -> Result<Self> {
        let profile = data.radial_profile().ok_or_else(|| {
            Error::Unsupported(format!("'{}' is not spherically symmetric; no radial reduction", data.label))
        })?;
        Ok(Self { n: data.dim(), profile })
    }

    pub fn coefficients(&self, r: f64) -> Coefficients {
        let nn = self.n as f64 - 1.0;
        let [p, p1, s, _] = self.profile.metric(r);
        let [c, _, d, _] = self.profile.curvature(r);
        let q = p + s;
        let a = p.powf(-0.5);
        let b = q.powf(-0.5);
        // Areal radius r sqrt(p): H = (n-1) b (1/r + p'/(2p)).
        let h = nn * b * (1.0 / r + 0.5 * p1 / p);
        Coefficients { a, b, v: h - nn * a / r, trk: nn * c / p + (c + d) / q }
    }
}

/// Matrix of `(A + B eps)` acting on amplitudes, `A = cosh(f/2)`, `B = sinh(f/2)`.
pub fn transmission_matrix(f: f64) -> [[f64; 4]; 4] {
    let (a, b) = ((0.5 * f).cosh(), (0.5 * f).sinh());
    [[a, 0.0, 0.0, b], [0.0, a, b, 0.0], [0.0, b, a, 0.0], [b, 0.0, 0.0, a]]
}

pub fn apply4(m: &[[f64; 4]; 4], u: &Amp) -> Amp {
    let mut o = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            o[i] += m[i][j] * u[j];
        }
    }
    o
}

/// Spinor basis `[1, X, tau, X tau]` at direction `xhat`.
pub fn amplitude_basis(rep: &CliffordRep, xhat: &[f64]) -> [CMat; 4] {
    let x = rep.vector_matrix(xhat);
    let xt = &x * rep.tau();
    [rep.identity(), x, rep.tau().clone(), xt]
}

/// `sum_i u_i B_i`.
pub fn combine(basis: &[CMat; 4], u: &Amp) -> CMat {
    let mut m = CMat::zeros(basis[0].nrows(), basis[0].ncols());
    for (b, c) in basis.iter().zip(u) {
        if *c != 0.0 {
            m += b * Complex64::new(*c, 0.0);
        }
    }
    m
}

/// Radial amplitudes and their derivatives as a function of `r`.
pub trait RadialAmplitudes: Send + Sync {
    fn eval(&self, r: f64) -> (Amp, Amp);
}

impl<F: Fn(f64) -> (Amp, Amp) + Send + Sync> RadialAmplitudes for F {
    fn eval(&self, r: f64) -> (Amp, Amp) {
        self(r)
    }
}

/// `psi(x) = (alpha + beta X + gamma tau + delta X tau)(|x|) psi_inf`.
pub struct SeparatedField<A: RadialAmplitudes> {
    pub amplitudes: A,
    pub psi_inf: Spinor,
    gammas: Vec<CMat>,
    basis_rep: CliffordRep,
}

impl<A: RadialAmplitudes> SeparatedField<A> {
    pub fn new(rep: &CliffordRep, amplitudes: A, psi_inf: Spinor) -> Self {
        Self { amplitudes, psi_inf, gammas: rep.gammas().to_vec(), basis_rep: rep.clone() }
    }

    fn radius(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl<A: RadialAmplitudes> SpinorField for SeparatedField<A> {
    fn spinor_dim(&self) -> usize {
        self.psi_inf.len()
    }

    fn value(&self, x: &[f64]) -> Spinor {
        let r = Self::radius(x);
        let xh: Vec<f64> = if r > 0.0 { x.iter().map(|v| v / r).collect() } else { vec![0.0; x.len()] };
        let (u, _) = self.amplitudes.eval(r);
        combine(&amplitude_basis(&self.basis_rep, &xh), &u) * &self.psi_inf
    }

    fn analytic_partials(&self, x: &[f64]) -> Option<Vec<Spinor>> {
        let n = x.len();
        let r = Self::radius(x);
        if r == 0.0 {
            return None;
        }
        let xh: Vec<f64> = x.iter().map(|v| v / r).collect();
        let (u, du) = self.amplitudes.eval(r);
        let basis = amplitude_basis(&self.basis_rep, &xh);
        let tau = self.basis_rep.tau();
        let radial = combine(&basis, &du) * &self.psi_inf;
        Some(
            (0..n)
                .map(|j| {
                    let mut dx = CMat::zeros(tau.nrows(), tau.ncols());
                    for (i, g) in self.gammas.iter().enumerate() {
                        let w = (if i == j { 1.0 } else { 0.0 } - xh[i] * xh[j]) / r;
                        if w != 0.0 {
                            dx += g * Complex64::new(w, 0.0);
                        }
                    }
                    let ang = (&dx * Complex64::new(u[1], 0.0) + &dx * tau * Complex64::new(u[3], 0.0)) * &self.psi_inf;
                    &radial * Complex64::new(xh[j], 0.0) + ang
                })
                .collect(),
        )
    }
}

/// Result of the full-operator check.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub samples: usize,
    pub max_deviation: f64,
}

/// Compare the reduced operator with `dirac_witten_apply` at random radii in `[r_lo, r_hi]`.
pub fn reduction_oracle(
    data: &InitialData,
    rep: &CliffordRep,
    r_lo: f64,
    r_hi: f64,
    samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    let side = SideProfile::from_data(data)?;
    let n = data.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        // Random quadratic amplitudes.
        let co: Vec<[f64; 3]> = (0..4).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        let amps = move |r: f64| {
            let mut u = [0.0; 4];
            let mut du = [0.0; 4];
            for i in 0..4 {
                u[i] = co[i][0] + co[i][1] * r + co[i][2] * r * r;
                du[i] = co[i][1] + 2.0 * co[i][2] * r;
            }
            (u, du)
        };
        let psi_inf = Spinor::from_fn(rep.dim(), |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let r = rng.gen_range(r_lo..r_hi);
        let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let l = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xh: Vec<f64> = dir.iter().map(|v| v / l).collect();
        let x: Vec<f64> = xh.iter().map(|v| r * v).collect();
        let (u, du) = amps(r);
        let field = SeparatedField::new(rep, amps, psi_inf.clone());
        let full = dirac_witten_apply(data, rep, &field, &x)?;
        let e = side.coefficients(r).apply(n, r, &u, &du);
        let reduced = combine(&amplitude_basis(rep, &xh), &e) * &psi_inf;
        let scale = 1.0 + full.norm();
        worst = worst.max((full - reduced).norm() / scale);
    }
    Ok(OracleReport { samples, max_deviation: worst })
}

/// Reduced transmission problem of a spherically symmetric crease.
#[derive(Debug, Clone)]
pub struct RadialProblem {
    pub cd: CreasedData,
    pub n: usize,
    pub r0: f64,
    pub f: f64,
    pub minus: SideProfile,
    pub plus: SideProfile,
    pub transmission: [[f64; 4]; 4],
    pub oracle: [OracleReport; 2],
}

/// Only `mode = 0` is supported; the reduction is checked against the full operator before returning.
pub fn reduce_radial(cd: &CreasedData, rep: &CliffordRep, mode: usize) -> Result<RadialProblem> {
    if mode != 0 {
        return Err(Error::Unsupported(format!("angular mode {mode} is not implemented; only the lowest mode is")));
    }
    if cd.dim() != rep.n() {
        return Err(Error::Argument("data and Clifford representation dimensions differ".into()));
    }
    if !cd.f.is_constant() {
        return Err(Error::Unsupported("radial reduction needs a constant hyperbolic angle".into()));
    }
    let minus = SideProfile::from_data(&cd.minus)?;
    let plus = SideProfile::from_data(&cd.plus)?;
    let r0 = cd.r0;
    let om = reduction_oracle(&cd.minus, rep, 0.05 * r0, r0, ORACLE_SAMPLES, 0x5eed_0001)?;
    let op = reduction_oracle(&cd.plus, rep, r0, 3.0 * r0, ORACLE_SAMPLES, 0x5eed_0002)?;
    for (side, o) in [("interior", &om), ("exterior", &op)] {
        if !(o.max_deviation <= ORACLE_TOL) {
            return Err(Error::Consistency(format!(
                "radial reduction disagrees with the full operator on the {side} side: max deviation {:e}",
                o.max_deviation
            )));
        }
    }
    Ok(RadialProblem {
        cd: cd.clone(),
        n: cd.dim(),
        r0,
        f: cd.f.c0,
        minus,
        plus,
        transmission: transmission_matrix(cd.f.c0),
        oracle: [om, op],
    })
}
