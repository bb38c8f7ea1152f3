//! Spinor fields given by their components in the spin frame induced by the symmetric
//! orthonormal frame of the data.

use std::sync::Arc;

use clifford_core::{epsilon_for, CMat, CliffordRep, Complex64, Spinor};
use geometry_catalog::AngleFunction;
use rand::Rng;

/// Default central-difference step for fields without analytic derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

pub trait SpinorField: Send + Sync {
    fn spinor_dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> Spinor;
    /// Analytic coordinate partials `d_j psi`, if available.
    fn analytic_partials(&self, _x: &[f64]) -> Option<Vec<Spinor>> {
        None
    }
    fn fd_step(&self) -> f64 {
        DEFAULT_FD_STEP
    }
}

/// Coordinate partials, analytic when provided and central differences otherwise.
pub fn partials(field: &dyn SpinorField, x: &[f64]) -> Vec<Spinor> {
    field.analytic_partials(x).unwrap_or_else(|| central_partials(field, x, field.fd_step()))
}

pub fn central_partials(field: &dyn SpinorField, x: &[f64], h: f64) -> Vec<Spinor> {
    (0..x.len())
        .map(|j| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            (field.value(&xp) - field.value(&xm)) / Complex64::new(2.0 * h, 0.0)
        })
        .collect()
}

/// Largest deviation between analytic partials and central differences over `points`.
pub fn audit_derivatives(field: &dyn SpinorField, points: &[Vec<f64>]) -> Option<f64> {
    let mut worst = 0.0f64;
    for x in points {
        let a = field.analytic_partials(x)?;
        let c = central_partials(field, x, field.fd_step());
        for (u, v) in a.iter().zip(&c) {
            worst = worst.max((u - v).camax());
        }
    }
    Some(worst)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone)]
pub struct ConstantSpinor {
    pub psi: Spinor,
}

impl SpinorField for ConstantSpinor {
    fn spinor_dim(&self) -> usize {
        self.psi.len()
    }
    fn value(&self, _x: &[f64]) -> Spinor {
        self.psi.clone()
    }
    fn analytic_partials(&self, x: &[f64]) -> Option<Vec<Spinor>> {
        Some(vec![Spinor::zeros(self.psi.len()); x.len()])
    }
}

/// `sum_t c_t prod_j (x_j - center_j)^{e_tj}`.
#[derive(Debug, Clone)]
pub struct PolynomialSpinor {
    pub center: Vec<f64>,
    pub terms: Vec<(Vec<u32>, Spinor)>,
}

impl PolynomialSpinor {
    /// Random complex coefficients for every monomial of total degree `<= degree`,
    /// coefficient entries uniform in `[-scale, scale] * (1 + i)` box.
    pub fn random<R: Rng>(rng: &mut R, n: usize, dim: usize, degree: u32, scale: f64) -> Self {
        let mut exps = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for e in &exps {
                let used: u32 = e.iter().sum();
                for k in 0..=(degree - used) {
                    let mut f = e.clone();
                    f.push(k);
                    next.push(f);
                }
            }
            exps = next;
        }
        let terms = exps
            .into_iter()
            .map(|e| {
                let s = Spinor::from_fn(dim, |_, _| {
                    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
                });
                (e, s)
            })
            .collect();
        Self { center: vec![0.0; n], terms }
    }

    fn monomial(&self, e: &[u32], x: &[f64]) -> f64 {
        e.iter().zip(x).zip(&self.center).map(|((&k, &xi), &ci)| (xi - ci).powi(k as i32)).product()
    }

    fn monomial_partial(&self, e: &[u32], x: &[f64], j: usize) -> f64 {
        if e[j] == 0 {
            return 0.0;
        }
        let mut p = e[j] as f64;
        for (i, ((&k, &xi), &ci)) in e.iter().zip(x).zip(&self.center).enumerate() {
            let kk = if i == j { k - 1 } else { k };
            p *= (xi - ci).powi(kk as i32);
        }
        p
    }
}

impl SpinorField for PolynomialSpinor {
    fn spinor_dim(&self) -> usize {
        self.terms.first().map(|t| t.1.len()).unwrap_or(0)
    }
    fn value(&self, x: &[f64]) -> Spinor {
        let mut out = Spinor::zeros(self.spinor_dim());
        for (e, s) in &self.terms {
            out += s * c(self.monomial(e, x));
        }
        out
    }
    fn analytic_partials(&self, x: &[f64]) -> Option<Vec<Spinor>> {
        Some(
            (0..x.len())
                .map(|j| {
                    let mut out = Spinor::zeros(self.spinor_dim());
                    for (e, s) in &self.terms {
                        out += s * c(self.monomial_partial(e, x, j));
                    }
                    out
                })
                .collect(),
        )
    }
}

/// `chi(r) * inner`, `chi = (4 (r - a)(b - r) / (b - a)^2)^4` on `a < r < b`, zero outside.
#[derive(Clone)]
pub struct BumpSpinor<F: SpinorField> {
    pub inner: F,
    pub r_in: f64,
    pub r_out: f64,
}

impl<F: SpinorField> BumpSpinor<F> {
    fn chi(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (a, b) = (self.r_in, self.r_out);
        if r <= a || r >= b {
            return (0.0, vec![0.0; x.len()]);
        }
        let s = 4.0 / ((b - a) * (b - a));
        let u = s * (r - a) * (b - r);
        let du = s * (a + b - 2.0 * r);
        let v = u.powi(4);
        let dv = 4.0 * u.powi(3) * du;
        (v, x.iter().map(|xi| dv * xi / r).collect())
    }
}

impl<F: SpinorField> SpinorField for BumpSpinor<F> {
    fn spinor_dim(&self) -> usize {
        self.inner.spinor_dim()
    }
    fn value(&self, x: &[f64]) -> Spinor {
        self.inner.value(x) * c(self.chi(x).0)
    }
    fn analytic_partials(&self, x: &[f64]) -> Option<Vec<Spinor>> {
        let (v, dv) = self.chi(x);
        let val = self.inner.value(x);
        let ip = self.inner.analytic_partials(x)?;
        Some(ip.iter().zip(&dv).map(|(p, d)| p * c(v) + &val * c(*d)).collect())
    }
}

/// `psi_minus = (A + B eps) psi_plus` with `A = cosh(f/2)`, `B = sinh(f/2)`,
/// `eps = xhat . gamma tau`; valid where the unit normal has frame components `xhat`.
#[derive(Clone)]
pub struct TransmittedField {
    pub plus: Arc<dyn SpinorField>,
    pub f: AngleFunction,
    pub gammas: Vec<CMat>,
    pub tau: CMat,
}

impl TransmittedField {
    pub fn new(rep: &CliffordRep, plus: Arc<dyn SpinorField>, f: AngleFunction) -> Self {
        Self { plus, f, gammas: rep.gammas().to_vec(), tau: rep.tau().clone() }
    }

    fn eps(&self, v: &[f64]) -> CMat {
        let mut m = CMat::zeros(self.tau.nrows(), self.tau.ncols());
        for (g, vi) in self.gammas.iter().zip(v) {
            m += g * c(*vi);
        }
        m * &self.tau
    }

    /// Transmission operator `A + B eps` at the direction of `x`.
    pub fn operator(&self, x: &[f64]) -> CMat {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xh: Vec<f64> = x.iter().map(|v| v / r).collect();
        let f = self.f.value(&xh);
        let id = CMat::identity(self.tau.nrows(), self.tau.ncols());
        id * c((0.5 * f).cosh()) + self.eps(&xh) * c((0.5 * f).sinh())
    }
}

impl SpinorField for TransmittedField {
    fn spinor_dim(&self) -> usize {
        self.plus.spinor_dim()
    }
    fn value(&self, x: &[f64]) -> Spinor {
        self.operator(x) * self.plus.value(x)
    }
    fn analytic_partials(&self, x: &[f64]) -> Option<Vec<Spinor>> {
        let n = x.len();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xh: Vec<f64> = x.iter().map(|v| v / r).collect();
        let f = self.f.value(&xh);
        let (a, b) = ((0.5 * f).cosh(), (0.5 * f).sinh());
        let eps = self.eps(&xh);
        let id = CMat::identity(self.tau.nrows(), self.tau.ncols());
        let op = &id * c(a) + &eps * c(b);
        let val = self.plus.value(x);
        let pp = self.plus.analytic_partials(x)?;
        Some(
            (0..n)
                .map(|j| {
                    // d_j xhat_i = (delta_ij - xhat_i xhat_j) / r
                    let dxh: Vec<f64> =
                        (0..n).map(|i| (if i == j { 1.0 } else { 0.0 } - xh[i] * xh[j]) / r).collect();
                    let df = self.f.c1 * dxh[n - 1];
                    let dop = &id * c(0.5 * df * b) + &eps * c(0.5 * df * a) + self.eps(&dxh) * c(b);
                    dop * &val + &op * &pp[j]
                })
                .collect(),
        )
    }
}

/// Matrix form of `epsilon` for a unit normal with frame components `nu`.
pub fn epsilon_matrix(rep: &CliffordRep, nu: &[f64]) -> CMat {
    epsilon_for(rep, nu)
}
