use crate::error::{Error, Result};
use crate::rep::CliffordRep;
use crate::{CMat, Spinor};
use num_complex::Complex64;

/// Vector `c tau + X` of the Lorentzian fiber, `X` given in an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberVector {
    pub components: Vec<f64>,
    pub timelike: f64,
}

impl FiberVector {
    pub fn spatial(components: Vec<f64>) -> Self {
        Self { components, timelike: 0.0 }
    }

    pub fn tau(n: usize) -> Self {
        Self { components: vec![0.0; n], timelike: 1.0 }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut components = vec![0.0; n];
        components[i] = 1.0;
        Self::spatial(components)
    }

    /// Squared causal length `-c^2 + |X|^2`.
    pub fn causal_length_sq(&self) -> f64 {
        -self.timelike * self.timelike + self.components.iter().map(|x| x * x).sum::<f64>()
    }

    pub fn matrix(&self, rep: &CliffordRep) -> CMat {
        let mut m = rep.vector_matrix(&self.components);
        if self.timelike != 0.0 {
            m += rep.tau() * Complex64::new(self.timelike, 0.0);
        }
        m
    }
}

/// Hyperbolic angle with its hyperbolic and half-angle functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicRotation {
    pub f: f64,
    pub a: f64,
    pub b: f64,
    pub big_a: f64,
    pub big_b: f64,
}

impl HyperbolicRotation {
    pub fn new(f: f64) -> Self {
        Self {
            f,
            a: f.cosh(),
            b: f.sinh(),
            big_a: (0.5 * f).cosh(),
            big_b: (0.5 * f).sinh(),
        }
    }

    /// Largest defect among `a^2-b^2=1`, `A^2-B^2=1`, `A^2+B^2=a`, `2AB=b`, relative to `a`.
    pub fn identity_defect(&self) -> f64 {
        let s = self.a.max(1.0);
        [
            (self.a * self.a - self.b * self.b - 1.0).abs() / (s * s),
            (self.big_a * self.big_a - self.big_b * self.big_b - 1.0).abs() / s,
            (self.big_a * self.big_a + self.big_b * self.big_b - self.a).abs() / s,
            (2.0 * self.big_a * self.big_b - self.b).abs() / s,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `(c tau + sum v_i gamma_i) psi`.
pub fn clifford_mul(rep: &CliffordRep, v: &FiberVector, psi: &Spinor) -> Result<Spinor> {
    rep.check_spinor(psi)?;
    if v.components.len() != rep.n() {
        return Err(Error::Argument(format!(
            "vector has {} components, representation has n = {}",
            v.components.len(),
            rep.n()
        )));
    }
    if !v.timelike.is_finite() || v.components.iter().any(|c| !c.is_finite()) {
        return Err(Error::Argument("non-finite vector component".into()));
    }
    Ok(v.matrix(rep) * psi)
}

/// `epsilon = nu tau` for `nu = e_{nu_index}` (one based).
pub fn epsilon_action(rep: &CliffordRep, nu_index: usize) -> Result<CMat> {
    if nu_index == 0 || nu_index > rep.n() {
        return Err(Error::Argument(format!("nu index {nu_index} outside 1..={}", rep.n())));
    }
    Ok(rep.gamma(nu_index - 1) * rep.tau())
}

/// `epsilon = nu tau` for a unit normal with arbitrary frame components.
pub fn epsilon_for(rep: &CliffordRep, nu: &[f64]) -> CMat {
    rep.vector_matrix(nu) * rep.tau()
}

/// `A + B epsilon` from an explicit `epsilon`.
pub fn rotation_from_epsilon(rep: &CliffordRep, rot: &HyperbolicRotation, eps: &CMat) -> CMat {
    rep.identity() * Complex64::new(rot.big_a, 0.0) + eps * Complex64::new(rot.big_b, 0.0)
}

/// Spinor rotation `R = A Id + B epsilon`.
pub fn spinor_rotation(rep: &CliffordRep, rot: &HyperbolicRotation, nu_index: usize) -> Result<CMat> {
    let eps = epsilon_action(rep, nu_index)?;
    Ok(rotation_from_epsilon(rep, rot, &eps))
}

/// Standard Hermitian product, antilinear in the first slot.
pub fn hermitian(psi: &Spinor, phi: &Spinor) -> Complex64 {
    psi.dotc(phi)
}

/// Both pairings: `(<psi, phi>, <tau psi, phi>)`.
pub fn pairings(rep: &CliffordRep, psi: &Spinor, phi: &Spinor) -> Result<(Complex64, Complex64)> {
    rep.check_spinor(psi)?;
    rep.check_spinor(phi)?;
    let tpsi = rep.tau() * psi;
    Ok((hermitian(psi, phi), hermitian(&tpsi, phi)))
}

/// Max-abs entry of a complex matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
