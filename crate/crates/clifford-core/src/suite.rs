//! Residuals of the algebraic identities of the representation, collected by name.

use crate::error::Result;
use crate::ops::{epsilon_action, max_abs, spinor_rotation, HyperbolicRotation};
use crate::rep::CliffordRep;
use crate::CMat;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub name: String,
    pub n: usize,
    pub f: Option<f64>,
    pub residual: f64,
}

fn push(out: &mut Vec<IdentityResidual>, name: &str, n: usize, f: Option<f64>, residual: f64) {
    out.push(IdentityResidual { name: name.to_string(), n, f, residual });
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Structural identities of a representation (no angle dependence).
pub fn structure_residuals(rep: &CliffordRep) -> Vec<IdentityResidual> {
    let n = rep.n();
    let id = rep.identity();
    let tau = rep.tau();
    let mut out = Vec::new();
    let mut anti = 0.0f64;
    let mut herm = 0.0f64;
    let mut unit = 0.0f64;
    let mut tau_anti = 0.0f64;
    for i in 0..n {
        let gi = rep.gamma(i);
        for j in 0..n {
            let gj = rep.gamma(j);
            let delta = if i == j { 2.0 } else { 0.0 };
            anti = anti.max(max_abs(&(gi * gj + gj * gi + &id * c(delta))));
        }
        herm = herm.max(max_abs(&(gi.adjoint() + gi)));
        unit = unit.max(max_abs(&(gi.adjoint() * gi - &id)));
        tau_anti = tau_anti.max(max_abs(&(tau * gi + gi * tau)));
    }
    push(&mut out, "anticommutator", n, None, anti);
    push(&mut out, "gamma_anti_hermitian", n, None, herm);
    push(&mut out, "gamma_unitary", n, None, unit);
    push(&mut out, "tau_squared", n, None, max_abs(&(tau * tau - &id)));
    push(&mut out, "tau_hermitian", n, None, max_abs(&(tau.adjoint() - tau)));
    push(&mut out, "tau_gamma_anticommute", n, None, tau_anti);

    let mut eps_sq = 0.0f64;
    let mut eps_nu = 0.0f64;
    let mut nu_eps = 0.0f64;
    let mut eps_tau = 0.0f64;
    let mut eps_herm = 0.0f64;
    for k in 1..=n {
        let eps = epsilon_action(rep, k).expect("valid index");
        let nu = rep.gamma(k - 1);
        eps_sq = eps_sq.max(max_abs(&(&eps * &eps - &id)));
        eps_nu = eps_nu.max(max_abs(&(&eps * nu - tau)));
        nu_eps = nu_eps.max(max_abs(&(nu * &eps + tau)));
        eps_tau = eps_tau.max(max_abs(&(&eps * tau + tau * &eps)));
        eps_herm = eps_herm.max(max_abs(&(eps.adjoint() - &eps)));
    }
    push(&mut out, "epsilon_squared", n, None, eps_sq);
    push(&mut out, "epsilon_nu_equals_tau", n, None, eps_nu);
    push(&mut out, "nu_epsilon_equals_minus_tau", n, None, nu_eps);
    push(&mut out, "epsilon_tau_anticommute", n, None, eps_tau);
    push(&mut out, "epsilon_hermitian", n, None, eps_herm);
    out
}

/// Angle-dependent identities of `A + B epsilon` for each frame direction.
pub fn rotation_residuals(rep: &CliffordRep, f: f64) -> Result<Vec<IdentityResidual>> {
    let n = rep.n();
    let id = rep.identity();
    let rot = HyperbolicRotation::new(f);
    let mut inv = 0.0f64;
    let mut sq = 0.0f64;
    let mut comp = 0.0f64;
    for k in 1..=n {
        let eps = epsilon_action(rep, k)?;
        let r = spinor_rotation(rep, &rot, k)?;
        let rinv: CMat = &id * c(rot.big_a) - &eps * c(rot.big_b);
        inv = inv.max(max_abs(&(&rinv * &r - &id)));
        inv = inv.max(max_abs(&(&r * &rinv - &id)));
        let double: CMat = &id * c(rot.a) + &eps * c(rot.b);
        sq = sq.max(max_abs(&(&r * &r - double)));
        let half = spinor_rotation(rep, &HyperbolicRotation::new(0.5 * f), k)?;
        let other = spinor_rotation(rep, &HyperbolicRotation::new(0.25), k)?;
        let joint = spinor_rotation(rep, &HyperbolicRotation::new(0.5 * f + 0.25), k)?;
        comp = comp.max(max_abs(&(&half * &half - &r)));
        comp = comp.max(max_abs(&(&half * &other - &joint)));
    }
    let mut out = Vec::new();
    push(&mut out, "rotation_inverse", n, Some(f), inv);
    push(&mut out, "rotation_double_angle", n, Some(f), sq);
    push(&mut out, "rotation_composition", n, Some(f), comp);
    push(&mut out, "scalar_double_angle", n, Some(f), rot.identity_defect());
    Ok(out)
}

/// Full suite over a set of dimensions and angles.
pub fn identity_suite(dims: &[usize], angles: &[f64]) -> Result<Vec<IdentityResidual>> {
    let mut out = Vec::new();
    for &n in dims {
        let rep = CliffordRep::new(n)?;
        out.extend(structure_residuals(&rep));
        for &f in angles {
            out.extend(rotation_residuals(&rep, f)?);
        }
    }
    Ok(out)
}
