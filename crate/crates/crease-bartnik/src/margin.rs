use clifford_core::{Error, Result};
use serde::Serialize;

use crate::bartnik::{beta_delta, rotated_components, BartnikData};

pub const DEFAULT_CREASE_TOL: f64 = 1e-9;

/// Tolerance below which a disagreement between the two forms of the crease condition is ignored.
pub const FORM_AGREEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct CreaseNode {
    pub nu_component: f64,
    pub tau_component: f64,
    pub beta_delta_norm: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CreaseReport {
    pub nodes: Vec<CreaseNode>,
    pub min_margin: f64,
    pub argmin: usize,
    pub tol: f64,
    pub dec_creased: bool,
}

/// `nu - sqrt(tau^2 + b^2)`.
pub fn margin_value(nu: f64, tau: f64, b: f64) -> f64 {
    nu - tau.hypot(b)
}

/// Spacelike-and-future form: `nu >= |tau|` and `nu^2 - tau^2 >= b^2`.
pub fn spacelike_form(nu: f64, tau: f64, b: f64) -> bool {
    nu >= tau.abs() && nu * nu - tau * tau >= b * b
}

pub fn crease_margin(
    b_minus: &BartnikData,
    b_plus: &BartnikData,
    f: &[f64],
    tol: f64,
) -> Result<CreaseReport> {
    b_minus.check_same_grid(b_plus)?;
    let (nu, tau) = rotated_components(b_minus, f)?;
    let bd = beta_delta(b_minus, b_plus, f)?;
    let mut nodes = Vec::with_capacity(nu.len());
    for (i, p) in b_plus.nodes.iter().enumerate() {
        let x = nu[i] - p.h;
        let t = tau[i] - p.trk;
        let b = p.covector_norm(&bd[i])?;
        nodes.push(CreaseNode { nu_component: x, tau_component: t, beta_delta_norm: b, margin: margin_value(x, t, b) });
    }
    let (argmin, min_margin) = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (i, n.margin))
        .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
    Ok(CreaseReport { nodes, min_margin, argmin, tol, dec_creased: min_margin >= -tol })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpacelikeCheck {
    pub per_node: Vec<bool>,
    /// Nodes where the two forms disagree and the margin exceeds the agreement tolerance.
    pub disagreements: Vec<usize>,
}

/// Evaluates the spacelike form at every node and compares it with the sign of the margin.
pub fn spacelike_form_check(report: &CreaseReport) -> Result<SpacelikeCheck> {
    let mut per_node = Vec::with_capacity(report.nodes.len());
    let mut disagreements = Vec::new();
    for (i, n) in report.nodes.iter().enumerate() {
        let ok = spacelike_form(n.nu_component, n.tau_component, n.beta_delta_norm);
        if ok != (n.margin >= 0.0) && n.margin.abs() > FORM_AGREEMENT_TOL {
            disagreements.push(i);
        }
        per_node.push(ok);
    }
    if let Some(&i) = disagreements.first() {
        return Err(Error::Consistency(format!(
            "margin and spacelike forms disagree at {} nodes (first {i}, margin {})",
            disagreements.len(),
            report.nodes[i].margin
        )));
    }
    Ok(SpacelikeCheck { per_node, disagreements })
}

/// Nodewise hyperbolic angle taking `b` to `b_prime`.
#[derive(Debug, Clone, Serialize)]
pub struct AngleSolution {
    pub f: Vec<f64>,
    /// Largest `|beta' - beta - df|_gamma`.
    pub beta_defect: f64,
}

/// Angle `f` with `F(H) = H'` and `beta' = beta + df` within `tol`, if one exists.
///
/// Null mean-curvature vectors are rejected: the angle is not determined there.
pub fn equivalence_angle(b: &BartnikData, b_prime: &BartnikData, tol: f64) -> Result<Option<AngleSolution>> {
    b.check_same_grid(b_prime)?;
    for (x, y) in b.nodes.iter().zip(&b_prime.nodes) {
        for a in 0..2 {
            for c in 0..2 {
                if (x.gamma[a][c] - y.gamma[a][c]).abs() > tol {
                    return Err(Error::Argument("Bartnik data have different induced metrics".into()));
                }
            }
        }
    }
    let mut f = Vec::with_capacity(b.len());
    for (x, y) in b.nodes.iter().zip(&b_prime.nodes) {
        let len = x.h * x.h - x.trk * x.trk;
        let len2 = y.h * y.h - y.trk * y.trk;
        let scale = x.h.abs().max(x.trk.abs()).max(1e-300);
        if len.abs() <= tol * scale * scale {
            return Err(Error::Numeric(
                "indeterminate angle: mean curvature vector is null at a node".into(),
            ));
        }
        if (len - len2).abs() > tol * scale * scale.max(y.h.abs().max(y.trk.abs())) {
            return Ok(None);
        }
        let fi = if len > 0.0 {
            if x.h.signum() != y.h.signum() {
                return Ok(None);
            }
            (y.trk / y.h).atanh() - (x.trk / x.h).atanh()
        } else {
            if x.trk.signum() != y.trk.signum() {
                return Ok(None);
            }
            (y.h / y.trk).atanh() - (x.h / x.trk).atanh()
        };
        f.push(fi);
    }
    let df = b.grid.gradient(&f, b.r0)?;
    let mut beta_defect = 0.0f64;
    for ((x, y), d) in b.nodes.iter().zip(&b_prime.nodes).zip(&df) {
        let w = [y.beta[0] - x.beta[0] - d[0], y.beta[1] - x.beta[1] - d[1]];
        beta_defect = beta_defect.max(x.covector_norm(&w)?);
    }
    if beta_defect > tol {
        return Ok(None);
    }
    Ok(Some(AngleSolution { f, beta_defect }))
}
