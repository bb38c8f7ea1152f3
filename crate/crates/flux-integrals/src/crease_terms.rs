//! Boundary terms of the two sides of a crease for transmission-compatible spinors.
//!
//! Both normals `nu_-` and `nu_+` point towards increasing `r`. The minus side integrand
//! uses `nu_-` as outward normal, the plus side uses `-nu_+`.

use clifford_core::{CliffordRep, Complex64, Error, Result};
use geometry_catalog::linalg::pairwise_sum;
use geometry_catalog::{CreasedData, Orientation};
use rayon::prelude::*;
use serde::Serialize;

use crate::field::{partials, SpinorField};
use crate::quad::{complex_sum, real_part, sphere_nodes};
use crate::spin::BoundaryPoint;

/// Largest accepted `|psi_- - (A + B eps_+) psi_+|`, relative to `max(1, |psi_+|)`.
pub const TRANSMISSION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct CreaseTerms {
    pub i_minus: f64,
    pub i_plus: f64,
    pub direct: f64,
    pub formula: f64,
    pub bound: f64,
    pub transmission_defect: f64,
    /// Smallest `<F(H_-) - H_+, nu_+> - sqrt(<..., tau_+>^2 + |beta^D|^2)` over the nodes.
    pub min_margin: f64,
    pub nodes: usize,
}

struct NodeTerms {
    i_minus: Complex64,
    i_plus: Complex64,
    formula: Complex64,
    bound: f64,
    defect: f64,
    margin: f64,
}

pub fn crease_boundary_terms(
    cd: &CreasedData,
    rep: &CliffordRep,
    psi_minus: &dyn SpinorField,
    psi_plus: &dyn SpinorField,
    order: usize,
) -> Result<CreaseTerms> {
    let n = cd.dim();
    if n != rep.n() {
        return Err(Error::Argument("data and Clifford representation dimensions differ".into()));
    }
    let nodes = sphere_nodes(n, cd.r0, order)?;
    let terms: Vec<NodeTerms> = nodes
        .par_iter()
        .map(|(x, w)| {
            let bm = BoundaryPoint::new(&cd.minus, rep, x, Orientation::Outward, *w)?;
            let bp = BoundaryPoint::new(&cd.plus, rep, x, Orientation::Inward, *w)?;
            let pm = psi_minus.value(x);
            let pp = psi_plus.value(x);
            let i_minus = bm.integrand(&pm, &partials(psi_minus, x)) * bm.weight;
            let i_plus = bp.integrand(&pp, &partials(psi_plus, x)) * bp.weight;

            // Outward-from-minus quantities of the plus side.
            let nu_p: Vec<f64> = bp.nu_frame.iter().map(|v| -v).collect();
            let h_p = -bp.mean_curvature;
            let beta_p: Vec<f64> = bp.beta.iter().map(|v| -v).collect();
            let xh: Vec<f64> = x.iter().map(|v| v / cd.r0).collect();
            let f = cd.f.value(&xh);
            let (ch, sh) = (f.cosh(), f.sinh());

            let eps = bp.spin.clifford(&nu_p) * &bp.spin.tau;
            let op = rep.identity() * Complex64::new((0.5 * f).cosh(), 0.0) + eps * Complex64::new((0.5 * f).sinh(), 0.0);
            let defect = (&pm - op * &pp).camax() / pp.camax().max(1.0);

            let nu_jump = h_p - (ch * bm.mean_curvature + sh * bm.trace_k);
            let tau_jump = bp.trace_k - (sh * bm.mean_curvature + ch * bm.trace_k);
            let mut v: Vec<f64> = nu_p.iter().map(|a| tau_jump * a).collect();
            let mut bd2 = 0.0;
            for (a, tf) in bp.tangents_frame.iter().enumerate() {
                let bd = beta_p[a] - bm.beta[a] - cd.f.differential(cd.r0, &bp.tangents[a]);
                bd2 += bd * bd;
                for i in 0..n {
                    v[i] -= bd * tf[i];
                }
            }
            let norm2 = pp.norm_squared();
            let cross = pp.dotc(&(bp.spin.clifford(&v) * (&bp.spin.tau * &pp)));
            let formula = (Complex64::new(norm2 * nu_jump, 0.0) + cross) * (0.5 * bp.weight);
            let bound = 0.5 * bp.weight * norm2 * (nu_jump + (tau_jump * tau_jump + bd2).sqrt());
            let margin = -nu_jump - (tau_jump * tau_jump + bd2).sqrt();
            Ok(NodeTerms { i_minus, i_plus, formula, bound, defect, margin })
        })
        .collect::<Result<_>>()?;

    let defect = terms.iter().map(|t| t.defect).fold(0.0, f64::max);
    if !(defect <= TRANSMISSION_TOL) {
        return Err(Error::Precondition(format!(
            "spinor traces violate the transmission condition: max defect {defect:e} > {TRANSMISSION_TOL:e}"
        )));
    }
    let im: Vec<Complex64> = terms.iter().map(|t| t.i_minus).collect();
    let ip: Vec<Complex64> = terms.iter().map(|t| t.i_plus).collect();
    let fo: Vec<Complex64> = terms.iter().map(|t| t.formula).collect();
    let mag = |v: &[Complex64]| pairwise_sum(&v.iter().map(|z| z.norm()).collect::<Vec<_>>());
    let im_sum = complex_sum(&im);
    let ip_sum = complex_sum(&ip);
    let i_minus = real_part(im_sum, mag(&im), "minus boundary term")?;
    let i_plus = real_part(ip_sum, mag(&ip), "plus boundary term")?;
    let formula = real_part(complex_sum(&fo), mag(&fo), "crease formula")?;
    let bound = pairwise_sum(&terms.iter().map(|t| t.bound).collect::<Vec<_>>());
    Ok(CreaseTerms {
        i_minus,
        i_plus,
        direct: i_minus + i_plus,
        formula,
        bound,
        transmission_defect: defect,
        min_margin: terms.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min),
        nodes: terms.len(),
    })
}
