//! Boundary flux of constant spinors on large coordinate spheres.

use clifford_core::{CMat, CliffordRep, Complex64, Error, Result, Spinor};
use geometry_catalog::{unit_sphere_volume, InitialData, Orientation};
use rayon::prelude::*;
use serde::Serialize;

use crate::adm::MassReport;
use crate::quad::{complex_sum, real_part, sphere_nodes};
use crate::spin::BoundaryPoint;

fn check(data: &InitialData, rep: &CliffordRep, r: f64) -> Result<()> {
    if data.dim() != rep.n() {
        return Err(Error::Argument("data and Clifford representation dimensions differ".into()));
    }
    if !data.domain.contains_radius(r) {
        return Err(Error::Domain(format!("radius {r} lies outside the chart of '{}'", data.label)));
    }
    Ok(())
}

fn boundary_points(data: &InitialData, rep: &CliffordRep, r: f64, order: usize) -> Result<Vec<BoundaryPoint>> {
    check(data, rep, r)?;
    sphere_nodes(data.dim(), r, order)?
        .par_iter()
        .map(|(x, w)| BoundaryPoint::new(data, rep, x, Orientation::Outward, *w))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FluxValue {
    pub value: f64,
    pub imag: f64,
}

/// `int_{S_r} <psi, D psi - 1/2 H psi - 1/2 [(tr k) nu - k(nu, .)] tau psi> dA` for constant `psi`.
pub fn witten_flux(
    data: &InitialData,
    rep: &CliffordRep,
    psi_inf: &Spinor,
    r: f64,
    order: usize,
) -> Result<FluxValue> {
    if psi_inf.len() != rep.dim() {
        return Err(Error::Argument("spinor dimension does not match the representation".into()));
    }
    let pts = boundary_points(data, rep, r, order)?;
    let zero = vec![Spinor::zeros(rep.dim()); rep.n()];
    let vals: Vec<Complex64> = pts.iter().map(|bp| bp.integrand(psi_inf, &zero) * bp.weight).collect();
    let mag: Vec<f64> = vals.iter().map(|z| z.norm()).collect();
    let z = complex_sum(&vals);
    let value = real_part(z, geometry_catalog::linalg::pairwise_sum(&mag), "Witten flux")?;
    Ok(FluxValue { value, imag: z.im })
}

/// Hermitian part of `M_ab = int <e_a, L e_b> dA` over the standard basis.
pub fn flux_matrix(data: &InitialData, rep: &CliffordRep, r: f64, order: usize) -> Result<CMat> {
    let pts = boundary_points(data, rep, r, order)?;
    let d = rep.dim();
    let zero = vec![Spinor::zeros(d); rep.n()];
    let mut m = CMat::zeros(d, d);
    for b in 0..d {
        let mut eb = Spinor::zeros(d);
        eb[b] = Complex64::new(1.0, 0.0);
        let cols: Vec<Spinor> = pts.iter().map(|bp| bp.boundary_operator(&eb, &zero) * Complex64::new(bp.weight, 0.0)).collect();
        for a in 0..d {
            let v: Vec<Complex64> = cols.iter().map(|s| s[a]).collect();
            m[(a, b)] = complex_sum(&v);
        }
    }
    Ok((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
}

/// `(E, P)` from `M = c (E - P_j gamma_j tau)`, `c = (n-1) omega / 2`.
pub fn energy_momentum_from_matrix(rep: &CliffordRep, m: &CMat) -> (f64, Vec<f64>) {
    let n = rep.n();
    let c = (n as f64 - 1.0) * unit_sphere_volume(n) / 2.0;
    let d = rep.dim() as f64;
    let e = m.trace().re / (c * d);
    let p = (0..n).map(|j| -(m * rep.gamma(j) * rep.tau()).trace().re / (c * d)).collect();
    (e, p)
}

#[derive(Debug, Clone, Serialize)]
pub struct WittenReport {
    pub radii: Vec<f64>,
    /// Flux of the first basis spinor at each radius.
    pub flux: Vec<f64>,
    pub fit: MassReport,
    /// Largest deviation of the flux matrix from the fitted form, relative to `c E`.
    pub model_defect: Vec<f64>,
}

/// Energy-momentum fitted from the flux matrix at each radius, then extrapolated.
pub fn witten_energy_momentum(
    data: &InitialData,
    rep: &CliffordRep,
    radii: &[f64],
    order: usize,
) -> Result<WittenReport> {
    let n = rep.n();
    let c = (n as f64 - 1.0) * unit_sphere_volume(n) / 2.0;
    let mut e_raw = Vec::new();
    let mut p_raw = Vec::new();
    let mut flux = Vec::new();
    let mut model_defect = Vec::new();
    for &r in radii {
        let m = flux_matrix(data, rep, r, order)?;
        let (e, p) = energy_momentum_from_matrix(rep, &m);
        let mut model = rep.identity() * Complex64::new(c * e, 0.0);
        for (j, pj) in p.iter().enumerate() {
            model -= rep.gamma(j) * rep.tau() * Complex64::new(c * pj, 0.0);
        }
        model_defect.push((&m - model).camax() / (c * e.abs()).max(1e-300));
        flux.push(m[(0, 0)].re);
        e_raw.push(e);
        p_raw.push(p);
    }
    let fit = MassReport::from_samples(radii.to_vec(), e_raw, p_raw)?;
    Ok(WittenReport { radii: radii.to_vec(), flux, fit, model_defect })
}
