//! Integrated Weitzenboeck identity on balls and annuli.

use clifford_core::{CliffordRep, Complex64, Error, Result};
use geometry_catalog::{constraint_fields, InitialData, Orientation, PointGeometry};
use rayon::prelude::*;
use serde::Serialize;

use crate::field::{partials, SpinorField};
use crate::quad::{complex_sum, real_part, sphere_nodes, volume_nodes, Region};
use crate::spin::{BoundaryPoint, SpinFrame};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureOrders {
    pub radial: usize,
    pub sphere: usize,
}

impl Default for QuadratureOrders {
    fn default() -> Self {
        Self { radial: 12, sphere: 12 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LswResult {
    pub bulk: f64,
    pub boundary: f64,
    pub residual: f64,
    pub bulk_imag: f64,
    pub boundary_imag: f64,
    pub volume_nodes: usize,
    pub surface_nodes: usize,
}

/// Pointwise bulk density `|nabla-bar psi|^2 - |D_W psi|^2 + 1/2 <psi, (mu + J tau) psi>`.
pub fn bulk_density(
    data: &InitialData,
    rep: &CliffordRep,
    field: &dyn SpinorField,
    x: &[f64],
) -> Result<Complex64> {
    let pg = PointGeometry::new(data, x)?;
    let sf = SpinFrame::new(rep, &pg);
    let cv = constraint_fields(data, x)?;
    let psi = field.value(x);
    let dpsi = partials(field, x);
    let sd = sf.sen_derivatives(&psi, &dpsi);
    let dw = sf.dirac_witten(&psi, &dpsi);
    let grad: f64 = sd.iter().map(|s| s.norm_squared()).sum();
    let jf = pg.covector_to_frame(&cv.j);
    let jt = sf.clifford(&jf) * (&sf.tau * &psi);
    let matter = psi.dotc(&(&psi * Complex64::new(cv.mu, 0.0) + jt)) * 0.5;
    let v = Complex64::new(grad - dw.norm_squared(), 0.0) + matter;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Numeric(format!("non-finite bulk integrand at {x:?}")));
    }
    Ok(v)
}

/// Weighted bulk integral over `region`, panels split at `breaks`.
pub fn bulk_integral(
    data: &InitialData,
    rep: &CliffordRep,
    field: &dyn SpinorField,
    region: Region,
    breaks: &[f64],
    orders: QuadratureOrders,
) -> Result<(Complex64, f64, usize)> {
    let nodes = volume_nodes(data.dim(), region, breaks, orders.radial, orders.sphere)?;
    let vals: Vec<Complex64> = nodes
        .par_iter()
        .map(|nd| {
            let det = data.g(&nd.x)?.determinant();
            Ok(bulk_density(data, rep, field, &nd.x)? * (nd.weight * det.sqrt()))
        })
        .collect::<Result<_>>()?;
    let mag: Vec<f64> = vals.iter().map(|z| z.norm()).collect();
    Ok((complex_sum(&vals), geometry_catalog::linalg::pairwise_sum(&mag), nodes.len()))
}

/// Boundary integral over `{|x| = r}` with normal orientation `orientation`.
pub fn sphere_boundary_integral(
    data: &InitialData,
    rep: &CliffordRep,
    field: &dyn SpinorField,
    r: f64,
    orientation: Orientation,
    order: usize,
) -> Result<(Complex64, f64, usize)> {
    let nodes = sphere_nodes(data.dim(), r, order)?;
    let vals: Vec<Complex64> = nodes
        .par_iter()
        .map(|(x, w)| {
            let bp = BoundaryPoint::new(data, rep, x, orientation, *w)?;
            let v = bp.integrand(&field.value(x), &partials(field, x)) * bp.weight;
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Numeric(format!("non-finite boundary integrand at {x:?}")));
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let mag: Vec<f64> = vals.iter().map(|z| z.norm()).collect();
    Ok((complex_sum(&vals), geometry_catalog::linalg::pairwise_sum(&mag), nodes.len()))
}

pub fn lsw_residual(
    data: &InitialData,
    rep: &CliffordRep,
    field: &dyn SpinorField,
    region: Region,
    orders: QuadratureOrders,
) -> Result<LswResult> {
    if data.dim() != rep.n() {
        return Err(Error::Argument("data and Clifford representation dimensions differ".into()));
    }
    let (bulk_c, bulk_mag, nv) = bulk_integral(data, rep, field, region, &[], orders)?;
    let (mut bdy, mut bdy_mag, mut ns) =
        sphere_boundary_integral(data, rep, field, region.outer(), Orientation::Outward, orders.sphere)?;
    if let Region::Annulus { r_in, .. } = region {
        let (b2, m2, n2) = sphere_boundary_integral(data, rep, field, r_in, Orientation::Inward, orders.sphere)?;
        bdy += b2;
        bdy_mag += m2;
        ns += n2;
    }
    let bulk = real_part(bulk_c, bulk_mag, "bulk integral")?;
    let boundary = real_part(bdy, bdy_mag, "boundary integral")?;
    Ok(LswResult {
        bulk,
        boundary,
        residual: bulk - boundary,
        bulk_imag: bulk_c.im,
        boundary_imag: bdy.im,
        volume_nodes: nv,
        surface_nodes: ns,
    })
}
