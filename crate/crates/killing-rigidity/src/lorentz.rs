//! Lorentz relations between the lapse-shift pairs on the two sides of a crease.

use clifford_core::{CliffordRep, Complex64, Error, Result, Spinor};
use flux_integrals::{BoundaryPoint, SpinorField};
use geometry_catalog::{CreasedData, Orientation};
use rayon::prelude::*;
use serde::Serialize;

/// Largest accepted `|psi_- - (A + B eps_+) psi_+|`, relative to `max(1, |psi_+|)`.
pub const TRANSMISSION_TOL: f64 = 1e-10;

/// Largest absolute residuals over the crease nodes. Every residual is quadratic in the spinors.
#[derive(Debug, Clone, Serialize)]
pub struct LorentzReport {
    pub nodes: usize,
    /// `<Y_-, V> - <Y_+, V>` over tangent vectors `V`.
    pub tangential: f64,
    /// `<Y_-, nu_-> - (a <Y_+, nu_+> - b u_+)`.
    pub normal: f64,
    /// `u_- - (a u_+ - b <Y_+, nu_+>)`.
    pub lapse: f64,
    /// `(u_-^2 - <Y_-, nu_->^2) - (u_+^2 - <Y_+, nu_+>^2)`.
    pub causal: f64,
    /// Largest `u_+`, the natural scale of the first three residuals.
    pub scale: f64,
    pub transmission_defect: f64,
    pub max_imag: f64,
}

impl LorentzReport {
    pub fn max_residual(&self) -> f64 {
        self.tangential.max(self.normal).max(self.lapse)
    }
}

struct NodeResidual {
    tangential: f64,
    normal: f64,
    lapse: f64,
    causal: f64,
    u_plus: f64,
    defect: f64,
    imag: f64,
}

/// Frame components of `Y` and the imaginary residue.
fn shift_frame(rep: &CliffordRep, psi: &Spinor) -> (Vec<f64>, f64) {
    let mut imag = 0.0f64;
    let y = (0..rep.n())
        .map(|j| {
            let z: Complex64 = (rep.tau() * rep.gamma(j) * psi).dotc(psi);
            imag = imag.max(z.im.abs());
            z.re
        })
        .collect();
    (y, imag)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks the pointwise relations with `a = cosh f`, `b = sinh f`; both normals point to increasing `r`.
pub fn crease_lorentz_check(
    cd: &CreasedData,
    rep: &CliffordRep,
    psi_minus: &dyn SpinorField,
    psi_plus: &dyn SpinorField,
    order: usize,
) -> Result<LorentzReport> {
    let n = cd.dim();
    if n != rep.n() {
        return Err(Error::Argument("data and Clifford representation dimensions differ".into()));
    }
    let nodes = flux_integrals::quad::sphere_nodes(n, cd.r0, order)?;
    let res: Vec<NodeResidual> = nodes
        .par_iter()
        .map(|(x, _)| {
            let bm = BoundaryPoint::new(&cd.minus, rep, x, Orientation::Outward, 1.0)?;
            let bp = BoundaryPoint::new(&cd.plus, rep, x, Orientation::Outward, 1.0)?;
            let pm = psi_minus.value(x);
            let pp = psi_plus.value(x);
            let xh: Vec<f64> = x.iter().map(|v| v / cd.r0).collect();
            let f = cd.f.value(&xh);
            let eps = bp.spin.clifford(&bp.nu_frame) * &bp.spin.tau;
            let op = rep.identity() * Complex64::new((0.5 * f).cosh(), 0.0) + eps * Complex64::new((0.5 * f).sinh(), 0.0);
            let defect = (&pm - op * &pp).camax() / pp.camax().max(1.0);

            let (um, up) = (pm.norm_squared(), pp.norm_squared());
            let (ym, im_m) = shift_frame(rep, &pm);
            let (yp, im_p) = shift_frame(rep, &pp);
            let (nm, np) = (dot(&ym, &bm.nu_frame), dot(&yp, &bp.nu_frame));
            let (a, b) = (f.cosh(), f.sinh());
            let tangential = bp
                .tangents
                .iter()
                .map(|v| {
                    let vm: Vec<f64> = (0..n).map(|i| (0..n).map(|j| bm.spin.coframe[(i, j)] * v[j]).sum()).collect();
                    let vp: Vec<f64> = (0..n).map(|i| (0..n).map(|j| bp.spin.coframe[(i, j)] * v[j]).sum()).collect();
                    (dot(&ym, &vm) - dot(&yp, &vp)).abs()
                })
                .fold(0.0, f64::max);
            Ok(NodeResidual {
                tangential,
                normal: (nm - (a * np - b * up)).abs(),
                lapse: (um - (a * up - b * np)).abs(),
                causal: ((um * um - nm * nm) - (up * up - np * np)).abs(),
                u_plus: up,
                defect,
                imag: im_m.max(im_p),
            })
        })
        .collect::<Result<_>>()?;

    let max = |g: fn(&NodeResidual) -> f64| res.iter().map(g).fold(0.0, f64::max);
    let transmission_defect = max(|r| r.defect);
    if !(transmission_defect <= TRANSMISSION_TOL) {
        return Err(Error::Precondition(format!(
            "spinor traces violate the transmission condition: max defect {transmission_defect:e} > {TRANSMISSION_TOL:e}"
        )));
    }
    Ok(LorentzReport {
        nodes: res.len(),
        tangential: max(|r| r.tangential),
        normal: max(|r| r.normal),
        lapse: max(|r| r.lapse),
        causal: max(|r| r.causal),
        scale: max(|r| r.u_plus),
        transmission_defect,
        max_imag: max(|r| r.imag),
    })
}
