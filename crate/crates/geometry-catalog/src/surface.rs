//! Geometry of coordinate spheres `{|x| = r}`.
//!
//! Mean curvature is `H = div_g nu` for the chosen unit normal, so round spheres in flat
//! space have `H = (n-1)/r` for the outward normal.

use clifford_core::{Error, Result};
use serde::Serialize;

use crate::data::InitialData;
use crate::frame::PointGeometry;
use crate::linalg::{inverse, norm, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Outward,
    Inward,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Outward => 1.0,
            Orientation::Inward => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Outward => Orientation::Inward,
            Orientation::Inward => Orientation::Outward,
        }
    }
}

/// Unit normal `nu = sign * grad r / |grad r|` and its derivatives at a point.
#[derive(Debug, Clone)]
pub struct NormalField {
    /// Coordinate components.
    pub nu: Vec<f64>,
    /// `d_nu[(a, c)] = d_c nu^a`.
    pub d_nu: Mat,
    /// `nabla_nu[(a, c)] = (nabla_{d_c} nu)^a`.
    pub nabla_nu: Mat,
    /// `div_g nu`.
    pub mean_curvature: f64,
}

pub fn normal_field(pg: &PointGeometry, orientation: Orientation) -> Result<NormalField> {
    let n = pg.dim();
    let r = norm(&pg.x);
    if r <= 0.0 {
        return Err(Error::Domain("normal of a coordinate sphere is undefined at the origin".into()));
    }
    let sign = orientation.sign();
    let u: Vec<f64> = pg.x.iter().map(|v| v / r).collect();
    let du = Mat::from_fn(n, n, |a, c| (if a == c { 1.0 } else { 0.0 } - u[a] * u[c]) / r);
    let gi = &pg.g_inv;
    let w: Vec<f64> = (0..n).map(|a| (0..n).map(|b| gi[(a, b)] * u[b]).sum()).collect();
    // d_c w^a = -g^{ad} d_c g_{de} w^e + g^{ab} d_c u_b
    let dw = Mat::from_fn(n, n, |a, c| {
        let dg = &pg.fields.dg[c];
        let mut s = 0.0;
        for d in 0..n {
            let mut t = 0.0;
            for e in 0..n {
                t += dg[(d, e)] * w[e];
            }
            s += -gi[(a, d)] * t + gi[(a, d)] * du[(d, c)];
        }
        s
    });
    let n2: f64 = (0..n).map(|a| u[a] * w[a]).sum();
    if !(n2 > 0.0) {
        return Err(Error::InvalidData("degenerate normal".into()));
    }
    let nn = n2.sqrt();
    let dn2: Vec<f64> = (0..n)
        .map(|c| (0..n).map(|a| du[(a, c)] * w[a] + u[a] * dw[(a, c)]).sum())
        .collect();
    let nu: Vec<f64> = w.iter().map(|v| sign * v / nn).collect();
    let d_nu = Mat::from_fn(n, n, |a, c| sign * (dw[(a, c)] / nn - w[a] * dn2[c] / (2.0 * nn * n2)));
    let nabla_nu = Mat::from_fn(n, n, |a, c| {
        let mut s = d_nu[(a, c)];
        for b in 0..n {
            s += pg.christoffel[a][(c, b)] * nu[b];
        }
        s
    });
    let mean_curvature = nabla_nu.trace();
    Ok(NormalField { nu, d_nu, nabla_nu, mean_curvature })
}

/// Euclidean orthonormal tangent vectors of the unit sphere at `xhat`.
///
/// For `n = 3` away from the poles these are the unit `theta` and `phi` directions.
/// Otherwise the coordinate axes are projected and orthonormalised in index order,
/// skipping the axis most aligned with `xhat`.
pub fn tangent_frame(xhat: &[f64]) -> Vec<Vec<f64>> {
    let n = xhat.len();
    if n == 3 {
        let rho = (xhat[0] * xhat[0] + xhat[1] * xhat[1]).sqrt();
        if rho > 1e-8 {
            let (cp, sp) = (xhat[0] / rho, xhat[1] / rho);
            let ct = xhat[2];
            return vec![vec![ct * cp, ct * sp, -rho], vec![-sp, cp, 0.0]];
        }
    }
    let skip = (0..n).max_by(|&a, &b| xhat[a].abs().total_cmp(&xhat[b].abs())).unwrap_or(0);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for i in (0..n).filter(|&i| i != skip) {
        let mut v: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
        let d: f64 = v.iter().zip(xhat).map(|(a, b)| a * b).sum();
        for j in 0..n {
            v[j] -= d * xhat[j];
        }
        for prev in &out {
            let d: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
            for j in 0..n {
                v[j] -= d * prev[j];
            }
        }
        let l = norm(&v);
        out.push(v.iter().map(|a| a / l).collect());
    }
    out
}

/// Induced geometry of `{|x| = r0}` at the point `r0 * omega`.
#[derive(Debug, Clone, Serialize)]
pub struct HypersurfaceGeometry {
    pub point: Vec<f64>,
    pub orientation: Orientation,
    /// Euclidean unit tangent vectors defining the tangential frame.
    pub tangents: Vec<Vec<f64>>,
    /// `gamma[a][b] = g(t_a, t_b)`.
    pub gamma: Vec<Vec<f64>>,
    /// Coordinate components of the unit normal.
    pub nu: Vec<f64>,
    pub mean_curvature: f64,
    /// `Tr_gamma k = tr_g k - k(nu, nu)`.
    pub trace_k: f64,
    /// `beta_a = k(nu, t_a)`.
    pub beta: Vec<f64>,
}

impl HypersurfaceGeometry {
    pub fn gamma_matrix(&self) -> Mat {
        let m = self.gamma.len();
        Mat::from_fn(m, m, |a, b| self.gamma[a][b])
    }

    /// `|w|_gamma` for a covector given on the tangential frame.
    pub fn covector_norm(&self, w: &[f64]) -> Result<f64> {
        let gi = inverse(&self.gamma_matrix())?;
        let m = w.len();
        let mut s = 0.0;
        for a in 0..m {
            for b in 0..m {
                s += w[a] * gi[(a, b)] * w[b];
            }
        }
        Ok(s.max(0.0).sqrt())
    }
}

pub fn hypersurface_geometry(
    data: &InitialData,
    r0: f64,
    omega: &[f64],
    orientation: Orientation,
) -> Result<HypersurfaceGeometry> {
    let w = norm(omega);
    if !(w > 0.0) {
        return Err(Error::Argument("sphere point must be nonzero".into()));
    }
    let xhat: Vec<f64> = omega.iter().map(|v| v / w).collect();
    let tangents = tangent_frame(&xhat);
    hypersurface_geometry_with_frame(data, r0, &xhat, orientation, tangents)
}

/// As [`hypersurface_geometry`] with caller-supplied tangent vectors.
pub fn hypersurface_geometry_with_frame(
    data: &InitialData,
    r0: f64,
    xhat: &[f64],
    orientation: Orientation,
    tangents: Vec<Vec<f64>>,
) -> Result<HypersurfaceGeometry> {
    if !(r0 > 0.0) {
        return Err(Error::Argument(format!("sphere radius must be positive, got {r0}")));
    }
    let x: Vec<f64> = xhat.iter().map(|v| r0 * v).collect();
    let pg = PointGeometry::new(data, &x)?;
    let nf = normal_field(&pg, orientation)?;
    let m = tangents.len();
    let gamma: Vec<Vec<f64>> =
        (0..m).map(|a| (0..m).map(|b| pg.g_dot(&tangents[a], &tangents[b])).collect()).collect();
    let gm = Mat::from_fn(m, m, |a, b| gamma[a][b]);
    let det = gm.determinant();
    if !(det > 1e-300) || gm.clone().cholesky().is_none() {
        return Err(Error::InvalidData(format!("degenerate induced metric at {x:?}")));
    }
    let beta = tangents.iter().map(|t| pg.k_dot(&nf.nu, t)).collect();
    let trace_k = pg.trace_k() - pg.k_dot(&nf.nu, &nf.nu);
    Ok(HypersurfaceGeometry {
        point: x,
        orientation,
        tangents,
        gamma,
        nu: nf.nu,
        mean_curvature: nf.mean_curvature,
        trace_k,
        beta,
    })
}
