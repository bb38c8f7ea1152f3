//! Killing-condition residuals and conservation of the squared Lorentz length.

use clifford_core::{Error, Result};
use geometry_catalog::{InitialData, Mat, PointGeometry};
use rayon::prelude::*;
use serde::Serialize;

use crate::lapse::{shift_norm_sq, LapseShift};

/// Central-difference step for `u` and `Y`.
pub fn fd_step(x: &[f64]) -> f64 {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    f64::EPSILON.cbrt() * r.max(1.0)
}

/// `u`, `Y` and their first coordinate partials at one point.
pub(crate) struct Jet {
    pub u: f64,
    pub y: Vec<f64>,
    pub du: Vec<f64>,
    /// `dy[(b, a)] = d_a Y^b`.
    pub dy: Mat,
    pub imag: f64,
}

pub(crate) fn jet(data: &InitialData, ls: &LapseShift, x: &[f64]) -> Result<Jet> {
    let n = x.len();
    let h = fd_step(x);
    data.check_point(x)?;
    let c = ls.eval(x)?;
    let mut du = vec![0.0; n];
    let mut dy = Mat::zeros(n, n);
    let mut imag = c.imag;
    for a in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[a] += h;
        xm[a] -= h;
        for p in [&xp, &xm] {
            data.check_point(p).map_err(|_| {
                Error::Domain(format!("difference stencil at {x:?} leaves the chart of '{}'", data.label))
            })?;
        }
        let (p, m) = (ls.eval(&xp)?, ls.eval(&xm)?);
        imag = imag.max(p.imag).max(m.imag);
        du[a] = (p.u - m.u) / (2.0 * h);
        for b in 0..n {
            dy[(b, a)] = (p.y[b] - m.y[b]) / (2.0 * h);
        }
    }
    Ok(Jet { u: c.u, y: c.y, du, dy, imag })
}

/// Coordinate tensors built from a jet.
pub(crate) struct Conditions {
    /// `L_Y g + 2 u k`.
    pub tensor: Mat,
    /// `du + k(Y, .)`.
    pub covector: Vec<f64>,
    /// `nabla_i Y_j + u k_ij`.
    pub parallel: Mat,
    /// `nabla_i Y_j - nabla_j Y_i`.
    pub symmetry: Mat,
}

pub(crate) fn conditions(pg: &PointGeometry, j: &Jet) -> Conditions {
    let n = pg.dim();
    let g = &pg.fields.g;
    let k = &pg.fields.k;
    let dg = &pg.fields.dg;
    let mut tensor = Mat::zeros(n, n);
    let mut nabla = Mat::zeros(n, n);
    for i in 0..n {
        for l in 0..n {
            let mut t = 2.0 * j.u * k[(i, l)];
            for a in 0..n {
                t += j.y[a] * dg[a][(i, l)] + g[(a, l)] * j.dy[(a, i)] + g[(i, a)] * j.dy[(a, l)];
            }
            tensor[(i, l)] = t;
            // nabla_i Y^b, lowered with g.
            let mut s = 0.0;
            for b in 0..n {
                let mut d = j.dy[(b, i)];
                for a in 0..n {
                    d += pg.christoffel[b][(i, a)] * j.y[a];
                }
                s += g[(l, b)] * d;
            }
            nabla[(i, l)] = s;
        }
    }
    let covector = (0..n).map(|i| j.du[i] + (0..n).map(|a| k[(a, i)] * j.y[a]).sum::<f64>()).collect();
    Conditions { tensor, covector, parallel: &nabla + k * j.u, symmetry: &nabla - nabla.transpose() }
}

/// Frobenius norm of the frame components of a coordinate 2-tensor.
fn frame_norm(pg: &PointGeometry, t: &Mat) -> f64 {
    (&pg.frame * t * pg.frame.transpose()).norm()
}

fn frame_covector_norm(pg: &PointGeometry, w: &[f64]) -> f64 {
    pg.covector_to_frame(w).iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct PointResidual {
    pub x: Vec<f64>,
    pub tensor: f64,
    pub covector: f64,
    pub parallel: f64,
    pub symmetry: f64,
}

/// Largest orthonormal-frame norms over the sample points.
#[derive(Debug, Clone, Serialize)]
pub struct KillingResidual {
    pub tensor: f64,
    pub covector: f64,
    pub parallel: f64,
    pub symmetry: f64,
    pub max_imag: f64,
    pub samples: Vec<PointResidual>,
}

pub fn killing_conditions_residual(data: &InitialData, ls: &LapseShift, points: &[Vec<f64>]) -> Result<KillingResidual> {
    if points.is_empty() {
        return Err(Error::Argument("no sample points".into()));
    }
    let res: Vec<(PointResidual, f64)> = points
        .par_iter()
        .map(|x| {
            let j = jet(data, ls, x)?;
            let pg = PointGeometry::new(data, x)?;
            let c = conditions(&pg, &j);
            Ok((
                PointResidual {
                    x: x.clone(),
                    tensor: frame_norm(&pg, &c.tensor),
                    covector: frame_covector_norm(&pg, &c.covector),
                    parallel: frame_norm(&pg, &c.parallel),
                    symmetry: frame_norm(&pg, &c.symmetry),
                },
                j.imag,
            ))
        })
        .collect::<Result<_>>()?;
    let max = |g: fn(&PointResidual) -> f64| res.iter().map(|(p, _)| g(p)).fold(0.0, f64::max);
    Ok(KillingResidual {
        tensor: max(|p| p.tensor),
        covector: max(|p| p.covector),
        parallel: max(|p| p.parallel),
        symmetry: max(|p| p.symmetry),
        max_imag: res.iter().map(|(_, i)| *i).fold(0.0, f64::max),
        samples: res.into_iter().map(|(p, _)| p).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LengthDrift {
    /// `max_t |L(sigma(t)) - L(sigma(0))|` with `L = u^2 - |Y|^2`.
    pub drift: f64,
    pub initial: f64,
    /// Riemannian length of the polygon through the samples.
    pub length: f64,
    /// `int |2 u (du + k(Y,.))(X) - 2 (nabla Y + u k)(X, Y)| dt`, which bounds the drift.
    pub residual_integral: f64,
    pub nodes: usize,
}

/// Samples `r xhat` for `r` evenly spaced in `[r_start, r_end]`.
pub fn radial_curve(xhat: &[f64], r_start: f64, r_end: f64, samples: usize) -> Vec<Vec<f64>> {
    let m = samples.max(2);
    (0..m)
        .map(|i| {
            let r = r_start + (r_end - r_start) * i as f64 / (m - 1) as f64;
            xhat.iter().map(|v| v * r).collect()
        })
        .collect()
}

pub fn lorentz_length_drift(data: &InitialData, ls: &LapseShift, curve: &[Vec<f64>]) -> Result<LengthDrift> {
    let m = curve.len();
    if m < 2 {
        return Err(Error::Argument("a curve needs at least two samples".into()));
    }
    for x in curve {
        data.check_point(x)
            .map_err(|e| Error::Domain(format!("curve leaves the chart of '{}': {e}", data.label)))?;
    }
    let n = data.dim();
    let nodes: Vec<(f64, f64, Mat)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let x = &curve[i];
            let j = jet(data, ls, x)?;
            let pg = PointGeometry::new(data, x)?;
            let c = conditions(&pg, &j);
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(m - 1));
            let t: Vec<f64> = (0..n).map(|a| (curve[hi][a] - curve[lo][a]) / (hi - lo) as f64).collect();
            let mut rate = 2.0 * j.u * t.iter().zip(&c.covector).map(|(a, b)| a * b).sum::<f64>();
            for a in 0..n {
                for b in 0..n {
                    rate -= 2.0 * t[a] * c.parallel[(a, b)] * j.y[b];
                }
            }
            let l = j.u * j.u - shift_norm_sq(&pg.fields.g, &j.y);
            Ok((l, rate.abs(), pg.fields.g.clone()))
        })
        .collect::<Result<_>>()?;
    let initial = nodes[0].0;
    let drift = nodes.iter().map(|(l, _, _)| (l - initial).abs()).fold(0.0, f64::max);
    let mut residual_integral = 0.0;
    let mut length = 0.0;
    for i in 0..m - 1 {
        residual_integral += 0.5 * (nodes[i].1 + nodes[i + 1].1);
        let d: Vec<f64> = (0..n).map(|a| curve[i + 1][a] - curve[i][a]).collect();
        let g = (&nodes[i].2 + &nodes[i + 1].2) * 0.5;
        length += shift_norm_sq(&g, &d).max(0.0).sqrt();
    }
    Ok(LengthDrift { drift, initial, length, residual_integral, nodes: m })
}
