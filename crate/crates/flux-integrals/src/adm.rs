//! ADM energy-momentum from Euclidean coordinate-sphere integrals.

use clifford_core::{Error, Result};
use geometry_catalog::{unit_sphere_volume, InitialData};
use serde::Serialize;

use crate::quad::sphere_integral;

/// Limit of a sequence `v(r) ~ v_inf + C r^{-p}` from its last three samples.
#[derive(Debug, Clone, Serialize)]
pub struct Extrapolation {
    pub limit: f64,
    /// Fitted `p`; `None` when the tail is not a clean power law.
    pub exponent: Option<f64>,
    /// Largest misfit of the fitted law over all samples.
    pub residual: f64,
    /// Differences keep one sign and shrink across the fit window.
    pub monotone: bool,
}

/// Largest exponent accepted by the power-law fit.
const MAX_EXPONENT: f64 = 12.0;

pub fn richardson(radii: &[f64], values: &[f64]) -> Result<Extrapolation> {
    let k = radii.len();
    if k < 3 || values.len() != k {
        return Err(Error::Argument("extrapolation needs at least three radii".into()));
    }
    let (r1, r2, r3) = (radii[k - 3], radii[k - 2], radii[k - 1]);
    let (v1, v2, v3) = (values[k - 3], values[k - 2], values[k - 1]);
    let (d1, d2) = (v1 - v2, v2 - v3);
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    // Converged to rounding: nothing to extrapolate.
    if d1.abs().max(d2.abs()) <= 1e-13 * (1.0 + scale) {
        return Ok(Extrapolation { limit: v3, exponent: None, residual: 0.0, monotone: true });
    }
    let monotone = d1 * d2 > 0.0 && d2.abs() < d1.abs();
    if !monotone {
        return Ok(Extrapolation { limit: v3, exponent: None, residual: d2.abs(), monotone });
    }
    let target = d1 / d2;
    let ratio = |p: f64| (r1.powf(-p) - r2.powf(-p)) / (r2.powf(-p) - r3.powf(-p));
    let (mut lo, mut hi) = (1e-3, MAX_EXPONENT);
    if (ratio(lo) - target) * (ratio(hi) - target) > 0.0 {
        return Ok(Extrapolation { limit: v3, exponent: None, residual: d2.abs(), monotone: false });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (ratio(lo) - target) * (ratio(mid) - target) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let cc = d2 / (r2.powf(-p) - r3.powf(-p));
    let limit = v3 - cc * r3.powf(-p);
    let residual = radii
        .iter()
        .zip(values)
        .map(|(r, v)| (v - limit - cc * r.powf(-p)).abs())
        .fold(0.0, f64::max);
    Ok(Extrapolation { limit, exponent: Some(p), residual, monotone })
}

#[derive(Debug, Clone, Serialize)]
pub struct MassReport {
    pub e: f64,
    pub p: Vec<f64>,
    pub m: f64,
    pub radii: Vec<f64>,
    pub e_raw: Vec<f64>,
    /// `p_raw[k][j]`: component `j` at radius `k`.
    pub p_raw: Vec<Vec<f64>>,
    pub e_fit: Extrapolation,
    pub p_fit: Vec<Extrapolation>,
    pub warning: Option<String>,
}

impl MassReport {
    pub fn p_norm(&self) -> f64 {
        self.p.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Combine per-radius values into a report.
    pub fn from_samples(radii: Vec<f64>, e_raw: Vec<f64>, p_raw: Vec<Vec<f64>>) -> Result<Self> {
        let n = p_raw.first().map(|v| v.len()).unwrap_or(0);
        let e_fit = richardson(&radii, &e_raw)?;
        let p_fit = (0..n)
            .map(|j| richardson(&radii, &p_raw.iter().map(|v| v[j]).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let p: Vec<f64> = p_fit.iter().map(|f| f.limit).collect();
        let e = e_fit.limit;
        let pn2: f64 = p.iter().map(|v| v * v).sum();
        let m = (e * e - pn2).max(0.0).sqrt();
        let mut warning = None;
        if !e_fit.monotone {
            warning = Some("energy integrals do not converge monotonically over the fit window".to_string());
        } else if p_fit.iter().any(|f| !f.monotone) {
            warning = Some("momentum integrals do not converge monotonically over the fit window".to_string());
        }
        Ok(Self { e, p, m, radii, e_raw, p_raw, e_fit, p_fit, warning })
    }
}

/// Per-radius `(E(r), P(r))` with the normalisations `2(n-1) omega` and `(n-1) omega`.
pub fn adm_sphere(data: &InitialData, r: f64, order: usize) -> Result<(f64, Vec<f64>)> {
    let n = data.dim();
    if !data.domain.contains_radius(r) {
        return Err(Error::Domain(format!("radius {r} lies outside the chart of '{}'", data.label)));
    }
    let e_int = sphere_integral(
        |x| {
            let f = data.eval_unchecked(x);
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += (f.dg[i][(i, j)] - f.dg[j][(i, i)]) * x[j] / r;
                }
            }
            s
        },
        n,
        r,
        order,
    )?;
    let mut p = Vec::with_capacity(n);
    for i in 0..n {
        let v = sphere_integral(
            |x| {
                let f = data.eval_unchecked(x);
                let xh: Vec<f64> = x.iter().map(|v| v / r).collect();
                let g_inv = f.g.clone().try_inverse().unwrap_or_else(|| f.g.clone() * f64::NAN);
                let trk = (&g_inv * &f.k).trace();
                (0..n).map(|j| (f.k[(i, j)] - trk * f.g[(i, j)]) * xh[j]).sum()
            },
            n,
            r,
            order,
        )?;
        p.push(v);
    }
    let omega = unit_sphere_volume(n);
    let nn = n as f64 - 1.0;
    Ok((e_int / (2.0 * nn * omega), p.iter().map(|v| v / (nn * omega)).collect()))
}

pub fn adm_energy_momentum(data: &InitialData, radii: &[f64], order: usize) -> Result<MassReport> {
    if radii.len() < 3 {
        return Err(Error::Argument("ADM extrapolation needs at least three radii".into()));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || radii[0] <= 0.0 {
        return Err(Error::Argument("radii must be positive and increasing".into()));
    }
    for &r in radii {
        if !data.domain.contains_radius(r) {
            return Err(Error::Domain(format!("radius {r} lies outside the chart of '{}'", data.label)));
        }
    }
    let mut e_raw = Vec::with_capacity(radii.len());
    let mut p_raw = Vec::with_capacity(radii.len());
    for &r in radii {
        let (e, p) = adm_sphere(data, r, order)?;
        e_raw.push(e);
        p_raw.push(p);
    }
    MassReport::from_samples(radii.to_vec(), e_raw, p_raw)
}
