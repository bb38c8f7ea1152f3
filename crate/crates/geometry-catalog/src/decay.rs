use clifford_core::{Error, Result};
use serde::Serialize;

use crate::data::{DataKind, InitialData};
use crate::linalg::Mat;
use crate::quadrature::SphereRule;

/// Power-law fit `max |g - delta| ~ c r^{-q}`.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    /// `None` when `g = delta` exactly at every sample.
    pub q_est: Option<f64>,
    pub c_est: f64,
    pub exact_flat: bool,
    pub radii: Vec<f64>,
    pub max_deviation: Vec<f64>,
    /// RMS residual of the log-log fit.
    pub residual: f64,
}

impl DecayFit {
    /// True when the fitted order is within `tol` (relative) of `q`, or the data is exactly flat.
    pub fn agrees_with(&self, q: f64, tol: f64) -> bool {
        match self.q_est {
            None => self.exact_flat,
            Some(e) => ((e - q) / q).abs() <= tol,
        }
    }
}

pub const DECAY_ORDER: usize = 6;

fn max_deviation(data: &InitialData, rule: &SphereRule, r: f64) -> Result<(f64, f64)> {
    let n = data.dim();
    let id = Mat::identity(n, n);
    let mut dg = 0.0f64;
    let mut dk = 0.0f64;
    for p in &rule.points {
        let x: Vec<f64> = p.iter().map(|v| r * v).collect();
        let f = data.eval(&x)?;
        dg = dg.max((&f.g - &id).amax());
        dk = dk.max(f.k.amax());
    }
    Ok((dg, dk))
}

/// Least-squares fit of `log max_omega |g - delta|` against `log r`.
pub fn fit_decay(data: &InitialData, radii: &[f64]) -> Result<DecayFit> {
    if radii.len() < 3 {
        return Err(Error::Argument(format!("fit_decay needs at least 3 radii, got {}", radii.len())));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || radii[0] <= 0.0 {
        return Err(Error::Argument("radii must be positive and increasing".into()));
    }
    if data.kind != DataKind::AsymptoticallyFlatExterior {
        return Err(Error::Argument(format!("'{}' is not exterior data", data.label)));
    }
    let rule = SphereRule::new(data.dim(), DECAY_ORDER)?;
    let mut dev = Vec::with_capacity(radii.len());
    for &r in radii {
        dev.push(max_deviation(data, &rule, r)?.0);
    }
    if dev.iter().all(|&d| d == 0.0) {
        return Ok(DecayFit {
            q_est: None,
            c_est: 0.0,
            exact_flat: true,
            radii: radii.to_vec(),
            max_deviation: dev,
            residual: 0.0,
        });
    }
    if dev.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::Numeric("deviation vanishes at some radii but not others".into()));
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = dev.iter().map(|d| d.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let residual =
        (xs.iter().zip(&ys).map(|(x, y)| (y - icept - slope * x).powi(2)).sum::<f64>() / m).sqrt();
    Ok(DecayFit {
        q_est: Some(-slope),
        c_est: icept.exp(),
        exact_flat: false,
        radii: radii.to_vec(),
        max_deviation: dev,
        residual,
    })
}

/// Sampled check of `|g - delta| <= C r^{-q}` and `|k| <= C r^{-q-1}` against the asserted `q`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsCheck {
    pub q: f64,
    pub q_admissible: bool,
    /// `max_r r^q |g - delta|` and `max_r r^{q+1} |k|` over the samples.
    pub c_metric: f64,
    pub c_curvature: f64,
    /// Ratio of the scaled deviation at the last radius to the first; bounded when decay holds.
    pub metric_growth: f64,
    pub curvature_growth: f64,
}

pub fn check_asymptotics(data: &InitialData, radii: &[f64]) -> Result<AsymptoticsCheck> {
    let q = data
        .q
        .ok_or_else(|| Error::Argument(format!("'{}' has no asserted decay order", data.label)))?;
    if radii.len() < 2 {
        return Err(Error::Argument("need at least 2 radii".into()));
    }
    let rule = SphereRule::new(data.dim(), DECAY_ORDER)?;
    let mut sg = Vec::new();
    let mut sk = Vec::new();
    for &r in radii {
        let (dg, dk) = max_deviation(data, &rule, r)?;
        sg.push(dg * r.powf(q));
        sk.push(dk * r.powf(q + 1.0));
    }
    let growth = |v: &[f64]| if v[0] > 0.0 { v[v.len() - 1] / v[0] } else { 0.0 };
    Ok(AsymptoticsCheck {
        q,
        q_admissible: q > 0.5 * (data.dim() as f64 - 2.0),
        c_metric: sg.iter().cloned().fold(0.0, f64::max),
        c_curvature: sk.iter().cloned().fold(0.0, f64::max),
        metric_growth: growth(&sg),
        curvature_growth: growth(&sk),
    })
}
