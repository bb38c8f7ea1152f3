//! Quadrature nodes for balls, annuli and coordinate spheres.

use clifford_core::{Complex64, Error, Result};
use geometry_catalog::linalg::pairwise_sum;
use geometry_catalog::quadrature::gauss_legendre_interval;
use geometry_catalog::SphereRule;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Ball { radius: f64 },
    Annulus { r_in: f64, r_out: f64 },
}

impl Region {
    pub fn inner(&self) -> f64 {
        match *self {
            Region::Ball { .. } => 0.0,
            Region::Annulus { r_in, .. } => r_in,
        }
    }

    pub fn outer(&self) -> f64 {
        match *self {
            Region::Ball { radius } => radius,
            Region::Annulus { r_out, .. } => r_out,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = (self.inner(), self.outer());
        if !(a >= 0.0 && b > a && b.is_finite()) {
            return Err(Error::Argument(format!("invalid region [{a}, {b}]")));
        }
        Ok(())
    }
}

/// A volume node with its flat weight `w_r w_S r^{n-1}`.
#[derive(Debug, Clone)]
pub struct VolumeNode {
    pub x: Vec<f64>,
    pub weight: f64,
}

/// Tensor-product Gauss-Legendre in `r` on each panel between consecutive `breaks`,
/// times the sphere rule.
pub fn volume_nodes(
    n: usize,
    region: Region,
    breaks: &[f64],
    radial_order: usize,
    sphere_order: usize,
) -> Result<Vec<VolumeNode>> {
    region.validate()?;
    let rule = SphereRule::new(n, sphere_order)?;
    let mut edges = vec![region.inner()];
    for &b in breaks {
        if b > region.inner() && b < region.outer() {
            edges.push(b);
        }
    }
    edges.push(region.outer());
    edges.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (rs, ws) = gauss_legendre_interval(radial_order, w[0], w[1]);
        for (r, wr) in rs.iter().zip(&ws) {
            let scale = wr * r.powi(n as i32 - 1);
            for (p, wp) in rule.points.iter().zip(&rule.weights) {
                out.push(VolumeNode { x: p.iter().map(|v| r * v).collect(), weight: scale * wp });
            }
        }
    }
    Ok(out)
}

/// Node `r * omega` with angular weight, on the sphere of radius `r`.
pub fn sphere_nodes(n: usize, r: f64, order: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    let rule = SphereRule::new(n, order)?;
    Ok(rule.points.iter().zip(&rule.weights).map(|(p, w)| (p.iter().map(|v| r * v).collect(), *w)).collect())
}

/// Integral over `{|x| = r}` in `R^n` with the flat area element.
pub fn sphere_integral<F: FnMut(&[f64]) -> f64>(f: F, n: usize, r: f64, order: usize) -> Result<f64> {
    if order < 4 {
        return Err(Error::Argument(format!("sphere quadrature order must be at least 4, got {order}")));
    }
    SphereRule::new(n, order)?.integrate(r, f)
}

/// Sum in fixed pairwise order, real and imaginary parts separately.
pub fn complex_sum(v: &[Complex64]) -> Complex64 {
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
}

/// Real part of an integral after checking that the imaginary part is negligible.
pub fn real_part(z: Complex64, magnitude: f64, what: &str) -> Result<f64> {
    let scale = magnitude.max(z.re.abs());
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Numeric(format!("{what}: non-finite integral")));
    }
    if z.im.abs() > IMAG_TOL * scale.max(f64::MIN_POSITIVE) && z.im.abs() > 1e-14 {
        return Err(Error::Numeric(format!("{what}: imaginary part {} against magnitude {scale}", z.im)));
    }
    Ok(z.re)
}

pub const IMAG_TOL: f64 = 1e-9;
