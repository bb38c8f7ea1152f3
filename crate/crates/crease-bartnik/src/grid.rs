//! Gauss-Legendre by uniform-phi grid on the round 2-sphere and spectral tangential derivatives.

use clifford_core::{Error, Result};
use geometry_catalog::SphereRule;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub order: usize,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Unit vectors `(sin t cos p, sin t sin p, cos t)`.
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Argument(format!("sphere grid order must be at least 2, got {order}")));
        }
        let rule = SphereRule::new(3, order)?;
        Ok(Self {
            order,
            theta: rule.angles.iter().map(|a| a[0]).collect(),
            phi: rule.angles.iter().map(|a| a[1]).collect(),
            points: rule.points,
            weights: rule.weights,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Unit `theta` and `phi` directions at node `i`.
    pub fn tangents(&self, i: usize) -> [[f64; 3]; 2] {
        let (t, p) = (self.theta[i], self.phi[i]);
        [[t.cos() * p.cos(), t.cos() * p.sin(), -t.sin()], [-p.sin(), p.cos(), 0.0]]
    }

    /// Largest degree resolved exactly by the grid.
    pub fn max_degree(&self) -> usize {
        self.order - 1
    }

    /// Tangential gradient `(df(theta_hat), df(phi_hat))` on the sphere of radius `r0`,
    /// from the real spherical-harmonic expansion of `values` up to degree `order - 1`.
    pub fn gradient(&self, values: &[f64], r0: f64) -> Result<Vec<[f64; 2]>> {
        if values.len() != self.len() {
            return Err(Error::Argument(format!(
                "function has {} values, grid has {} nodes",
                values.len(),
                self.len()
            )));
        }
        let lmax = self.max_degree();
        let tables: Vec<Legendre> = self.theta.iter().map(|&t| Legendre::new(lmax, t)).collect();
        // Coefficients of cos(m phi) and sin(m phi) parts.
        let mut ac = vec![vec![0.0; lmax + 1]; lmax + 1];
        let mut asn = vec![vec![0.0; lmax + 1]; lmax + 1];
        for (i, ((&v, &w), tab)) in values.iter().zip(&self.weights).zip(&tables).enumerate() {
            let p = self.phi[i];
            for l in 0..=lmax {
                for m in 0..=l {
                    let (c, s) = azimuthal(m, p);
                    ac[l][m] += w * v * tab.value(l, m) * c;
                    asn[l][m] += w * v * tab.value(l, m) * s;
                }
            }
        }
        let mut out = Vec::with_capacity(self.len());
        for (i, tab) in tables.iter().enumerate() {
            let (t, p) = (self.theta[i], self.phi[i]);
            let mut dt = 0.0;
            let mut dp = 0.0;
            for l in 0..=lmax {
                for m in 0..=l {
                    let (c, s) = azimuthal(m, p);
                    let mf = m as f64;
                    dt += tab.dtheta(l, m) * (ac[l][m] * c + asn[l][m] * s);
                    dp += tab.value(l, m) * mf * (-ac[l][m] * s + asn[l][m] * c);
                }
            }
            out.push([dt / r0, dp / (r0 * t.sin())]);
        }
        Ok(out)
    }
}

/// Orthonormal azimuthal factors: `1/sqrt(2 pi)` for `m = 0`, `cos(m p)/sqrt(pi)`, `sin(m p)/sqrt(pi)`.
fn azimuthal(m: usize, p: f64) -> (f64, f64) {
    if m == 0 {
        (1.0 / (2.0 * std::f64::consts::PI).sqrt(), 0.0)
    } else {
        let s = 1.0 / std::f64::consts::PI.sqrt();
        let mp = m as f64 * p;
        (s * mp.cos(), s * mp.sin())
    }
}

/// Associated Legendre functions normalised on `[-1, 1]`, with theta derivatives.
struct Legendre {
    lmax: usize,
    p: Vec<f64>,
    dp: Vec<f64>,
}

impl Legendre {
    fn idx(l: usize, m: usize) -> usize {
        l * (l + 1) / 2 + m
    }

    fn new(lmax: usize, theta: f64) -> Self {
        let (x, s) = (theta.cos(), theta.sin());
        let size = (lmax + 1) * (lmax + 2) / 2;
        let mut p = vec![0.0; size];
        p[0] = 1.0 / 2f64.sqrt();
        for m in 1..=lmax {
            let mf = m as f64;
            p[Self::idx(m, m)] = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[Self::idx(m - 1, m - 1)];
        }
        for m in 0..lmax {
            p[Self::idx(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * p[Self::idx(m, m)];
        }
        for m in 0..=lmax {
            for l in (m + 2)..=lmax {
                let (lf, mf) = (l as f64, m as f64);
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
                p[Self::idx(l, m)] = a * (x * p[Self::idx(l - 1, m)] - b * p[Self::idx(l - 2, m)]);
            }
        }
        // sin(t) dP_lm/dt = l cos(t) P_lm - sqrt((2l+1)(l^2-m^2)/(2l-1)) P_{l-1,m}
        let mut dp = vec![0.0; size];
        for l in 0..=lmax {
            for m in 0..=l {
                let (lf, mf) = (l as f64, m as f64);
                let prev = if l > m {
                    ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt() * p[Self::idx(l - 1, m)]
                } else {
                    0.0
                };
                dp[Self::idx(l, m)] = (lf * x * p[Self::idx(l, m)] - prev) / s;
            }
        }
        Self { lmax, p, dp }
    }

    fn value(&self, l: usize, m: usize) -> f64 {
        debug_assert!(l <= self.lmax);
        self.p[Self::idx(l, m)]
    }

    fn dtheta(&self, l: usize, m: usize) -> f64 {
        self.dp[Self::idx(l, m)]
    }
}
