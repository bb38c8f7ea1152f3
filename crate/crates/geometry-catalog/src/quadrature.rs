use std::f64::consts::PI;

use clifford_core::{Error, Result};
use nalgebra::SymmetricEigen;

use crate::linalg::{pairwise_sum, Mat};

/// `Gamma(k/2)` for a positive integer `k`.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k > 0, "gamma_half(0) is a pole");
    if k % 2 == 0 {
        (1..k / 2).map(|j| j as f64).product()
    } else {
        let mut v = PI.sqrt();
        let mut x = 0.5;
        while x < 0.5 * k as f64 - 0.25 {
            v *= x;
            x += 1.0;
        }
        v
    }
}

/// Volume of the unit sphere `S^{n-1}` in `R^n`.
pub fn unit_sphere_volume(n: usize) -> f64 {
    2.0 * PI.powf(0.5 * n as f64) / gamma_half(n)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    if order <= 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; order];
    let mut w = vec![0.0; order];
    let nf = order as f64;
    for i in 0..(order + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=order {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[order - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[order - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss rule for the weight `(1 - t^2)^alpha` on `[-1, 1]` by Golub-Welsch.
pub fn gauss_gegenbauer(order: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    if alpha == 0.0 {
        return gauss_legendre(order);
    }
    let lam = alpha + 0.5;
    let jac = Mat::from_fn(order, order, |i, j| {
        if i + 1 == j || j + 1 == i {
            let k = i.max(j) as f64;
            (k * (k + 2.0 * lam - 1.0) / (4.0 * (k + lam) * (k + lam - 1.0))).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let mu0 = PI.sqrt() * gamma_half((2.0 * alpha + 2.0).round() as usize)
        / gamma_half((2.0 * alpha + 3.0).round() as usize);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let v = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v * v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Product rule on the unit sphere `S^{n-1}`.
///
/// Points are built recursively as `(sin(theta) y, cos(theta))` with `y` on `S^{n-2}`;
/// the circle uses `2 * order` equispaced nodes. For `n = 3` the point is
/// `(sin t cos p, sin t sin p, cos t)` and `angles = [t, p]`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub n: usize,
    pub order: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// Polar angles from the outermost level inward, then the circle angle.
    pub angles: Vec<Vec<f64>>,
}

impl SphereRule {
    pub fn new(n: usize, order: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument(format!("sphere rule needs n >= 2, got {n}")));
        }
        if order < 1 {
            return Err(Error::Argument("quadrature order must be positive".into()));
        }
        if n == 2 {
            let m = 2 * order;
            let h = 2.0 * PI / m as f64;
            let mut points = Vec::with_capacity(m);
            let mut angles = Vec::with_capacity(m);
            for j in 0..m {
                let p = (j as f64 + 0.5) * h;
                points.push(vec![p.cos(), p.sin()]);
                angles.push(vec![p]);
            }
            return Ok(Self { n, order, points, weights: vec![h; m], angles });
        }
        let inner = SphereRule::new(n - 1, order)?;
        let (t, wt) = gauss_gegenbauer(order, 0.5 * (n as f64 - 3.0));
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut angles = Vec::new();
        // Descending cos(theta) so theta increases.
        for (ti, wi) in t.iter().rev().zip(wt.iter().rev()) {
            let theta = ti.acos();
            let s = (1.0 - ti * ti).sqrt();
            for ((y, wy), ay) in inner.points.iter().zip(&inner.weights).zip(&inner.angles) {
                let mut p: Vec<f64> = y.iter().map(|v| s * v).collect();
                p.push(*ti);
                points.push(p);
                weights.push(wi * wy);
                let mut a = vec![theta];
                a.extend_from_slice(ay);
                angles.push(a);
            }
        }
        Ok(Self { n, order, points, weights, angles })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integral over the sphere of radius `r` with the flat area element.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, r: f64, mut f: F) -> Result<f64> {
        let scale = r.powi(self.n as i32 - 1);
        let mut terms = Vec::with_capacity(self.len());
        for (p, w) in self.points.iter().zip(&self.weights) {
            let x: Vec<f64> = p.iter().map(|v| r * v).collect();
            let v = f(&x);
            if !v.is_finite() {
                return Err(Error::Numeric(format!("non-finite integrand at {x:?}")));
            }
            terms.push(w * v);
        }
        Ok(scale * pairwise_sum(&terms))
    }
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_interval(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    (x.iter().map(|t| c + h * t).collect(), w.iter().map(|v| v * h).collect())
}
