//! Spherically symmetric closed-form data.
//!
//! Every model has the form `g = p(r) delta + s(r) dr dr`, `k = c(r) delta + d(r) dr dr`.
//! Sign convention for `k`: `k(X, Y) = <D_X n, Y>` with `n` the future unit normal of the slice.

use std::fmt;
use std::sync::Arc;

use crate::data::{PointFields, TensorFields};
use crate::linalg::{norm, Mat};

/// Radial coefficient functions and their first derivatives.
pub trait RadialProfile: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    /// `(p, p', s, s')`.
    fn metric(&self, r: f64) -> [f64; 4];
    /// `(c, c', d, d')`.
    fn curvature(&self, r: f64) -> [f64; 4] {
        let _ = r;
        [0.0; 4]
    }
    /// True when `k` vanishes identically.
    fn time_symmetric(&self) -> bool {
        true
    }
}

/// Adapter turning a profile into tensor fields.
#[derive(Debug, Clone)]
pub struct SphericalFields {
    pub profile: Arc<dyn RadialProfile>,
}

impl SphericalFields {
    pub fn new(profile: Arc<dyn RadialProfile>) -> Self {
        Self { profile }
    }
}

fn radial_tensor(n: usize, xh: &[f64], a: f64, b: f64) -> Mat {
    Mat::from_fn(n, n, |i, j| if i == j { a } else { 0.0 } + b * xh[i] * xh[j])
}

fn radial_tensor_derivs(n: usize, xh: &[f64], r: f64, coef: [f64; 4]) -> Vec<Mat> {
    let [_, a1, b, b1] = coef;
    let b_over_r = if r > 0.0 { b / r } else { 0.0 };
    (0..n)
        .map(|l| {
            Mat::from_fn(n, n, |i, j| {
                let dli = if l == i { 1.0 } else { 0.0 };
                let dlj = if l == j { 1.0 } else { 0.0 };
                let dij = if i == j { 1.0 } else { 0.0 };
                a1 * xh[l] * dij
                    + b1 * xh[l] * xh[i] * xh[j]
                    + b_over_r * ((dli - xh[l] * xh[i]) * xh[j] + xh[i] * (dlj - xh[l] * xh[j]))
            })
        })
        .collect()
}

impl TensorFields for SphericalFields {
    fn dim(&self) -> usize {
        self.profile.dim()
    }

    fn eval(&self, x: &[f64]) -> PointFields {
        let n = self.dim();
        let r = norm(x);
        let xh: Vec<f64> = if r > 0.0 { x.iter().map(|v| v / r).collect() } else { vec![0.0; n] };
        let m = self.profile.metric(r);
        let c = self.profile.curvature(r);
        PointFields {
            g: radial_tensor(n, &xh, m[0], m[2]),
            k: radial_tensor(n, &xh, c[0], c[2]),
            dg: radial_tensor_derivs(n, &xh, r, m),
            dk: radial_tensor_derivs(n, &xh, r, c),
        }
    }

    fn radial_profile(&self) -> Option<Arc<dyn RadialProfile>> {
        Some(self.profile.clone())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Flat {
    pub n: usize,
}

impl RadialProfile for Flat {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, _r: f64) -> [f64; 4] {
        [1.0, 0.0, 0.0, 0.0]
    }
}

/// `g = psi^{4/(n-2)} delta`, `psi = 1 + m / (2 r^{n-2})`.
#[derive(Debug, Clone, Copy)]
pub struct SchwarzschildIsotropic {
    pub n: usize,
    pub m: f64,
}

impl RadialProfile for SchwarzschildIsotropic {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, r: f64) -> [f64; 4] {
        let e = (self.n - 2) as f64;
        let psi = 1.0 + self.m / (2.0 * r.powf(e));
        let dpsi = -e * self.m / (2.0 * r.powf(e + 1.0));
        let pw = 4.0 / e;
        let p = psi.powf(pw);
        [p, pw * psi.powf(pw - 1.0) * dpsi, 0.0, 0.0]
    }
}

/// `g = dr^2 / (1 - 2m r^{2-n}) + r^2 dOmega^2`.
#[derive(Debug, Clone, Copy)]
pub struct SchwarzschildAreaRadius {
    pub n: usize,
    pub m: f64,
}

impl RadialProfile for SchwarzschildAreaRadius {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, r: f64) -> [f64; 4] {
        let e = (self.n - 2) as f64;
        let v = 1.0 - 2.0 * self.m * r.powf(-e);
        let dv = 2.0 * self.m * e * r.powf(-e - 1.0);
        [1.0, 0.0, 1.0 / v - 1.0, -dv / (v * v)]
    }
}

/// Slice `t = h(|x|)` of Minkowski space, `h = a exp(-r^2/w^2)`.
#[derive(Debug, Clone, Copy)]
pub struct GraphSlice {
    pub n: usize,
    pub a: f64,
    pub w: f64,
}

impl GraphSlice {
    /// `(h', h'/r, h'', h''')`.
    fn derivs(&self, r: f64) -> [f64; 4] {
        let w2 = self.w * self.w;
        let e = self.a * (-r * r / w2).exp();
        let hr = -2.0 * e / w2;
        let h1 = hr * r;
        let h2 = e * (4.0 * r * r / (w2 * w2) - 2.0 / w2);
        let h3 = e * (-8.0 * r * r * r / (w2 * w2 * w2) + 12.0 * r / (w2 * w2));
        [h1, hr, h2, h3]
    }

    pub fn height(&self, r: f64) -> f64 {
        self.a * (-r * r / (self.w * self.w)).exp()
    }
}

impl RadialProfile for GraphSlice {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, r: f64) -> [f64; 4] {
        let [h1, _, h2, _] = self.derivs(r);
        [1.0, 0.0, -h1 * h1, -2.0 * h1 * h2]
    }
    fn curvature(&self, r: f64) -> [f64; 4] {
        let [h1, hr, h2, h3] = self.derivs(r);
        let w = (1.0 - h1 * h1).sqrt();
        let w3 = w * w * w;
        let w2 = self.w * self.w;
        let e = self.a * (-r * r / w2).exp();
        // (h'/r)' and h'' - h'/r in closed form, regular at the origin.
        let hr1 = 4.0 * r * e / (w2 * w2);
        let big_d = 4.0 * r * r * e / (w2 * w2);
        let big_d1 = h3 - hr1;
        let c = hr / w;
        let c1 = hr1 / w + hr * h1 * h2 / w3;
        let d = big_d / w;
        let d1 = big_d1 / w + big_d * h1 * h2 / w3;
        [c, c1, d, d1]
    }
    fn time_symmetric(&self) -> bool {
        self.a == 0.0
    }
}

/// Conformally flat `g = phi^{4/(n-2)} delta`, `phi = 1 + a exp(-r^2/w^2)`, `k = 0`.
/// Scalar curvature changes sign, so the dominant energy condition fails on a shell.
#[derive(Debug, Clone, Copy)]
pub struct ConformalBump {
    pub n: usize,
    pub a: f64,
    pub w: f64,
}

impl RadialProfile for ConformalBump {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, r: f64) -> [f64; 4] {
        let w2 = self.w * self.w;
        let e = self.a * (-r * r / w2).exp();
        let phi = 1.0 + e;
        let dphi = -2.0 * r * e / w2;
        let pw = 4.0 / (self.n - 2) as f64;
        [phi.powf(pw), pw * phi.powf(pw - 1.0) * dphi, 0.0, 0.0]
    }
}
