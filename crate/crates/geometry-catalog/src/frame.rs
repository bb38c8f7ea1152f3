//! Orthonormal frames and connection coefficients at a point.
//!
//! The frame is the symmetric (Loewdin) orthonormalisation of the coordinate basis,
//! `e_i = (g^{-1/2})_{ij} d_j`. It is equivariant under rotations of the chart and tends
//! to `d_i` where `g -> delta`.

use clifford_core::Result;

use crate::data::{InitialData, PointFields};
use crate::linalg::{inverse, sym_sqrt, Mat};

#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub x: Vec<f64>,
    pub fields: PointFields,
    pub g_inv: Mat,
    /// `christoffel[a][(b, c)] = Gamma^a_{bc}`.
    pub christoffel: Vec<Mat>,
    /// Row `i` holds the coordinate components of `e_i`.
    pub frame: Mat,
    /// `g^{1/2}`: maps coordinate vector components to frame components.
    pub coframe: Mat,
    /// `d_frame[l] = d_l frame`.
    pub d_frame: Vec<Mat>,
    /// `k(e_i, e_j)`.
    pub k_frame: Mat,
    /// `omega[i][(j, l)] = g(nabla_{e_i} e_j, e_l)`.
    pub omega: Vec<Mat>,
}

pub fn christoffel(g_inv: &Mat, dg: &[Mat]) -> Vec<Mat> {
    let n = g_inv.nrows();
    // Lowered symbols Gamma_{d,bc}.
    let low: Vec<Mat> = (0..n)
        .map(|d| Mat::from_fn(n, n, |b, c| 0.5 * (dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)])))
        .collect();
    (0..n)
        .map(|a| {
            let mut m = Mat::zeros(n, n);
            for (d, ld) in low.iter().enumerate() {
                let s = g_inv[(a, d)];
                if s != 0.0 {
                    m += ld * s;
                }
            }
            m
        })
        .collect()
}

impl PointGeometry {
    pub fn new(data: &InitialData, x: &[f64]) -> Result<Self> {
        let fields = data.eval(x)?;
        Self::from_fields(x, fields)
    }

    pub fn from_fields(x: &[f64], fields: PointFields) -> Result<Self> {
        let n = fields.g.nrows();
        let g_inv = inverse(&fields.g)?;
        let chr = christoffel(&g_inv, &fields.dg);
        let sq = sym_sqrt(&fields.g, &fields.dg)?;
        let frame = sq.inv_sqrt.clone();
        let k_frame = &frame * &fields.k * frame.transpose();
        // nabla_{d_a} e_j, coordinate components: nab[a][(j, b)].
        let nab: Vec<Mat> = (0..n)
            .map(|a| {
                Mat::from_fn(n, n, |j, b| {
                    let mut v = sq.d_inv_sqrt[a][(j, b)];
                    for c in 0..n {
                        v += chr[b][(a, c)] * frame[(j, c)];
                    }
                    v
                })
            })
            .collect();
        // Lower with g and contract with e_l.
        let ge = &fields.g * frame.transpose();
        let omega = (0..n)
            .map(|i| {
                let mut m = Mat::zeros(n, n);
                for a in 0..n {
                    let w = frame[(i, a)];
                    if w != 0.0 {
                        m += &nab[a] * w;
                    }
                }
                m * &ge
            })
            .collect();
        Ok(Self {
            x: x.to_vec(),
            g_inv,
            christoffel: chr,
            coframe: sq.sqrt,
            d_frame: sq.d_inv_sqrt,
            frame,
            k_frame,
            omega,
            fields,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Frame components of a coordinate vector.
    pub fn vector_to_frame(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.coframe[(i, j)] * v[j]).sum()).collect()
    }

    /// Coordinate components of a frame vector.
    pub fn vector_from_frame(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|j| (0..n).map(|i| v[i] * self.frame[(i, j)]).sum()).collect()
    }

    /// Frame components `w(e_i)` of a coordinate covector.
    pub fn covector_to_frame(&self, w: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.frame[(i, j)] * w[j]).sum()).collect()
    }

    pub fn g_dot(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.fields.g[(i, j)] * u[i] * v[j];
            }
        }
        s
    }

    pub fn k_dot(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.fields.k[(i, j)] * u[i] * v[j];
            }
        }
        s
    }

    pub fn trace_k(&self) -> f64 {
        (&self.g_inv * &self.fields.k).trace()
    }

    /// Coordinate components of `nabla_X V` given `V` and its coordinate partials `dv[(b, a)] = d_a V^b`.
    pub fn covariant_derivative(&self, xdir: &[f64], v: &[f64], dv: &Mat) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|b| {
                let mut s = 0.0;
                for a in 0..n {
                    let mut t = dv[(b, a)];
                    for c in 0..n {
                        t += self.christoffel[b][(a, c)] * v[c];
                    }
                    s += xdir[a] * t;
                }
                s
            })
            .collect()
    }
}
