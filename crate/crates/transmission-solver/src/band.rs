//! Banded least squares by Givens row accumulation, CGLS, and banded Cholesky.

use clifford_core::{Error, Result};

/// Sparse row with columns `first..first + values.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandRow {
    pub first: usize,
    pub values: Vec<f64>,
    pub rhs: f64,
}

impl BandRow {
    pub fn dot(&self, z: &[f64]) -> f64 {
        self.values.iter().enumerate().map(|(k, v)| v * z[self.first + k]).sum()
    }
}

/// Relative size of the smallest pivot below which the matrix counts as rank deficient.
pub const RANK_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct QrOutcome {
    pub solution: Vec<f64>,
    /// `min |R_jj| / max |R_jj|`.
    pub pivot_ratio: f64,
    /// Residual norm of the rows that were eliminated completely.
    pub residual: f64,
}

/// Least squares solution of `min |A z - b|` for banded `A`.
pub fn banded_qr(ncols: usize, rows: &[BandRow]) -> Result<QrOutcome> {
    let w = rows.iter().map(|r| r.values.len()).max().unwrap_or(1).max(1);
    let mut r = vec![0.0; ncols * w];
    let mut rhs = vec![0.0; ncols];
    let mut filled = vec![false; ncols];
    let mut resid2 = 0.0;
    let mut v = vec![0.0; w];
    for row in rows {
        if row.first + row.values.len() > ncols {
            return Err(Error::Argument("row extends past the last column".into()));
        }
        v.iter_mut().for_each(|x| *x = 0.0);
        v[..row.values.len()].copy_from_slice(&row.values);
        let mut b = row.rhs;
        let mut j = row.first;
        loop {
            if j >= ncols {
                resid2 += b * b;
                break;
            }
            if v[0] != 0.0 {
                let rj = &mut r[j * w..(j + 1) * w];
                if !filled[j] {
                    rj.copy_from_slice(&v);
                    rhs[j] = b;
                    filled[j] = true;
                    break;
                }
                let (a, c) = (rj[0], v[0]);
                let h = a.hypot(c);
                let (cs, sn) = (a / h, c / h);
                for k in 0..w {
                    let (x, y) = (rj[k], v[k]);
                    rj[k] = cs * x + sn * y;
                    v[k] = -sn * x + cs * y;
                }
                let (x, y) = (rhs[j], b);
                rhs[j] = cs * x + sn * y;
                b = -sn * x + cs * y;
            }
            v.rotate_left(1);
            v[w - 1] = 0.0;
            j += 1;
        }
    }
    let diag: Vec<f64> = (0..ncols).map(|j| if filled[j] { r[j * w].abs() } else { 0.0 }).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let pivot_ratio = if dmax > 0.0 { dmin / dmax } else { 0.0 };
    if !(pivot_ratio >= RANK_TOL) {
        let worst = diag.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(j, _)| j).unwrap_or(0);
        return Err(Error::Numeric(format!(
            "discretised operator is rank deficient: min/max pivot {pivot_ratio:e} at column {worst} of {ncols}"
        )));
    }
    let mut z = vec![0.0; ncols];
    for j in (0..ncols).rev() {
        let rj = &r[j * w..(j + 1) * w];
        let mut s = rhs[j];
        for k in 1..w {
            if j + k < ncols {
                s -= rj[k] * z[j + k];
            }
        }
        z[j] = s / rj[0];
    }
    Ok(QrOutcome { solution: z, pivot_ratio, residual: resid2.sqrt() })
}

#[derive(Debug, Clone)]
pub struct CglsOutcome {
    pub solution: Vec<f64>,
    /// `|A z_k - b|` after every iteration, starting from `z_0 = 0`.
    pub residual_log: Vec<f64>,
    pub iterations: usize,
}

fn apply(rows: &[BandRow], z: &[f64]) -> Vec<f64> {
    rows.iter().map(|r| r.dot(z)).collect()
}

fn apply_t(ncols: usize, rows: &[BandRow], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; ncols];
    for (r, yi) in rows.iter().zip(y) {
        for (k, v) in r.values.iter().enumerate() {
            out[r.first + k] += v * yi;
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate gradients on the normal equations; stops when `|A^T r| <= tol |A^T b|`.
pub fn cgls(ncols: usize, rows: &[BandRow], tol: f64, max_iter: usize) -> Result<CglsOutcome> {
    let b: Vec<f64> = rows.iter().map(|r| r.rhs).collect();
    let mut z = vec![0.0; ncols];
    let mut res = b.clone();
    let mut s = apply_t(ncols, rows, &res);
    let s0 = dot(&s, &s).sqrt();
    let mut p = s.clone();
    let mut gamma = dot(&s, &s);
    let mut log = vec![dot(&res, &res).sqrt()];
    if s0 == 0.0 {
        return Ok(CglsOutcome { solution: z, residual_log: log, iterations: 0 });
    }
    for it in 1..=max_iter {
        let q = apply(rows, &p);
        let qq = dot(&q, &q);
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        for (zi, pi) in z.iter_mut().zip(&p) {
            *zi += alpha * pi;
        }
        for (ri, qi) in res.iter_mut().zip(&q) {
            *ri -= alpha * qi;
        }
        s = apply_t(ncols, rows, &res);
        let gnew = dot(&s, &s);
        log.push(dot(&res, &res).sqrt());
        if gnew.sqrt() <= tol * s0 {
            return Ok(CglsOutcome { solution: z, residual_log: log, iterations: it });
        }
        let beta = gnew / gamma;
        gamma = gnew;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
    }
    let tail: Vec<String> = log.iter().rev().take(5).map(|v| format!("{v:.3e}")).collect();
    Err(Error::Numeric(format!(
        "CGLS did not converge in {max_iter} iterations; last residuals (newest first): {}",
        tail.join(", ")
    )))
}

/// Symmetric positive definite band matrix, lower half stored by rows: `a[i][k] = A(i, i - k)`.
#[derive(Debug, Clone)]
pub struct SymBand {
    pub n: usize,
    pub bw: usize,
    a: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, a: vec![0.0; n * (bw + 1)] }
    }

    /// Add `v` to `A(i, j)` and `A(j, i)`; on the diagonal it is added once.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry outside the band");
        self.a[i * (self.bw + 1) + (i - j)] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.a[i * (self.bw + 1) + (i - j)]
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for k in 0..=self.bw.min(i) {
                let j = i - k;
                let v = self.a[i * (self.bw + 1) + k];
                y[i] += v * x[j];
                if k > 0 {
                    y[j] += v * x[i];
                }
            }
        }
        y
    }

    /// In-place banded Cholesky `A = L L^T`.
    pub fn cholesky(&self) -> Result<BandCholesky> {
        let (n, bw) = (self.n, self.bw);
        let mut l = self.a.clone();
        let at = |i: usize, k: usize| i * (bw + 1) + k;
        for i in 0..n {
            for k in (0..=bw.min(i)).rev() {
                let j = i - k;
                let mut s = l[at(i, k)];
                let lo = i.saturating_sub(bw).max(j.saturating_sub(bw));
                for m in lo..j {
                    s -= l[at(i, i - m)] * l[at(j, j - m)];
                }
                if k == 0 {
                    if !(s > 0.0) {
                        return Err(Error::Numeric(format!("matrix is not positive definite at row {i} (pivot {s:e})")));
                    }
                    l[at(i, 0)] = s.sqrt();
                } else {
                    l[at(i, k)] = s / l[at(j, 0)];
                }
            }
        }
        Ok(BandCholesky { n, bw, l })
    }
}

#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let at = |i: usize, k: usize| i * (bw + 1) + k;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 1..=bw.min(i) {
                s -= self.l[at(i, k)] * y[i - k];
            }
            y[i] = s / self.l[at(i, 0)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in 1..=bw.min(n - 1 - i) {
                s -= self.l[at(i + k, k)] * y[i + k];
            }
            y[i] = s / self.l[at(i, 0)];
        }
        y
    }
}
