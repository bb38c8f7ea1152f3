use clifford_core::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

pub type Mat = DMatrix<f64>;

/// Symmetric square root `S = g^{1/2}`, its inverse, and their derivatives along each `dg[l]`.
#[derive(Debug, Clone)]
pub struct SqrtWithDerivs {
    pub sqrt: Mat,
    pub inv_sqrt: Mat,
    pub d_sqrt: Vec<Mat>,
    pub d_inv_sqrt: Vec<Mat>,
}

pub fn sym_sqrt(g: &Mat, dg: &[Mat]) -> Result<SqrtWithDerivs> {
    let eig = SymmetricEigen::new(g.clone());
    let n = g.nrows();
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidData("metric is not positive definite".into()));
    }
    let q = &eig.eigenvectors;
    let s: Vec<f64> = eig.eigenvalues.iter().map(|l| l.sqrt()).collect();
    let sqrt = q * Mat::from_diagonal(&nalgebra::DVector::from_vec(s.clone())) * q.transpose();
    let inv_sqrt =
        q * Mat::from_diagonal(&nalgebra::DVector::from_iterator(n, s.iter().map(|x| 1.0 / x))) * q.transpose();
    let mut d_sqrt = Vec::with_capacity(dg.len());
    let mut d_inv_sqrt = Vec::with_capacity(dg.len());
    for d in dg {
        let rot = q.transpose() * d * q;
        let inner = Mat::from_fn(n, n, |a, b| rot[(a, b)] / (s[a] + s[b]));
        let ds = q * inner * q.transpose();
        let dinv = -(&inv_sqrt * &ds * &inv_sqrt);
        d_sqrt.push(ds);
        d_inv_sqrt.push(dinv);
    }
    Ok(SqrtWithDerivs { sqrt, inv_sqrt, d_sqrt, d_inv_sqrt })
}

pub fn inverse(g: &Mat) -> Result<Mat> {
    g.clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidData("singular matrix".into()))
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Pairwise summation in fixed order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Central-difference step `cbrt(eps) * max(1, |x|)`.
pub fn fd_step(x: &[f64]) -> f64 {
    f64::EPSILON.cbrt() * norm(x).max(1.0)
}
