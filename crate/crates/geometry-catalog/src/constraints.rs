use clifford_core::{Error, Result};
use serde::Serialize;

use crate::data::InitialData;
use crate::frame::christoffel;
use crate::linalg::{fd_step, inverse, norm, Mat};

/// Energy and momentum densities at a point.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintValues {
    pub mu: f64,
    /// Covector components `J_j`.
    pub j: Vec<f64>,
    /// `|J|_g`.
    pub j_norm: f64,
    pub scalar_curvature: f64,
    /// `|mu(h) - mu(2h)|`, a bound on the finite-difference error of `mu`.
    pub mu_error: f64,
    pub step: f64,
}

fn christoffel_at(data: &InitialData, x: &[f64]) -> Result<Vec<Mat>> {
    let f = data.eval_unchecked(x);
    Ok(christoffel(&inverse(&f.g)?, &f.dg))
}

/// Partials of the Christoffel symbols, `out[l][a][(b, c)] = d_l Gamma^a_{bc}`.
fn christoffel_partials(data: &InitialData, x: &[f64], h: f64) -> Result<Vec<Vec<Mat>>> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    for l in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[l] += h;
        xm[l] -= h;
        let cp = christoffel_at(data, &xp)?;
        let cm = christoffel_at(data, &xm)?;
        out.push(cp.iter().zip(&cm).map(|(p, m)| (p - m) / (2.0 * h)).collect());
    }
    Ok(out)
}

fn scalar_curvature(g_inv: &Mat, chr: &[Mat], dchr: &[Vec<Mat>]) -> f64 {
    let n = g_inv.nrows();
    let mut r = 0.0;
    for i in 0..n {
        for j in 0..n {
            let gij = g_inv[(i, j)];
            if gij == 0.0 {
                continue;
            }
            let mut ric = 0.0;
            for a in 0..n {
                ric += dchr[a][a][(i, j)] - dchr[j][a][(i, a)];
                for b in 0..n {
                    ric += chr[a][(a, b)] * chr[b][(i, j)] - chr[a][(j, b)] * chr[b][(i, a)];
                }
            }
            r += gij * ric;
        }
    }
    r
}

/// `mu = (R + (tr k)^2 - |k|^2) / 2`, `J = div_g(k - (tr k) g)`.
///
/// Second derivatives of `g` come from central differences of the analytic Christoffel
/// symbols with step `cbrt(eps) max(1, |x|)`; `mu_error` compares steps `h` and `2h`.
pub fn constraint_fields(data: &InitialData, x: &[f64]) -> Result<ConstraintValues> {
    data.check_point(x)?;
    let n = x.len();
    let h = fd_step(x);
    let r = norm(x);
    if !data.domain.contains_with_margin(r, 2.0 * h * (n as f64).sqrt()) || r < 2.0 * h {
        return Err(Error::Domain(format!(
            "point at radius {r} is within one finite-difference step of the chart boundary"
        )));
    }
    let f = data.eval_unchecked(x);
    let g_inv = inverse(&f.g)?;
    let chr = christoffel(&g_inv, &f.dg);
    let r1 = scalar_curvature(&g_inv, &chr, &christoffel_partials(data, x, h)?);
    let r2 = scalar_curvature(&g_inv, &chr, &christoffel_partials(data, x, 2.0 * h)?);

    let k = &f.k;
    let kup = &g_inv * k * &g_inv;
    let trk = (&g_inv * k).trace();
    let k_sq = kup.component_mul(k).sum();
    let quad = trk * trk - k_sq;
    let mu = 0.5 * (r1 + quad);
    let mu2 = 0.5 * (r2 + quad);

    // J_j = g^{il} nabla_l k_{ij} - d_j tr k
    let mut j = vec![0.0; n];
    for (jj, jv) in j.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..n {
            for l in 0..n {
                let gil = g_inv[(i, l)];
                if gil == 0.0 {
                    continue;
                }
                let mut nab = f.dk[l][(i, jj)];
                for a in 0..n {
                    nab -= chr[a][(l, i)] * k[(a, jj)] + chr[a][(l, jj)] * k[(i, a)];
                }
                s += gil * nab;
            }
        }
        let dginv = -(&g_inv * &f.dg[jj] * &g_inv);
        let dtr = dginv.component_mul(k).sum() + g_inv.component_mul(&f.dk[jj]).sum();
        *jv = s - dtr;
    }
    let mut jn = 0.0;
    for a in 0..n {
        for b in 0..n {
            jn += j[a] * g_inv[(a, b)] * j[b];
        }
    }
    Ok(ConstraintValues {
        mu,
        j_norm: jn.max(0.0).sqrt(),
        j,
        scalar_curvature: r1,
        mu_error: (mu - mu2).abs(),
        step: h,
    })
}
