//! Weighted Poincare constant of the discrete constraint kernel.
//!
//! Smallest `lambda` with `int |nabla-bar psi|^2 >= lambda int |psi / rho|^2` for separated spinors
//! satisfying the homogeneous transmission, origin and truncation conditions. `rho = r` outside
//! and `rho = r0` inside. Both quadratic forms are averaged over an orthonormal basis of
//! asymptotic spinors, which makes the densities rotation invariant, so one point per radius
//! suffices. Integrals use the interval midpoints and the staggered stencils of the operator.

use std::collections::BTreeMap;

use clifford_core::{CMat, CliffordRep, Complex64, Error, Result, Spinor};
use flux_integrals::SpinFrame;
use geometry_catalog::unit_sphere_volume;
use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::assemble::{assemble, full_index};
use crate::band::SymBand;
use crate::grid::{midpoint_stencil, RadialGrid, Side};
use crate::reduce::{amplitude_basis, RadialProblem};

#[derive(Debug, Clone, Serialize)]
pub struct PoincareEstimate {
    /// Smallest Rayleigh quotient.
    pub lambda: f64,
    /// `1 / lambda`.
    pub constant: f64,
    pub iterations: usize,
    /// `|K v - lambda M v| / |K v|` of the returned eigenvector.
    pub residual: f64,
    pub unknowns: usize,
}

const BLOCK: usize = 6;
const MAX_ITER: usize = 2000;
const EIG_TOL: f64 = 1e-10;

/// `G[k][l] = sum_i Re tr(Q_ki^* Q_li) / dim` where `nabla-bar_i (Phi psi) = sum_k w_k Q_ki psi` and
/// `w = (u, u')`.
pub fn gradient_density(data: &geometry_catalog::InitialData, rep: &CliffordRep, r: f64) -> Result<[[f64; 8]; 8]> {
    let mut xh = vec![0.0; rep.n()];
    xh[rep.n() - 1] = 1.0;
    gradient_density_at(data, rep, r, &xh)
}

/// Same density in the direction of the unit vector `xh`.
pub fn gradient_density_at(data: &geometry_catalog::InitialData, rep: &CliffordRep, r: f64, xh: &[f64]) -> Result<[[f64; 8]; 8]> {
    let n = rep.n();
    let d = rep.dim();
    let x: Vec<f64> = xh.iter().map(|v| r * v).collect();
    let spin = SpinFrame::at(data, rep, &x)?;
    let basis = amplitude_basis(rep, xh);
    // d_a X = (gamma_a - xh_a X) / r.
    let dx: Vec<CMat> = (0..n)
        .map(|a| (rep.gamma(a) - &basis[1] * Complex64::new(xh[a], 0.0)) * Complex64::new(1.0 / r, 0.0))
        .collect();
    let zero = CMat::zeros(d, d);
    let mut q: Vec<Vec<CMat>> = Vec::with_capacity(8);
    for k in 0..8 {
        let (v, da): (CMat, Vec<CMat>) = if k < 4 {
            let da = (0..n)
                .map(|a| match k {
                    1 => dx[a].clone(),
                    3 => &dx[a] * rep.tau(),
                    _ => zero.clone(),
                })
                .collect();
            (basis[k].clone(), da)
        } else {
            (zero.clone(), (0..n).map(|a| &basis[k - 4] * Complex64::new(xh[a], 0.0)).collect())
        };
        let mut per_i = vec![CMat::zeros(d, d); n];
        for c in 0..d {
            let psi: Spinor = v.column(c).into_owned();
            let dpsi: Vec<Spinor> = da.iter().map(|m| m.column(c).into_owned()).collect();
            for (i, s) in spin.sen_derivatives(&psi, &dpsi).into_iter().enumerate() {
                per_i[i].set_column(c, &s);
            }
        }
        q.push(per_i);
    }
    let mut g = [[0.0; 8]; 8];
    for k in 0..8 {
        for l in k..8 {
            let s: f64 = (0..n).map(|i| (q[k][i].adjoint() * &q[l][i]).trace().re).sum::<f64>() / d as f64;
            g[k][l] = s;
            g[l][k] = s;
        }
    }
    Ok(g)
}

struct Forms {
    k: SymBand,
    m: SymBand,
}

fn assemble_forms(prob: &RadialProblem, rep: &CliffordRep, grid: &RadialGrid) -> Result<(Forms, usize)> {
    let asm = assemble(prob, grid, 0.0)?;
    let nn = grid.intervals;
    let n = prob.n;
    let omega = unit_sphere_volume(n);
    let jobs: Vec<(Side, usize)> = [Side::Minus, Side::Plus].iter().flat_map(|&s| (0..nn).map(move |k| (s, k))).collect();
    // Per midpoint: the 8 quantities (u, u') as combinations of reduced unknowns, and both densities.
    type Local = (Vec<BTreeMap<usize, f64>>, [[f64; 8]; 8], f64);
    let locals: Vec<Local> = jobs
        .par_iter()
        .map(|&(side, k)| {
            let st = midpoint_stencil(nn, k);
            let h = grid.spacing(side);
            let t = grid.node_coordinate(side, k) + 0.5 * h;
            let r = grid.radius(side, t);
            let jac = if side == Side::Plus { 1.0 / r } else { 1.0 };
            let data = match side {
                Side::Minus => &prob.cd.minus,
                Side::Plus => &prob.cd.plus,
            };
            let spin = SpinFrame::at(data, rep, &{
                let mut x = vec![0.0; n];
                x[n - 1] = r;
                x
            })?;
            let vol = spin.coframe.determinant() * r.powi(n as i32 - 1) * omega * h / jac;
            let rho = if side == Side::Plus { r } else { prob.r0 };
            let mut comb: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); 8];
            for l in 0..st.value.len() {
                for c in 0..4 {
                    let idx = full_index(nn, side, st.first + l, c);
                    for &(col, m) in &asm.map[idx] {
                        *comb[c].entry(col).or_insert(0.0) += st.value[l] * m;
                        *comb[4 + c].entry(col).or_insert(0.0) += st.derivative[l] * jac / h * m;
                    }
                }
            }
            let g = gradient_density(data, rep, r)?;
            let mut gk = [[0.0; 8]; 8];
            for a in 0..8 {
                for b in 0..8 {
                    gk[a][b] = g[a][b] * vol;
                }
            }
            Ok((comb, gk, vol / (rho * rho)))
        })
        .collect::<Result<_>>()?;
    let mut bw = 0;
    for (comb, _, _) in &locals {
        let cols: Vec<usize> = comb.iter().flat_map(|m| m.keys().copied()).collect();
        if let (Some(lo), Some(hi)) = (cols.iter().min(), cols.iter().max()) {
            bw = bw.max(hi - lo);
        }
    }
    let mut k = SymBand::zeros(asm.ncols, bw);
    let mut m = SymBand::zeros(asm.ncols, bw);
    for (comb, g, mw) in &locals {
        for a in 0..8 {
            for b in 0..8 {
                if g[a][b] == 0.0 {
                    continue;
                }
                for (&ca, &va) in &comb[a] {
                    for (&cb, &vb) in &comb[b] {
                        if ca >= cb {
                            k.add(ca, cb, g[a][b] * va * vb);
                        }
                    }
                }
            }
        }
        for c in comb.iter().take(4) {
            for (&ca, &va) in c {
                for (&cb, &vb) in c {
                    if ca >= cb {
                        m.add(ca, cb, mw * va * vb);
                    }
                }
            }
        }
    }
    Ok((Forms { k, m }, asm.ncols))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest generalised eigenvalue of `K v = lambda M v` by block inverse iteration.
pub fn poincare_estimate(prob: &RadialProblem, rep: &CliffordRep, grid: &RadialGrid) -> Result<PoincareEstimate> {
    let (forms, nz) = assemble_forms(prob, rep, grid)?;
    let chol = forms.k.cholesky().map_err(|e| Error::Numeric(format!("gradient form is not definite on the kernel: {e}")))?;
    let p = BLOCK.min(nz);
    // Deterministic start: smooth, linearly independent profiles.
    let mut v: Vec<Vec<f64>> = (0..p).map(|j| (0..nz).map(|i| ((i + 1) as f64 * (j + 1) as f64 * 0.37).sin() + if i % (j + 2) == 0 { 1.0 } else { 0.0 }).collect()).collect();
    let mut last = f64::INFINITY;
    for it in 1..=MAX_ITER {
        let w: Vec<Vec<f64>> = v.par_iter().map(|x| chol.solve(&forms.m.mul(x))).collect();
        let kw: Vec<Vec<f64>> = w.iter().map(|x| forms.k.mul(x)).collect();
        let mw: Vec<Vec<f64>> = w.iter().map(|x| forms.m.mul(x)).collect();
        let kr = DMatrix::from_fn(p, p, |a, b| dot(&w[a], &kw[b]));
        let mr = DMatrix::from_fn(p, p, |a, b| dot(&w[a], &mw[b]));
        let kr = (&kr + kr.transpose()) * 0.5;
        let mr = (&mr + mr.transpose()) * 0.5;
        // Reduce to a standard problem with the Cholesky factor of the K Gram matrix.
        let l = kr.clone().cholesky().ok_or_else(|| Error::Numeric("Ritz basis lost rank".into()))?;
        let linv = l.l().try_inverse().ok_or_else(|| Error::Numeric("Ritz basis lost rank".into()))?;
        let c = &linv * &mr * linv.transpose();
        let eig = SymmetricEigen::new((&c + c.transpose()) * 0.5);
        // Largest M/K ratio is the smallest K/M ratio.
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|a, b| eig.eigenvalues[*b].total_cmp(&eig.eigenvalues[*a]));
        let coeffs = linv.transpose() * &eig.eigenvectors;
        v = order
            .iter()
            .map(|&col| {
                let mut out = vec![0.0; nz];
                for (a, wa) in w.iter().enumerate() {
                    let s = coeffs[(a, col)];
                    for (o, x) in out.iter_mut().zip(wa) {
                        *o += s * x;
                    }
                }
                out
            })
            .collect();
        let mu = eig.eigenvalues[order[0]];
        if !(mu > 0.0) {
            return Err(Error::Numeric("mass form vanishes on the Ritz space".into()));
        }
        let lambda = 1.0 / mu;
        if (lambda - last).abs() <= EIG_TOL * lambda {
            let kv = forms.k.mul(&v[0]);
            let mv = forms.m.mul(&v[0]);
            let res: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - lambda * b).collect();
            let residual = dot(&res, &res).sqrt() / dot(&kv, &kv).sqrt();
            return Ok(PoincareEstimate { lambda, constant: mu, iterations: it, residual, unknowns: nz });
        }
        last = lambda;
    }
    Err(Error::Numeric(format!("block inverse iteration did not converge in {MAX_ITER} steps (last estimate {last:e})")))
}
