//! Discrete transmission problem.
//!
//! Unknowns are the amplitudes at every node of both sides. Constraints are eliminated by an
//! affine parametrisation `u = u_0 + P z`:
//! * origin parity: `alpha`, `gamma` even and `beta`, `delta` odd in `r`, so `beta(0) = delta(0) = 0`;
//! * transmission: `u_-(r0) = T u_+(r0)`;
//! * truncation: `alpha(r_max) = |psi_inf|`, `gamma(r_max) = 0`. `beta` and `delta` decay and stay free.
//!
//! `u_0` is a smooth cutoff of the asymptotic value supported on the exterior side.

use std::collections::BTreeMap;

use clifford_core::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::band::BandRow;
use crate::grid::{midpoint_stencil, RadialGrid, Side};
use crate::reduce::{Amp, Coefficients, RadialProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    Transmission,
    Origin,
    Asymptotic,
}

/// `sum c_i u_i = value` over full amplitude indices.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintRow {
    pub kind: ConstraintKind,
    pub terms: Vec<(usize, f64)>,
    pub value: f64,
}

/// Largest violation of each constraint family.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct ConstraintDefects {
    pub transmission: f64,
    pub origin: f64,
    pub asymptotic: f64,
}

#[derive(Debug, Clone)]
pub struct Assembly {
    pub grid: RadialGrid,
    pub n: usize,
    /// Asymptotic value of `alpha`.
    pub datum: f64,
    /// Cutoff extension of the asymptotic value, full indexing.
    pub particular: Vec<f64>,
    /// Full index to reduced combination.
    pub map: Vec<Vec<(usize, f64)>>,
    pub ncols: usize,
    /// Weighted interior rows in reduced unknowns.
    pub rows: Vec<BandRow>,
    pub row_side: Vec<Side>,
    pub constraints: Vec<ConstraintRow>,
    pub transmission: [[f64; 4]; 4],
}

/// Full index of component `c` at node `j` of `side`.
pub fn full_index(intervals: usize, side: Side, j: usize, c: usize) -> usize {
    side.index() * 4 * (intervals + 1) + 4 * j + c
}

/// `C^3` step from 0 at `x <= 0` to 1 at `x >= 1`.
pub fn smooth_step(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x.powi(3))
}

/// Coefficients at the midpoint of interval `k` and `(r_m, dt/dr)`.
fn midpoint(prob: &RadialProblem, grid: &RadialGrid, side: Side, k: usize) -> (f64, f64, Coefficients) {
    let h = grid.spacing(side);
    let t = grid.node_coordinate(side, k) + 0.5 * h;
    let r = grid.radius(side, t);
    let jac = match side {
        Side::Minus => 1.0,
        Side::Plus => 1.0 / r,
    };
    let prof = match side {
        Side::Minus => &prob.minus,
        Side::Plus => &prob.plus,
    };
    (r, jac, prof.coefficients(r))
}

/// Rows of the discrete operator on interval `k`: `(full index, coefficient)` per equation.
pub fn interval_rows(prob: &RadialProblem, grid: &RadialGrid, side: Side, k: usize) -> (f64, [Vec<(usize, f64)>; 4]) {
    let n_int = grid.intervals;
    let st = midpoint_stencil(n_int, k);
    let h = grid.spacing(side);
    let (r, jac, co) = midpoint(prob, grid, side, k);
    let d = co.derivative_matrix();
    let c = co.matrix(prob.n, r);
    let mut out: [Vec<(usize, f64)>; 4] = Default::default();
    for (i, row) in out.iter_mut().enumerate() {
        for l in 0..st.value.len() {
            let node = st.first + l;
            for j in 0..4 {
                let v = d[i][j] * st.derivative[l] * jac / h + c[i][j] * st.value[l];
                if v != 0.0 {
                    row.push((full_index(n_int, side, node, j), v));
                }
            }
        }
    }
    let dr = h / jac;
    let weight = (dr * r.powi(prob.n as i32 - 1)).sqrt();
    (weight, out)
}

pub fn assemble(prob: &RadialProblem, grid: &RadialGrid, datum: f64) -> Result<Assembly> {
    if (grid.r0 - prob.r0).abs() > 1e-12 * prob.r0 {
        return Err(Error::Argument("grid and problem disagree on the crease radius".into()));
    }
    if !datum.is_finite() {
        return Err(Error::Argument("non-finite asymptotic datum".into()));
    }
    let nn = grid.intervals;
    let full_len = 8 * (nn + 1);
    let t = prob.transmission;

    // Column layout: minus node 0 (alpha, gamma), minus 1..N-1, plus 0..N-1, plus N (beta, delta).
    let minus_col = |j: usize, c: usize| 2 + 4 * (j - 1) + c;
    let plus_base = 2 + 4 * (nn - 1);
    let plus_col = |j: usize, c: usize| plus_base + 4 * j + c;
    let ncols = plus_base + 4 * nn + 2;

    let mut map: Vec<Vec<(usize, f64)>> = vec![Vec::new(); full_len];
    map[full_index(nn, Side::Minus, 0, 0)] = vec![(0, 1.0)];
    map[full_index(nn, Side::Minus, 0, 2)] = vec![(1, 1.0)];
    for j in 1..nn {
        for c in 0..4 {
            map[full_index(nn, Side::Minus, j, c)] = vec![(minus_col(j, c), 1.0)];
        }
    }
    for c in 0..4 {
        map[full_index(nn, Side::Minus, nn, c)] =
            (0..4).filter(|&l| t[c][l] != 0.0).map(|l| (plus_col(0, l), t[c][l])).collect();
    }
    for j in 0..nn {
        for c in 0..4 {
            map[full_index(nn, Side::Plus, j, c)] = vec![(plus_col(j, c), 1.0)];
        }
    }
    map[full_index(nn, Side::Plus, nn, 1)] = vec![(plus_col(nn, 0), 1.0)];
    map[full_index(nn, Side::Plus, nn, 3)] = vec![(plus_col(nn, 1), 1.0)];

    let mut particular = vec![0.0; full_len];
    let (s0, s1) = (grid.r0.ln(), grid.r_max.ln());
    for j in 0..=nn {
        let x = (grid.node_coordinate(Side::Plus, j) - s0) / (s1 - s0);
        particular[full_index(nn, Side::Plus, j, 0)] = datum * if j == nn { 1.0 } else { smooth_step(x) };
    }

    let mut constraints = Vec::new();
    for c in 0..4 {
        let mut terms = vec![(full_index(nn, Side::Minus, nn, c), 1.0)];
        for l in 0..4 {
            if t[c][l] != 0.0 {
                terms.push((full_index(nn, Side::Plus, 0, l), -t[c][l]));
            }
        }
        constraints.push(ConstraintRow { kind: ConstraintKind::Transmission, terms, value: 0.0 });
    }
    for c in [1, 3] {
        constraints.push(ConstraintRow {
            kind: ConstraintKind::Origin,
            terms: vec![(full_index(nn, Side::Minus, 0, c), 1.0)],
            value: 0.0,
        });
    }
    for (c, v) in [(0, datum), (2, 0.0)] {
        constraints.push(ConstraintRow {
            kind: ConstraintKind::Asymptotic,
            terms: vec![(full_index(nn, Side::Plus, nn, c), 1.0)],
            value: v,
        });
    }

    let jobs: Vec<(Side, usize)> = [Side::Minus, Side::Plus].iter().flat_map(|&s| (0..nn).map(move |k| (s, k))).collect();
    let blocks: Vec<(Side, Vec<BandRow>)> = jobs
        .par_iter()
        .map(|&(side, k)| {
            let (w, eqs) = interval_rows(prob, grid, side, k);
            let rows = eqs
                .iter()
                .map(|terms| {
                    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
                    let mut rhs = 0.0;
                    for &(idx, v) in terms {
                        rhs -= w * v * particular[idx];
                        for &(col, m) in &map[idx] {
                            *acc.entry(col).or_insert(0.0) += w * v * m;
                        }
                    }
                    let first = acc.keys().next().copied().unwrap_or(0);
                    let last = acc.keys().last().copied().unwrap_or(0);
                    let mut values = vec![0.0; last + 1 - first];
                    for (col, v) in acc {
                        values[col - first] = v;
                    }
                    BandRow { first, values, rhs }
                })
                .collect();
            (side, rows)
        })
        .collect();
    let mut rows = Vec::with_capacity(8 * nn);
    let mut row_side = Vec::with_capacity(8 * nn);
    for (side, block) in blocks {
        for r in block {
            rows.push(r);
            row_side.push(side);
        }
    }
    Ok(Assembly {
        grid: grid.clone(),
        n: prob.n,
        datum,
        particular,
        map,
        ncols,
        rows,
        row_side,
        constraints,
        transmission: t,
    })
}

impl Assembly {
    /// Full amplitude vector `u_0 + P z`.
    pub fn expand(&self, z: &[f64]) -> Vec<f64> {
        self.particular
            .iter()
            .zip(&self.map)
            .map(|(p, m)| p + m.iter().map(|(c, v)| v * z[*c]).sum::<f64>())
            .collect()
    }

    pub fn defects(&self, full: &[f64]) -> ConstraintDefects {
        let mut d = ConstraintDefects::default();
        for c in &self.constraints {
            let e = (c.terms.iter().map(|(i, v)| v * full[*i]).sum::<f64>() - c.value).abs();
            let slot = match c.kind {
                ConstraintKind::Transmission => &mut d.transmission,
                ConstraintKind::Origin => &mut d.origin,
                ConstraintKind::Asymptotic => &mut d.asymptotic,
            };
            *slot = slot.max(e);
        }
        d
    }

    /// Transmission block of the constraint rows, `u_-(r0) = T u_+(r0)`.
    pub fn transmission_block(&self) -> [[f64; 4]; 4] {
        let nn = self.grid.intervals;
        let mut t = [[0.0; 4]; 4];
        for c in self.constraints.iter().filter(|c| c.kind == ConstraintKind::Transmission) {
            let row = c
                .terms
                .iter()
                .find_map(|&(i, v)| (v == 1.0 && i >= full_index(nn, Side::Minus, nn, 0) && i < full_index(nn, Side::Minus, nn, 4)).then_some(i))
                .map(|i| i - full_index(nn, Side::Minus, nn, 0))
                .unwrap_or(0);
            for &(i, v) in &c.terms {
                let p0 = full_index(nn, Side::Plus, 0, 0);
                if i >= p0 && i < p0 + 4 {
                    t[row][i - p0] = -v;
                }
            }
        }
        t
    }

    /// Weighted residual norm of the discrete operator on each side.
    pub fn side_residuals(&self, z: &[f64]) -> [f64; 2] {
        let mut acc = [0.0; 2];
        for (r, s) in self.rows.iter().zip(&self.row_side) {
            let e = r.dot(z) - r.rhs;
            acc[s.index()] += e * e;
        }
        acc.map(f64::sqrt)
    }
}

/// Truncation error of the discrete operator on a smooth field.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncationResidual {
    /// Largest `|E_h(u) - E(u)|` over interval midpoints.
    pub max: f64,
    /// Same, in the weighted norm of the least-squares rows.
    pub weighted_l2: f64,
}

/// Truncation error for a smooth `u` given with its derivative.
pub fn truncation_residual<F>(prob: &RadialProblem, grid: &RadialGrid, exact: F) -> TruncationResidual
where
    F: Fn(Side, f64) -> (Amp, Amp) + Sync,
{
    let nn = grid.intervals;
    let parts: Vec<(f64, f64)> = [Side::Minus, Side::Plus]
        .par_iter()
        .map(|&side| {
            let nodal: Vec<Amp> = grid.nodes(side).iter().map(|&r| exact(side, r).0).collect();
            let base = full_index(nn, side, 0, 0);
            (0..nn)
                .map(|k| {
                    let (w, eqs) = interval_rows(prob, grid, side, k);
                    let (r, _, co) = midpoint(prob, grid, side, k);
                    let (u, du) = exact(side, r);
                    let e = co.apply(prob.n, r, &u, &du);
                    let mut mx = 0.0f64;
                    let mut sq = 0.0;
                    for i in 0..4 {
                        let d: f64 = eqs[i].iter().map(|&(idx, v)| v * nodal[(idx - base) / 4][(idx - base) % 4]).sum();
                        mx = mx.max((d - e[i]).abs());
                        sq += (w * (d - e[i])).powi(2);
                    }
                    (mx, sq)
                })
                .fold((0.0f64, 0.0f64), |a, b| (a.0.max(b.0), a.1 + b.1))
        })
        .collect();
    TruncationResidual {
        max: parts.iter().map(|p| p.0).fold(0.0, f64::max),
        weighted_l2: parts.iter().map(|p| p.1).sum::<f64>().sqrt(),
    }
}
