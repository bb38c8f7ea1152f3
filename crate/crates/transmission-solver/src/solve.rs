//! Least-squares solve of the discrete transmission problem.

use clifford_core::{CliffordRep, Complex64, Error, Result, Spinor};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assemble::{assemble, full_index, Assembly};
use crate::band::{banded_qr, cgls};
use crate::grid::{lagrange_weights, window, RadialGrid, Side};
use crate::reduce::{Amp, RadialAmplitudes, RadialProblem, SeparatedField};

/// Acceptance threshold for transmission and origin defects, relative to `max(1, |psi_inf|)`.
pub const CONSTRAINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverKind {
    /// Banded Givens QR.
    Qr,
    /// Conjugate gradients on the normal equations.
    Cgls { tol: f64, max_iter: usize },
}

impl Default for SolverKind {
    fn default() -> Self {
        SolverKind::Qr
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialSolution {
    pub n: usize,
    pub r0: f64,
    pub r_max: f64,
    pub intervals: usize,
    pub f: f64,
    pub r_minus: Vec<f64>,
    pub r_plus: Vec<f64>,
    /// Amplitudes of `psi_-`; the last entry is the interior trace at `r0`.
    pub u_minus: Vec<Amp>,
    /// Amplitudes of `psi_+`; the first entry is the exterior trace at `r0`.
    pub u_plus: Vec<Amp>,
    /// `psi_inf` as `(re, im)` pairs.
    pub psi_inf: Vec<[f64; 2]>,
    pub datum: f64,
    /// Weighted discrete `|D_W psi|` per side.
    pub residual_minus: f64,
    pub residual_plus: f64,
    /// Largest nodal `|D_W psi|` from independent five-point stencils, per side.
    pub interior_residual: [f64; 2],
    pub transmission_defect: f64,
    pub origin_defect: f64,
    pub asymptotic_defect: f64,
    pub solver: SolverKind,
    pub iterations: usize,
    /// Residual history; a single entry for the direct solver.
    pub iteration_log: Vec<f64>,
    pub pivot_ratio: Option<f64>,
    #[serde(skip)]
    pub grid: Option<RadialGrid>,
}

/// Amplitudes of one side interpolated with local six-point Lagrange polynomials.
#[derive(Debug, Clone)]
pub struct SideAmplitudes {
    pub side: Side,
    coords: Vec<f64>,
    values: Vec<Amp>,
}

pub const INTERP_POINTS: usize = 6;

impl SideAmplitudes {
    fn coordinate(&self, r: f64) -> f64 {
        match self.side {
            Side::Minus => r,
            Side::Plus => r.ln(),
        }
    }
}

impl RadialAmplitudes for SideAmplitudes {
    fn eval(&self, r: f64) -> (Amp, Amp) {
        let t = self.coordinate(r);
        let last = self.coords.len() - 1;
        let pos = self.coords.partition_point(|&c| c < t).min(last);
        let start = window(pos, INTERP_POINTS, last);
        let xs = &self.coords[start..start + INTERP_POINTS];
        let (w, dw) = lagrange_weights(xs, t);
        let jac = match self.side {
            Side::Minus => 1.0,
            Side::Plus => 1.0 / r,
        };
        let mut u = [0.0; 4];
        let mut du = [0.0; 4];
        for (k, (a, b)) in w.iter().zip(&dw).enumerate() {
            let v = &self.values[start + k];
            for c in 0..4 {
                u[c] += a * v[c];
                du[c] += b * jac * v[c];
            }
        }
        (u, du)
    }
}

impl RadialSolution {
    /// `psi_inf / |psi_inf|`, or zero.
    pub fn unit_spinor(&self) -> Spinor {
        let s = Spinor::from_iterator(self.psi_inf.len(), self.psi_inf.iter().map(|p| Complex64::new(p[0], p[1])));
        if self.datum > 0.0 {
            s / Complex64::new(self.datum, 0.0)
        } else {
            s
        }
    }

    pub fn psi_inf_spinor(&self) -> Spinor {
        Spinor::from_iterator(self.psi_inf.len(), self.psi_inf.iter().map(|p| Complex64::new(p[0], p[1])))
    }

    pub fn amplitudes(&self, side: Side) -> SideAmplitudes {
        let (coords, values) = match side {
            Side::Minus => (self.r_minus.clone(), self.u_minus.clone()),
            Side::Plus => (self.r_plus.iter().map(|r| r.ln()).collect(), self.u_plus.clone()),
        };
        SideAmplitudes { side, coords, values }
    }

    pub fn field(&self, rep: &CliffordRep, side: Side) -> SeparatedField<SideAmplitudes> {
        SeparatedField::new(rep, self.amplitudes(side), self.unit_spinor())
    }

    /// Largest `|psi - psi_inf|` over all nodes for the asymptotic amplitude `(1, 0, 0, 0)` scaled by `|psi_inf|`.
    pub fn max_deviation_from_constant(&self) -> f64 {
        self.u_minus
            .iter()
            .chain(&self.u_plus)
            .map(|u| {
                let d = [u[0] - self.datum, u[1], u[2], u[3]];
                d.iter().map(|v| v.abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn max_amplitude(&self) -> f64 {
        self.u_minus.iter().chain(&self.u_plus).flat_map(|u| u.iter()).map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn accepted(&self) -> bool {
        let scale = self.datum.max(1.0);
        self.transmission_defect < CONSTRAINT_TOL * scale && self.origin_defect < CONSTRAINT_TOL * scale
    }
}

/// Largest nodal residual of the reduced operator, using five-point stencils in the side coordinate.
pub fn nodal_residual(prob: &RadialProblem, grid: &RadialGrid, side: Side, u: &[Amp]) -> f64 {
    let nn = grid.intervals;
    let coords: Vec<f64> = (0..=nn).map(|j| grid.node_coordinate(side, j)).collect();
    let prof = match side {
        Side::Minus => &prob.minus,
        Side::Plus => &prob.plus,
    };
    let first = if side == Side::Minus { 1 } else { 0 };
    (first..=nn)
        .into_par_iter()
        .map(|j| {
            let start = window(j, 5, nn);
            let (_, dw) = lagrange_weights(&coords[start..start + 5], coords[j]);
            let r = grid.nodes(side)[j];
            let jac = if side == Side::Plus { 1.0 / r } else { 1.0 };
            let mut du = [0.0; 4];
            for (k, w) in dw.iter().enumerate() {
                for c in 0..4 {
                    du[c] += w * jac * u[start + k][c];
                }
            }
            let e = prof.coefficients(r).apply(prob.n, r, &u[j], &du);
            e.iter().map(|v| v.abs()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Solve for `psi = (alpha + beta X + gamma tau + delta X tau) psi_inf / |psi_inf|`.
pub fn solve(prob: &RadialProblem, psi_inf: &Spinor, grid: &RadialGrid, solver: SolverKind) -> Result<RadialSolution> {
    let datum = psi_inf.norm();
    let asm = assemble(prob, grid, datum)?;
    solve_assembled(prob, &asm, psi_inf, solver)
}

pub fn solve_assembled(prob: &RadialProblem, asm: &Assembly, psi_inf: &Spinor, solver: SolverKind) -> Result<RadialSolution> {
    if psi_inf.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Argument("non-finite asymptotic spinor".into()));
    }
    let grid = &asm.grid;
    let nn = grid.intervals;
    let (z, iterations, log, pivot_ratio) = match solver {
        SolverKind::Qr => {
            let out = banded_qr(asm.ncols, &asm.rows)?;
            (out.solution, 1, vec![out.residual], Some(out.pivot_ratio))
        }
        SolverKind::Cgls { tol, max_iter } => {
            let out = cgls(asm.ncols, &asm.rows, tol, max_iter)?;
            (out.solution, out.iterations, out.residual_log, None)
        }
    };
    let full = asm.expand(&z);
    let pick = |side: Side| -> Vec<Amp> {
        (0..=nn)
            .map(|j| {
                let b = full_index(nn, side, j, 0);
                [full[b], full[b + 1], full[b + 2], full[b + 3]]
            })
            .collect()
    };
    let u_minus = pick(Side::Minus);
    let u_plus = pick(Side::Plus);
    let defects = asm.defects(&full);
    let [residual_minus, residual_plus] = asm.side_residuals(&z);
    let interior_residual = [
        nodal_residual(prob, grid, Side::Minus, &u_minus),
        nodal_residual(prob, grid, Side::Plus, &u_plus),
    ];
    let sol = RadialSolution {
        n: prob.n,
        r0: prob.r0,
        r_max: grid.r_max,
        intervals: nn,
        f: prob.f,
        r_minus: grid.minus.clone(),
        r_plus: grid.plus.clone(),
        u_minus,
        u_plus,
        psi_inf: psi_inf.iter().map(|z| [z.re, z.im]).collect(),
        datum: asm.datum,
        residual_minus,
        residual_plus,
        interior_residual,
        transmission_defect: defects.transmission,
        origin_defect: defects.origin,
        asymptotic_defect: defects.asymptotic,
        solver,
        iterations,
        iteration_log: log,
        pivot_ratio,
        grid: Some(grid.clone()),
    };
    if !sol.accepted() {
        return Err(Error::Consistency(format!(
            "solution violates its constraints: transmission {:e}, origin {:e}",
            sol.transmission_defect, sol.origin_defect
        )));
    }
    Ok(sol)
}
