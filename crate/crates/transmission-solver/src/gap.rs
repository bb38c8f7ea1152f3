//! Mass gap of a solved transmission problem.
//!
//! `gap = flux - bulk` with the flux built from the extrapolated energy-momentum and the bulk
//! integral taken over both sides of the solved spinor. For a Dirac-Witten harmonic pair the
//! integrated Weitzenboeck identity gives `bulk = outer boundary + crease terms`.

use clifford_core::{CliffordRep, Complex64, Result, Spinor};
use flux_integrals::field::partials;
use flux_integrals::quad::{complex_sum, sphere_nodes};
use flux_integrals::{crease_boundary_terms, BoundaryPoint, MassReport, SpinFrame, SpinorField};
use geometry_catalog::linalg::pairwise_sum;
use geometry_catalog::quadrature::gauss_legendre_interval;
use geometry_catalog::{constraint_fields, unit_sphere_volume, Domain, InitialData, Orientation};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::Side;
use crate::reduce::RadialProblem;
use crate::solve::RadialSolution;

/// Absolute slack on the sign of the gap.
pub const GAP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapOptions {
    /// Gauss-Legendre points per grid interval.
    pub radial_points: usize,
    pub sphere_order: usize,
    /// Accepted negative gap, relative to `|flux|`.
    pub gap_tol: f64,
    /// Accepted negative `mu - |J|` and crease margin.
    pub condition_tol: f64,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self { radial_points: 3, sphere_order: 6, gap_tol: 1e-4, condition_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BulkParts {
    /// `int |nabla-bar psi|^2`.
    pub dirichlet: f64,
    /// `1/2 int mu |psi|^2`.
    pub energy: f64,
    /// `1/2 int <psi, J tau psi>`.
    pub momentum: f64,
    /// `int |D_W psi|^2`.
    pub dirac_residual: f64,
    /// Smallest `mu - |J|` over the radial nodes.
    pub min_dec_margin: f64,
}

impl BulkParts {
    pub fn total(&self) -> f64 {
        self.dirichlet + self.energy + self.momentum
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MassGapReport {
    pub energy: f64,
    pub momentum: Vec<f64>,
    pub flux: f64,
    pub bulk: f64,
    pub bulk_minus: BulkParts,
    pub bulk_plus: BulkParts,
    pub gap: f64,
    /// Sum of the two crease boundary terms of the solved pair.
    pub crease_term: f64,
    /// Closed form of the crease terms from the jumps of mean curvature, `tr k` and connection.
    pub crease_formula: f64,
    pub crease_bound: f64,
    pub crease_margin: f64,
    /// Boundary term on the truncation sphere.
    pub outer_boundary: f64,
    /// `outer + crease - bulk + int |D_W psi|^2`.
    pub identity_defect: f64,
    /// `flux - outer boundary`.
    pub truncation_bias: f64,
    pub interior_dec: bool,
    pub exterior_dec: bool,
    pub crease_condition: bool,
    pub gap_nonnegative: bool,
    /// Hypotheses that fail, or a gap that is negative while they hold.
    pub flags: Vec<String>,
}

/// `c (E |psi|^2 - <psi, P_j gamma_j tau psi>)`, `c = (n-1) omega / 2`.
pub fn flux_term(rep: &CliffordRep, mass: &MassReport, psi: &Spinor) -> f64 {
    let n = rep.n();
    let c = (n as f64 - 1.0) * unit_sphere_volume(n) / 2.0;
    let mut pm = rep.identity() * Complex64::new(0.0, 0.0);
    for (j, pj) in mass.p.iter().enumerate() {
        pm += rep.gamma(j) * rep.tau() * Complex64::new(*pj, 0.0);
    }
    c * (mass.e * psi.norm_squared() - psi.dotc(&(pm * psi)).re)
}

/// Copy of one side with a chart slightly beyond the crease sphere, for finite differences.
fn widened(data: &InitialData, side: Side, r0: f64) -> InitialData {
    let pad = 1e-3 * r0.max(1.0);
    let domain = match side {
        Side::Minus => Domain::Ball { r0: r0 + pad },
        Side::Plus => Domain::Exterior { r0: (r0 - pad).max(0.5 * r0) },
    };
    data.restricted(data.label.clone(), domain, data.kind)
}

fn side_bulk(
    prob: &RadialProblem,
    rep: &CliffordRep,
    sol: &RadialSolution,
    side: Side,
    opts: &GapOptions,
) -> Result<BulkParts> {
    let n = prob.n;
    let data = match side {
        Side::Minus => &prob.cd.minus,
        Side::Plus => &prob.cd.plus,
    };
    let wide = widened(data, side, prob.r0);
    let field = sol.field(rep, side);
    let nodes = match side {
        Side::Minus => &sol.r_minus,
        Side::Plus => &sol.r_plus,
    };
    let coord = |r: f64| if side == Side::Plus { r.ln() } else { r };
    let mut radial = Vec::new();
    for w in nodes.windows(2) {
        let (ts, ws) = gauss_legendre_interval(opts.radial_points, coord(w[0]), coord(w[1]));
        for (t, wt) in ts.into_iter().zip(ws) {
            let (r, drdt) = if side == Side::Plus { (t.exp(), t.exp()) } else { (t, 1.0) };
            radial.push((r, wt * drdt));
        }
    }
    let parts: Vec<[f64; 5]> = radial
        .par_iter()
        .map(|&(r, wr)| {
            let mut north = vec![0.0; n];
            north[n - 1] = r;
            let cv = constraint_fields(&wide, &north)?;
            let j_r = cv.j[n - 1];
            let mut acc = [0.0; 4];
            let mut vals: [Vec<Complex64>; 4] = Default::default();
            for (x, ws) in sphere_nodes(n, r, opts.sphere_order)? {
                let spin = SpinFrame::at(data, rep, &x)?;
                let vol = spin.coframe.determinant() * r.powi(n as i32 - 1) * ws * wr;
                let psi = field.value(&x);
                let dpsi = partials(&field, &x);
                let sd = spin.sen_derivatives(&psi, &dpsi);
                let dir: f64 = sd.iter().map(|s| s.norm_squared()).sum();
                let dw = spin.dirac_witten(&psi, &dpsi).norm_squared();
                let jc: Vec<f64> = x.iter().map(|v| j_r * v / r).collect();
                let jf: Vec<f64> = (0..n).map(|i| (0..n).map(|a| spin.frame[(i, a)] * jc[a]).sum()).collect();
                let jt = psi.dotc(&(spin.clifford(&jf) * (&spin.tau * &psi)));
                vals[0].push(Complex64::new(dir * vol, 0.0));
                vals[1].push(Complex64::new(0.5 * cv.mu * psi.norm_squared() * vol, 0.0));
                vals[2].push(jt * (0.5 * vol));
                vals[3].push(Complex64::new(dw * vol, 0.0));
            }
            for (a, v) in acc.iter_mut().zip(&vals) {
                *a = complex_sum(v).re;
            }
            Ok([acc[0], acc[1], acc[2], acc[3], cv.mu - cv.j_norm])
        })
        .collect::<Result<_>>()?;
    let col = |k: usize| pairwise_sum(&parts.iter().map(|p| p[k]).collect::<Vec<_>>());
    Ok(BulkParts {
        dirichlet: col(0),
        energy: col(1),
        momentum: col(2),
        dirac_residual: col(3),
        min_dec_margin: parts.iter().map(|p| p[4]).fold(f64::INFINITY, f64::min),
    })
}

fn outer_boundary(prob: &RadialProblem, rep: &CliffordRep, sol: &RadialSolution, order: usize) -> Result<f64> {
    let field = sol.field(rep, Side::Plus);
    let vals: Vec<Complex64> = sphere_nodes(prob.n, sol.r_max, order)?
        .par_iter()
        .map(|(x, w)| {
            let bp = BoundaryPoint::new(&prob.cd.plus, rep, x, Orientation::Outward, *w)?;
            Ok(bp.integrand(&field.value(x), &partials(&field, x)) * bp.weight)
        })
        .collect::<Result<_>>()?;
    Ok(complex_sum(&vals).re)
}

/// Mass gap of a solution. Failed hypotheses are reported in `flags`, never as errors.
pub fn mass_gap(
    prob: &RadialProblem,
    rep: &CliffordRep,
    sol: &RadialSolution,
    mass: &MassReport,
    opts: &GapOptions,
) -> Result<MassGapReport> {
    let psi_inf = sol.psi_inf_spinor();
    let flux = flux_term(rep, mass, &psi_inf);
    let bulk_minus = side_bulk(prob, rep, sol, Side::Minus, opts)?;
    let bulk_plus = side_bulk(prob, rep, sol, Side::Plus, opts)?;
    let bulk = bulk_minus.total() + bulk_plus.total();
    let fm = sol.field(rep, Side::Minus);
    let fp = sol.field(rep, Side::Plus);
    let ct = crease_boundary_terms(&prob.cd, rep, &fm, &fp, opts.sphere_order.max(4))?;
    let outer = outer_boundary(prob, rep, sol, opts.sphere_order.max(4))?;
    let gap = flux - bulk;
    let identity_defect = outer + ct.direct - bulk + bulk_minus.dirac_residual + bulk_plus.dirac_residual;

    let scale = 1.0 + bulk_minus.energy.abs().max(bulk_plus.energy.abs());
    let interior_dec = bulk_minus.min_dec_margin >= -opts.condition_tol * scale;
    let exterior_dec = bulk_plus.min_dec_margin >= -opts.condition_tol * scale;
    let crease_condition = ct.min_margin >= -opts.condition_tol;
    let gap_nonnegative = gap >= -(opts.gap_tol * flux.abs().max(bulk.abs()) + GAP_FLOOR);
    let mut flags = Vec::new();
    if !interior_dec {
        flags.push(format!("dominant energy condition fails inside (min mu - |J| = {:e})", bulk_minus.min_dec_margin));
    }
    if !exterior_dec {
        flags.push(format!("dominant energy condition fails outside (min mu - |J| = {:e})", bulk_plus.min_dec_margin));
    }
    if !crease_condition {
        flags.push(format!("crease condition fails (min margin {:e})", ct.min_margin));
    }
    if interior_dec && exterior_dec && crease_condition && !gap_nonnegative {
        flags.push(format!("negative gap {gap:e} although all hypotheses hold"));
    }
    Ok(MassGapReport {
        energy: mass.e,
        momentum: mass.p.clone(),
        flux,
        bulk,
        bulk_minus,
        bulk_plus,
        gap,
        crease_term: ct.direct,
        crease_formula: ct.formula,
        crease_bound: ct.bound,
        crease_margin: ct.min_margin,
        outer_boundary: outer,
        identity_defect,
        truncation_bias: flux - outer,
        interior_dec,
        exterior_dec,
        crease_condition,
        gap_nonnegative,
        flags,
    })
}

/// Gap against truncation radius.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationStudy {
    pub r_max: Vec<f64>,
    pub gap: Vec<f64>,
    pub outer_boundary: Vec<f64>,
    pub fit: flux_integrals::Extrapolation,
}

/// Solve and evaluate the gap for each truncation radius; `intervals` per side for all of them.
pub fn truncation_study(
    prob: &RadialProblem,
    rep: &CliffordRep,
    psi_inf: &Spinor,
    mass: &MassReport,
    r_max: &[f64],
    intervals: usize,
    opts: &GapOptions,
) -> Result<TruncationStudy> {
    let mut gap = Vec::with_capacity(r_max.len());
    let mut outer = Vec::with_capacity(r_max.len());
    for &rm in r_max {
        let grid = crate::grid::RadialGrid::new(prob.r0, rm, intervals)?;
        let sol = crate::solve::solve(prob, psi_inf, &grid, crate::solve::SolverKind::Qr)?;
        let rep_gap = mass_gap(prob, rep, &sol, mass, opts)?;
        gap.push(rep_gap.gap);
        outer.push(rep_gap.outer_boundary);
    }
    let fit = flux_integrals::richardson(r_max, &gap)?;
    Ok(TruncationStudy { r_max: r_max.to_vec(), gap, outer_boundary: outer, fit })
}
