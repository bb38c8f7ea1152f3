use clifford_core::{CliffordRep, Complex64, Error, Result, Spinor};
use flux_integrals::{adm_energy_momentum, MassReport};
use serde::Serialize;
use transmission_solver::{
    mass_gap, poincare_estimate, reduce_radial, solve, truncation_study, MassGapReport, PoincareEstimate,
    RadialGrid, RadialSolution, TruncationStudy,
};

use super::creased;
use crate::config::SolveConfig;
use crate::report::{to_json_value, Check, CommandOutput, Table};

#[derive(Serialize)]
struct PoincareSummary {
    fine: PoincareEstimate,
    coarse: PoincareEstimate,
    relative_change: f64,
}

#[derive(Serialize)]
struct Results {
    label: String,
    oracle_max_deviation: [f64; 2],
    mass: MassReport,
    solution: RadialSolution,
    max_deviation_from_constant: f64,
    gap: MassGapReport,
    poincare: Option<PoincareSummary>,
    truncation: Option<TruncationStudy>,
}

pub fn run(cfg: &SolveConfig) -> Result<CommandOutput> {
    let cd = creased(&cfg.data)?;
    let rep = CliffordRep::new(cd.dim())?;
    let psi_inf = match &cfg.psi_inf {
        None => {
            let mut s = Spinor::zeros(rep.dim());
            s[0] = Complex64::new(1.0, 0.0);
            s
        }
        Some(v) if v.len() == rep.dim() => Spinor::from_iterator(v.len(), v.iter().map(|p| Complex64::new(p[0], p[1]))),
        Some(v) => {
            return Err(Error::Config(format!("solve.psi_inf has {} entries, the spinor dimension is {}", v.len(), rep.dim())))
        }
    };
    let prob = reduce_radial(&cd, &rep, cfg.mode)?;
    let grid = RadialGrid::new(cd.r0, cfg.r_max, cfg.intervals)?;
    let sol = solve(&prob, &psi_inf, &grid, cfg.solver)?;
    let mass = adm_energy_momentum(&cd.plus, &cfg.adm_radii, cfg.adm_order)?;
    let gap = mass_gap(&prob, &rep, &sol, &mass, &cfg.gap)?;

    let scale = gap.flux.abs().max(gap.bulk.abs());
    let mut checks = vec![
        Check::flag("interior_dominant_energy", gap.interior_dec),
        Check::flag("exterior_dominant_energy", gap.exterior_dec),
        Check::flag("crease_condition", gap.crease_condition),
        Check::ge("gap", gap.gap, -(cfg.gap.gap_tol * scale + transmission_solver::gap::GAP_FLOOR)),
        Check::ge("dirichlet_minus", gap.bulk_minus.dirichlet, 0.0),
        Check::ge("dirichlet_plus", gap.bulk_plus.dirichlet, 0.0),
    ];
    let deviation = sol.max_deviation_from_constant();
    if let Some(e) = &cfg.expect {
        if let Some(t) = e.gap_abs {
            checks.push(Check::le("gap_abs", gap.gap.abs(), t));
        }
        if let Some(t) = e.deviation {
            checks.push(Check::le("deviation_from_constant", deviation, t));
        }
    }

    let poincare = if cfg.poincare {
        let fine = poincare_estimate(&prob, &rep, &grid)?;
        let coarse_grid = RadialGrid::new(cd.r0, cfg.r_max, cfg.poincare_coarse_intervals)?;
        let coarse = poincare_estimate(&prob, &rep, &coarse_grid)?;
        let relative_change = (fine.lambda - coarse.lambda).abs() / fine.lambda.abs();
        checks.push(Check::ge("poincare_lambda", fine.lambda, f64::MIN_POSITIVE));
        checks.push(Check::le("poincare_relative_change", relative_change, cfg.poincare_stability_tol));
        Some(PoincareSummary { fine, coarse, relative_change })
    } else {
        None
    };

    let truncation = match &cfg.truncation {
        None => None,
        Some(t) => {
            let study = truncation_study(&prob, &rep, &psi_inf, &mass, &t.r_max, t.intervals, &cfg.gap)?;
            let p = study.fit.exponent.unwrap_or(f64::NAN);
            checks.push(Check::le("truncation_exponent_error", (p - 1.0).abs(), t.exponent_tol));
            Some(study)
        }
    };

    let mut profile = Table::new("solve_profile.csv", &["side", "r", "alpha", "beta", "gamma", "delta"]);
    for (side, rs, us) in [(-1.0, &sol.r_minus, &sol.u_minus), (1.0, &sol.r_plus, &sol.u_plus)] {
        for (r, u) in rs.iter().zip(us.iter()) {
            profile.push(vec![side, *r, u[0], u[1], u[2], u[3]]);
        }
    }
    let results = Results {
        label: cd.label.clone(),
        oracle_max_deviation: [prob.oracle[0].max_deviation, prob.oracle[1].max_deviation],
        mass,
        max_deviation_from_constant: deviation,
        solution: sol,
        gap,
        poincare,
        truncation,
    };
    Ok(CommandOutput { results: to_json_value(&results)?, checks, tables: vec![profile] })
}
