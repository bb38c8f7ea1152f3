use std::sync::Arc;

use clifford_core::suite::identity_suite;
use clifford_core::{CliffordRep, Result};
use flux_integrals::field::{PolynomialSpinor, TransmittedField};
use flux_integrals::quad::Region;
use flux_integrals::{crease_boundary_terms, lsw_residual, QuadratureOrders};
use serde::Serialize;

use super::{creased, data, max, rng};
use crate::config::IdentitiesConfig;
use crate::report::{to_json_value, Check, CommandOutput, Table};

#[derive(Serialize)]
struct CliffordRow {
    name: String,
    n: usize,
    f: Option<f64>,
    residual: f64,
}

#[derive(Serialize)]
struct LswRow {
    label: String,
    sample: usize,
    bulk: f64,
    boundary: f64,
    relative: f64,
}

#[derive(Serialize)]
struct CreaseRow {
    label: String,
    sample: usize,
    direct: f64,
    formula: f64,
    bound: f64,
    min_margin: f64,
    relative: f64,
    sign_ok: bool,
}

#[derive(Serialize)]
struct Results {
    clifford_max: f64,
    clifford: Vec<CliffordRow>,
    lsw_max_relative: f64,
    lsw: Vec<LswRow>,
    crease_max_relative: f64,
    crease_sign_violations: usize,
    crease: Vec<CreaseRow>,
}

pub fn run(cfg: &IdentitiesConfig, seed: u64) -> Result<CommandOutput> {
    let clifford: Vec<CliffordRow> = identity_suite(&cfg.clifford.dims, &cfg.clifford.angles)?
        .into_iter()
        .map(|r| CliffordRow { name: r.name, n: r.n, f: r.f, residual: r.residual })
        .collect();

    let l = &cfg.lsw;
    let mut r = rng(seed, 2);
    let mut lsw = Vec::new();
    let mut lsw_table = Table::new("lsw.csv", &["datum", "sample", "bulk", "boundary", "relative"]);
    for (di, spec) in l.data.iter().enumerate() {
        let d = data(spec)?;
        let rep = CliffordRep::new(d.dim())?;
        let orders = QuadratureOrders { radial: l.radial_order, sphere: l.sphere_order };
        for s in 0..l.spinors {
            let field = PolynomialSpinor::random(&mut r, d.dim(), rep.dim(), l.degree, l.scale);
            let res = lsw_residual(&d, &rep, &field, Region::Annulus { r_in: l.r_in, r_out: l.r_out }, orders)?;
            let relative = res.residual.abs() / (res.bulk.abs() + 1.0);
            lsw_table.push(vec![di as f64, s as f64, res.bulk, res.boundary, relative]);
            lsw.push(LswRow { label: d.label.clone(), sample: s, bulk: res.bulk, boundary: res.boundary, relative });
        }
    }

    let c = &cfg.crease;
    let mut r = rng(seed, 3);
    let mut crease = Vec::new();
    let mut crease_table =
        Table::new("crease_pairs.csv", &["datum", "sample", "direct", "formula", "bound", "min_margin", "relative"]);
    for (di, spec) in c.data.iter().enumerate() {
        let cd = creased(spec)?;
        let rep = CliffordRep::new(cd.dim())?;
        for s in 0..c.pairs {
            let plus = PolynomialSpinor::random(&mut r, cd.dim(), rep.dim(), c.degree, c.scale);
            let minus = TransmittedField::new(&rep, Arc::new(plus.clone()), cd.f);
            let t = crease_boundary_terms(&cd, &rep, &minus, &plus, c.order)?;
            let relative = (t.direct - t.formula).abs() / t.formula.abs().max(f64::MIN_POSITIVE);
            let sign_ok = t.min_margin < 0.0 || t.direct <= 0.0;
            crease_table.push(vec![di as f64, s as f64, t.direct, t.formula, t.bound, t.min_margin, relative]);
            crease.push(CreaseRow {
                label: cd.label.clone(),
                sample: s,
                direct: t.direct,
                formula: t.formula,
                bound: t.bound,
                min_margin: t.min_margin,
                relative,
                sign_ok,
            });
        }
    }

    let results = Results {
        clifford_max: max(clifford.iter().map(|c| c.residual)),
        lsw_max_relative: max(lsw.iter().map(|l| l.relative)),
        crease_max_relative: max(crease.iter().map(|c| c.relative)),
        crease_sign_violations: crease.iter().filter(|c| !c.sign_ok).count(),
        clifford,
        lsw,
        crease,
    };
    let checks = vec![
        Check::le("clifford_max", results.clifford_max, cfg.clifford.tol),
        Check::le("lsw_max_relative", results.lsw_max_relative, l.tol),
        Check::le("crease_max_relative", results.crease_max_relative, c.tol),
        Check::le("crease_sign_violations", results.crease_sign_violations as f64, 0.0),
    ];
    Ok(CommandOutput { results: to_json_value(&results)?, checks, tables: vec![lsw_table, crease_table] })
}
