use clifford_core::{CliffordRep, Result};
use flux_integrals::{adm_energy_momentum, witten_energy_momentum, MassReport, WittenReport};
use serde::Serialize;

use super::data;
use crate::config::AdmConfig;
use crate::report::{to_json_value, Check, CommandOutput, Table};

#[derive(Serialize)]
struct WittenSummary {
    report: WittenReport,
    /// `|E_flux(r) - E_adm|` per radius.
    errors: Vec<f64>,
    relative_difference: f64,
}

#[derive(Serialize)]
struct Results {
    label: String,
    adm: MassReport,
    witten: Option<WittenSummary>,
}

pub fn run(cfg: &AdmConfig) -> Result<CommandOutput> {
    let d = data(&cfg.data)?;
    let n = d.dim();
    let adm = adm_energy_momentum(&d, &cfg.radii, cfg.order)?;
    let mut checks = Vec::new();
    let mut headers = vec!["r".to_string(), "e".to_string()];
    headers.extend((1..=n).map(|j| format!("p{j}")));
    let mut table = Table { file_name: "adm_radii.csv".into(), headers, rows: Vec::new() };
    for (k, r) in adm.radii.iter().enumerate() {
        let mut row = vec![*r, adm.e_raw[k]];
        row.extend(&adm.p_raw[k]);
        table.push(row);
    }
    let mut tables = vec![table];

    if let Some(e) = &cfg.expect {
        checks.push(Check::le("energy_error", (adm.e - e.energy).abs(), e.energy_tol));
        checks.push(Check::le("momentum_norm", adm.p_norm(), e.momentum_tol));
    }

    let witten = match &cfg.witten {
        None => None,
        Some(w) => {
            let rep = CliffordRep::new(n)?;
            let report = witten_energy_momentum(&d, &rep, &w.radii, w.order)?;
            let errors: Vec<f64> = report.fit.e_raw.iter().map(|e| (e - adm.e).abs()).collect();
            let scale = adm.e.abs().max(w.abs_floor);
            let relative_difference = (report.fit.e - adm.e).abs() / scale;
            let growth = errors.windows(2).filter(|p| p[1] > p[0] + w.abs_floor).count();
            checks.push(Check::le("witten_relative_difference", relative_difference, w.tol));
            checks.push(Check::le("witten_momentum", report.fit.p_norm() / scale, w.tol));
            checks.push(Check::le("witten_error_increases", growth as f64, 0.0));
            let mut t = Table::new("witten_radii.csv", &["r", "e_flux", "flux", "error", "model_defect"]);
            for (k, r) in report.radii.iter().enumerate() {
                t.push(vec![*r, report.fit.e_raw[k], report.flux[k], errors[k], report.model_defect[k]]);
            }
            tables.push(t);
            Some(WittenSummary { report, errors, relative_difference })
        }
    };
    let results = Results { label: d.label.clone(), adm, witten };
    Ok(CommandOutput { results: to_json_value(&results)?, checks, tables })
}
