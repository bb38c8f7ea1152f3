use clifford_core::{Error, Result};
use crease_bartnik::{bartnik_pair, crease_margin, margin_value, spacelike_form, spacelike_form_check};
use rand::Rng;
use serde::Serialize;

use super::{creased, rng};
use crate::config::CreaseCheckConfig;
use crate::report::{to_json_value, Check, CommandOutput, Table};

#[derive(Serialize)]
struct Results {
    label: String,
    r0: f64,
    nodes: usize,
    min_margin: f64,
    argmin: usize,
    argmin_direction: Vec<f64>,
    dec_creased: bool,
    node_form_disagreements: usize,
    random_triples: usize,
    random_triples_positive: usize,
    random_triple_disagreements: usize,
}

pub fn run(cfg: &CreaseCheckConfig, seed: u64) -> Result<CommandOutput> {
    let cd = creased(&cfg.data)?;
    if cd.dim() != 3 {
        return Err(Error::Config("crease-check supports n = 3 only".into()));
    }
    let (bm, bp, f) = bartnik_pair(&cd, cfg.order)?;
    let report = crease_margin(&bm, &bp, &f, cfg.tol)?;
    let forms = spacelike_form_check(&report)?;

    let mut r = rng(seed, 1);
    let (mut positive, mut disagree) = (0, 0);
    for _ in 0..cfg.random_triples {
        let nu = r.gen_range(-2.0..2.0);
        let tau = r.gen_range(-2.0..2.0);
        let b: f64 = r.gen_range(0.0..2.0);
        let m = margin_value(nu, tau, b);
        positive += usize::from(m > 0.0);
        disagree += usize::from((m >= 0.0) != spacelike_form(nu, tau, b));
    }

    let mut table = Table::new("crease_nodes.csv", &["xhat", "yhat", "zhat", "f", "nu_component", "tau_component", "beta_delta_norm", "margin"]);
    for (i, node) in report.nodes.iter().enumerate() {
        let p = &bm.grid.points[i];
        table.push(vec![p[0], p[1], p[2], f[i], node.nu_component, node.tau_component, node.beta_delta_norm, node.margin]);
    }

    let mut checks = vec![
        Check::ge("min_margin", report.min_margin, -cfg.tol),
        Check::le("form_disagreements", (forms.disagreements.len() + disagree) as f64, 0.0),
    ];
    if let Some(m) = cfg.expected_margin {
        checks.push(Check::le("margin_error", (report.min_margin - m).abs(), cfg.margin_tol));
    }
    let results = Results {
        label: cd.label.clone(),
        r0: cd.r0,
        nodes: report.nodes.len(),
        min_margin: report.min_margin,
        argmin: report.argmin,
        argmin_direction: bm.grid.points[report.argmin].clone(),
        dec_creased: report.dec_creased,
        node_form_disagreements: forms.disagreements.len(),
        random_triples: cfg.random_triples,
        random_triples_positive: positive,
        random_triple_disagreements: disagree,
    };
    Ok(CommandOutput { results: to_json_value(&results)?, checks, tables: vec![table] })
}
