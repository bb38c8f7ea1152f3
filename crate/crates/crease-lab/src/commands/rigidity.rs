use std::sync::Arc;

use clifford_core::{CliffordRep, Complex64, Result, Spinor};
use flux_integrals::field::{ConstantSpinor, PolynomialSpinor, TransmittedField};
use flux_integrals::SpinorField;
use killing_rigidity::{
    crease_lorentz_check, killing_conditions_residual, killing_development, lapse_shift_from_spinor,
    lorentz_length_drift, radial_curve, riemann_norm, shift_norm_sq, KillingResidual, LapseShift, LengthDrift,
    LorentzReport,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{creased, data, max, rng};
use crate::config::RigidityConfig;
use crate::report::{to_json_value, Check, CommandOutput, Table};

#[derive(Serialize)]
struct SpinorRun {
    psi: Vec<[f64; 2]>,
    lapse_shift_violations: usize,
    killing: KillingResidual,
    riemann: Vec<f64>,
    drift: LengthDrift,
}

#[derive(Serialize)]
struct NegativeControl {
    label: String,
    point: Vec<f64>,
    riemann: f64,
}

#[derive(Serialize)]
struct Results {
    label: String,
    runs: Vec<SpinorRun>,
    lorentz: LorentzReport,
    lorentz_relative: f64,
    negative_control: Option<NegativeControl>,
}

fn direction(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.1 && norm <= 1.0 {
            return v.iter().map(|a| a / norm).collect();
        }
    }
}

pub fn run(cfg: &RigidityConfig, seed: u64) -> Result<CommandOutput> {
    let d = data(&cfg.data)?;
    let n = d.dim();
    let rep = CliffordRep::new(n)?;
    let mut r = rng(seed, 4);
    let mut table = Table::new(
        "killing_samples.csv",
        &["spinor", "x1", "x2", "x3", "tensor", "covector", "parallel", "symmetry"],
    );
    let mut runs = Vec::new();
    for s in 0..cfg.spinors {
        let psi = Spinor::from_fn(rep.dim(), |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
        let ls = lapse_shift_from_spinor(&rep, Arc::new(ConstantSpinor { psi: psi.clone() }), &d);
        let points: Vec<Vec<f64>> = (0..cfg.sample_points)
            .map(|_| {
                let rad = r.gen_range(cfg.r_min..cfg.r_max);
                direction(&mut r, n).iter().map(|a| a * rad).collect()
            })
            .collect();
        let mut violations = 0;
        for x in &points {
            let v = ls.eval(x)?;
            if v.u * (1.0 + 1e-12) < shift_norm_sq(&d.g(x)?, &v.y).sqrt() {
                violations += 1;
            }
        }
        let killing = killing_conditions_residual(&d, &ls, &points)?;
        for p in &killing.samples {
            table.push(vec![s as f64, p.x[0], p.x[1], p.x[2.min(n - 1)], p.tensor, p.covector, p.parallel, p.symmetry]);
        }
        let dm = killing_development(&d, &ls)?;
        let riemann = points
            .iter()
            .take(cfg.riemann_points)
            .map(|x| riemann_norm(&dm, &std::iter::once(0.0).chain(x.iter().copied()).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let curve = radial_curve(&direction(&mut r, n), cfg.r_min, cfg.r_max, cfg.curve_samples);
        let drift = lorentz_length_drift(&d, &ls, &curve)?;
        runs.push(SpinorRun {
            psi: psi.iter().map(|z| [z.re, z.im]).collect(),
            lapse_shift_violations: violations,
            killing,
            riemann,
            drift,
        });
    }

    let cd = creased(&cfg.crease)?;
    let crep = CliffordRep::new(cd.dim())?;
    let plus: Arc<dyn SpinorField> = Arc::new(PolynomialSpinor::random(&mut r, cd.dim(), crep.dim(), 2, 0.3));
    let minus = TransmittedField::new(&crep, plus.clone(), cd.f);
    let lorentz = crease_lorentz_check(&cd, &crep, &minus, plus.as_ref(), cfg.lorentz_order)?;
    let lorentz_relative = lorentz.max_residual() / lorentz.scale.max(1.0);

    let mut checks = vec![
        Check::le("lapse_shift_violations", runs.iter().map(|s| s.lapse_shift_violations).sum::<usize>() as f64, 0.0),
        Check::le("killing_tensor", max(runs.iter().map(|s| s.killing.tensor)), cfg.killing_tol),
        Check::le("killing_covector", max(runs.iter().map(|s| s.killing.covector)), cfg.killing_tol),
        Check::le("parallel_shift", max(runs.iter().map(|s| s.killing.parallel)), cfg.parallel_tol),
        Check::le("shift_symmetry", max(runs.iter().map(|s| s.killing.symmetry)), cfg.parallel_tol),
        Check::le("riemann", max(runs.iter().flat_map(|s| s.riemann.iter().copied())), cfg.riemann_tol),
        Check::le("lorentz_length_drift", max(runs.iter().map(|s| s.drift.drift)), cfg.drift_tol),
        Check::le("lorentz_relations", lorentz_relative, cfg.lorentz_tol),
        Check::le("lorentz_causal", lorentz.causal / lorentz.scale.max(1.0).powi(2), cfg.lorentz_tol),
    ];

    let negative_control = match &cfg.negative_control {
        None => None,
        Some(spec) => {
            let nd = data(spec)?;
            let dm = killing_development(&nd, &LapseShift::constant(1.0, vec![0.0; nd.dim()]))?;
            let mut point = vec![0.0; nd.dim() + 1];
            point[1] = cfg.negative_control_radius;
            let riemann = riemann_norm(&dm, &point)?;
            checks.push(Check::le("negative_control_riemann", riemann, cfg.riemann_tol).expect_failure());
            Some(NegativeControl { label: nd.label.clone(), point, riemann })
        }
    };

    let results = Results { label: d.label.clone(), runs, lorentz, lorentz_relative, negative_control };
    Ok(CommandOutput { results: to_json_value(&results)?, checks, tables: vec![table] })
}
