//! TOML run configuration. Unknown keys are rejected; every section has defaults.

use std::path::Path;

use clifford_core::{Error, Result};
use geometry_catalog::CatalogSpec;
use serde::{Deserialize, Serialize};
use transmission_solver::{GapOptions, SolverKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CreaseCheck,
    Adm,
    Identities,
    Solve,
    Rigidity,
}

impl Command {
    pub const ALL: [Command; 5] =
        [Command::CreaseCheck, Command::Adm, Command::Identities, Command::Solve, Command::Rigidity];

    pub fn name(self) -> &'static str {
        match self {
            Command::CreaseCheck => "crease-check",
            Command::Adm => "adm",
            Command::Identities => "identities",
            Command::Solve => "solve",
            Command::Rigidity => "rigidity",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command '{s}'")))
    }
}

fn spec(name: &str) -> CatalogSpec {
    CatalogSpec::new(name)
}

fn miao() -> CatalogSpec {
    spec("miao_corner").with("m", 1.0).with("rho0", 4.0)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must match the command line when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crease_check: Option<CreaseCheckConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adm: Option<AdmConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitiesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rigidity: Option<RigidityConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CreaseCheckConfig {
    pub data: CatalogSpec,
    /// Gauss-Legendre order of the crease-sphere grid.
    pub order: usize,
    /// Accepted negative margin.
    pub tol: f64,
    /// Random `(nu, tau, |beta|)` triples compared between the two forms of the condition.
    pub random_triples: usize,
    pub expected_margin: Option<f64>,
    pub margin_tol: f64,
}

impl Default for CreaseCheckConfig {
    fn default() -> Self {
        Self { data: miao(), order: 12, tol: 1e-9, random_triples: 1000, expected_margin: None, margin_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WittenConfig {
    pub radii: Vec<f64>,
    pub order: usize,
    /// Accepted `|E_flux - E_adm| / max(|E_adm|, abs_floor)`.
    pub tol: f64,
    pub abs_floor: f64,
}

impl Default for WittenConfig {
    fn default() -> Self {
        Self { radii: vec![50.0, 100.0, 200.0, 400.0], order: 12, tol: 0.02, abs_floor: 1e-10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdmExpectation {
    pub energy: f64,
    pub energy_tol: f64,
    pub momentum_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdmConfig {
    pub data: CatalogSpec,
    pub radii: Vec<f64>,
    pub order: usize,
    pub witten: Option<WittenConfig>,
    pub expect: Option<AdmExpectation>,
}

impl Default for AdmConfig {
    fn default() -> Self {
        Self {
            data: spec("schwarzschild_isotropic").with("m", 1.0),
            radii: vec![50.0, 100.0, 200.0],
            order: 24,
            witten: Some(WittenConfig::default()),
            expect: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CliffordConfig {
    pub dims: Vec<usize>,
    pub angles: Vec<f64>,
    pub tol: f64,
}

impl Default for CliffordConfig {
    fn default() -> Self {
        Self { dims: vec![3, 4], angles: vec![0.0, 0.3, -0.3, 2f64.ln(), 1.7], tol: 1e-13 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LswConfig {
    pub data: Vec<CatalogSpec>,
    /// Random polynomial spinors per datum.
    pub spinors: usize,
    pub degree: u32,
    pub scale: f64,
    pub r_in: f64,
    pub r_out: f64,
    pub radial_order: usize,
    pub sphere_order: usize,
    /// Accepted `|bulk - boundary| / (|bulk| + 1)`.
    pub tol: f64,
}

impl Default for LswConfig {
    fn default() -> Self {
        Self {
            data: vec![spec("schwarzschild_isotropic").with("m", 1.0), spec("graph_slice")],
            spinors: 10,
            degree: 2,
            scale: 0.3,
            r_in: 3.0,
            r_out: 6.0,
            radial_order: 12,
            sphere_order: 12,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CreaseIdentityConfig {
    pub data: Vec<CatalogSpec>,
    pub pairs: usize,
    pub degree: u32,
    pub scale: f64,
    pub order: usize,
    /// Accepted `|direct - formula| / |formula|`.
    pub tol: f64,
}

impl Default for CreaseIdentityConfig {
    fn default() -> Self {
        Self {
            data: vec![miao(), spec("rotated_crease").with("f1", 0.2).with_base(miao())],
            pairs: 10,
            degree: 2,
            scale: 0.5,
            order: 16,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentitiesConfig {
    pub clifford: CliffordConfig,
    pub lsw: LswConfig,
    pub crease: CreaseIdentityConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveExpectation {
    /// Accepted `|gap|`.
    pub gap_abs: Option<f64>,
    /// Accepted `max |psi - psi_inf|`.
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub r_max: Vec<f64>,
    pub intervals: usize,
    /// Accepted `|p - 1|` for the fitted decay exponent of the gap.
    pub exponent_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveConfig {
    pub data: CatalogSpec,
    /// Angular mode; only 0 is supported.
    pub mode: usize,
    /// Asymptotic spinor as `[re, im]` pairs.
    pub psi_inf: Option<Vec<[f64; 2]>>,
    pub intervals: usize,
    pub r_max: f64,
    pub solver: SolverKind,
    pub gap: GapOptions,
    pub adm_radii: Vec<f64>,
    pub adm_order: usize,
    pub poincare: bool,
    /// Intervals of the coarser grid used to judge Poincare stability.
    pub poincare_coarse_intervals: usize,
    /// Accepted relative change of the Poincare eigenvalue between the two grids.
    pub poincare_stability_tol: f64,
    pub truncation: Option<TruncationConfig>,
    pub expect: Option<SolveExpectation>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            data: miao(),
            mode: 0,
            psi_inf: None,
            intervals: 2048,
            r_max: 400.0,
            solver: SolverKind::Qr,
            gap: GapOptions::default(),
            adm_radii: vec![100.0, 200.0, 400.0],
            adm_order: 8,
            poincare: true,
            poincare_coarse_intervals: 1024,
            poincare_stability_tol: 0.2,
            truncation: None,
            expect: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RigidityConfig {
    /// Flat datum carrying the constant-spinor pipeline.
    pub data: CatalogSpec,
    pub spinors: usize,
    pub sample_points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub killing_tol: f64,
    pub parallel_tol: f64,
    pub riemann_points: usize,
    pub riemann_tol: f64,
    pub curve_samples: usize,
    pub drift_tol: f64,
    /// Crease for the Lorentz relations.
    pub crease: CatalogSpec,
    pub lorentz_order: usize,
    pub lorentz_tol: f64,
    /// Static development expected to be curved; `None` skips the control.
    pub negative_control: Option<CatalogSpec>,
    pub negative_control_radius: f64,
}

impl Default for RigidityConfig {
    fn default() -> Self {
        Self {
            data: spec("minkowski_slice"),
            spinors: 3,
            sample_points: 20,
            r_min: 1.0,
            r_max: 10.0,
            killing_tol: 1e-9,
            parallel_tol: 1e-8,
            riemann_points: 5,
            riemann_tol: 1e-6,
            curve_samples: 200,
            drift_tol: 1e-8,
            crease: spec("rotated_crease")
                .with("f0", 2f64.ln())
                .with_base(spec("trivial_crease").with("r0", 2.0)),
            lorentz_order: 8,
            lorentz_tol: 1e-10,
            negative_control: Some(spec("schwarzschild_isotropic").with("m", 1.0)),
            negative_control_radius: 3.0,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("'{name}' must be positive and finite, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> Result<()> {
    if v >= min {
        Ok(())
    } else {
        Err(Error::Config(format!("'{name}' must be at least {min}, got {v}")))
    }
}

fn radii(name: &str, r: &[f64], min_len: usize) -> Result<()> {
    if r.len() < min_len || r[0] <= 0.0 || r.windows(2).any(|w| !(w[1] > w[0])) || r.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config(format!("'{name}' needs at least {min_len} positive increasing radii, got {r:?}")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config '{}': {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fill the section of `cmd` with defaults where absent, drop the other sections and validate.
    pub fn resolve(mut self, cmd: Command) -> Result<Self> {
        if let Some(c) = &self.command {
            if c != cmd.name() {
                return Err(Error::Config(format!("config is for '{c}', command line asks for '{}'", cmd.name())));
            }
        }
        self.command = Some(cmd.name().to_string());
        let mut out = RunConfig { command: self.command.clone(), seed: self.seed, out_dir: self.out_dir.clone(), ..Default::default() };
        match cmd {
            Command::CreaseCheck => {
                let c = self.crease_check.take().unwrap_or_default();
                at_least("crease_check.order", c.order, 2)?;
                positive("crease_check.tol", c.tol)?;
                positive("crease_check.margin_tol", c.margin_tol)?;
                out.crease_check = Some(c);
            }
            Command::Adm => {
                let c = self.adm.take().unwrap_or_default();
                radii("adm.radii", &c.radii, 3)?;
                at_least("adm.order", c.order, 2)?;
                if let Some(w) = &c.witten {
                    radii("adm.witten.radii", &w.radii, 3)?;
                    at_least("adm.witten.order", w.order, 2)?;
                    positive("adm.witten.tol", w.tol)?;
                    positive("adm.witten.abs_floor", w.abs_floor)?;
                }
                if let Some(e) = &c.expect {
                    positive("adm.expect.energy_tol", e.energy_tol)?;
                    positive("adm.expect.momentum_tol", e.momentum_tol)?;
                }
                out.adm = Some(c);
            }
            Command::Identities => {
                let c = self.identities.take().unwrap_or_default();
                if c.clifford.dims.iter().any(|n| !(2..=8).contains(n)) {
                    return Err(Error::Config("identities.clifford.dims must lie in 2..=8".into()));
                }
                positive("identities.clifford.tol", c.clifford.tol)?;
                positive("identities.lsw.tol", c.lsw.tol)?;
                positive("identities.lsw.scale", c.lsw.scale)?;
                positive("identities.lsw.r_in", c.lsw.r_in)?;
                radii("identities.lsw annulus", &[c.lsw.r_in, c.lsw.r_out], 2)?;
                at_least("identities.lsw.radial_order", c.lsw.radial_order, 2)?;
                at_least("identities.lsw.sphere_order", c.lsw.sphere_order, 2)?;
                positive("identities.crease.tol", c.crease.tol)?;
                positive("identities.crease.scale", c.crease.scale)?;
                at_least("identities.crease.order", c.crease.order, 2)?;
                out.identities = Some(c);
            }
            Command::Solve => {
                let c = self.solve.take().unwrap_or_default();
                at_least("solve.intervals", c.intervals, transmission_solver::grid::MIN_INTERVALS)?;
                positive("solve.r_max", c.r_max)?;
                radii("solve.adm_radii", &c.adm_radii, 3)?;
                at_least("solve.adm_order", c.adm_order, 2)?;
                positive("solve.gap.gap_tol", c.gap.gap_tol)?;
                positive("solve.gap.condition_tol", c.gap.condition_tol)?;
                at_least("solve.gap.radial_points", c.gap.radial_points, 1)?;
                at_least("solve.gap.sphere_order", c.gap.sphere_order, 2)?;
                if c.poincare {
                    at_least("solve.poincare_coarse_intervals", c.poincare_coarse_intervals, transmission_solver::grid::MIN_INTERVALS)?;
                    positive("solve.poincare_stability_tol", c.poincare_stability_tol)?;
                }
                if let SolverKind::Cgls { tol, max_iter } = c.solver {
                    positive("solve.solver.tol", tol)?;
                    at_least("solve.solver.max_iter", max_iter, 1)?;
                }
                if let Some(t) = &c.truncation {
                    radii("solve.truncation.r_max", &t.r_max, 3)?;
                    at_least("solve.truncation.intervals", t.intervals, transmission_solver::grid::MIN_INTERVALS)?;
                    positive("solve.truncation.exponent_tol", t.exponent_tol)?;
                }
                if let Some(p) = &c.psi_inf {
                    if p.iter().flatten().any(|v| !v.is_finite()) {
                        return Err(Error::Config("solve.psi_inf has non-finite entries".into()));
                    }
                }
                out.solve = Some(c);
            }
            Command::Rigidity => {
                let c = self.rigidity.take().unwrap_or_default();
                at_least("rigidity.spinors", c.spinors, 1)?;
                at_least("rigidity.sample_points", c.sample_points, 1)?;
                at_least("rigidity.riemann_points", c.riemann_points, 1)?;
                at_least("rigidity.curve_samples", c.curve_samples, 2)?;
                at_least("rigidity.lorentz_order", c.lorentz_order, 2)?;
                radii("rigidity radial range", &[c.r_min, c.r_max], 2)?;
                for (k, v) in [
                    ("killing_tol", c.killing_tol),
                    ("parallel_tol", c.parallel_tol),
                    ("riemann_tol", c.riemann_tol),
                    ("drift_tol", c.drift_tol),
                    ("lorentz_tol", c.lorentz_tol),
                    ("negative_control_radius", c.negative_control_radius),
                ] {
                    positive(&format!("rigidity.{k}"), v)?;
                }
                out.rigidity = Some(c);
            }
        }
        let extra = [
            ("crease_check", self.crease_check.is_some()),
            ("adm", self.adm.is_some()),
            ("identities", self.identities.is_some()),
            ("solve", self.solve.is_some()),
            ("rigidity", self.rigidity.is_some()),
        ];
        if let Some((name, _)) = extra.iter().find(|(_, present)| *present) {
            return Err(Error::Config(format!("section [{name}] does not belong to command '{}'", cmd.name())));
        }
        Ok(out)
    }
}
