use std::collections::BTreeMap;
use std::sync::Arc;

use clifford_core::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::crease::{AngleFunction, CreasedData};
use crate::data::{DataKind, Domain, InitialData};
use crate::linalg::Mat;
use crate::models::{
    ConformalBump, Flat, GraphSlice, RadialProfile, SchwarzschildAreaRadius, SchwarzschildIsotropic,
    SphericalFields,
};
use crate::quadrature::SphereRule;

pub const DEFAULT_GRAPH_AMPLITUDE: f64 = 0.5;
pub const DEFAULT_GRAPH_WIDTH: f64 = 4.0;
pub const DEFAULT_BUMP_AMPLITUDE: f64 = 0.5;
pub const DEFAULT_BUMP_WIDTH: f64 = 2.0;

/// Named catalog entry with numeric parameters, as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogSpec {
    pub name: String,
    #[serde(default = "default_dim")]
    pub n: usize,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub base: Option<Box<CatalogSpec>>,
}

fn default_dim() -> usize {
    3
}

impl CatalogSpec {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), n: 3, params: BTreeMap::new(), base: None }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_base(mut self, base: CatalogSpec) -> Self {
        self.base = Some(Box::new(base));
        self
    }

    pub fn with_dim(mut self, n: usize) -> Self {
        self.n = n;
        self
    }
}

#[derive(Debug, Clone)]
pub enum CatalogEntry {
    Data(InitialData),
    Creased(CreasedData),
}

impl CatalogEntry {
    pub fn into_data(self) -> Result<InitialData> {
        match self {
            CatalogEntry::Data(d) => Ok(d),
            CatalogEntry::Creased(c) => {
                Err(Error::Argument(format!("catalog entry '{}' is a creased datum", c.label)))
            }
        }
    }

    pub fn into_creased(self) -> Result<CreasedData> {
        match self {
            CatalogEntry::Creased(c) => Ok(c),
            CatalogEntry::Data(d) => {
                Err(Error::Argument(format!("catalog entry '{}' is not a creased datum", d.label)))
            }
        }
    }
}

pub const CATALOG_NAMES: &[&str] = &[
    "minkowski_slice",
    "schwarzschild_isotropic",
    "schwarzschild_exterior_area_radius",
    "miao_corner",
    "graph_slice",
    "conformal_bump",
    "trivial_crease",
    "rotated_crease",
];

struct Params<'a> {
    name: &'a str,
    map: &'a BTreeMap<String, f64>,
}

impl Params<'_> {
    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for k in self.map.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::Config(format!(
                    "unknown parameter '{k}' for '{}' (allowed: {allowed:?})",
                    self.name
                )));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.map.get(key).copied().unwrap_or(default);
        if !v.is_finite() {
            return Err(Error::Config(format!("parameter '{key}' of '{}' is not finite", self.name)));
        }
        Ok(v)
    }
}

/// Build a catalog entry by name.
pub fn catalog(spec: &CatalogSpec) -> Result<CatalogEntry> {
    let n = spec.n;
    if !(3..=6).contains(&n) {
        return Err(Error::Config(format!("dimension n = {n} outside 3..=6")));
    }
    let p = Params { name: &spec.name, map: &spec.params };
    let needs_no_base = |spec: &CatalogSpec| -> Result<()> {
        if spec.base.is_some() {
            return Err(Error::Config(format!("'{}' takes no base entry", spec.name)));
        }
        Ok(())
    };
    let entry = match spec.name.as_str() {
        "minkowski_slice" => {
            p.check_keys(&[])?;
            needs_no_base(spec)?;
            CatalogEntry::Data(minkowski_slice(n))
        }
        "schwarzschild_isotropic" => {
            p.check_keys(&["m"])?;
            needs_no_base(spec)?;
            CatalogEntry::Data(schwarzschild_isotropic(n, p.get("m", 1.0)?)?)
        }
        "schwarzschild_exterior_area_radius" => {
            p.check_keys(&["m"])?;
            needs_no_base(spec)?;
            CatalogEntry::Data(schwarzschild_area_radius(n, p.get("m", 1.0)?)?)
        }
        "graph_slice" => {
            p.check_keys(&["a", "w"])?;
            needs_no_base(spec)?;
            CatalogEntry::Data(graph_slice(
                n,
                p.get("a", DEFAULT_GRAPH_AMPLITUDE)?,
                p.get("w", DEFAULT_GRAPH_WIDTH)?,
            )?)
        }
        "conformal_bump" => {
            p.check_keys(&["a", "w"])?;
            needs_no_base(spec)?;
            CatalogEntry::Data(conformal_bump(
                n,
                p.get("a", DEFAULT_BUMP_AMPLITUDE)?,
                p.get("w", DEFAULT_BUMP_WIDTH)?,
            )?)
        }
        "miao_corner" => {
            p.check_keys(&["m", "rho0"])?;
            needs_no_base(spec)?;
            CatalogEntry::Creased(miao_corner(n, p.get("m", 1.0)?, p.get("rho0", 4.0)?)?)
        }
        "trivial_crease" => {
            p.check_keys(&["r0"])?;
            let base = match &spec.base {
                Some(b) => catalog(&inherit_dim(b, n))?.into_data()?,
                None => minkowski_slice(n),
            };
            CatalogEntry::Creased(trivial_crease(&base, p.get("r0", 4.0)?)?)
        }
        "rotated_crease" => {
            p.check_keys(&["f0", "f1"])?;
            let base = match &spec.base {
                Some(b) => catalog(&inherit_dim(b, n))?.into_creased()?,
                None => miao_corner(n, 1.0, 4.0)?,
            };
            let f = AngleFunction::cos_theta(p.get("f0", 0.0)?, p.get("f1", 0.0)?);
            CatalogEntry::Creased(rotated_crease(&base, f))
        }
        other => {
            return Err(Error::Config(format!("unknown catalog name '{other}' (known: {CATALOG_NAMES:?})")))
        }
    };
    match &entry {
        CatalogEntry::Data(d) => validate_positive(d)?,
        CatalogEntry::Creased(c) => {
            validate_positive(&c.minus)?;
            validate_positive(&c.plus)?;
        }
    }
    Ok(entry)
}

fn inherit_dim(base: &CatalogSpec, n: usize) -> CatalogSpec {
    let mut b = base.clone();
    b.n = n;
    b
}

/// Samples `g` on a few spheres inside the chart and checks positive definiteness.
fn validate_positive(data: &InitialData) -> Result<()> {
    let radii: Vec<f64> = match data.domain {
        Domain::All => vec![0.0, 0.5, 1.0, 2.0, 5.0, 10.0],
        Domain::Ball { r0 } => vec![0.0, 0.25 * r0, 0.5 * r0, r0],
        Domain::Exterior { r0 } => {
            let b = r0.max(0.1);
            vec![1.01 * b, 1.5 * b, 3.0 * b, 10.0 * b, 100.0 * b]
        }
        Domain::Annulus { r_in, r_out } => vec![r_in, 0.5 * (r_in + r_out), r_out],
    };
    let rule = SphereRule::new(data.dim(), 3)?;
    for r in radii {
        let pts: Vec<Vec<f64>> = if r == 0.0 {
            vec![vec![0.0; data.dim()]]
        } else {
            rule.points.iter().map(|p| p.iter().map(|v| r * v).collect()).collect()
        };
        for x in pts {
            if !data.domain.contains_radius(crate::linalg::norm(&x)) {
                continue;
            }
            let g = data.eval_unchecked(&x).g;
            if g.iter().any(|v| !v.is_finite()) || g.clone().cholesky().is_none() {
                return Err(Error::InvalidData(format!(
                    "metric of '{}' is not positive definite at {x:?}",
                    data.label
                )));
            }
        }
    }
    Ok(())
}

fn spherical(
    label: String,
    domain: Domain,
    kind: DataKind,
    q: Option<f64>,
    profile: Arc<dyn RadialProfile>,
) -> InitialData {
    InitialData::new(label, domain, kind, q, Arc::new(SphericalFields::new(profile)))
}

fn af_order(n: usize) -> Option<f64> {
    Some((n - 2) as f64)
}

pub fn minkowski_slice(n: usize) -> InitialData {
    spherical(
        "minkowski_slice".into(),
        Domain::All,
        DataKind::AsymptoticallyFlatExterior,
        af_order(n),
        Arc::new(Flat { n }),
    )
}

pub fn schwarzschild_isotropic(n: usize, m: f64) -> Result<InitialData> {
    // For m < 0 the conformal factor vanishes at r^{n-2} = -m/2.
    let r_min = if m < 0.0 { (-m / 2.0).powf(1.0 / (n - 2) as f64) } else { 0.0 };
    Ok(spherical(
        format!("schwarzschild_isotropic(m={m})"),
        Domain::Exterior { r0: r_min },
        DataKind::AsymptoticallyFlatExterior,
        af_order(n),
        Arc::new(SchwarzschildIsotropic { n, m }),
    ))
}

/// Horizon radius `(2m)^{1/(n-2)}` of the area-radius chart, zero for `m <= 0`.
pub fn horizon_radius(n: usize, m: f64) -> f64 {
    if m > 0.0 {
        (2.0 * m).powf(1.0 / (n - 2) as f64)
    } else {
        0.0
    }
}

pub fn schwarzschild_area_radius(n: usize, m: f64) -> Result<InitialData> {
    Ok(spherical(
        format!("schwarzschild_exterior_area_radius(m={m})"),
        Domain::Exterior { r0: horizon_radius(n, m) },
        DataKind::AsymptoticallyFlatExterior,
        af_order(n),
        Arc::new(SchwarzschildAreaRadius { n, m }),
    ))
}

pub fn graph_slice(n: usize, a: f64, w: f64) -> Result<InitialData> {
    if !(w > 0.0) {
        return Err(Error::Config(format!("graph_slice width must be positive, got {w}")));
    }
    // max |h'| = sqrt(2/e) |a| / w must stay below 1 for a spacelike slice.
    let slope = (2.0f64 / std::f64::consts::E).sqrt() * a.abs() / w;
    if slope >= 1.0 {
        return Err(Error::InvalidData(format!("graph_slice is not spacelike (max slope {slope})")));
    }
    Ok(spherical(
        format!("graph_slice(a={a},w={w})"),
        Domain::All,
        DataKind::AsymptoticallyFlatExterior,
        af_order(n),
        Arc::new(GraphSlice { n, a, w }),
    ))
}

pub fn conformal_bump(n: usize, a: f64, w: f64) -> Result<InitialData> {
    if !(w > 0.0) || a <= -1.0 {
        return Err(Error::Config(format!("conformal_bump needs w > 0 and a > -1, got a={a}, w={w}")));
    }
    Ok(spherical(
        format!("conformal_bump(a={a},w={w})"),
        Domain::All,
        DataKind::AsymptoticallyFlatExterior,
        af_order(n),
        Arc::new(ConformalBump { n, a, w }),
    ))
}

/// Flat ball `r <= rho0` glued to the area-radius Schwarzschild exterior, `f = 0`.
pub fn miao_corner(n: usize, m: f64, rho0: f64) -> Result<CreasedData> {
    if !(rho0 > 0.0) {
        return Err(Error::Config(format!("miao_corner needs rho0 > 0, got {rho0}")));
    }
    let ratio = 2.0 * m / rho0.powi(n as i32 - 2);
    if ratio >= 1.0 {
        return Err(Error::Domain(format!(
            "horizon: 2m/rho0^(n-2) = {ratio} >= 1, the gluing sphere is not outside the horizon"
        )));
    }
    let minus = minkowski_slice(n).restricted(
        format!("flat_ball(r<={rho0})"),
        Domain::Ball { r0: rho0 },
        DataKind::CompactInterior,
    );
    let ext = schwarzschild_area_radius(n, m)?;
    let plus = ext.restricted(ext.label.clone(), Domain::Exterior { r0: rho0 }, DataKind::AsymptoticallyFlatExterior);
    CreasedData::new(format!("miao_corner(m={m},rho0={rho0})"), minus, plus, rho0, AngleFunction::zero())
}

/// The same data on both sides of `{|x| = r0}`, `f = 0`.
pub fn trivial_crease(base: &InitialData, r0: f64) -> Result<CreasedData> {
    if !base.domain.contains_radius(0.0) {
        return Err(Error::Argument(format!("'{}' does not cover the origin", base.label)));
    }
    let minus = base.restricted(format!("{}|ball", base.label), Domain::Ball { r0 }, DataKind::CompactInterior);
    let plus = base.restricted(
        format!("{}|exterior", base.label),
        Domain::Exterior { r0 },
        DataKind::AsymptoticallyFlatExterior,
    );
    CreasedData::new(format!("trivial_crease({},r0={r0})", base.label), minus, plus, r0, AngleFunction::zero())
}

/// Compose an extra hyperbolic angle onto a crease; neither bulk changes.
pub fn rotated_crease(base: &CreasedData, f: AngleFunction) -> CreasedData {
    base.with_extra_angle(f)
}

/// Rotation matrix in the `(i, j)` coordinate plane.
pub fn plane_rotation(n: usize, i: usize, j: usize, angle: f64) -> Mat {
    let mut r = Mat::identity(n, n);
    let (c, s) = (angle.cos(), angle.sin());
    r[(i, i)] = c;
    r[(j, j)] = c;
    r[(i, j)] = -s;
    r[(j, i)] = s;
    r
}

/// A vacuum model together with a radial shell safely inside its chart.
#[derive(Debug, Clone)]
pub struct VacuumSample {
    pub data: InitialData,
    pub r_min: f64,
    pub r_max: f64,
}

/// Every vacuum model of the catalog in dimension `n`, including both sides of `miao_corner(1, 4)`.
pub fn vacuum_models(n: usize) -> Result<Vec<VacuumSample>> {
    let miao = miao_corner(n, 1.0, 4.0)?;
    let shell = |data: InitialData, r_min: f64, r_max: f64| VacuumSample { data, r_min, r_max };
    Ok(vec![
        shell(minkowski_slice(n), 0.5, 10.0),
        shell(schwarzschild_isotropic(n, 1.0)?, 1.0, 10.0),
        shell(schwarzschild_area_radius(n, 1.0)?, 3.0, 20.0),
        shell(graph_slice(n, DEFAULT_GRAPH_AMPLITUDE, DEFAULT_GRAPH_WIDTH)?, 0.5, 10.0),
        shell(miao.minus, 0.5, 3.5),
        shell(miao.plus, 4.5, 20.0),
    ])
}
