use std::fmt;
use std::sync::Arc;

use clifford_core::{Error, Result};
use serde::Serialize;

use crate::linalg::{norm, Mat};
use crate::models::RadialProfile;

/// Chart of a data set, in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    All,
    Ball { r0: f64 },
    /// `r >= r0`, and `r > 0` always.
    Exterior { r0: f64 },
    Annulus { r_in: f64, r_out: f64 },
}

/// Relative slack on chart radii, so points built as `r0 * omega` stay on the sphere.
const RADIUS_SLACK: f64 = 1e-12;

impl Domain {
    pub fn contains_radius(&self, r: f64) -> bool {
        let up = 1.0 + RADIUS_SLACK;
        let down = 1.0 - RADIUS_SLACK;
        match *self {
            Domain::All => true,
            Domain::Ball { r0 } => r <= r0 * up,
            Domain::Exterior { r0 } => r >= r0 * down && r > 0.0,
            Domain::Annulus { r_in, r_out } => r >= r_in * down && r <= r_out * up,
        }
    }

    /// True when the closed ball of radius `margin` about a point at radius `r` stays in the chart.
    pub fn contains_with_margin(&self, r: f64, margin: f64) -> bool {
        match *self {
            Domain::All => true,
            Domain::Ball { r0 } => r + margin <= r0,
            Domain::Exterior { r0 } => r - margin >= r0 && r - margin > 0.0,
            Domain::Annulus { r_in, r_out } => r - margin >= r_in && r + margin <= r_out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    CompactInterior,
    AsymptoticallyFlatExterior,
}

/// `g`, `k` and their first partials at one point; `dg[l] = d_l g`.
#[derive(Debug, Clone)]
pub struct PointFields {
    pub g: Mat,
    pub k: Mat,
    pub dg: Vec<Mat>,
    pub dk: Vec<Mat>,
}

/// Pure field evaluator.
pub trait TensorFields: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> PointFields;
    /// Radial profile when the fields are spherically symmetric about the origin.
    fn radial_profile(&self) -> Option<Arc<dyn RadialProfile>> {
        None
    }
}

/// Metric and extrinsic curvature on a chart.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub label: String,
    pub domain: Domain,
    pub kind: DataKind,
    /// Asserted decay order, exterior data only.
    pub q: Option<f64>,
    fields: Arc<dyn TensorFields>,
}

impl InitialData {
    pub fn new(
        label: impl Into<String>,
        domain: Domain,
        kind: DataKind,
        q: Option<f64>,
        fields: Arc<dyn TensorFields>,
    ) -> Self {
        Self { label: label.into(), domain, kind, q, fields }
    }

    pub fn dim(&self) -> usize {
        self.fields.dim()
    }

    pub fn fields(&self) -> &Arc<dyn TensorFields> {
        &self.fields
    }

    pub fn radial_profile(&self) -> Option<Arc<dyn RadialProfile>> {
        self.fields.radial_profile()
    }

    /// Same fields on a different chart.
    pub fn restricted(&self, label: impl Into<String>, domain: Domain, kind: DataKind) -> Self {
        let q = match kind {
            DataKind::AsymptoticallyFlatExterior => self.q,
            DataKind::CompactInterior => None,
        };
        Self { label: label.into(), domain, kind, q, fields: self.fields.clone() }
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Argument(format!(
                "point has {} coordinates, data has dimension {}",
                x.len(),
                self.dim()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("non-finite coordinate".into()));
        }
        let r = norm(x);
        if !self.domain.contains_radius(r) {
            return Err(Error::Domain(format!("radius {r} outside chart {:?}", self.domain)));
        }
        Ok(())
    }

    /// Fields at `x`, without a chart check.
    pub fn eval_unchecked(&self, x: &[f64]) -> PointFields {
        self.fields.eval(x)
    }

    pub fn eval(&self, x: &[f64]) -> Result<PointFields> {
        self.check_point(x)?;
        Ok(self.fields.eval(x))
    }

    pub fn g(&self, x: &[f64]) -> Result<Mat> {
        Ok(self.eval(x)?.g)
    }

    pub fn k(&self, x: &[f64]) -> Result<Mat> {
        Ok(self.eval(x)?.k)
    }

    pub fn dg(&self, x: &[f64]) -> Result<Vec<Mat>> {
        Ok(self.eval(x)?.dg)
    }

    pub fn dk(&self, x: &[f64]) -> Result<Vec<Mat>> {
        Ok(self.eval(x)?.dk)
    }

    /// Rigidly rotated copy, `g'(x) = R g(R^T x) R^T`.
    pub fn rotated(&self, rotation: Mat) -> Result<Self> {
        let n = self.dim();
        if rotation.nrows() != n || rotation.ncols() != n {
            return Err(Error::Argument("rotation has wrong shape".into()));
        }
        let defect = (&rotation * rotation.transpose() - Mat::identity(n, n)).amax();
        if defect > 1e-12 {
            return Err(Error::Argument(format!("rotation is not orthogonal (defect {defect:e})")));
        }
        let fields = Arc::new(RotatedFields { inner: self.fields.clone(), rot: rotation });
        Ok(Self {
            label: format!("{}+rotated", self.label),
            domain: self.domain,
            kind: self.kind,
            q: self.q,
            fields,
        })
    }
}

#[derive(Debug)]
struct RotatedFields {
    inner: Arc<dyn TensorFields>,
    rot: Mat,
}

impl TensorFields for RotatedFields {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[f64]) -> PointFields {
        let n = self.dim();
        let xv = nalgebra::DVector::from_column_slice(x);
        let y = self.rot.transpose() * xv;
        let inner = self.inner.eval(y.as_slice());
        let r = &self.rot;
        let conj = |m: &Mat| r * m * r.transpose();
        let rotate_derivs = |d: &[Mat]| -> Vec<Mat> {
            (0..n)
                .map(|l| {
                    let mut acc = Mat::zeros(n, n);
                    for (c, dc) in d.iter().enumerate() {
                        acc += dc * r[(l, c)];
                    }
                    conj(&acc)
                })
                .collect()
        };
        PointFields {
            g: conj(&inner.g),
            k: conj(&inner.k),
            dg: rotate_derivs(&inner.dg),
            dk: rotate_derivs(&inner.dk),
        }
    }

    fn radial_profile(&self) -> Option<Arc<dyn RadialProfile>> {
        self.inner.radial_profile()
    }
}
