use clifford_core::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::data::InitialData;
use crate::frame::PointGeometry;
use crate::linalg::norm;
use crate::quadrature::SphereRule;
use crate::surface::{normal_field, tangent_frame, Orientation};

/// Hyperbolic angle on the crease sphere, `f = c0 + c1 * xhat_n` (`xhat_n = cos theta` for `n = 3`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleFunction {
    pub c0: f64,
    pub c1: f64,
}

impl AngleFunction {
    pub fn zero() -> Self {
        Self { c0: 0.0, c1: 0.0 }
    }

    pub fn constant(c0: f64) -> Self {
        Self { c0, c1: 0.0 }
    }

    pub fn cos_theta(c0: f64, c1: f64) -> Self {
        Self { c0, c1 }
    }

    pub fn is_constant(&self) -> bool {
        self.c1 == 0.0
    }

    pub fn value(&self, xhat: &[f64]) -> f64 {
        self.c0 + self.c1 * xhat[xhat.len() - 1]
    }

    /// Exact `df(t)` for a Euclidean tangent vector `t` of the sphere of radius `r0`.
    pub fn differential(&self, r0: f64, t: &[f64]) -> f64 {
        self.c1 * t[t.len() - 1] / r0
    }

    pub fn plus(&self, other: &AngleFunction) -> Self {
        Self { c0: self.c0 + other.c0, c1: self.c1 + other.c1 }
    }
}

/// Two data sets glued along `{|x| = r0}` with a hyperbolic angle `f`.
///
/// Both unit normals point towards increasing `r`: out of the interior and into the exterior.
#[derive(Debug, Clone)]
pub struct CreasedData {
    pub label: String,
    pub minus: InitialData,
    pub plus: InitialData,
    pub r0: f64,
    pub f: AngleFunction,
}

/// Tolerance for the induced-metric and frame matching across the crease.
pub const CREASE_MATCH_TOL: f64 = 1e-10;

/// Order of the sphere rule used to validate a crease.
pub const CREASE_CHECK_ORDER: usize = 8;

impl CreasedData {
    pub fn new(
        label: impl Into<String>,
        minus: InitialData,
        plus: InitialData,
        r0: f64,
        f: AngleFunction,
    ) -> Result<Self> {
        if minus.dim() != plus.dim() {
            return Err(Error::Argument("sides have different dimensions".into()));
        }
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::Argument(format!("crease radius must be positive, got {r0}")));
        }
        if !f.c0.is_finite() || !f.c1.is_finite() {
            return Err(Error::Argument("non-finite hyperbolic angle".into()));
        }
        let cd = Self { label: label.into(), minus, plus, r0, f };
        let defect = cd.matching_defect(CREASE_CHECK_ORDER)?;
        if defect > CREASE_MATCH_TOL {
            return Err(Error::InvalidData(format!(
                "sides do not induce the same sphere geometry (defect {defect:e})"
            )));
        }
        Ok(cd)
    }

    pub fn dim(&self) -> usize {
        self.minus.dim()
    }

    /// Largest mismatch at the nodes of a sphere rule between the two sides, covering the
    /// induced metric and the identification of the orthonormal frames.
    ///
    /// The frames match when each `e_i` splits into the same tangential part on both sides
    /// and the same multiple of the respective unit normal; the identification of normal
    /// bundles is then the identity in frame components.
    pub fn matching_defect(&self, order: usize) -> Result<f64> {
        let n = self.dim();
        let rule = SphereRule::new(n, order)?;
        let mut worst = 0.0f64;
        for p in &rule.points {
            let x: Vec<f64> = p.iter().map(|v| self.r0 * v).collect();
            let gm = PointGeometry::new(&self.minus, &x)?;
            let gp = PointGeometry::new(&self.plus, &x)?;
            let tangents = tangent_frame(p);
            for a in &tangents {
                for b in &tangents {
                    worst = worst.max((gm.g_dot(a, b) - gp.g_dot(a, b)).abs());
                }
            }
            let nm = normal_field(&gm, Orientation::Outward)?;
            let np = normal_field(&gp, Orientation::Outward)?;
            for i in 0..n {
                let em: Vec<f64> = (0..n).map(|j| gm.frame[(i, j)]).collect();
                let ep: Vec<f64> = (0..n).map(|j| gp.frame[(i, j)]).collect();
                let cm = gm.g_dot(&em, &nm.nu);
                let cp = gp.g_dot(&ep, &np.nu);
                worst = worst.max((cm - cp).abs());
                for j in 0..n {
                    let tm = em[j] - cm * nm.nu[j];
                    let tp = ep[j] - cp * np.nu[j];
                    worst = worst.max((tm - tp).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Same bulks with the hyperbolic angle increased by `extra`.
    pub fn with_extra_angle(&self, extra: AngleFunction) -> Self {
        Self {
            label: format!("{}+rotated", self.label),
            minus: self.minus.clone(),
            plus: self.plus.clone(),
            r0: self.r0,
            f: self.f.plus(&extra),
        }
    }

    /// Angle at the crease point in direction `omega`.
    pub fn angle_at(&self, omega: &[f64]) -> f64 {
        let w = norm(omega);
        let xhat: Vec<f64> = omega.iter().map(|v| v / w).collect();
        self.f.value(&xhat)
    }

    /// True when both sides carry a radial profile and `f` is constant.
    pub fn is_spherically_symmetric(&self) -> bool {
        self.minus.radial_profile().is_some() && self.plus.radial_profile().is_some() && self.f.is_constant()
    }
}
