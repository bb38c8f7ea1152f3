//! Lapse-shift pairs.

use std::fmt;
use std::sync::Arc;

use clifford_core::{CliffordRep, Result};
use flux_integrals::SpinorField;
use geometry_catalog::{InitialData, PointGeometry};
use serde::Serialize;

/// Value of a lapse-shift pair at one point.
#[derive(Debug, Clone, Serialize)]
pub struct LapseShiftValue {
    pub u: f64,
    /// Coordinate components `Y^a`.
    pub y: Vec<f64>,
    /// Largest imaginary part met while forming `Y` from a spinor.
    pub imag: f64,
}

type Eval = dyn Fn(&[f64]) -> Result<LapseShiftValue> + Send + Sync;

/// A lapse `u` and shift `Y` on the chart of some data.
#[derive(Clone)]
pub struct LapseShift {
    pub label: String,
    eval: Arc<Eval>,
}

impl fmt::Debug for LapseShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LapseShift").field("label", &self.label).finish()
    }
}

impl LapseShift {
    pub fn new<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Result<LapseShiftValue> + Send + Sync + 'static,
    {
        Self { label: label.into(), eval: Arc::new(eval) }
    }

    /// Constant `u` and constant coordinate components of `Y`.
    pub fn constant(u: f64, y: Vec<f64>) -> Self {
        Self::new(format!("constant(u={u})"), move |_| Ok(LapseShiftValue { u, y: y.clone(), imag: 0.0 }))
    }

    /// `(u, Y + dy(x))`.
    pub fn with_shift_perturbation<F>(&self, dy: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        let base = self.clone();
        Self::new(format!("{}+perturbation", self.label), move |x| {
            let mut v = base.eval(x)?;
            for (a, d) in v.y.iter_mut().zip(dy(x)) {
                *a += d;
            }
            Ok(v)
        })
    }

    pub fn eval(&self, x: &[f64]) -> Result<LapseShiftValue> {
        (self.eval)(x)
    }
}

/// `u = |psi|^2` and `<Y, e_j> = <tau e_j psi, psi>` in the orthonormal frame of `data`.
pub fn lapse_shift_from_spinor(rep: &CliffordRep, psi: Arc<dyn SpinorField>, data: &InitialData) -> LapseShift {
    let rep = rep.clone();
    let data = data.clone();
    let label = format!("spinor on {}", data.label);
    LapseShift::new(label, move |x| {
        let pg = PointGeometry::new(&data, x)?;
        let p = psi.value(x);
        let n = x.len();
        let mut imag = 0.0f64;
        let yf: Vec<f64> = (0..n)
            .map(|j| {
                let z = (rep.tau() * rep.gamma(j) * &p).dotc(&p);
                imag = imag.max(z.im.abs());
                z.re
            })
            .collect();
        Ok(LapseShiftValue { u: p.norm_squared(), y: pg.vector_from_frame(&yf), imag })
    })
}

/// `|Y|_g^2` at a point with metric `g`.
pub fn shift_norm_sq(g: &geometry_catalog::Mat, y: &[f64]) -> f64 {
    let n = y.len();
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            s += g[(a, b)] * y[a] * y[b];
        }
    }
    s
}
