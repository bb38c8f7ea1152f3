//! Killing developments of initial data and the lapse-shift pairs built from spinors.

pub mod development;
pub mod killing;
pub mod lapse;
pub mod lorentz;

pub use development::{killing_development, killing_development_creased, riemann_norm, riemann_step, DevelopmentMetric, ProbeSummary};
pub use killing::{killing_conditions_residual, lorentz_length_drift, radial_curve, KillingResidual, LengthDrift, PointResidual};
pub use lapse::{lapse_shift_from_spinor, shift_norm_sq, LapseShift, LapseShiftValue};
pub use lorentz::{crease_lorentz_check, LorentzReport};
