//! Bartnik boundary data on a crease sphere, hyperbolic gauge rotations, the
//! connection-difference form and the crease-margin diagnostics. Three dimensions only.

pub mod bartnik;
pub mod grid;
pub mod margin;

pub use bartnik::{bartnik_pair, beta_delta, rotated_components, BartnikData, BartnikNode, Side};
pub use grid::SphereGrid;
pub use margin::{
    crease_margin, equivalence_angle, margin_value, spacelike_form, spacelike_form_check, AngleSolution,
    CreaseNode, CreaseReport, SpacelikeCheck, DEFAULT_CREASE_TOL,
};
