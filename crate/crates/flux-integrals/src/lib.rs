//! Quadrature-based checks on initial data: ADM energy-momentum, the boundary flux of
//! constant spinors, the integrated Weitzenboeck identity and the crease boundary terms.

pub mod adm;
pub mod crease_terms;
pub mod field;
pub mod lsw;
pub mod quad;
pub mod spin;
pub mod witten;

pub use adm::{adm_energy_momentum, richardson, Extrapolation, MassReport};
pub use crease_terms::{crease_boundary_terms, CreaseTerms};
pub use field::{BumpSpinor, ConstantSpinor, PolynomialSpinor, SpinorField, TransmittedField};
pub use lsw::{lsw_residual, LswResult, QuadratureOrders};
pub use quad::{sphere_integral, Region};
pub use spin::{dirac_witten_apply, sen_derivative, BoundaryPoint, SpinFrame};
pub use witten::{flux_matrix, witten_energy_momentum, witten_flux, FluxValue, WittenReport};
