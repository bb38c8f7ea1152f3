//! Initial data sets `(g, k)` on Cartesian charts: closed-form catalog, creased pairs,
//! constraint densities, coordinate-sphere geometry, quadrature and decay fits.

pub mod catalog;
pub mod constraints;
pub mod crease;
pub mod data;
pub mod decay;
pub mod frame;
pub mod linalg;
pub mod models;
pub mod quadrature;
pub mod surface;

pub use catalog::{catalog, CatalogEntry, CatalogSpec};
pub use constraints::{constraint_fields, ConstraintValues};
pub use crease::{AngleFunction, CreasedData};
pub use data::{DataKind, Domain, InitialData, PointFields, TensorFields};
pub use decay::{check_asymptotics, fit_decay, DecayFit};
pub use frame::PointGeometry;
pub use linalg::Mat;
pub use models::RadialProfile;
pub use quadrature::{unit_sphere_volume, SphereRule};
pub use surface::{hypersurface_geometry, normal_field, HypersurfaceGeometry, NormalField, Orientation};
