//! Radial transmission problem for spherically symmetric creased initial data.

pub mod assemble;
pub mod band;
pub mod gap;
pub mod grid;
pub mod poincare;
pub mod reduce;
pub mod solve;

pub use assemble::{assemble, truncation_residual, TruncationResidual, Assembly, ConstraintDefects, ConstraintKind, ConstraintRow};
pub use grid::{RadialGrid, Side};
pub use reduce::{reduce_radial, reduction_oracle, transmission_matrix, Coefficients, RadialProblem, SeparatedField};
pub use solve::{solve, RadialSolution, SolverKind};
pub use gap::{mass_gap, truncation_study, GapOptions, MassGapReport, TruncationStudy};
pub use poincare::{poincare_estimate, PoincareEstimate};
