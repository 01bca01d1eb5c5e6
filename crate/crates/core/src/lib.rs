//! Schatten p-norms of finite complex matrices and executable checks of the
//! inequalities relating `Σ_{i,j}‖A_i ± B_j‖_p` to `Σ‖A_i‖_p` under
//! sum-zero, cross-orthogonality and orthogonal-range hypotheses.
//!
//! * [`linalg`]: dense complex matrices, Jacobi eigensolver, singular values.
//! * [`schatten`]: norms and quasi-norms.
//! * [`ineq`]: one tolerance-aware check per inequality.
//! * [`gen`]: seeded generators for admissible instances.
//! * [`tightness`]: hill-climbing search for near-extremal instances.
//! * [`campaign`]: batch verification runs and sweeps.

pub mod campaign;
pub mod error;
pub mod format;
pub mod gen;
pub mod ineq;
pub mod linalg;
pub mod numfmt;
pub mod schatten;
pub mod selftest;
pub mod tightness;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use schatten::PExponent;
