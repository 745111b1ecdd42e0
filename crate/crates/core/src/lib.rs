//! Ruelle transfer operators on one-sided subshifts of finite type.
//!
//! The crate works with locally constant potentials, for which the transfer
//! operator acts on a finite-dimensional space and every quantity is computed
//! exactly up to floating point:
//!
//! - [`symbolic`]: transition matrices, admissible words, primitivity.
//! - [`functions`]: locally constant functions and their Hölder norms.
//! - [`transfer`]: the operator, its matrix lift and the Perron data `(λ, h, ν)`.
//! - [`gibbs`]: the equilibrium measure `ν̂ = hν`, correlations and sampling.
//! - [`certificate`]: explicit RPF constants and checks of every bound.
//! - [`corpus`]: seeded random shifts, potentials and cone members.

pub mod certificate;
pub mod corpus;
pub mod error;
pub mod functions;
pub mod gibbs;
pub mod symbolic;
pub mod transfer;

pub use certificate::{
    check_lambda_membership, compute_constants, BoundConstants, CheckReport, CheckRow, ConeSpec,
    Violation,
};
pub use error::{Error, Result};
pub use functions::{LocallyConstantFn, NormReport};
pub use gibbs::{empirical_average, GibbsMeasure, Which};
pub use symbolic::{check_aperiodic, TransitionMatrix, Word};
pub use transfer::{lift_matrix, perron_data, PerronData, TransferLift, TransferOperator};
