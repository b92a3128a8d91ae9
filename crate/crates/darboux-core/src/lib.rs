//! Non-integrability toolkit for rotation-invariant homogeneous potentials of
//! degree −1, centred on the planar n-body problem.
//!
//! The pipeline: find Darboux points (central configurations), build the
//! mass-scaled Hessian `W`, test whether the variational equations partially
//! decouple along a rotation-stable eigenspace, classify the angular-momentum /
//! energy level, look the decoupled eigenvalue up in the integrability table,
//! and cross-check table verdicts with numerically computed monodromy groups.
//!
//! Layering, bottom up:
//! - [`dd`], [`cx`]: double-double floats and complex numbers generic over the
//!   real scalar.
//! - [`exact`]: rationals, quadratic extensions, polynomials (uni- and
//!   trivariate), Sturm sequences, exact matrices.
//! - [`linalg`], [`ode`]: dense complex linear algebra and an adaptive
//!   Runge-Kutta integrator, both generic over the scalar.
//! - [`nbody`], [`dim3`]: potentials, Darboux points, multiplier
//!   normalization; the three-degrees-of-freedom example potentials.
//! - [`spectral`]: the W matrix, its spectrum, and the decoupling criteria.
//! - [`variational`]: the scalar variational equation, Frobenius data, closed
//!   forms, polynomial solution search, and the level-class verdict table.
//! - [`monodromy`]: analytic continuation around singularities and abelianity
//!   certificates.

pub mod cx;
pub mod dd;
pub mod dim3;
pub mod exact;
pub mod linalg;
pub mod monodromy;
pub mod nbody;
pub mod ode;
pub mod spectral;
pub mod variational;

use thiserror::Error;

/// Errors shared across the solver modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Two bodies coincide, or a mutual distance vanishes.
    #[error("singular configuration: {0}")]
    SingularConfiguration(String),
    /// Input failed validation (masses, sizes, parameter ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A Darboux point with multiplier 0 cannot be normalized.
    #[error("degenerate Darboux point: multiplier is zero")]
    DegenerateDarboux,
    /// An iterative solver ran out of its iteration budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// A matrix does not have the aligned block structure.
    #[error("not an aligned configuration: {0}")]
    NotAligned(String),
    /// The queried point is not a singularity of the equation.
    #[error("not a singular point: {0}")]
    NotSingular(String),
    /// Numerical evidence is too weak to decide either way.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
