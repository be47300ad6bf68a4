//! Boundary integral operators of Clifford analysis over domain-manifold
//! boundaries in `C^n`: the Cauchy transform and its principal value, the
//! Plemelj projections, the Kerzman–Stein operator and the Szegő projection,
//! together with maximal-function and Kelvin-transform diagnostics.

pub mod clifford;
pub mod error;
pub mod fourier;
pub mod hardy;
pub mod linalg;
pub mod manifold;
pub mod maximal;
pub mod mobius;
pub mod operators;
pub mod quadrature;

pub use clifford::{cauchy_kernel, omega, vector_inverse, ComplexVector, Multivector};
pub use error::{Error, Result};
pub use manifold::{BoundaryMesh, Cone, ConeParams, PathRegion, Region};
pub use operators::{BlockOperator, BoundaryFunction, OperatorLabel};
