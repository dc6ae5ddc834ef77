//! Self-adjoint extensions of the prolate spheroid operator on `(-a, a)`.

pub mod boundary_algebra;
pub mod endpoint_forms;
pub mod error;
pub mod extension_solver;
pub mod fourier_commutator;
pub mod functions;
pub mod grid;
pub mod legendre;
pub mod operator;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
