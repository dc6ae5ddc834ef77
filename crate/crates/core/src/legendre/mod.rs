//! Legendre polynomials, Gauss-Legendre rules, the Galerkin discretization in the
//! orthonormal scaled Legendre basis and the spectrum of the distinguished
//! extension (the prolate spheroidal wave functions).

mod eigen;
mod galerkin;
mod polynomial;
mod quadrature;
mod spectrum;

pub use eigen::symmetric_eigensolve;
pub use galerkin::galerkin_matrices;
pub use polynomial::{legendre_eval, orthonormal_basis};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use spectrum::{
    default_truncation, galerkin_spectrum, prolate_spectrum, spectrum_certified, EigenPair, SpectralCoeffs,
    CERTIFY_REL_TOL,
};
