//! Frobenius solutions at the singular endpoints, generalized boundary values
//! and the boundary form.
//!
//! For `x = c1 x_1 + c2 x_2` near either endpoint the boundary values are
//! `(b, c) = (c2, -c1)`. The boundary form is
//! `Omega(x, y) = (2/a) v_x J v_y*` in the cutoff-basis coordinates, so that
//! `b_{-a}(x) = (ia/2) Omega(x, phi_-)` and `c_{-a}(x) = (ia/2) Omega(x, psi_-)`,
//! and likewise at `+a` with `phi_+`, `psi_+`.

mod boundary;
mod frobenius;

pub use boundary::{
    boundary_values_from_samples, boundary_values_numeric, boundary_values_series, concomitant, gram_matrix_limits,
    gram_matrix_quadrature, omega_from_boundary_values, omega_quadrature, rewr_matrix, BoundaryValues, NumericLimit,
    LIMIT_TOL,
};
pub use frobenius::{
    eval_solution, frobenius_pair, frobenius_pair_auto, normal_form_coefficients, Endpoint, FrobeniusSolution,
    SolutionKind, DEFAULT_TERMS,
};
