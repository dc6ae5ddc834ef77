//! Spectra of arbitrary self-adjoint extensions by shooting.
//!
//! Frobenius series give the fundamental pairs at both endpoints; a Taylor march
//! joins them through the interior, producing the connection matrix `T(lambda)`:
//! `x_i^- = T_i1 x_1^+ + T_i2 x_2^+`. The general solution `alpha x_1^- + beta x_2^-`
//! has boundary values `alpha w_alpha + beta w_beta` with
//! `w_alpha = (0, -1, T_12, -T_11)` and `w_beta = (1, 0, T_22, -T_21)`, and
//! eigenvalues of `L_U` are the real zeros of `det(B(U) [w_alpha w_beta])`.

mod march;
mod scan;
mod shoot;

pub use march::DenseMarch;
pub use scan::{default_window, eigenvalues_scan, eigenvalues_scan_with, Eigenvalue, ScanOptions, DEFAULT_CELLS};
pub use shoot::{eigenfunction_shoot, eigenfunctions_shoot, ShotEigenfunction};

use nalgebra::{Matrix2, Matrix2x4, Matrix4x2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::boundary_algebra::{boundary_condition_matrix, UnitaryMatrix2};
use crate::endpoint_forms::{frobenius_pair_auto, Endpoint, FrobeniusSolution};
use crate::error::{Error, Result};
use crate::operator::{weight, Operator};

/// Largest distance from each endpoint at which series and march are matched, in units of `a`.
pub const HANDOFF: f64 = 0.25;

/// Matching distance: `min(a/4, 8 / (a (|lambda| + a^2)))`. Near an endpoint the
/// solutions behave like Bessel functions of `2 sqrt(a |lambda - q| s / 2)`; the cap
/// keeps their growth over the series range to a few e-folds.
pub fn handoff_distance(a: f64, lambda: f64) -> f64 {
    (HANDOFF * a).min(8.0 / (a * (lambda.abs() + a * a)))
}

/// The fundamental pairs at both ends joined through the interior.
#[derive(Debug, Clone)]
pub struct Connection {
    pub lambda: f64,
    pub half_width: f64,
    pub op: Operator,
    /// `T[(i, j)]`: coefficient of `x_{j+1}^+` in `x_{i+1}^-`.
    pub t: Matrix2<f64>,
    pub minus: (FrobeniusSolution, FrobeniusSolution),
    pub plus: (FrobeniusSolution, FrobeniusSolution),
    pub march: DenseMarch,
    /// Distance from each endpoint where the series hand over to the march.
    pub handoff: f64,
    /// Drift of `p W(x_1^-, x_2^-)` over the march, relative to the size of its terms.
    pub wronskian_drift: f64,
}

/// Serializable view of a [`Connection`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionMatrix {
    pub lambda: f64,
    pub half_width: f64,
    pub t: [[f64; 2]; 2],
    pub steps: usize,
    pub wronskian_drift: f64,
}

impl Connection {
    pub fn matrix(&self) -> ConnectionMatrix {
        ConnectionMatrix {
            lambda: self.lambda,
            half_width: self.half_width,
            t: [[self.t[(0, 0)], self.t[(0, 1)]], [self.t[(1, 0)], self.t[(1, 1)]]],
            steps: self.march.step_count(),
            wronskian_drift: self.wronskian_drift,
        }
    }

    /// Boundary-value columns `[w_alpha w_beta]`.
    pub fn boundary_columns(&self) -> Matrix4x2<C64> {
        let t = self.t.map(|x| C64::new(x, 0.0));
        let (z, one) = (C64::default(), C64::new(1.0, 0.0));
        Matrix4x2::new(z, one, -one, z, t[(0, 1)], t[(1, 1)], -t[(0, 0)], -t[(1, 0)])
    }
}

/// `p W(x_1, x_2)` and the size of its two terms.
fn pw(t: f64, a: f64, s: &[(f64, f64)]) -> (f64, f64) {
    let p = weight(t, a);
    (
        p * (s[0].0 * s[1].1 - s[0].1 * s[1].0),
        p * ((s[0].0 * s[1].1).abs() + (s[0].1 * s[1].0).abs()),
    )
}

/// `T(lambda)` for the operator `op` on `(-a, a)`.
pub fn connection(op: Operator, a: f64, lambda: f64) -> Result<Connection> {
    if !lambda.is_finite() {
        return Err(Error::InvalidInput("lambda must be finite".into()));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("half-width must be positive, got {a}")));
    }
    let pot = op.has_potential();
    let sh = handoff_distance(a, lambda);
    let lam = C64::new(lambda, 0.0);
    let minus = frobenius_pair_auto(lam, Endpoint::MinusA, a, pot, sh)?;
    let plus = frobenius_pair_auto(lam, Endpoint::PlusA, a, pot, sh)?;
    let seed = |s: &FrobeniusSolution| -> Result<(f64, f64)> {
        let j = s.eval_at_distance(sh)?;
        Ok((j.value.re, j.d1.re))
    };
    let start = [seed(&minus.0)?, seed(&minus.1)?];
    let (t0, t1) = (-a + sh, a - sh);
    let march = DenseMarch::run(lambda, a, pot, t0, t1, &start)?;
    let end = march.final_states();
    let f1 = seed(&plus.0)?;
    let f2 = seed(&plus.1)?;
    let f = Matrix2::new(f1.0, f2.0, f1.1, f2.1);
    let det = f.determinant();
    let fscale = f.norm().powi(2);
    if !(det.abs() > 1e-14 * fscale) {
        return Err(Error::MatchSingular { det });
    }
    let finv = f.try_inverse().ok_or(Error::MatchSingular { det })?;
    let mut t = Matrix2::zeros();
    for (i, &(v, d)) in end.iter().enumerate() {
        let c = finv * nalgebra::Vector2::new(v, d);
        t[(i, 0)] = c[0];
        t[(i, 1)] = c[1];
    }
    let (w0, _) = pw(t0, a, &start);
    let (w1, size) = pw(t1, a, &end);
    let wronskian_drift = (w1 - w0).abs() / size.max(w0.abs());
    Ok(Connection {
        lambda,
        half_width: a,
        op,
        t,
        minus,
        plus,
        march,
        handoff: sh,
        wronskian_drift,
    })
}

/// `T(lambda)` for the prolate operator.
pub fn connection_matrix(lambda: f64, a: f64) -> Result<ConnectionMatrix> {
    Ok(connection(Operator::Prolate, a, lambda)?.matrix())
}

/// The secular determinant at one `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularReport {
    pub lambda: f64,
    pub det_value: C64,
    /// `Re(e^{-i theta} det)` with the `lambda`-independent phase `theta` of `U`.
    pub indicator: f64,
    /// `|Im(e^{-i theta} det)|`.
    pub imaginary_residue: f64,
    /// `|B(U)| |W(lambda)|`, the natural size of the determinant.
    pub scale: f64,
    /// Smallest singular value of the 2x2 system relative to `scale`.
    pub condition: f64,
}

/// The five `lambda`-independent Cauchy-Binet weights of `B(U)` and their phase.
///
/// `det(B W) = (P12 - P34) + P13 W13 + P14 W14 + P23 W23 + P24 W24` with `P` the
/// 2x2 minors of `B(U)` and `W13 = -T12`, `W14 = T11`, `W23 = -T22`, `W24 = T21`
/// (using `det T = -1`).
#[derive(Debug, Clone, Copy)]
pub struct SecularPhase {
    weights: [C64; 5],
    phase: C64,
}

impl SecularPhase {
    pub fn new(u: &UnitaryMatrix2) -> Self {
        let b = boundary_condition_matrix(u);
        let minor = |i: usize, j: usize| b[(0, i)] * b[(1, j)] - b[(0, j)] * b[(1, i)];
        let weights = [
            minor(0, 1) - minor(2, 3),
            minor(0, 2),
            minor(0, 3),
            minor(1, 2),
            minor(1, 3),
        ];
        let big = weights
            .iter()
            .max_by(|p, q| p.norm().total_cmp(&q.norm()))
            .copied()
            .unwrap();
        Self {
            weights,
            phase: big / big.norm(),
        }
    }

    /// Real indicator and imaginary residue from the connection matrix.
    pub fn indicator(&self, t: &Matrix2<f64>) -> (f64, f64) {
        let w = [1.0, -t[(0, 1)], t[(0, 0)], -t[(1, 1)], t[(1, 0)]];
        let d: C64 = self.weights.iter().zip(w).map(|(p, w)| p * w).sum::<C64>() * self.phase.conj();
        (d.re, d.im.abs())
    }
}

fn secular_from_connection(u: &UnitaryMatrix2, phase: &SecularPhase, conn: &Connection) -> SecularReport {
    let b: Matrix2x4<C64> = boundary_condition_matrix(u);
    let w = conn.boundary_columns();
    let m = b * w;
    let det_value = m.determinant();
    let (indicator, imaginary_residue) = phase.indicator(&conn.t);
    let scale = b.norm() * w.norm();
    let sv = m.singular_values();
    SecularReport {
        lambda: conn.lambda,
        det_value,
        indicator,
        imaginary_residue,
        scale,
        condition: sv.min() / scale,
    }
}

/// `det(B(U) [w_alpha w_beta])` at `lambda` for the prolate operator.
pub fn secular_det(u: &UnitaryMatrix2, a: f64, lambda: f64) -> Result<SecularReport> {
    secular_det_op(Operator::Prolate, u, a, lambda)
}

pub fn secular_det_op(op: Operator, u: &UnitaryMatrix2, a: f64, lambda: f64) -> Result<SecularReport> {
    let conn = connection(op, a, lambda)?;
    Ok(secular_from_connection(u, &SecularPhase::new(u), &conn))
}
