use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{galerkin_matrices, orthonormal_basis, symmetric_eigensolve};
use crate::error::{Error, Result};
use crate::operator::Operator;

/// Relative eigenvalue change allowed between truncations `N` and `2N`.
pub const CERTIFY_REL_TOL: f64 = 1e-9;

/// Truncation for `n_modes` eigenpairs at half-width `a`: `max(40, 2 n_modes + 20, 1.5 a^2 + 30)`.
/// Prolate eigenfunctions need roughly `e a^2 / 2` Legendre modes before their coefficients decay.
pub fn default_truncation(a: f64, n_modes: usize) -> usize {
    let band = (1.5 * a * a).ceil() as usize + 30;
    (2 * n_modes + 20).max(40).max(band)
}

/// Coefficients against the orthonormal basis `v_k(t) = sqrt((2k+1)/(2a)) P_k(t/a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCoeffs {
    pub half_width: f64,
    pub coeffs: Vec<C64>,
}

impl SpectralCoeffs {
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// `L^2(-a, a)` norm (Parseval).
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.eval_with_derivative(t).0
    }

    pub fn eval_with_derivative(&self, t: f64) -> (C64, C64) {
        let (v, d) = orthonormal_basis(self.coeffs.len(), t, self.half_width);
        self.coeffs
            .iter()
            .zip(v.iter().zip(&d))
            .fold((C64::default(), C64::default()), |(x, dx), (c, (vk, dk))| {
                (x + c * vk, dx + c * dk)
            })
    }
}

/// An eigenvalue of the Galerkin problem and its eigenfunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub lambda: f64,
    pub eigenfunction: SpectralCoeffs,
    /// `|(M + Q) v - lambda v|_2` in the truncated space.
    pub residual: f64,
}

/// The `n_modes` lowest Galerkin eigenpairs of `op` at truncation `n`, uncertified.
pub fn galerkin_spectrum(op: Operator, n: usize, a: f64, n_modes: usize) -> Result<Vec<EigenPair>> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("half-width must be positive, got {a}")));
    }
    if n < 2 || n_modes > n {
        return Err(Error::InvalidInput(format!(
            "truncation {n} too small for {n_modes} modes"
        )));
    }
    let (m, q) = galerkin_matrices(n, a);
    let h = if op.has_potential() { m + q } else { m };
    let pairs = symmetric_eigensolve(&h)?;
    Ok(pairs
        .into_iter()
        .take(n_modes)
        .map(|(lambda, v)| {
            let residual = (&h * &v - &v * lambda).norm();
            let vmax = v.amax();
            let first = v.iter().copied().find(|c| c.abs() > 1e-12 * vmax).unwrap_or(1.0);
            let sign = first.signum();
            EigenPair {
                lambda,
                eigenfunction: SpectralCoeffs {
                    half_width: a,
                    coeffs: v.iter().map(|&c| C64::new(sign * c, 0.0)).collect(),
                },
                residual,
            }
        })
        .collect())
}

/// Galerkin spectrum certified by re-solving at truncation `2n`.
pub fn spectrum_certified(op: Operator, n: usize, a: f64, n_modes: usize) -> Result<Vec<EigenPair>> {
    if n < n_modes + 10 {
        return Err(Error::InvalidInput(format!(
            "truncation {n} below guard n_modes + 10 = {}",
            n_modes + 10
        )));
    }
    let coarse = galerkin_spectrum(op, n, a, n_modes)?;
    let fine = galerkin_spectrum(op, 2 * n, a, n_modes)?;
    let change = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (c.lambda - f.lambda).abs() / f.lambda.abs().max(1.0))
        .fold(0.0, f64::max);
    if change > CERTIFY_REL_TOL {
        return Err(Error::NotConverged { change });
    }
    Ok(coarse)
}

/// Prolate spheroidal wave functions: the certified spectrum of the distinguished
/// extension of `L = M + t^2`.
pub fn prolate_spectrum(n: usize, a: f64, n_modes: usize) -> Result<Vec<EigenPair>> {
    spectrum_certified(Operator::Prolate, n, a, n_modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::QuadratureRule;

    #[test]
    fn legendre_operator_spectrum_is_exact() {
        for a in [0.5, 1.0, 2.0] {
            let pairs = galerkin_spectrum(Operator::Legendre, 32, a, 32).unwrap();
            for (k, p) in pairs.iter().enumerate() {
                let mu = (k * (k + 1)) as f64 / (a * a);
                assert!((p.lambda - mu).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn prolate_spectrum_positive_simple_increasing() {
        for a in [0.5, 1.0, 2.0] {
            let pairs = prolate_spectrum(24, a, 6).unwrap();
            assert!(pairs[0].lambda > 0.0);
            for w in pairs.windows(2) {
                assert!(w[1].lambda - w[0].lambda > 1e-8);
            }
        }
    }

    #[test]
    fn truncation_guard() {
        assert!(matches!(prolate_spectrum(12, 1.0, 4), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn eigenfunctions_orthonormal_and_signed() {
        let a = 1.0;
        let pairs = prolate_spectrum(20, a, 5).unwrap();
        let rule = QuadratureRule::gauss_on(60, a).unwrap();
        for (i, p) in pairs.iter().enumerate() {
            let first = p.eigenfunction.coeffs.iter().find(|c| c.norm() > 1e-12).unwrap();
            assert!(first.re > 0.0);
            for (j, q) in pairs.iter().enumerate() {
                let g = rule.integrate(|t| (p.eigenfunction.eval(t) * q.eigenfunction.eval(t).conj()).re);
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - e).abs() < 1e-9);
            }
            assert!(p.residual < 1e-10 * (1.0 + p.lambda));
        }
    }

    #[test]
    fn spectral_convergence_is_rapid() {
        let a = 2.0;
        let reference = galerkin_spectrum(Operator::Prolate, 96, a, 5).unwrap();
        let errs: Vec<f64> = [16usize, 24, 32, 48]
            .iter()
            .map(|&n| {
                let s = galerkin_spectrum(Operator::Prolate, n, a, 5).unwrap();
                s.iter()
                    .zip(&reference)
                    .map(|(x, r)| (x.lambda - r.lambda).abs() / r.lambda)
                    .fold(0.0, f64::max)
            })
            .collect();
        for w in errs.windows(2) {
            assert!(w[1] <= w[0].max(1e-14), "{errs:?}");
        }
        assert!(errs[3] < 1e-13, "{errs:?}");
    }
}
