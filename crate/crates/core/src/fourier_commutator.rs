//! The truncated Fourier operator `(F x)(t) = (2 pi)^{-1/2} int_{-a}^{a} e^{i t xi} x(xi) d xi`
//! and its commutator with the prolate expression.
//!
//! For `x` in the maximal domain,
//! `F(Lx) - L(Fx) = (2 pi)^{-1/2} (2/a) (b_a(x) e^{iat} + b_{-a}(x) e^{-iat})`,
//! so `F` commutes with `L_I` (where `b = 0`) and with no other extension.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::boundary_algebra::{boundary_condition_matrix, boundary_kernel, UnitaryMatrix2};
use crate::endpoint_forms::{BoundaryValues, Endpoint};
use crate::error::{Error, Result};
use crate::functions::{DomainFunction, Piece};
use crate::grid::GridFunction;
use crate::legendre::{EigenPair, QuadratureRule};
use crate::operator::{weight, weight_derivative, Operator};

/// Quadrature for Fourier integrals of maximal-domain functions: endpoint grading
/// against the logarithms and a fine interior for bumps and cutoffs.
pub fn fourier_rule(a: f64) -> QuadratureRule {
    QuadratureRule::graded_core(a, 0.875, 40, 20, 112).expect("fixed rule parameters are valid")
}

/// `(2 pi)^{-1/2}`.
pub const FOURIER_NORM: f64 = 0.398_942_280_401_432_7;

/// The factor in front of the boundary term: `(2 pi)^{-1/2} (2/a)`.
pub fn commutator_constant(a: f64) -> f64 {
    FOURIER_NORM * 2.0 / a
}

/// `F x` at each `t`, with the quadrature stored in `x`.
pub fn truncated_fourier_at(x: &GridFunction, ts: &[f64]) -> Result<Vec<C64>> {
    let w = x.weights()?;
    Ok(ts
        .iter()
        .map(|&t| {
            x.nodes
                .iter()
                .zip(w)
                .zip(&x.values)
                .map(|((&xi, &w), &v)| C64::new(0.0, t * xi).exp() * v * w)
                .sum::<C64>()
                * FOURIER_NORM
        })
        .collect())
}

/// `F x` sampled on `t_grid` (points of `(-a, a)`, increasing). Quadrature weights
/// are carried over when `t_grid` coincides with the nodes of `x`.
pub fn truncated_fourier(x: &GridFunction, t_grid: &[f64]) -> Result<GridFunction> {
    let values = truncated_fourier_at(x, t_grid)?;
    let (weights, family) = if t_grid == x.nodes.as_slice() {
        (x.weights.clone(), x.node_family.clone())
    } else {
        (None, "samples".to_string())
    };
    GridFunction::new(x.half_width, t_grid.to_vec(), weights, values, family)
}

/// `(F x)(t)`, `(F x)'(t)`, `(F x)''(t)` from kernel derivatives.
fn fourier_jet(nodes: &[f64], wx: &[C64], t: f64) -> (C64, C64, C64) {
    let mut y = (C64::default(), C64::default(), C64::default());
    for (&xi, &v) in nodes.iter().zip(wx) {
        let e = C64::new(0.0, t * xi).exp() * v;
        y.0 += e;
        y.1 += e * C64::new(0.0, xi);
        y.2 -= e * (xi * xi);
    }
    (y.0 * FOURIER_NORM, y.1 * FOURIER_NORM, y.2 * FOURIER_NORM)
}

/// Pointwise commutator data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub half_width: f64,
    pub boundary_values: BoundaryValues,
    /// `(2 pi)^{-1/2} (2/a)`.
    pub constant: f64,
    pub t: Vec<f64>,
    /// `F(Lx) - L(Fx)`.
    pub commutator: Vec<C64>,
    /// Commutator minus the boundary term.
    pub residual: Vec<C64>,
    pub sup_commutator: f64,
    pub sup_residual: f64,
}

impl CommutatorReport {
    /// `t,commutator_re,commutator_im,residual_re,residual_im` rows.
    pub fn to_csv(&self) -> String {
        crate::report::csv_string(
            &["t", "commutator_re", "commutator_im", "residual_re", "residual_im"],
            self.t
                .iter()
                .zip(&self.commutator)
                .zip(&self.residual)
                .map(|((t, c), e)| vec![*t, c.re, c.im, e.re, e.im]),
        )
    }
}

/// `F(Lx) - L(Fx)` on `t_grid` for the prolate expression, compared against the
/// boundary term built from `bv`.
pub fn commutator_residual(x: &DomainFunction, bv: &BoundaryValues, t_grid: &[f64]) -> Result<CommutatorReport> {
    let a = x.half_width;
    if t_grid.iter().any(|t| !(t.abs() <= a)) {
        return Err(Error::InvalidInput("commutator grid must lie in [-a, a]".into()));
    }
    let rule = fourier_rule(a);
    let mut wx = Vec::with_capacity(rule.len());
    let mut wlx = Vec::with_capacity(rule.len());
    for (&xi, &w) in rule.nodes.iter().zip(&rule.weights) {
        let j = x.jet(xi);
        wx.push(j.value * w);
        wlx.push(Operator::Prolate.apply(&j, xi, a) * w);
    }
    let c = commutator_constant(a);
    let mut commutator = Vec::with_capacity(t_grid.len());
    let mut residual = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let flx = fourier_jet(&rule.nodes, &wlx, t).0;
        let (y, y1, y2) = fourier_jet(&rule.nodes, &wx, t);
        let lfx = -y2 * weight(t, a) - y1 * weight_derivative(t, a) + y * (t * t);
        let comm = flx - lfx;
        let rhs = (bv.b_plus * C64::new(0.0, a * t).exp() + bv.b_minus * C64::new(0.0, -a * t).exp()) * c;
        commutator.push(comm);
        residual.push(comm - rhs);
    }
    let sup = |v: &[C64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(CommutatorReport {
        half_width: a,
        boundary_values: *bv,
        constant: c,
        t: t_grid.to_vec(),
        sup_commutator: sup(&commutator),
        sup_residual: sup(&residual),
        commutator,
        residual,
    })
}

/// Default interior grid for commutator checks: 41 Gauss nodes plus both endpoints.
pub fn commutator_grid(a: f64) -> Vec<f64> {
    let mut t = vec![-a];
    t.extend(QuadratureRule::gauss_on(41, a).expect("fixed order").nodes);
    t.push(a);
    t
}

/// Eigenvalue `gamma` of `F` on a prolate eigenfunction and the relative
/// residual `|F chi - gamma chi| / |F chi|`.
pub fn pswf_fourier_check(chi: &EigenPair, a: f64) -> Result<(C64, f64)> {
    let n = (2 * chi.eigenfunction.truncation() + 40).max(96);
    let g = GridFunction::gauss(a, n, |t| chi.eigenfunction.eval(t))?;
    let y = truncated_fourier(&g, &g.nodes)?;
    let ny = y.l2_norm()?;
    let nchi = g.l2_norm()?;
    if !(ny > 1e-13 * nchi) {
        return Err(Error::DegenerateEigenvalue { image_norm: ny });
    }
    let gamma = y.inner(&g)? / g.inner(&g)?;
    let res = y.sub(&g.scaled(gamma))?.l2_norm()? / ny;
    Ok((gamma, res))
}

/// Which way the witness shows non-commutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessCase {
    /// `F x` lies in the domain and `F L x != L F x`.
    Commutator,
    /// `F x` leaves the domain.
    BoundaryViolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: DomainFunction,
    pub boundary_values: BoundaryValues,
    /// `(F x)(-a)`, `(F x)(a)`.
    pub image_endpoint_values: (C64, C64),
    pub case: WitnessCase,
    /// Sup-norm of the commutator (case `Commutator`) or `|B(U) bv(F x)|` otherwise.
    pub residual_norm: f64,
}

/// Bumps at `-center` and `+center` with amplitudes making `F(base + x_0)`
/// vanish at both endpoints. Returns `None` when the 2x2 system is singular.
fn endpoint_bumps(base: &DomainFunction, center: f64, width: f64) -> Result<Option<DomainFunction>> {
    let a = base.half_width;
    let rule = fourier_rule(a);
    let b1 = DomainFunction::single(a, Piece::Bump { center: -center, width });
    let b2 = DomainFunction::single(a, Piece::Bump { center, width });
    let image = |f: &DomainFunction| -> Result<(C64, C64)> {
        let g = GridFunction::from_rule(a, &rule, "graded", |t| f.value(t))?;
        let v = truncated_fourier_at(&g, &[-a, a])?;
        Ok((v[0], v[1]))
    };
    let (f1, f2, f0) = (image(&b1)?, image(&b2)?, image(base)?);
    let m = Matrix2::new(f1.0, f2.0, f1.1, f2.1);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    if m.determinant().norm() < 1e-6 * scale * scale {
        return Ok(None);
    }
    let amp = m.try_inverse().map(|inv| inv * Vector2::new(-f0.0, -f0.1));
    Ok(amp.map(|c| {
        base.clone()
            .with(c[0], b1.terms[0].1.clone())
            .with(c[1], b2.terms[0].1.clone())
    }))
}

/// Image endpoint values `(F x)(-a)`, `(F x)(a)`.
pub fn image_endpoint_values(x: &DomainFunction) -> Result<(C64, C64)> {
    let a = x.half_width;
    let g = GridFunction::from_rule(a, &fourier_rule(a), "graded", |t| x.value(t))?;
    let v = truncated_fourier_at(&g, &[-a, a])?;
    Ok((v[0], v[1]))
}

/// A function in the domain of `L_U` showing that `L_U` does not commute with `F`.
///
/// Pick boundary values `q` in the null space of `B(U)` with nonzero `b`-part
/// (normalized to `b_{-a} = 1, b_a = 0` when possible), set
/// `x = b_- psi_- - c_- phi_- + b_+ psi_+ - c_+ phi_+ + x_0`, and choose the bump
/// pair `x_0` so that `F x` vanishes at both endpoints. Then `F x` lies in every
/// domain and the commutator equals the nonzero boundary term.
pub fn noncommuting_witness(u: &UnitaryMatrix2, a: f64) -> Result<Witness> {
    if u.is_identity(1e-12) {
        return Err(Error::IsIdentity);
    }
    let [k1, k2] = boundary_kernel(u);
    let kb = Matrix2::new(k1[0], k2[0], k1[2], k2[2]);
    let q: [C64; 4] = match kb.try_inverse().filter(|_| kb.determinant().norm() > 1e-8) {
        Some(inv) => {
            let c = inv * Vector2::new(C64::new(1.0, 0.0), C64::default());
            std::array::from_fn(|i| k1[i] * c[0] + k2[i] * c[1])
        }
        None => {
            let bn = |k: &[C64; 4]| k[0].norm().max(k[2].norm());
            let k = if bn(&k1) >= bn(&k2) { k1 } else { k2 };
            let s = bn(&k);
            if s < 1e-8 {
                return Err(Error::IsIdentity);
            }
            k.map(|z| z / s)
        }
    };
    let bv = BoundaryValues::from_array(q);
    let base = DomainFunction::new(a)
        .with(bv.b_minus, Piece::Psi(Endpoint::MinusA))
        .with(-bv.c_minus, Piece::Phi(Endpoint::MinusA))
        .with(bv.b_plus, Piece::Psi(Endpoint::PlusA))
        .with(-bv.c_plus, Piece::Phi(Endpoint::PlusA));
    let mut x = None;
    for (center, width) in [(0.5, 0.25), (1.0 / 3.0, 0.25), (0.6, 0.3), (0.4, 0.2)] {
        if let Some(f) = endpoint_bumps(&base, center * a, width * a)? {
            x = Some(f);
            break;
        }
    }
    let b = boundary_condition_matrix(u);
    match x {
        Some(x) => {
            let ends = image_endpoint_values(&x)?;
            let ts: Vec<f64> = (0..=64).map(|k| -a + 2.0 * a * k as f64 / 64.0).collect();
            let rep = commutator_residual(&x, &x.boundary_values(), &ts)?;
            Ok(Witness {
                boundary_values: x.boundary_values(),
                x,
                image_endpoint_values: ends,
                case: WitnessCase::Commutator,
                residual_norm: rep.sup_commutator,
            })
        }
        None => {
            let ends = image_endpoint_values(&base)?;
            let img = BoundaryValues {
                c_minus: -ends.0,
                c_plus: -ends.1,
                ..Default::default()
            };
            let viol = b * nalgebra::Vector4::from(img.as_array());
            Ok(Witness {
                boundary_values: base.boundary_values(),
                x: base,
                image_endpoint_values: ends,
                case: WitnessCase::BoundaryViolation,
                residual_norm: viol.norm(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::prolate_spectrum;
    use rand::SeedableRng;

    #[test]
    fn fourier_of_constant() {
        let a = 1.0;
        let g = GridFunction::gauss(a, 40, |_| C64::new(1.0, 0.0)).unwrap();
        let ts = [-0.9, -0.3, 0.0, 0.4, 0.99];
        let y = truncated_fourier_at(&g, &ts).unwrap();
        let s2p = (2.0 / std::f64::consts::PI).sqrt();
        for (t, v) in ts.iter().zip(&y) {
            let exact = if *t == 0.0 { s2p } else { s2p * t.sin() / t };
            assert!((v - exact).norm() < 1e-14);
        }
        let zero = g.map_values(|_, _| C64::default());
        assert!(truncated_fourier(&zero, &g.nodes).unwrap().sup_norm() == 0.0);
        let bare = GridFunction::new(a, g.nodes.clone(), None, g.values.clone(), "x").unwrap();
        assert_eq!(truncated_fourier_at(&bare, &ts), Err(Error::GridMismatch));
    }

    #[test]
    fn fourier_norm_bound() {
        let a = 1.0;
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        use rand::Rng;
        for _ in 0..50 {
            let c: Vec<C64> = (0..6)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let w: Vec<f64> = (0..6).map(|_| rng.random_range(-4.0..4.0)).collect();
            let g = GridFunction::gauss(a, 80, |t| {
                c.iter().zip(&w).map(|(c, w)| c * C64::new(0.0, w * t).exp()).sum()
            })
            .unwrap();
            let y = truncated_fourier(&g, &g.nodes).unwrap();
            assert!(y.l2_norm().unwrap() <= g.l2_norm().unwrap() * (1.0 + 1e-8));
        }
    }

    #[test]
    fn constant_factor_is_pinned() {
        assert!((FOURIER_NORM - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-16);
        let a = 1.0;
        let x = DomainFunction::single(a, Piece::Psi(Endpoint::MinusA));
        let rep = commutator_residual(&x, &x.boundary_values(), &commutator_grid(a)).unwrap();
        assert!(rep.sup_residual < 1e-8, "{}", rep.sup_residual);
        // the unnormalized 2/a factor would leave an O(1) residual
        assert!((rep.sup_commutator - commutator_constant(a)).abs() < 1e-8);
    }

    #[test]
    fn smooth_and_zero_inputs() {
        let a = 1.0;
        let x = DomainFunction::single(a, Piece::Wave(0.7)).with(C64::new(0.3, -1.0), Piece::Power(4));
        let rep = commutator_residual(&x, &x.boundary_values(), &commutator_grid(a)).unwrap();
        assert!(rep.sup_residual < 1e-10);
        let z = DomainFunction::new(a);
        let rep = commutator_residual(&z, &z.boundary_values(), &commutator_grid(a)).unwrap();
        assert_eq!(rep.sup_residual, 0.0);
        assert!(rep.to_csv().lines().count() == 44);
    }

    #[test]
    fn pswf_proportionality_and_parity() {
        let a = 1.0;
        for (k, chi) in prolate_spectrum(30, a, 4).unwrap().iter().enumerate() {
            let (gamma, res) = pswf_fourier_check(chi, a).unwrap();
            assert!(res < 1e-10, "{k}: {res}");
            assert!(gamma.norm() <= 1.0);
            if k % 2 == 0 {
                assert!(gamma.im.abs() < 1e-12 * gamma.norm());
            } else {
                assert!(gamma.re.abs() < 1e-12 * gamma.norm());
            }
        }
    }

    #[test]
    fn witness_examples() {
        let a = 1.0;
        assert_eq!(
            noncommuting_witness(&UnitaryMatrix2::identity(), a),
            Err(Error::IsIdentity)
        );
        let w = noncommuting_witness(&UnitaryMatrix2::neg_identity(), a).unwrap();
        assert_eq!(w.case, WitnessCase::Commutator);
        assert!(w.image_endpoint_values.0.norm() < 1e-8 && w.image_endpoint_values.1.norm() < 1e-8);
        assert!((w.boundary_values.b_minus - 1.0).norm() < 1e-12 && w.boundary_values.c_minus.norm() < 1e-12);
        assert!((w.residual_norm - commutator_constant(a)).abs() < 1e-6);
        let w = noncommuting_witness(&UnitaryMatrix2::swap(), a).unwrap();
        assert!(w.residual_norm >= 0.1 * 2.0 / a);
    }
}
