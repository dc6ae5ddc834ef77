use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::Endpoint;
use crate::boundary_algebra::BoundaryCoordinates4;
use crate::error::{Error, Result};
use crate::functions::{DomainFunction, Piece};
use crate::legendre::QuadratureRule;
use crate::operator::{weight, Operator};

/// Relative spread of the extrapolated limits above which they are rejected.
pub const LIMIT_TOL: f64 = 1e-5;

const I: C64 = C64::new(0.0, 1.0);

/// `(b_{-a}, c_{-a}, b_a, c_a)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryValues {
    pub b_minus: C64,
    pub c_minus: C64,
    pub b_plus: C64,
    pub c_plus: C64,
}

impl BoundaryValues {
    pub fn as_array(&self) -> [C64; 4] {
        [self.b_minus, self.c_minus, self.b_plus, self.c_plus]
    }

    pub fn from_array(q: [C64; 4]) -> Self {
        Self {
            b_minus: q[0],
            c_minus: q[1],
            b_plus: q[2],
            c_plus: q[3],
        }
    }

    pub fn at(&self, endpoint: Endpoint) -> (C64, C64) {
        match endpoint {
            Endpoint::MinusA => (self.b_minus, self.c_minus),
            Endpoint::PlusA => (self.b_plus, self.c_plus),
        }
    }

    pub fn set(&mut self, endpoint: Endpoint, b: C64, c: C64) {
        match endpoint {
            Endpoint::MinusA => (self.b_minus, self.c_minus) = (b, c),
            Endpoint::PlusA => (self.b_plus, self.c_plus) = (b, c),
        }
    }

    pub fn coordinates(&self) -> BoundaryCoordinates4 {
        BoundaryCoordinates4::from_boundary_quadruple(self.as_array())
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Boundary values at either endpoint of `c1 x_1 + c2 x_2`: `(b, c) = (c2, -c1)`.
/// The result is independent of `lambda` and `a`.
pub fn boundary_values_series(c1: C64, c2: C64) -> (C64, C64) {
    (c2, -c1)
}

/// Extrapolated limits with their estimated error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericLimit {
    pub b: C64,
    pub c: C64,
    pub error: f64,
}

/// Fit `L + alpha s + beta s ln s + gamma s ln^2 s` and return `L`.
fn extrapolate(s: &[f64], f: &[C64]) -> C64 {
    let smax = s.iter().copied().fold(0.0, f64::max);
    let m = DMatrix::from_fn(s.len(), 4, |r, k| {
        let x = s[r] / smax;
        let l = s[r].ln();
        match k {
            0 => 1.0,
            1 => x,
            2 => x * l,
            _ => x * l * l / 10.0,
        }
    });
    let svd = m.svd(true, true);
    let re = svd
        .solve(&DVector::from_iterator(f.len(), f.iter().map(|z| z.re)), 1e-14)
        .expect("svd solve");
    let im = svd
        .solve(&DVector::from_iterator(f.len(), f.iter().map(|z| z.im)), 1e-14)
        .expect("svd solve");
    C64::new(re[0], im[0])
}

/// Generalized boundary values at `endpoint` from a callable returning
/// `(x, dx/dt)` at distance `s` from the endpoint.
///
/// The limits of `(t -/+ a) x'` and `(t -/+ a) ln(a +/- t) x' - x` are sampled at
/// `s_j = a 2^{-j}`, `j = j0..=j0+30`, and extrapolated on three overlapping windows.
/// `j0` starts at 10 and moves closer to the endpoint (up to 22) until the windows agree,
/// which covers solutions whose local scale is much smaller than `a`.
pub fn boundary_values_numeric<F>(x: F, endpoint: Endpoint, a: f64) -> Result<NumericLimit>
where
    F: Fn(f64) -> (C64, C64),
{
    let mut spread = f64::INFINITY;
    for j0 in [10, 14, 18, 22] {
        match limit_from(&x, endpoint, a, j0)? {
            Ok(lim) => return Ok(lim),
            Err(s) => spread = spread.min(s),
        }
    }
    Err(Error::NoConvergence { spread })
}

fn limit_from<F>(x: &F, endpoint: Endpoint, a: f64, j0: i32) -> Result<std::result::Result<NumericLimit, f64>>
where
    F: Fn(f64) -> (C64, C64),
{
    let o = endpoint.orientation();
    let mut s = Vec::new();
    let mut fb = Vec::new();
    let mut fc = Vec::new();
    let mut scale: f64 = 0.0;
    for j in j0..=j0 + 30 {
        let sj = a * 0.5f64.powi(j);
        let (v, d) = x(sj);
        if !(v.norm().is_finite() && d.norm().is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite sample at distance {sj:e}")));
        }
        let sd = d * (o * sj);
        s.push(sj);
        fb.push(sd);
        fc.push(sd * sj.ln() - v);
        scale = scale.max(v.norm() / sj.ln().abs().max(1.0)).max(sd.norm());
    }
    let windows = [(0usize, 21usize), (5, 26), (10, 31)];
    let ext = |f: &[C64]| -> Vec<C64> {
        windows
            .iter()
            .map(|&(lo, hi)| extrapolate(&s[lo..hi], &f[lo..hi]))
            .collect()
    };
    let eb = ext(&fb);
    let ec = ext(&fc);
    let (b, c) = (eb[2], ec[2]);
    let err = (0..2)
        .map(|k| (eb[k] - b).norm().max((ec[k] - c).norm()))
        .fold(0.0, f64::max);
    let denom = b.norm().max(c.norm()).max(scale).max(f64::MIN_POSITIVE);
    if err > LIMIT_TOL * denom {
        return Ok(Err(err / denom));
    }
    Ok(Ok(NumericLimit { b, c, error: err }))
}

/// Boundary values at `endpoint` from samples `(t_k, x_k)`, by least squares on
/// `{1, ln s} + {s^p, s^p ln s : p = 1..=P}` over the (at most 64) samples nearest the
/// endpoint within `a/4`; `P` is 5 with at least 40 such samples, 3 with at least 20, else 1.
pub fn boundary_values_from_samples(t: &[f64], x: &[C64], endpoint: Endpoint, a: f64) -> Result<(C64, C64)> {
    if t.len() != x.len() {
        return Err(Error::InvalidInput("sample arrays differ in length".into()));
    }
    let mut near: Vec<(f64, C64)> = t
        .iter()
        .zip(x)
        .map(|(&t, &v)| (endpoint.distance(t, a), v))
        .filter(|&(s, _)| s > 0.0 && s <= 0.25 * a)
        .collect();
    near.sort_by(|p, q| p.0.total_cmp(&q.0));
    near.truncate(64);
    if near.len() < 8 {
        return Err(Error::InvalidInput(format!(
            "need at least 8 samples within a/4 of the endpoint, got {}",
            near.len()
        )));
    }
    let smax = near.last().unwrap().0;
    let powers = match near.len() {
        40.. => 5,
        20.. => 3,
        _ => 1,
    };
    let m = DMatrix::from_fn(near.len(), 2 + 2 * powers, |r, k| {
        let s = near[r].0;
        let base = if k % 2 == 0 { 1.0 } else { s.ln() };
        base * (s / smax).powi((k / 2) as i32)
    });
    let svd = m.svd(true, true);
    let solve = |g: fn(&C64) -> f64| {
        svd.solve(&DVector::from_iterator(near.len(), near.iter().map(|p| g(&p.1))), 1e-14)
            .map_err(|e| Error::InvalidInput(e.to_string()))
    };
    let re = solve(|z| z.re)?;
    let im = solve(|z| z.im)?;
    Ok((C64::new(re[1], im[1]), -C64::new(re[0], im[0])))
}

/// The concomitant `[x, y](t) = -p(t) (x' conj(y) - x conj(y'))`.
pub fn concomitant(x: (C64, C64), y: (C64, C64), t: f64, a: f64) -> C64 {
    -(x.1 * y.0.conj() - x.0 * y.1.conj()) * weight(t, a)
}

/// `Omega(x, y) = -i ([x, y](a) - [x, y](-a))` from the boundary values.
pub fn omega_from_boundary_values(x: &BoundaryValues, y: &BoundaryValues, a: f64) -> C64 {
    let part = |bx: C64, cx: C64, by: C64, cy: C64| bx * cy.conj() - cx * by.conj();
    I * (2.0 / a) * (part(x.b_minus, x.c_minus, y.b_minus, y.c_minus) + part(x.b_plus, x.c_plus, y.b_plus, y.c_plus))
}

/// `Omega(x, y) = -i (<Mx, y> - <x, My>)` by graded quadrature.
pub fn omega_quadrature(x: &DomainFunction, y: &DomainFunction, op: Operator) -> C64 {
    let a = x.half_width;
    let rule = QuadratureRule::graded_default(a);
    let mut acc = C64::default();
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (jx, jy) = (x.jet(t), y.jet(t));
        let lx = op.apply(&jx, t, a);
        let ly = op.apply(&jy, t, a);
        acc += (lx * jy.value.conj() - jx.value * ly.conj()) * w;
    }
    -I * acc
}

fn cutoff_basis(a: f64) -> [DomainFunction; 4] {
    [
        DomainFunction::single(a, Piece::Phi(Endpoint::MinusA)),
        DomainFunction::single(a, Piece::Psi(Endpoint::MinusA)),
        DomainFunction::single(a, Piece::Phi(Endpoint::PlusA)),
        DomainFunction::single(a, Piece::Psi(Endpoint::PlusA)),
    ]
}

fn numeric_boundary_values(f: &DomainFunction) -> Result<BoundaryValues> {
    let a = f.half_width;
    let mut bv = BoundaryValues::default();
    for ep in [Endpoint::MinusA, Endpoint::PlusA] {
        let lim = boundary_values_numeric(
            |s| {
                let j = f.jet_near(ep, s);
                (j.value, j.d1)
            },
            ep,
            a,
        )?;
        bv.set(ep, lim.b, lim.c);
    }
    Ok(bv)
}

impl DomainFunction {
    /// Boundary values by numerical limits.
    pub fn boundary_values_numeric(&self) -> Result<BoundaryValues> {
        numeric_boundary_values(self)
    }
}

/// Rows `(b_{-a}, c_{-a}, b_a, c_a)` of `phi_-, psi_-, phi_+, psi_+` by numerical limits.
pub fn rewr_matrix(a: f64) -> Result<Matrix4<C64>> {
    let mut m = Matrix4::zeros();
    for (r, f) in cutoff_basis(a).iter().enumerate() {
        let q = numeric_boundary_values(f)?.as_array();
        for k in 0..4 {
            m[(r, k)] = q[k];
        }
    }
    Ok(m)
}

/// `(a/2) Omega` on the cutoff basis, by quadrature of `<Mx, y> - <x, My>`.
pub fn gram_matrix_quadrature(a: f64) -> Matrix4<C64> {
    let basis = cutoff_basis(a);
    Matrix4::from_fn(|r, k| omega_quadrature(&basis[r], &basis[k], Operator::Legendre) * (a / 2.0))
}

/// `(a/2) Omega` on the cutoff basis, from numerically extracted boundary values.
pub fn gram_matrix_limits(a: f64) -> Result<Matrix4<C64>> {
    let bvs = cutoff_basis(a)
        .iter()
        .map(numeric_boundary_values)
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix4::from_fn(|r, k| {
        omega_from_boundary_values(&bvs[r], &bvs[k], a) * (a / 2.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_algebra::{j_matrix, max_abs};
    use crate::endpoint_forms::frobenius_pair;

    #[test]
    fn series_boundary_values() {
        assert_eq!(
            boundary_values_series(C64::new(1.0, 0.0), C64::default()),
            (C64::default(), C64::new(-1.0, 0.0))
        );
        assert_eq!(
            boundary_values_series(C64::default(), C64::new(1.0, 0.0)),
            (C64::new(1.0, 0.0), C64::default())
        );
        let (b, c) = boundary_values_series(C64::new(2.0, 0.0), C64::new(0.0, 3.0));
        assert_eq!((b, c), (C64::new(0.0, 3.0), C64::new(-2.0, 0.0)));
    }

    #[test]
    fn series_and_numeric_agree() {
        let a = 1.0;
        let (c1, c2) = (C64::new(2.0, 0.0), C64::new(0.0, 3.0));
        for ep in [Endpoint::MinusA, Endpoint::PlusA] {
            for pot in [false, true] {
                let (x1, x2) = frobenius_pair(C64::new(1.0, 0.0), ep, a, 40, pot).unwrap();
                let lim = boundary_values_numeric(
                    |s| {
                        let (j1, j2) = (x1.eval_at_distance(s).unwrap(), x2.eval_at_distance(s).unwrap());
                        (j1.value * c1 + j2.value * c2, j1.d1 * c1 + j2.d1 * c2)
                    },
                    ep,
                    a,
                )
                .unwrap();
                let (b, c) = boundary_values_series(c1, c2);
                assert!(
                    (lim.b - b).norm() < 1e-6 && (lim.c - c).norm() < 1e-6,
                    "{ep:?}: {lim:?}"
                );
            }
        }
    }

    #[test]
    fn numeric_limits_of_simple_functions() {
        let a = 1.0;
        let lim =
            boundary_values_numeric(|s| (C64::new(s.ln(), 0.0), C64::new(1.0 / s, 0.0)), Endpoint::MinusA, a).unwrap();
        assert!((lim.b - 1.0).norm() < 1e-12 && lim.c.norm() < 1e-12);
        let lim = boundary_values_numeric(|_| (C64::new(1.0, 0.0), C64::default()), Endpoint::PlusA, a).unwrap();
        assert!(lim.b.norm() == 0.0 && (lim.c + 1.0).norm() < 1e-14);
        // smooth: x = cos t near +a
        let lim = boundary_values_numeric(
            |s| {
                let t = a - s;
                (C64::new(t.cos(), 0.0), C64::new(-t.sin(), 0.0))
            },
            Endpoint::PlusA,
            a,
        )
        .unwrap();
        assert!(lim.b.norm() < 1e-10 && (lim.c + a.cos()).norm() < 1e-10);
    }

    #[test]
    fn wild_function_rejected() {
        let r = boundary_values_numeric(
            |s| (C64::new(1.0 / s, 0.0), C64::new(-1.0 / (s * s), 0.0)),
            Endpoint::MinusA,
            1.0,
        );
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn sampled_fit() {
        let a = 1.0;
        let t: Vec<f64> = (1..200).map(|k| -a + a * 0.25 * (k as f64 / 200.0).powi(2)).collect();
        let x: Vec<C64> = t
            .iter()
            .map(|&t| C64::new(3.0 * (a + t).ln() - 2.0 + 0.5 * t, 0.0))
            .collect();
        let (b, c) = boundary_values_from_samples(&t, &x, Endpoint::MinusA, a).unwrap();
        assert!(
            (b - 3.0).norm() < 1e-9 && (c - (2.0 + 0.5 * a)).norm() < 1e-9,
            "{b} {c}"
        );
    }

    #[test]
    fn concomitant_examples() {
        let r = concomitant(
            (C64::new(1.0, 0.0), C64::default()),
            (C64::default(), C64::new(1.0, 0.0)),
            0.0,
            1.0,
        );
        assert_eq!(r, C64::new(1.0, 0.0));
        let x = (C64::new(0.3, 0.0), C64::new(-1.2, 0.0));
        assert_eq!(concomitant(x, x, 0.4, 1.0), C64::default());
        let x = (C64::new(0.3, 0.7), C64::new(-1.2, 0.1));
        let y = (C64::new(-0.5, 2.0), C64::new(0.4, -0.9));
        let (p, q) = (concomitant(x, y, 0.2, 1.3), concomitant(y, x, 0.2, 1.3));
        assert!((p + q.conj()).norm() < 1e-15);
        assert!(concomitant(x, x, 0.2, 1.3).re.abs() < 1e-15);
    }

    #[test]
    fn rewr_and_gram() {
        for a in [0.5, 1.0, 2.0] {
            let rewr = rewr_matrix(a).unwrap();
            let expected = Matrix4::new(
                0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0,
            )
            .map(|x| C64::new(x, 0.0));
            assert!(max_abs(&(rewr - expected)) < 1e-8, "{rewr}");
            let gl = gram_matrix_limits(a).unwrap();
            assert!(max_abs(&(gl - j_matrix())) < 1e-8);
            let gq = gram_matrix_quadrature(a);
            assert!(max_abs(&(gq - j_matrix())) < 1e-6, "{gq}");
        }
    }

    #[test]
    fn omega_phi_psi_value() {
        let a = 1.5;
        let f = DomainFunction::single(a, Piece::Phi(Endpoint::MinusA));
        let g = DomainFunction::single(a, Piece::Psi(Endpoint::MinusA));
        let w = omega_quadrature(&f, &g, Operator::Legendre);
        assert!((w - I * (2.0 / a)).norm() < 1e-8);
        let f = DomainFunction::single(a, Piece::Phi(Endpoint::PlusA));
        let g = DomainFunction::single(a, Piece::Psi(Endpoint::PlusA));
        let w = omega_quadrature(&f, &g, Operator::Prolate);
        assert!((w - I * (2.0 / a)).norm() < 1e-8);
    }

    #[test]
    fn green_identity_on_interval() {
        let a = 1.0;
        let x = DomainFunction::single(a, Piece::Wave(1.3)).with(C64::new(0.5, 0.0), Piece::Power(3));
        let y = DomainFunction::single(
            a,
            Piece::Bump {
                center: 0.0,
                width: 1.0,
            },
        )
        .with(C64::new(0.0, 1.0), Piece::Power(2));
        let (lo, hi) = (-0.6, 0.45);
        let rule = crate::legendre::gauss_legendre(200).unwrap().mapped(lo, hi);
        let lhs: C64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| {
                (x.apply(Operator::Legendre, t) * y.value(t).conj()
                    - x.value(t) * y.apply(Operator::Legendre, t).conj())
                    * w
            })
            .sum();
        let br = |t: f64| {
            let (jx, jy) = (x.jet(t), y.jet(t));
            concomitant((jx.value, jx.d1), (jy.value, jy.d1), t, a)
        };
        assert!((lhs - (br(hi) - br(lo))).norm() < 1e-8);
    }
}
