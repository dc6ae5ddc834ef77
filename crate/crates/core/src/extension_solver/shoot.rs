use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;

use super::{connection, Connection, DenseMarch};
use crate::boundary_algebra::{boundary_condition_matrix, UnitaryMatrix2};
use crate::endpoint_forms::{BoundaryValues, Endpoint};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::legendre::QuadratureRule;
use crate::operator::{Jet, Operator};

/// Singular values of the secular system below this fraction of its scale count as zero.
pub const NULL_TOL: f64 = 1e-6;

/// An eigenfunction of `L_U`, `alpha x_1^- + beta x_2^-` on `t < 0` and
/// `gamma x_1^+ + delta x_2^+` on `t >= 0`, normalized in `L^2`.
#[derive(Debug, Clone)]
pub struct ShotEigenfunction {
    pub lambda: f64,
    pub alpha: C64,
    pub beta: C64,
    /// `(gamma, delta)`: coefficients of `x_1^+`, `x_2^+`.
    pub plus: (C64, C64),
    pub connection: Connection,
    /// `x_1^+`, `x_2^+` marched from `a - handoff` back to `0`.
    pub right: Arc<DenseMarch>,
}

impl ShotEigenfunction {
    fn scaled(self, c: C64) -> Self {
        Self {
            alpha: self.alpha * c,
            beta: self.beta * c,
            plus: (self.plus.0 * c, self.plus.1 * c),
            ..self
        }
    }

    pub fn half_width(&self) -> f64 {
        self.connection.half_width
    }

    /// Jet at distance `s` from `endpoint`.
    pub fn jet_near(&self, endpoint: Endpoint, s: f64) -> Jet {
        let a = self.half_width();
        if s <= self.connection.handoff {
            let ((x1, x2), (c1, c2)) = match endpoint {
                Endpoint::MinusA => (&self.connection.minus, (self.alpha, self.beta)),
                Endpoint::PlusA => (&self.connection.plus, self.plus),
            };
            let j1 = x1.eval_at_distance(s).expect("within series radius");
            let j2 = x2.eval_at_distance(s).expect("within series radius");
            return j1.scale(c1) + j2.scale(c2);
        }
        self.jet(endpoint.point(s, a))
    }

    pub fn jet(&self, t: f64) -> Jet {
        let a = self.half_width();
        let sh = self.connection.handoff;
        if a + t <= sh {
            return self.jet_near(Endpoint::MinusA, a + t);
        }
        if a - t <= sh {
            return self.jet_near(Endpoint::PlusA, a - t);
        }
        let (m, (c1, c2)) = if t < 0.0 {
            (&self.connection.march, (self.alpha, self.beta))
        } else {
            (&*self.right, self.plus)
        };
        let (v1, d1, e1) = m.eval(0, t).expect("inside march span");
        let (v2, d2, e2) = m.eval(1, t).expect("inside march span");
        Jet::real(v1, d1, e1).scale(c1) + Jet::real(v2, d2, e2).scale(c2)
    }

    pub fn value(&self, t: f64) -> C64 {
        self.jet(t).value
    }

    /// Closed-form boundary values from the series coefficients.
    pub fn boundary_values(&self) -> BoundaryValues {
        BoundaryValues {
            b_minus: self.beta,
            c_minus: -self.alpha,
            b_plus: self.plus.1,
            c_plus: -self.plus.0,
        }
    }

    pub fn sample(&self, rule: &QuadratureRule, family: &str) -> Result<GridFunction> {
        GridFunction::from_rule(self.half_width(), rule, family, |t| self.value(t))
    }

    /// Samples on the endpoint-graded rule.
    pub fn grid(&self) -> Result<GridFunction> {
        self.sample(&QuadratureRule::graded_default(self.half_width()), "graded")
    }
}

fn secular_system(op: Operator, u: &UnitaryMatrix2, a: f64, lambda: f64) -> Result<(Connection, Matrix2<C64>, f64)> {
    let conn = connection(op, a, lambda)?;
    let b = boundary_condition_matrix(u);
    let w = conn.boundary_columns();
    let scale = b.norm() * w.norm();
    Ok((conn, b * w, scale))
}

/// Right singular vectors with singular value at most `tol * scale`, and the smallest
/// relative singular value.
fn null_vectors(m: &Matrix2<C64>, scale: f64, tol: f64) -> (Vec<(C64, C64)>, f64) {
    let svd = m.svd(true, true);
    let vt = svd.v_t.expect("requested");
    let mut idx: Vec<usize> = vec![0, 1];
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let smin = svd.singular_values[idx[0]] / scale;
    let vecs = idx
        .iter()
        .filter(|&&i| svd.singular_values[i] <= tol * scale)
        .map(|&i| (vt[(i, 0)].conj(), vt[(i, 1)].conj()))
        .collect();
    (vecs, smin)
}

fn smallest_singular(m: &Matrix2<C64>, scale: f64) -> f64 {
    m.singular_values().min() / scale
}

fn normalize(f: ShotEigenfunction) -> Result<ShotEigenfunction> {
    let g = f.grid()?;
    let norm = g.l2_norm()?;
    let peak = g.sup_norm();
    let first = g
        .values
        .iter()
        .find(|v| v.norm() > 1e-8 * peak)
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = first.conj() / first.norm();
    Ok(f.scaled(phase / norm))
}

/// All eigenfunctions of `L_U` at `lambda` (one or two).
///
/// When the secular system is steep enough that the nearest double to the root leaves
/// its smallest singular value above `NULL_TOL`, `lambda` is still accepted if moving it
/// by a few ulps changes that singular value by as much as its size.
pub fn eigenfunctions_shoot(op: Operator, u: &UnitaryMatrix2, a: f64, lambda: f64) -> Result<Vec<ShotEigenfunction>> {
    let (conn, m, scale) = secular_system(op, u, a, lambda)?;
    let (mut vecs, sigma_min) = null_vectors(&m, scale, NULL_TOL);
    if vecs.is_empty() {
        let delta = 16.0 * f64::EPSILON * lambda.abs().max(1.0);
        let mut spread: f64 = 0.0;
        for l in [lambda - delta, lambda + delta] {
            let (_, ml, sl) = secular_system(op, u, a, l)?;
            spread += (smallest_singular(&ml, sl) - sigma_min).abs();
        }
        if sigma_min <= 2.0 * spread {
            vecs = null_vectors(&m, scale, sigma_min * (1.0 + 1e-12)).0;
        }
    }
    if vecs.is_empty() {
        return Err(Error::NotAnEigenvalue { lambda, sigma_min });
    }
    let right = Arc::new(right_march(&conn)?);
    let mut out: Vec<ShotEigenfunction> = Vec::new();
    for [alpha, beta, gamma, delta] in midpoint_null_vectors(&conn, &right, u, vecs.len())? {
        let f = ShotEigenfunction {
            lambda,
            alpha,
            beta,
            plus: (gamma, delta),
            connection: conn.clone(),
            right: right.clone(),
        };
        out.push(normalize(f)?);
    }
    Ok(out)
}

fn right_march(conn: &Connection) -> Result<DenseMarch> {
    let (a, sh) = (conn.half_width, conn.handoff);
    let seed = |f: &crate::endpoint_forms::FrobeniusSolution| -> Result<(f64, f64)> {
        let j = f.eval_at_distance(sh)?;
        Ok((j.value.re, j.d1.re))
    };
    let start = [seed(&conn.plus.0)?, seed(&conn.plus.1)?];
    DenseMarch::run(conn.lambda, a, conn.op.has_potential(), a - sh, 0.0, &start)
}

/// The `k` smallest right singular vectors of the system for `(alpha, beta, gamma, delta)`:
/// value and slope continuity at `t = 0` and `B(U) (beta, -alpha, delta, -gamma)^T = 0`.
/// Matching at the midpoint keeps solutions that decay towards one end from being
/// swamped by the growing mode of the march from the other end.
fn midpoint_null_vectors(conn: &Connection, right: &DenseMarch, u: &UnitaryMatrix2, k: usize) -> Result<Vec<[C64; 4]>> {
    let state = |m: &DenseMarch, i: usize| -> Result<(f64, f64)> {
        let (v, d, _) = m.eval(i, 0.0).ok_or(Error::MarchFailure {
            t: 0.0,
            reason: "midpoint outside march".into(),
        })?;
        Ok((v, d))
    };
    let (l1, l2) = (state(&conn.march, 0)?, state(&conn.march, 1)?);
    let (r1, r2) = (state(right, 0)?, state(right, 1)?);
    let b = boundary_condition_matrix(u);
    let mut m = DMatrix::<C64>::zeros(4, 4);
    let rows = [[l1.0, l2.0, -r1.0, -r2.0], [l1.1, l2.1, -r1.1, -r2.1]];
    for (i, row) in rows.iter().enumerate() {
        let n = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = C64::new(x / n, 0.0);
        }
    }
    for i in 0..2 {
        // (b_-, c_-, b_+, c_+) = (beta, -alpha, delta, -gamma)
        let row = [-b[(i, 1)], b[(i, 0)], -b[(i, 3)], b[(i, 2)]];
        let n = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (j, z) in row.iter().enumerate() {
            m[(i + 2, j)] = z / n;
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    Ok(idx
        .iter()
        .take(k)
        .map(|&i| [0, 1, 2, 3].map(|j| vt[(i, j)].conj()))
        .collect())
}

/// The eigenfunction of the prolate extension `L_U` at a converged eigenvalue,
/// unit `L^2` norm, phase fixed by the first sample being real positive.
pub fn eigenfunction_shoot(u: &UnitaryMatrix2, a: f64, lambda: f64) -> Result<GridFunction> {
    let f = eigenfunctions_shoot(Operator::Prolate, u, a, lambda)?;
    f[0].grid()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endpoint_forms::omega_from_boundary_values;
    use crate::extension_solver::eigenvalues_scan;
    use crate::legendre::prolate_spectrum;

    #[test]
    fn identity_eigenfunction_matches_galerkin() {
        let a = 1.0;
        let spec = prolate_spectrum(30, a, 3).unwrap();
        for p in &spec {
            let g = eigenfunction_shoot(&UnitaryMatrix2::identity(), a, p.lambda).unwrap();
            assert!((g.l2_norm().unwrap() - 1.0).abs() < 1e-12);
            let chi = g.map_values(|t, _| p.eigenfunction.eval(t));
            let s = g.inner(&chi).unwrap();
            let diff = g.sub(&chi.scaled(s / s.norm())).unwrap().l2_norm().unwrap();
            assert!(diff < 1e-6, "{diff}");
        }
    }

    #[test]
    fn not_an_eigenvalue() {
        let r = eigenfunction_shoot(&UnitaryMatrix2::identity(), 1.0, 1.0);
        assert!(matches!(r, Err(Error::NotAnEigenvalue { .. })));
    }

    #[test]
    fn neg_identity_ground_state_has_zero_c() {
        let a = 1.0;
        let u = UnitaryMatrix2::neg_identity();
        let ev = eigenvalues_scan(&u, a, -100.0, 10.0, 1e-12).unwrap();
        let f = &eigenfunctions_shoot(Operator::Prolate, &u, a, ev[0]).unwrap()[0];
        for ep in [Endpoint::MinusA, Endpoint::PlusA] {
            let lim = crate::endpoint_forms::boundary_values_numeric(
                |s| {
                    let j = f.jet_near(ep, s);
                    (j.value, j.d1)
                },
                ep,
                a,
            )
            .unwrap();
            assert!(lim.c.norm() < 1e-6, "{ep:?} {lim:?}");
            assert!(lim.b.norm() > 1e-3);
        }
    }

    #[test]
    fn eigenfunctions_are_omega_orthogonal() {
        let a = 1.0;
        let u = UnitaryMatrix2::swap();
        let ev = eigenvalues_scan(&u, a, -100.0, 30.0, 1e-12).unwrap();
        let f = &eigenfunctions_shoot(Operator::Prolate, &u, a, ev[0]).unwrap()[0];
        let g = &eigenfunctions_shoot(Operator::Prolate, &u, a, ev[1]).unwrap()[0];
        let (bf, bg) = (f.boundary_values(), g.boundary_values());
        for (x, y) in [(bf, bg), (bf, bf), (bg, bg), (bg, bf)] {
            assert!(omega_from_boundary_values(&x, &y, a).norm() < 1e-6);
        }
    }
}
