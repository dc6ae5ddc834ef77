//! Power-series solutions at the regular singular endpoints.
//!
//! In the local variable `s` (distance to the endpoint) the eigenvalue equation
//! reads `s(2a - s) y'' + 2(a - s) y' + a^2 (lambda - q(s)) y = 0` at both ends,
//! with `q(s) = (a - s)^2` for the prolate operator and `q = 0` for the Legendre
//! operator. The indicial root is `0` (double), so one solution is analytic and
//! the other carries `ln s`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Jet;

/// Default series length.
pub const DEFAULT_TERMS: usize = 40;
const MAX_TERMS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    MinusA,
    PlusA,
}

impl Endpoint {
    /// `ds/dt`: `+1` at `-a`, `-1` at `+a`.
    pub fn orientation(self) -> f64 {
        match self {
            Endpoint::MinusA => 1.0,
            Endpoint::PlusA => -1.0,
        }
    }

    pub fn location(self, a: f64) -> f64 {
        -self.orientation() * a
    }

    pub fn distance(self, t: f64, a: f64) -> f64 {
        match self {
            Endpoint::MinusA => a + t,
            Endpoint::PlusA => a - t,
        }
    }

    pub fn point(self, s: f64, a: f64) -> f64 {
        self.location(a) + self.orientation() * s
    }

    pub fn opposite(self) -> Self {
        match self {
            Endpoint::MinusA => Endpoint::PlusA,
            Endpoint::PlusA => Endpoint::MinusA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    Regular,
    Logarithmic,
}

/// `x_1 = sum c_n s^n` (regular) or `x_2 = x_1 ln s + w`, `w = sum z_n s^n` (logarithmic).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusSolution {
    pub endpoint: Endpoint,
    pub lambda: C64,
    pub half_width: f64,
    pub potential_on: bool,
    pub kind: SolutionKind,
    /// Coefficients `c_n` of `x_1`.
    pub analytic_coeffs: Vec<C64>,
    /// Coefficients `z_n` of `w`; empty for the regular solution.
    pub log_coeffs: Vec<C64>,
    pub order: usize,
}

fn potential_coeffs(a: f64, potential_on: bool) -> [f64; 3] {
    if potential_on {
        [a * a, -2.0 * a, 1.0]
    } else {
        [0.0; 3]
    }
}

fn lagged(v: &[C64], n: usize, k: usize) -> C64 {
    if n >= k {
        v[n - k]
    } else {
        C64::default()
    }
}

fn regular_coeffs(lambda: C64, a: f64, n_terms: usize, q: [f64; 3]) -> Vec<C64> {
    let a2 = a * a;
    let mut c = vec![C64::default(); n_terms];
    c[0] = C64::new(1.0, 0.0);
    for n in 0..n_terms - 1 {
        let nf = n as f64;
        let num = c[n] * (nf * (nf + 1.0) + a2 * q[0]) - c[n] * lambda * a2
            + a2 * (q[1] * lagged(&c, n, 1) + q[2] * lagged(&c, n, 2));
        c[n + 1] = num / (2.0 * a * (nf + 1.0) * (nf + 1.0));
    }
    c
}

fn log_part_coeffs(c: &[C64], lambda: C64, a: f64, q: [f64; 3]) -> Vec<C64> {
    let n_terms = c.len();
    let a2 = a * a;
    let mut z = vec![C64::default(); n_terms];
    for n in 0..n_terms - 1 {
        let nf = n as f64;
        let r = c[n] * (2.0 * nf + 1.0) - c[n + 1] * (4.0 * a * (nf + 1.0));
        let num = r + z[n] * (nf * (nf + 1.0) + a2 * q[0]) - z[n] * lambda * a2
            + a2 * (q[1] * lagged(&z, n, 1) + q[2] * lagged(&z, n, 2));
        z[n + 1] = num / (2.0 * a * (nf + 1.0) * (nf + 1.0));
    }
    z
}

/// The regular and logarithmic solutions at `endpoint`, truncated to `n_terms`.
pub fn frobenius_pair(
    lambda: C64,
    endpoint: Endpoint,
    a: f64,
    n_terms: usize,
    potential_on: bool,
) -> Result<(FrobeniusSolution, FrobeniusSolution)> {
    if n_terms < 4 {
        return Err(Error::TruncationTooShort { n_terms });
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("half-width must be positive, got {a}")));
    }
    let q = potential_coeffs(a, potential_on);
    let c = regular_coeffs(lambda, a, n_terms, q);
    let z = log_part_coeffs(&c, lambda, a, q);
    let base = FrobeniusSolution {
        endpoint,
        lambda,
        half_width: a,
        potential_on,
        kind: SolutionKind::Regular,
        analytic_coeffs: c,
        log_coeffs: Vec::new(),
        order: n_terms,
    };
    let log = FrobeniusSolution {
        kind: SolutionKind::Logarithmic,
        log_coeffs: z,
        ..base.clone()
    };
    Ok((base, log))
}

/// Like [`frobenius_pair`], doubling the length from [`DEFAULT_TERMS`] until the
/// tail terms at distance `s_max` drop below `1e-17` of the largest term.
pub fn frobenius_pair_auto(
    lambda: C64,
    endpoint: Endpoint,
    a: f64,
    potential_on: bool,
    s_max: f64,
) -> Result<(FrobeniusSolution, FrobeniusSolution)> {
    let mut n = DEFAULT_TERMS;
    loop {
        let pair = frobenius_pair(lambda, endpoint, a, n, potential_on)?;
        let tail = pair.1.tail_ratio(s_max);
        if tail < 1e-17 {
            return Ok(pair);
        }
        if n >= MAX_TERMS {
            return Err(Error::NoConvergence { spread: tail });
        }
        n *= 2;
    }
}

fn horner(coeffs: &[C64], s: f64) -> (C64, C64, C64) {
    let mut v = C64::default();
    let mut d1 = C64::default();
    let mut d2 = C64::default();
    for &c in coeffs.iter().rev() {
        d2 = d2 * s + 2.0 * d1;
        d1 = d1 * s + v;
        v = v * s + c;
    }
    (v, d1, d2)
}

impl FrobeniusSolution {
    /// Largest of the last four terms at `s` relative to the largest term.
    pub fn tail_ratio(&self, s: f64) -> f64 {
        let terms = |v: &[C64]| -> Vec<f64> {
            let mut p = 1.0;
            v.iter()
                .map(|c| {
                    let t = c.norm() * p;
                    p *= s;
                    t
                })
                .collect()
        };
        let mut all = terms(&self.analytic_coeffs);
        let w = terms(&self.log_coeffs);
        let k = all.len();
        let big = all.iter().chain(&w).copied().fold(1.0, f64::max);
        let tail = all
            .drain(k - 4..)
            .chain(w.iter().rev().take(4).copied())
            .fold(0.0, f64::max);
        tail / big
    }

    /// Accuracy radius: evaluations are allowed for `0 <= s <= a`.
    pub fn radius(&self) -> f64 {
        self.half_width
    }

    /// Value and first two derivatives with respect to `s`.
    pub fn eval_local(&self, s: f64) -> Result<Jet> {
        if !(s >= 0.0) || s > self.radius() {
            return Err(Error::OutOfRadius {
                distance: s,
                radius: self.radius(),
            });
        }
        let (v, d1, d2) = horner(&self.analytic_coeffs, s);
        match self.kind {
            SolutionKind::Regular => Ok(Jet::new(v, d1, d2)),
            SolutionKind::Logarithmic => {
                if s == 0.0 {
                    return Err(Error::InvalidInput("logarithmic solution is singular at s = 0".into()));
                }
                let (w, w1, w2) = horner(&self.log_coeffs, s);
                let l = s.ln();
                Ok(Jet::new(
                    v * l + w,
                    d1 * l + v / s + w1,
                    d2 * l + 2.0 * d1 / s - v / (s * s) + w2,
                ))
            }
        }
    }

    /// Jet with respect to `t` at distance `s` from the endpoint.
    pub fn eval_at_distance(&self, s: f64) -> Result<Jet> {
        let j = self.eval_local(s)?;
        let o = self.endpoint.orientation();
        Ok(Jet::new(j.value, j.d1 * o, j.d2))
    }

    /// Jet with respect to `t`.
    pub fn eval_jet(&self, t: f64) -> Result<Jet> {
        self.eval_at_distance(self.endpoint.distance(t, self.half_width))
    }

    /// The holomorphic part `w` of the logarithmic solution (zero for the regular one).
    pub fn eval_w(&self, t: f64) -> Result<C64> {
        let s = self.endpoint.distance(t, self.half_width);
        if !(s >= 0.0) || s > self.radius() {
            return Err(Error::OutOfRadius {
                distance: s,
                radius: self.radius(),
            });
        }
        Ok(horner(&self.log_coeffs, s).0)
    }

    /// `s(2a - s) y'' + 2(a - s) y' + a^2(lambda - q) y` and the sum of the term magnitudes.
    pub fn ode_residual(&self, s: f64) -> Result<(C64, f64)> {
        let a = self.half_width;
        let j = self.eval_local(s)?;
        let q = if self.potential_on { (a - s) * (a - s) } else { 0.0 };
        let t1 = j.d2 * (s * (2.0 * a - s));
        let t2 = j.d1 * (2.0 * (a - s));
        let t3 = j.value * (self.lambda - q) * (a * a);
        Ok((t1 + t2 + t3, t1.norm() + t2.norm() + t3.norm()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serializes")
    }
}

/// `(value, d/dt)` at `t`.
pub fn eval_solution(sol: &FrobeniusSolution, t: f64) -> Result<(C64, C64)> {
    let j = sol.eval_jet(t)?;
    Ok((j.value, j.d1))
}

/// Taylor coefficients of `f` and `g` in `y'' + (f/s) y' + (g/s) y = 0`.
pub fn normal_form_coefficients(lambda: C64, a: f64, potential_on: bool, n: usize) -> (Vec<f64>, Vec<C64>) {
    // 1/(2a - s) = sum s^k / (2a)^{k+1}
    let inv: Vec<f64> = (0..n).map(|k| (2.0 * a).powi(-(k as i32) - 1)).collect();
    let q = potential_coeffs(a, potential_on);
    let mut f = vec![0.0; n];
    let mut g = vec![C64::default(); n];
    for k in 0..n {
        f[k] = 2.0 * a * inv[k] - if k > 0 { 2.0 * inv[k - 1] } else { 0.0 };
        let mut acc = lambda * inv[k] - q[0] * inv[k];
        if k >= 1 {
            acc -= q[1] * inv[k - 1];
        }
        if k >= 2 {
            acc -= q[2] * inv[k - 2];
        }
        g[k] = acc * (a * a);
    }
    (f, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn constants_solve_at_zero() {
        let (x1, _) = frobenius_pair(c(0.0), Endpoint::MinusA, 1.0, 20, false).unwrap();
        assert_eq!(x1.analytic_coeffs[0], c(1.0));
        assert!(x1.analytic_coeffs[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn log_solution_closed_form_at_zero() {
        for (a, ep) in [(1.0, Endpoint::MinusA), (0.7, Endpoint::PlusA), (2.0, Endpoint::MinusA)] {
            let (_, x2) = frobenius_pair(c(0.0), ep, a, 60, false).unwrap();
            let t = ep.point(a / 4.0, a);
            let (v, d) = eval_solution(&x2, t).unwrap();
            // ln(2a) + ln(s / (2a - s)) with s the endpoint distance
            let s = ep.distance(t, a);
            let exact = (2.0 * a).ln() + (s / (2.0 * a - s)).ln();
            let dexact = ep.orientation() * (1.0 / s + 1.0 / (2.0 * a - s));
            assert!((v - exact).norm() < 1e-10, "{v} vs {exact}");
            assert!((d - dexact).norm() < 1e-10);
        }
    }

    #[test]
    fn ode_residual_small() {
        for lam in [0.0, 1.0, 3.0, 10.0] {
            for pot in [false, true] {
                let (x1, x2) = frobenius_pair(c(lam), Endpoint::MinusA, 1.0, 40, pot).unwrap();
                for k in 1..=20 {
                    let s = 0.5 * k as f64 / 20.0;
                    for sol in [&x1, &x2] {
                        let (r, scale) = sol.ode_residual(s).unwrap();
                        assert!(r.norm() < 1e-8 * scale.max(1.0), "lam={lam} s={s}: {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn normalizations() {
        let (x1, x2) = frobenius_pair(C64::new(2.0, 1.0), Endpoint::PlusA, 1.5, 30, true).unwrap();
        assert_eq!(eval_solution(&x1, 1.5).unwrap().0, c(1.0));
        assert_eq!(x2.eval_w(1.5).unwrap(), c(0.0));
        assert!(x1.eval_w(1.0).unwrap().norm() == 0.0);
    }

    #[test]
    fn log_leading_term() {
        let (_, x2) = frobenius_pair(c(0.0), Endpoint::MinusA, 1.0, 40, false).unwrap();
        let v = x2.eval_at_distance(1e-6).unwrap().value;
        let l = (1e-6f64).ln();
        assert!(((v.re - l) / l).abs() < 1e-4);
    }

    #[test]
    fn radius_guard_and_truncation() {
        let (x1, _) = frobenius_pair(c(1.0), Endpoint::MinusA, 1.0, 10, true).unwrap();
        assert!(matches!(x1.eval_jet(0.5), Err(Error::OutOfRadius { .. })));
        assert!(x1.eval_jet(0.0).is_ok());
        assert!(matches!(
            frobenius_pair(c(1.0), Endpoint::MinusA, 1.0, 3, true),
            Err(Error::TruncationTooShort { n_terms: 3 })
        ));
    }

    #[test]
    fn normal_form_checks() {
        for a in [0.5, 1.0, 3.0] {
            let lam = C64::new(2.5, -0.5);
            let (f, g) = normal_form_coefficients(lam, a, false, 4);
            assert!((f[0] - 1.0).abs() < 1e-15);
            assert!((f[1] + 1.0 / (2.0 * a)).abs() < 1e-15);
            assert!((g[0] - lam * a / 2.0).norm() < 1e-14);
            assert!((g[1] - lam / 4.0).norm() < 1e-14);
        }
    }

    #[test]
    fn auto_extension_handles_large_lambda() {
        let (x1, x2) = frobenius_pair_auto(c(400.0), Endpoint::PlusA, 1.0, true, 0.25).unwrap();
        for sol in [&x1, &x2] {
            let (r, scale) = sol.ode_residual(0.25).unwrap();
            assert!(r.norm() < 1e-9 * scale);
        }
    }

    #[test]
    fn json_dump_round_trips() {
        let (_, x2) = frobenius_pair(c(1.0), Endpoint::PlusA, 1.0, 8, true).unwrap();
        let back: FrobeniusSolution = serde_json::from_str(&x2.to_json()).unwrap();
        assert_eq!(back, x2);
    }
}
