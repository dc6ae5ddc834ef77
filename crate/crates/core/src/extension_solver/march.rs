//! Taylor-series integration of `(p y')' + (lambda - V) y = 0` on the regular
//! interior. Coefficients of the equation are polynomials in `t`, so each local
//! series is computed exactly by recurrence.

use crate::error::{Error, Result};

const MAX_ORDER: usize = 64;
const TAIL_TOL: f64 = 1e-17;

/// One accepted step: local Taylor coefficients of each solution about `t0`.
#[derive(Debug, Clone)]
struct Step {
    t0: f64,
    h: f64,
    coeffs: Vec<Vec<f64>>,
}

/// Solutions of the eigenvalue equation, continuously available on `[t_start, t_end]`.
#[derive(Debug, Clone)]
pub struct DenseMarch {
    pub lambda: f64,
    pub half_width: f64,
    pub potential_on: bool,
    steps: Vec<Step>,
}

fn local_series(t0: f64, a: f64, lambda: f64, pot: bool, y0: f64, y1: f64, order: usize) -> Vec<f64> {
    let a2 = a * a;
    let p0 = (a - t0) * (a + t0) / a2;
    let p1 = -2.0 * t0 / a2;
    let p2 = -1.0 / a2;
    let v = if pot { 1.0 } else { 0.0 };
    let e0 = lambda - v * t0 * t0;
    let e1 = -2.0 * v * t0;
    let e2 = -v;
    let mut y = vec![0.0; order];
    y[0] = y0;
    y[1] = y1;
    for n in 0..order - 2 {
        let nf = n as f64;
        let mut acc = (nf + 1.0) * (nf + 1.0) * p1 * y[n + 1] + nf * (nf + 1.0) * p2 * y[n] + e0 * y[n];
        if n >= 1 {
            acc += e1 * y[n - 1];
        }
        if n >= 2 {
            acc += e2 * y[n - 2];
        }
        y[n + 2] = -acc / (p0 * (nf + 1.0) * (nf + 2.0));
    }
    y
}

fn eval_poly(c: &[f64], x: f64) -> (f64, f64, f64) {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for &ck in c.iter().rev() {
        d2 = d2 * x + 2.0 * d1;
        d1 = d1 * x + v;
        v = v * x + ck;
    }
    (v, d1, d2)
}

fn tail(c: &[f64], h: f64) -> f64 {
    let mut p = 1.0;
    let mut terms = Vec::with_capacity(c.len());
    for &ck in c {
        terms.push(ck.abs() * p);
        p *= h;
    }
    let big = terms.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
    terms[terms.len() - 3..].iter().copied().fold(0.0, f64::max) / big
}

impl DenseMarch {
    /// March the solutions with initial data `states[k] = (y, y')` at `t_start` to `t_end`.
    pub fn run(
        lambda: f64,
        a: f64,
        potential_on: bool,
        t_start: f64,
        t_end: f64,
        states: &[(f64, f64)],
    ) -> Result<Self> {
        if !(t_start.abs() < a && t_end.abs() < a) {
            return Err(Error::InvalidInput("march must stay inside (-a, a)".into()));
        }
        let dir = (t_end - t_start).signum();
        let mut t = t_start;
        let mut cur: Vec<(f64, f64)> = states.to_vec();
        let mut steps = Vec::new();
        let osc = 2.0 / (lambda.abs() + 1.0).sqrt();
        while (t_end - t) * dir > 0.0 {
            let radius = a - t.abs();
            let mut h = (0.25 * radius).min(osc).min((t_end - t).abs());
            loop {
                if h < 1e-12 * a {
                    return Err(Error::MarchFailure {
                        t,
                        reason: "step size underflow".into(),
                    });
                }
                let coeffs: Vec<Vec<f64>> = cur
                    .iter()
                    .map(|&(y0, y1)| local_series(t, a, lambda, potential_on, y0, y1, MAX_ORDER))
                    .collect();
                if coeffs.iter().all(|c| tail(c, h) < TAIL_TOL) {
                    let hs = h * dir;
                    cur = coeffs
                        .iter()
                        .map(|c| {
                            let (v, d, _) = eval_poly(c, hs);
                            (v, d)
                        })
                        .collect();
                    if cur.iter().any(|(v, d)| !v.is_finite() || !d.is_finite()) {
                        return Err(Error::MarchFailure {
                            t,
                            reason: "solution overflow".into(),
                        });
                    }
                    steps.push(Step { t0: t, h: hs, coeffs });
                    t = if (t_end - (t + hs)) * dir <= 1e-15 * a {
                        t_end
                    } else {
                        t + hs
                    };
                    break;
                }
                h *= 0.5;
            }
        }
        Ok(Self {
            lambda,
            half_width: a,
            potential_on,
            steps,
        })
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn span(&self) -> (f64, f64) {
        let first = self.steps.first().map_or(0.0, |s| s.t0);
        let last = self.steps.last().map_or(0.0, |s| s.t0 + s.h);
        (first.min(last), first.max(last))
    }

    /// `(y, y', y'')` of solution `k` at `t`.
    pub fn eval(&self, k: usize, t: f64) -> Option<(f64, f64, f64)> {
        let (lo, hi) = self.span();
        let tol = 1e-14 * self.half_width;
        if t < lo - tol || t > hi + tol {
            return None;
        }
        let step = self
            .steps
            .iter()
            .find(|s| {
                let (u, v) = if s.h > 0.0 {
                    (s.t0, s.t0 + s.h)
                } else {
                    (s.t0 + s.h, s.t0)
                };
                t >= u - tol && t <= v + tol
            })
            .or(self.steps.last())?;
        Some(eval_poly(&step.coeffs[k], t - step.t0))
    }

    /// `(y, y')` of every solution at the end point.
    pub fn final_states(&self) -> Vec<(f64, f64)> {
        let last = self.steps.last().expect("march has at least one step");
        last.coeffs
            .iter()
            .map(|c| {
                let (v, d, _) = eval_poly(c, last.h);
                (v, d)
            })
            .collect()
    }
}
