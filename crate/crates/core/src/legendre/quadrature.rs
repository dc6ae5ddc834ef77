use serde::{Deserialize, Serialize};

use super::polynomial::legendre_eval;
use crate::error::{Error, Result};

/// Nodes and weights of an interpolatory rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// The `n`-point Gauss-Legendre rule on `(-1, 1)`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidInput("Gauss-Legendre rule needs n >= 1".into()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // root i counted from the right end
        let mut s = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_eval(n, s);
            let ds = p / dp;
            s -= ds;
            if ds.abs() <= 1e-15 * s.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { spread: s });
        }
        let (_, dp) = legendre_eval(n, s);
        let w = 2.0 / ((1.0 - s * s) * dp * dp);
        nodes[n - 1 - i] = s;
        nodes[i] = -s;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine map of a rule on `(-1, 1)` onto `(lo, hi)`.
    pub fn mapped(&self, lo: f64, hi: f64) -> Self {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Self {
            nodes: self.nodes.iter().map(|s| mid + half * s).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }

    /// Gauss-Legendre with `n` nodes on `(-a, a)`.
    pub fn gauss_on(n: usize, a: f64) -> Result<Self> {
        Ok(gauss_legendre(n)?.mapped(-a, a))
    }

    /// Composite Gauss rule on `(-a, a)` graded geometrically towards both endpoints.
    ///
    /// Each end carries `levels` panels `[a 2^{-k-1}, a 2^{-k}]` (distance from the
    /// endpoint) plus the innermost `[0, a 2^{-levels}]`; the middle `(-a/2, a/2)` is
    /// split into `interior` equal panels. Integrands with `ln(a ± t)` factors are
    /// handled to near machine precision.
    pub fn graded(a: f64, levels: usize, order: usize, interior: usize) -> Result<Self> {
        Self::graded_core(a, 0.5, levels, order, interior)
    }

    /// As [`Self::graded`] with the uniform middle part `(-core a, core a)`.
    pub fn graded_core(a: f64, core: f64, levels: usize, order: usize, interior: usize) -> Result<Self> {
        if !(core > 0.0 && core < 1.0) || interior == 0 {
            return Err(Error::InvalidInput(
                "core fraction must lie in (0, 1) with interior panels".into(),
            ));
        }
        let base = gauss_legendre(order)?;
        let d0 = (1.0 - core) * a;
        let mut distances = vec![0.0];
        for k in (1..=levels).rev() {
            distances.push(d0 * 0.5_f64.powi(k as i32));
        }
        distances.push(d0);
        let mut panels: Vec<(f64, f64)> = Vec::new();
        for w in distances.windows(2) {
            panels.push((-a + w[0], -a + w[1]));
        }
        let h = 2.0 * core * a / interior as f64;
        for k in 0..interior {
            panels.push((-core * a + k as f64 * h, -core * a + (k + 1) as f64 * h));
        }
        for w in distances.windows(2).rev() {
            panels.push((a - w[1], a - w[0]));
        }
        let mut rule = Self {
            nodes: Vec::new(),
            weights: Vec::new(),
        };
        for (lo, hi) in panels {
            let m = base.mapped(lo, hi);
            rule.nodes.extend(m.nodes);
            rule.weights.extend(m.weights);
        }
        Ok(rule)
    }

    /// The default graded rule: 40 levels per end, 16-point panels.
    pub fn graded_default(a: f64) -> Self {
        Self::graded(a, 40, 16, 8).expect("fixed rule parameters are valid")
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}
