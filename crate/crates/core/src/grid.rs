//! Samples of a function on the nodes of a quadrature rule of `(-a, a)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::QuadratureRule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub half_width: f64,
    pub nodes: Vec<f64>,
    /// Quadrature weights; `None` for plain samples.
    pub weights: Option<Vec<f64>>,
    pub values: Vec<C64>,
    pub node_family: String,
}

impl GridFunction {
    pub fn new(
        half_width: f64,
        nodes: Vec<f64>,
        weights: Option<Vec<f64>>,
        values: Vec<C64>,
        node_family: impl Into<String>,
    ) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidInput(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if nodes.len() != values.len() || weights.as_ref().is_some_and(|w| w.len() != nodes.len()) {
            return Err(Error::InvalidInput("nodes, weights and values differ in length".into()));
        }
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("nodes must be strictly increasing".into()));
        }
        if nodes.iter().any(|&t| !(t > -half_width && t < half_width)) {
            return Err(Error::InvalidInput("nodes must lie strictly inside (-a, a)".into()));
        }
        Ok(Self {
            half_width,
            nodes,
            weights,
            values,
            node_family: node_family.into(),
        })
    }

    /// Sample `f` on the nodes of `rule` (a rule on `(-a, a)`).
    pub fn from_rule<F: FnMut(f64) -> C64>(a: f64, rule: &QuadratureRule, family: &str, mut f: F) -> Result<Self> {
        let values = rule.nodes.iter().map(|&t| f(t)).collect();
        Self::new(a, rule.nodes.clone(), Some(rule.weights.clone()), values, family)
    }

    /// Gauss-Legendre sampling with `n` nodes.
    pub fn gauss<F: FnMut(f64) -> C64>(a: f64, n: usize, f: F) -> Result<Self> {
        Self::from_rule(a, &QuadratureRule::gauss_on(n, a)?, &format!("gauss-legendre-{n}"), f)
    }

    /// Sampling on the endpoint-graded composite rule.
    pub fn graded<F: FnMut(f64) -> C64>(a: f64, f: F) -> Result<Self> {
        Self::from_rule(a, &QuadratureRule::graded_default(a), "graded", f)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weights(&self) -> Result<&[f64]> {
        self.weights.as_deref().ok_or(Error::GridMismatch)
    }

    /// `<x, y> = int x conj(y)`.
    pub fn inner(&self, other: &GridFunction) -> Result<C64> {
        if self.nodes != other.nodes {
            return Err(Error::GridMismatch);
        }
        let w = self.weights()?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(w)
            .map(|((x, y), w)| x * y.conj() * *w)
            .sum())
    }

    pub fn l2_norm(&self) -> Result<f64> {
        let w = self.weights()?;
        Ok(self
            .values
            .iter()
            .zip(w)
            .map(|(x, w)| x.norm_sqr() * w)
            .sum::<f64>()
            .sqrt())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn map_values<F: FnMut(f64, C64) -> C64>(&self, mut f: F) -> Self {
        let values = self.nodes.iter().zip(&self.values).map(|(&t, &v)| f(t, v)).collect();
        Self { values, ..self.clone() }
    }

    pub fn scaled(&self, c: C64) -> Self {
        self.map_values(|_, v| v * c)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        if self.nodes != other.nodes {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x - y).collect();
        Ok(Self { values, ..self.clone() })
    }

    /// `t,re,im` rows with a header.
    pub fn to_csv(&self) -> String {
        crate::report::csv_string(
            &["t", "re", "im"],
            self.nodes.iter().zip(&self.values).map(|(t, v)| vec![*t, v.re, v.im]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let c = C64::new(1.0, 0.0);
        assert!(GridFunction::new(1.0, vec![-0.5, 0.5], None, vec![c, c], "x").is_ok());
        assert!(GridFunction::new(1.0, vec![0.5, -0.5], None, vec![c, c], "x").is_err());
        assert!(GridFunction::new(1.0, vec![-1.0, 0.5], None, vec![c, c], "x").is_err());
        assert!(GridFunction::new(1.0, vec![-0.5], None, vec![c, c], "x").is_err());
        let g = GridFunction::new(1.0, vec![-0.5, 0.5], None, vec![c, c], "x").unwrap();
        assert_eq!(g.l2_norm(), Err(Error::GridMismatch));
    }

    #[test]
    fn norms() {
        let g = GridFunction::gauss(2.0, 20, |t| C64::new(t, 1.0)).unwrap();
        // int_{-2}^{2} t^2 + 1 = 16/3 + 4
        assert!((g.l2_norm().unwrap().powi(2) - (16.0 / 3.0 + 4.0)).abs() < 1e-12);
        assert!((g.inner(&g).unwrap().re - g.l2_norm().unwrap().powi(2)).abs() < 1e-12);
    }
}
