//! The formal differential expressions on `(-a, a)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Which formal expression is meant: the Legendre operator
/// `M x = -((1 - t^2/a^2) x')'` or the prolate operator `L = M + t^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Legendre,
    Prolate,
}

impl Operator {
    pub fn has_potential(self) -> bool {
        matches!(self, Operator::Prolate)
    }

    pub fn potential(self, t: f64) -> f64 {
        if self.has_potential() {
            t * t
        } else {
            0.0
        }
    }

    /// Apply the expression to a 2-jet `(x, x', x'')` at `t`.
    pub fn apply(self, jet: &Jet, t: f64, a: f64) -> C64 {
        -jet.d2 * weight(t, a) - jet.d1 * weight_derivative(t, a) + jet.value * self.potential(t)
    }
}

/// `p(t) = 1 - t^2/a^2`.
pub fn weight(t: f64, a: f64) -> f64 {
    (a - t) * (a + t) / (a * a)
}

/// `p'(t) = -2t/a^2`.
pub fn weight_derivative(t: f64, a: f64) -> f64 {
    -2.0 * t / (a * a)
}

/// Value with its first two derivatives in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

impl Jet {
    pub fn new(value: C64, d1: C64, d2: C64) -> Self {
        Self { value, d1, d2 }
    }

    pub fn real(value: f64, d1: f64, d2: f64) -> Self {
        Self::new(value.into(), d1.into(), d2.into())
    }

    pub fn constant(value: C64) -> Self {
        Self::new(value, C64::default(), C64::default())
    }

    pub fn scale(self, c: C64) -> Self {
        Self::new(self.value * c, self.d1 * c, self.d2 * c)
    }
}

/// Leibniz rule.
impl std::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, other: Jet) -> Jet {
        Jet::new(
            self.value * other.value,
            self.d1 * other.value + self.value * other.d1,
            self.d2 * other.value + 2.0 * self.d1 * other.d1 + self.value * other.d2,
        )
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}
