//! Concrete elements of the maximal domain: the smooth cutoff basis of the
//! boundary space, compactly supported bumps and smooth test functions, and
//! finite linear combinations of them.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::endpoint_forms::{BoundaryValues, Endpoint};
use crate::operator::{Jet, Operator};

/// `h(u) = 1 / (1 + exp(-2u / (1 - u^2)))` on `|u| < 1`, `0` below, `1` above,
/// with its first two `u`-derivatives.
pub fn smooth_step(u: f64) -> (f64, f64, f64) {
    if u <= -1.0 {
        return (0.0, 0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let e = -2.0 * u / ((1.0 - u) * (1.0 + u));
    let (h, g) = if e > 0.0 {
        let x = (-e).exp();
        (x / (1.0 + x), 1.0 / (1.0 + x))
    } else {
        let x = e.exp();
        (1.0 / (1.0 + x), x / (1.0 + x))
    };
    // g = 1 - h
    let e1 = -1.0 / ((1.0 + u) * (1.0 + u)) - 1.0 / ((1.0 - u) * (1.0 - u));
    let e2 = 2.0 / (1.0 + u).powi(3) - 2.0 / (1.0 - u).powi(3);
    let hg = h * g;
    let d1 = -hg * e1;
    let d2 = -d1 * (g - h) * e1 - hg * e2;
    (h, d1, d2)
}

/// `exp(1 - 1/(1 - u^2))` on `|u| < 1`, zero outside; peak value 1.
pub fn bump(u: f64) -> (f64, f64, f64) {
    if u.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let w = 1.0 - u * u;
    let b = (1.0 - 1.0 / w).exp();
    let g1 = -2.0 * u / (w * w);
    let g2 = -2.0 / (w * w) - 8.0 * u * u / (w * w * w);
    (b, g1 * b, (g2 + g1 * g1) * b)
}

/// Building blocks of a [`DomainFunction`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    /// Equal to 1 near the endpoint, 0 near the other one.
    Phi(Endpoint),
    /// `ln(a + t)` near `-a` (resp. `ln(a - t)` near `+a`), 0 near the other end.
    Psi(Endpoint),
    /// Bump of half-width `width` centred at `center`.
    Bump { center: f64, width: f64 },
    /// `t^k`.
    Power(u32),
    /// `exp(i omega t)`.
    Wave(f64),
}

impl Piece {
    fn transition(endpoint: Endpoint, t: f64, a: f64) -> Jet {
        let k = 2.0 / a;
        let (h, h1, h2) = smooth_step(k * t);
        let (v, d1, d2) = match endpoint {
            Endpoint::MinusA => (1.0 - h, -h1 * k, -h2 * k * k),
            Endpoint::PlusA => (h, h1 * k, h2 * k * k),
        };
        Jet::real(v, d1, d2)
    }

    fn log_jet(endpoint: Endpoint, s: f64) -> Jet {
        let o = endpoint.orientation();
        Jet::real(s.ln(), o / s, -1.0 / (s * s))
    }

    /// Jet at `t`, where `s_minus = a + t` and `s_plus = a - t` are supplied
    /// separately so that points very close to an endpoint keep full precision.
    fn jet(&self, t: f64, s_minus: f64, s_plus: f64, a: f64) -> Jet {
        match *self {
            Piece::Phi(ep) => Self::transition(ep, t, a),
            Piece::Psi(ep) => {
                let s = if ep == Endpoint::MinusA { s_minus } else { s_plus };
                if s >= 1.5 * a {
                    Jet::default()
                } else {
                    Self::log_jet(ep, s) * Self::transition(ep, t, a)
                }
            }
            Piece::Bump { center, width } => {
                let (v, d1, d2) = bump((t - center) / width);
                Jet::real(v, d1 / width, d2 / (width * width))
            }
            Piece::Power(k) => {
                let kf = k as f64;
                let d1 = if k >= 1 { kf * t.powi(k as i32 - 1) } else { 0.0 };
                let d2 = if k >= 2 {
                    kf * (kf - 1.0) * t.powi(k as i32 - 2)
                } else {
                    0.0
                };
                Jet::real(t.powi(k as i32), d1, d2)
            }
            Piece::Wave(w) => {
                let e = C64::new(0.0, w * t).exp();
                Jet::new(e, e * C64::new(0.0, w), -e * w * w)
            }
        }
    }

    fn is_smooth(&self) -> bool {
        !matches!(self, Piece::Psi(_))
    }
}

/// A finite combination `sum c_j piece_j` on `(-a, a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainFunction {
    pub half_width: f64,
    pub terms: Vec<(C64, Piece)>,
}

impl DomainFunction {
    pub fn new(half_width: f64) -> Self {
        Self {
            half_width,
            terms: Vec::new(),
        }
    }

    pub fn single(half_width: f64, piece: Piece) -> Self {
        Self::new(half_width).with(C64::new(1.0, 0.0), piece)
    }

    pub fn with(mut self, coeff: C64, piece: Piece) -> Self {
        self.terms.push((coeff, piece));
        self
    }

    pub fn add(mut self, other: &DomainFunction, scale: C64) -> Self {
        self.terms
            .extend(other.terms.iter().map(|(c, p)| (c * scale, p.clone())));
        self
    }

    pub fn jet(&self, t: f64) -> Jet {
        let a = self.half_width;
        self.jet_split(t, a + t, a - t)
    }

    /// Jet at distance `s` from `endpoint`, exact in `s` for the logarithmic pieces.
    pub fn jet_near(&self, endpoint: Endpoint, s: f64) -> Jet {
        let a = self.half_width;
        let t = endpoint.point(s, a);
        match endpoint {
            Endpoint::MinusA => self.jet_split(t, s, 2.0 * a - s),
            Endpoint::PlusA => self.jet_split(t, 2.0 * a - s, s),
        }
    }

    fn jet_split(&self, t: f64, sm: f64, sp: f64) -> Jet {
        let a = self.half_width;
        self.terms
            .iter()
            .fold(Jet::default(), |acc, (c, p)| acc + p.jet(t, sm, sp, a).scale(*c))
    }

    pub fn value(&self, t: f64) -> C64 {
        self.jet(t).value
    }

    pub fn apply(&self, op: Operator, t: f64) -> C64 {
        op.apply(&self.jet(t), t, self.half_width)
    }

    pub fn is_smooth(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.is_smooth())
    }

    /// Generalized boundary values known in closed form from the pieces.
    pub fn boundary_values(&self) -> BoundaryValues {
        let a = self.half_width;
        let mut bv = BoundaryValues::default();
        for (c, p) in &self.terms {
            match *p {
                Piece::Psi(Endpoint::MinusA) => bv.b_minus += c,
                Piece::Psi(Endpoint::PlusA) => bv.b_plus += c,
                _ => {
                    bv.c_minus -= c * p.jet(-a, 0.0, 2.0 * a, a).value;
                    bv.c_plus -= c * p.jet(a, 2.0 * a, 0.0, a).value;
                }
            }
        }
        bv
    }
}
