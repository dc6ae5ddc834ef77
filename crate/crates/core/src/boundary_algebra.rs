//! The four-dimensional boundary space of the Legendre/prolate operator.
//!
//! Elements of the boundary space are written as row vectors of coordinates
//! `(alpha_-, beta_-, alpha_+, beta_+)` against the cutoff basis
//! `(phi_-, psi_-, phi_+, psi_+)`. The boundary form becomes `(2/a) v J w*`
//! with the constant indefinite matrix [`j_matrix`]. Self-adjoint extensions
//! correspond to two-dimensional J-self-orthogonal subspaces, and those are in
//! bijection with 2x2 unitary matrices.
//!
//! Note on conventions: [`boundary_condition_matrix`] follows the usual
//! relabelling of the antilinear slot, so the domain cut out by `B(U)` has
//! coordinates in `S_{U*}`; see [`extension_subspace`].

use nalgebra::{Matrix2, Matrix2x4, Matrix4, RowVector4};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance of the unitarity and self-orthogonality gates.
pub const UNITARY_TOL: f64 = 1e-10;
/// Relative smallest-singular-value threshold for a rank-2 subspace basis.
pub const RANK_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A validated 2x2 unitary matrix, the parameter of a self-adjoint extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryMatrix2(Matrix2<C64>);

/// Construct a unitary matrix from its four entries in row-major order.
pub fn make_unitary(entries: [C64; 4]) -> Result<UnitaryMatrix2> {
    UnitaryMatrix2::new(entries)
}

impl UnitaryMatrix2 {
    pub fn new(entries: [C64; 4]) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let m = Matrix2::new(entries[0], entries[1], entries[2], entries[3]);
        let deviation = max_abs(&(m * m.adjoint() - Matrix2::identity()));
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn neg_identity() -> Self {
        Self(-Matrix2::identity())
    }

    /// The permutation `[[0, 1], [1, 0]]`.
    pub fn swap() -> Self {
        Self(Matrix2::new(ZERO, ONE, ONE, ZERO))
    }

    /// Diagonal unitary `diag(e^{i theta1}, e^{i theta2})`, i.e. separated conditions.
    pub fn diagonal_phases(theta1: f64, theta2: f64) -> Self {
        Self(Matrix2::new(
            C64::from_polar(1.0, theta1),
            ZERO,
            ZERO,
            C64::from_polar(1.0, theta2),
        ))
    }

    /// Haar-distributed sample: a complex Ginibre matrix with orthonormalized rows.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut g = [ZERO; 4];
            for z in g.iter_mut() {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                *z = C64::new(re, im);
            }
            let n1 = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
            if n1 < 1e-8 {
                continue;
            }
            let r1 = [g[0] / n1, g[1] / n1];
            let proj = g[2] * r1[0].conj() + g[3] * r1[1].conj();
            let w = [g[2] - proj * r1[0], g[3] - proj * r1[1]];
            let n2 = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
            if n2 < 1e-8 {
                continue;
            }
            return Self(Matrix2::new(r1[0], r1[1], w[0] / n2, w[1] / n2));
        }
    }

    /// Parse the CLI notation: a preset name or eight comma-separated reals
    /// `re11,im11,re12,im12,re21,im21,re22,im22`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.trim() {
            "identity" | "I" => Ok(Self::identity()),
            "neg-identity" | "-I" => Ok(Self::neg_identity()),
            "swap" => Ok(Self::swap()),
            raw => {
                let nums: std::result::Result<Vec<f64>, _> = raw.split(',').map(|s| s.trim().parse::<f64>()).collect();
                let nums = nums.map_err(|e| Error::InvalidInput(format!("unitary `{raw}`: {e}")))?;
                let arr: [f64; 8] = nums
                    .try_into()
                    .map_err(|v: Vec<f64>| Error::InvalidInput(format!("unitary needs 8 numbers, got {}", v.len())))?;
                Self::from_real_parts(&arr)
            }
        }
    }

    /// Row-major `[re, im]` pairs.
    pub fn from_real_parts(parts: &[f64; 8]) -> Result<Self> {
        let z = |k: usize| C64::new(parts[2 * k], parts[2 * k + 1]);
        Self::new([z(0), z(1), z(2), z(3)])
    }

    /// Row-major `[re, im]` pairs, the JSON wire layout.
    pub fn to_pairs(&self) -> [[f64; 2]; 4] {
        let e = self.entries();
        e.map(|z| [z.re, z.im])
    }

    pub fn from_pairs(pairs: &[[f64; 2]; 4]) -> Result<Self> {
        Self::new(pairs.map(|[re, im]| C64::new(re, im)))
    }

    /// Entries in row-major order `u11, u12, u21, u22`.
    pub fn entries(&self) -> [C64; 4] {
        [self.0[(0, 0)], self.0[(0, 1)], self.0[(1, 0)], self.0[(1, 1)]]
    }

    /// Entry `u_{pq}` with one-based indices.
    pub fn u(&self, p: usize, q: usize) -> C64 {
        self.0[(p - 1, q - 1)]
    }

    pub fn matrix(&self) -> Matrix2<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        max_abs(&(self.0 - Matrix2::identity())) <= tol
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        max_abs(&(self.0 - other.0))
    }
}

impl Serialize for UnitaryMatrix2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitaryMatrix2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = <[[f64; 2]; 4]>::deserialize(d)?;
        Self::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

/// Coordinates `(alpha_-, beta_-, alpha_+, beta_+)` of a boundary-space element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoordinates4(pub RowVector4<C64>);

impl BoundaryCoordinates4 {
    pub fn new(c: [C64; 4]) -> Self {
        Self(RowVector4::new(c[0], c[1], c[2], c[3]))
    }

    pub fn from_real(c: [f64; 4]) -> Self {
        Self::new(c.map(|x| C64::new(x, 0.0)))
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// The indefinite product `v J w*`.
    pub fn j_product(&self, other: &Self) -> C64 {
        (self.0 * j_matrix() * other.0.adjoint())[(0, 0)]
    }

    /// Generalized boundary values `(b_-a, c_-a, b_a, c_a)` of the element with these
    /// coordinates. `phi` carries `c = -1`, `psi` carries `b = 1`.
    pub fn to_boundary_quadruple(&self) -> [C64; 4] {
        let [am, bm, ap, bp] = self.as_array();
        [bm, -am, bp, -ap]
    }

    /// Inverse of [`Self::to_boundary_quadruple`].
    pub fn from_boundary_quadruple(q: [C64; 4]) -> Self {
        Self::new([-q[1], q[0], -q[3], q[2]])
    }
}

/// `e^1_+ = [1, i, 0, 0]`.
pub fn e1_plus() -> BoundaryCoordinates4 {
    BoundaryCoordinates4::new([ONE, I, ZERO, ZERO])
}
/// `e^2_+ = [0, 0, 1, i]`.
pub fn e2_plus() -> BoundaryCoordinates4 {
    BoundaryCoordinates4::new([ZERO, ZERO, ONE, I])
}
/// `e^1_- = [1, -i, 0, 0]`.
pub fn e1_minus() -> BoundaryCoordinates4 {
    BoundaryCoordinates4::new([ONE, -I, ZERO, ZERO])
}
/// `e^2_- = [0, 0, 1, -i]`.
pub fn e2_minus() -> BoundaryCoordinates4 {
    BoundaryCoordinates4::new([ZERO, ZERO, ONE, -I])
}

/// Two boundary-space vectors spanning a 2-dimensional subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspacePair {
    v1: BoundaryCoordinates4,
    v2: BoundaryCoordinates4,
}

impl SubspacePair {
    pub fn new(v1: BoundaryCoordinates4, v2: BoundaryCoordinates4) -> Result<Self> {
        let ratio = rank_ratio(&v1, &v2);
        if !(ratio > RANK_TOL) {
            return Err(Error::RankDeficient { ratio });
        }
        Ok(Self { v1, v2 })
    }

    pub fn vectors(&self) -> (BoundaryCoordinates4, BoundaryCoordinates4) {
        (self.v1, self.v2)
    }

    pub fn as_matrix(&self) -> Matrix2x4<C64> {
        Matrix2x4::from_rows(&[self.v1.0, self.v2.0])
    }

    /// Whether `w` lies in the span, relative tolerance `tol`.
    pub fn contains(&self, w: &BoundaryCoordinates4, tol: f64) -> bool {
        let (q1, q2) = orthonormal_pair(&self.v1, &self.v2);
        let mut r = w.0;
        for q in [q1, q2] {
            let c = (r * q.adjoint())[(0, 0)];
            r -= q * c;
        }
        r.norm() <= tol * w.norm().max(f64::MIN_POSITIVE)
    }

    /// Whether two pairs span the same subspace.
    pub fn same_span(&self, other: &Self, tol: f64) -> bool {
        self.contains(&other.v1, tol) && self.contains(&other.v2, tol)
    }
}

fn orthonormal_pair(v1: &BoundaryCoordinates4, v2: &BoundaryCoordinates4) -> (RowVector4<C64>, RowVector4<C64>) {
    let q1 = v1.0 / C64::new(v1.0.norm(), 0.0);
    let c = (v2.0 * q1.adjoint())[(0, 0)];
    let r = v2.0 - q1 * c;
    (q1, r / C64::new(r.norm(), 0.0))
}

/// Modified Gram-Schmidt ratio `r22 / r11` with the longer vector first.
fn rank_ratio(v1: &BoundaryCoordinates4, v2: &BoundaryCoordinates4) -> f64 {
    let (a, b) = if v1.norm() >= v2.norm() { (v1, v2) } else { (v2, v1) };
    let na = a.norm();
    if na == 0.0 || !na.is_finite() {
        return 0.0;
    }
    let q = a.0 / C64::new(na, 0.0);
    let c = (b.0 * q.adjoint())[(0, 0)];
    (b.0 - q * c).norm() / na
}

/// The Gram matrix of the scaled boundary form on the cutoff basis.
pub fn j_matrix() -> Matrix4<C64> {
    let mut j = Matrix4::zeros();
    j[(0, 1)] = I;
    j[(1, 0)] = -I;
    j[(2, 3)] = I;
    j[(3, 2)] = -I;
    j
}

/// Orthogonal projectors `P+ = (I + J)/2`, `P- = (I - J)/2`.
pub fn projectors() -> (Matrix4<C64>, Matrix4<C64>) {
    let id = Matrix4::<C64>::identity();
    let j = j_matrix();
    let half = C64::new(0.5, 0.0);
    ((id + j) * half, (id - j) * half)
}

/// The basis `v^1(U), v^2(U)` of the J-self-orthogonal subspace `S_U`.
pub fn subspace_from_unitary(u: &UnitaryMatrix2) -> SubspacePair {
    let (u11, u12, u21, u22) = (u.u(1, 1), u.u(1, 2), u.u(2, 1), u.u(2, 2));
    let v1 = BoundaryCoordinates4::new([ONE + u11, I * (ONE - u11), u21, -I * u21]);
    let v2 = BoundaryCoordinates4::new([u12, -I * u12, ONE + u22, I * (ONE - u22)]);
    // independence holds for every unitary U
    SubspacePair { v1, v2 }
}

/// Largest relative indefinite product `|v_i J v_j*| / (|v_i| |v_j|)` over the basis.
pub fn self_orthogonality_residual(s: &SubspacePair) -> f64 {
    let vs = [s.v1, s.v2];
    let mut worst: f64 = 0.0;
    for x in &vs {
        for y in &vs {
            let scale = x.norm() * y.norm();
            worst = worst.max(x.j_product(y).norm() / scale);
        }
    }
    worst
}

pub fn is_j_self_orthogonal(s: &SubspacePair) -> Result<bool> {
    let ratio = rank_ratio(&s.v1, &s.v2);
    if !(ratio > RANK_TOL) {
        return Err(Error::RankDeficient { ratio });
    }
    Ok(self_orthogonality_residual(s) <= UNITARY_TOL)
}

/// Recover the unique `U` with `S = S_U`.
///
/// The basis is split into its `V+` and `V-` components; in the bases `e^k_+`
/// and `e^k_-` these are 2x2 coordinate matrices `A` and `C` with `C = A U^T`.
pub fn unitary_from_subspace(s: &SubspacePair) -> Result<UnitaryMatrix2> {
    if !is_j_self_orthogonal(s)? {
        return Err(Error::NotSelfOrthogonal {
            residual: self_orthogonality_residual(s),
        });
    }
    let (p_plus, p_minus) = projectors();
    let coords = |v: &BoundaryCoordinates4, p: &Matrix4<C64>| {
        let w = v.0 * p;
        // e^1_± carries the first coordinate, e^2_± the third
        (w[0], w[2])
    };
    let (a11, a12) = coords(&s.v1, &p_plus);
    let (a21, a22) = coords(&s.v2, &p_plus);
    let (c11, c12) = coords(&s.v1, &p_minus);
    let (c21, c22) = coords(&s.v2, &p_minus);
    let a = Matrix2::new(a11, a12, a21, a22);
    let c = Matrix2::new(c11, c12, c21, c22);
    let scale = s.v1.norm() * s.v2.norm();
    if a.determinant().norm() <= RANK_TOL * scale {
        return Err(Error::ProjectionSingular);
    }
    let a_inv = a.try_inverse().ok_or(Error::ProjectionSingular)?;
    let ut = a_inv * c;
    let m = ut.transpose();
    UnitaryMatrix2::new([m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]])
}

/// The 2x4 matrix `B(U)` acting on `(b_-a, c_-a, b_a, c_a)^T`.
pub fn boundary_condition_matrix(u: &UnitaryMatrix2) -> Matrix2x4<C64> {
    let (u11, u12, u21, u22) = (u.u(1, 1), u.u(1, 2), u.u(2, 1), u.u(2, 2));
    Matrix2x4::new(
        ONE + u11,
        -I * (ONE - u11),
        u12,
        I * u12,
        u21,
        I * u21,
        ONE + u22,
        -I * (ONE - u22),
    )
}

/// Coordinates of the domain of the extension defined by `B(U)`: the subspace `S_{U*}`.
pub fn extension_subspace(u: &UnitaryMatrix2) -> SubspacePair {
    subspace_from_unitary(&u.adjoint())
}

/// An orthonormal basis of the null space of `B(U)` in boundary-value space.
pub fn boundary_kernel(u: &UnitaryMatrix2) -> [[C64; 4]; 2] {
    let s = extension_subspace(u);
    let (q1, q2) = orthonormal_pair(&s.v1, &s.v2);
    [
        BoundaryCoordinates4(q1).to_boundary_quadruple(),
        BoundaryCoordinates4(q2).to_boundary_quadruple(),
    ]
}

pub fn max_abs<R: nalgebra::Dim, Cc: nalgebra::Dim, S>(m: &nalgebra::Matrix<C64, R, Cc, S>) -> f64
where
    S: nalgebra::RawStorage<C64, R, Cc>,
{
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}
