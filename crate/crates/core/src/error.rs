use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unitary: max |UU* - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("subspace basis is rank deficient (relative smallest singular value {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("subspace is not J-self-orthogonal (max relative |v_i J v_j*| = {residual:e})")]
    NotSelfOrthogonal { residual: f64 },
    #[error("projection of the subspace onto V+ is singular")]
    ProjectionSingular,
    #[error("series truncation too short: {n_terms} < 4")]
    TruncationTooShort { n_terms: usize },
    #[error("evaluation point at distance {distance} outside the accuracy radius {radius}")]
    OutOfRadius { distance: f64, radius: f64 },
    #[error("numerical limit did not converge (spread {spread:e})")]
    NoConvergence { spread: f64 },
    #[error("matrix is not symmetric (max |A - A^T| = {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("eigenvalues not converged under truncation doubling (max relative change {change:e})")]
    NotConverged { change: f64 },
    #[error("ODE march failed at t = {t}: {reason}")]
    MarchFailure { t: f64, reason: String },
    #[error("Frobenius matching system at +a is singular (det = {det:e})")]
    MatchSingular { det: f64 },
    #[error("scan grid too coarse near lambda = {lambda}: roots closer than two cells")]
    ScanTooCoarse { lambda: f64 },
    #[error("lambda = {lambda} is not an eigenvalue (smallest singular value {sigma_min:e})")]
    NotAnEigenvalue { lambda: f64, sigma_min: f64 },
    #[error("grid function carries no quadrature weights")]
    GridMismatch,
    #[error("degenerate eigenvalue: Fourier image norm {image_norm:e} too small to test proportionality")]
    DegenerateEigenvalue { image_norm: f64 },
    #[error("U = I commutes with the truncated Fourier operator; no witness exists")]
    IsIdentity,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of a numerical procedure, false for rejected inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::NotConverged { .. }
                | Error::MarchFailure { .. }
                | Error::MatchSingular { .. }
                | Error::ScanTooCoarse { .. }
                | Error::DegenerateEigenvalue { .. }
                | Error::ProjectionSingular
        )
    }
}

impl Error {
    /// Variant name, used as a machine-readable error tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotUnitary { .. } => "NotUnitary",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::NotSelfOrthogonal { .. } => "NotSelfOrthogonal",
            Error::ProjectionSingular => "ProjectionSingular",
            Error::TruncationTooShort { .. } => "TruncationTooShort",
            Error::OutOfRadius { .. } => "OutOfRadius",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotConverged { .. } => "NotConverged",
            Error::MarchFailure { .. } => "MarchFailure",
            Error::MatchSingular { .. } => "MatchSingular",
            Error::ScanTooCoarse { .. } => "ScanTooCoarse",
            Error::NotAnEigenvalue { .. } => "NotAnEigenvalue",
            Error::GridMismatch => "GridMismatch",
            Error::DegenerateEigenvalue { .. } => "DegenerateEigenvalue",
            Error::IsIdentity => "IsIdentity",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
