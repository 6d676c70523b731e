use thiserror::Error;

use crate::surface::EdgeRef;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Variant names double as the
/// invariant identifiers printed by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("UnmatchedEdge: {0}")]
    UnmatchedEdge(String),
    #[error("NonTranslationGluing: edge {a:?} and edge {b:?} are not opposite vectors (mismatch {mismatch:.3e})")]
    NonTranslationGluing { a: EdgeRef, b: EdgeRef, mismatch: f64 },
    #[error("SelfIntersectingPolygon: polygon {polygon} ({detail})")]
    SelfIntersectingPolygon { polygon: usize, detail: String },
    #[error("NonPositiveArea: polygon {polygon} has signed area {area:.6e}; polygons must be counterclockwise")]
    NonPositiveArea { polygon: usize, area: f64 },
    #[error("AngleNotMultipleOf2Pi: vertex class {class} has cone angle {angle:.9}")]
    AngleNotMultipleOf2Pi { class: usize, angle: f64 },
    #[error("SignatureMismatch: {0}")]
    SignatureMismatch(String),
    #[error("Disconnected: the gluing graph of the polygons is not connected")]
    Disconnected,
    #[error("Malformed: {0}")]
    Malformed(String),
    #[error("ZeroScalar: rescaling factor must be nonzero")]
    ZeroScalar,
    #[error("UnknownFamily: {0}")]
    UnknownFamily(String),
    #[error("ParamOutOfRange: {0}")]
    ParamOutOfRange(String),
    #[error("RankMismatch: relative homology has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("BoundaryNotMarked: chain boundary meets unmarked vertices")]
    BoundaryNotMarked,
    #[error("PolygonDegenerates: polygon {polygon} is no longer simple with positive area")]
    PolygonDegenerates { polygon: usize },
    #[error("ClosureViolation: polygon {polygon} fails to close by {gap:.3e}")]
    ClosureViolation { polygon: usize, gap: f64 },
    #[error("BudgetExceeded: saddle connection search exceeded {budget} nodes")]
    BudgetExceeded { budget: usize },
    #[error("RankDeficient: segment pool spans rank {found}, needed {needed}")]
    RankDeficient { needed: usize, found: usize },
    #[error("NotInCover: surface does not lie in V_sigma")]
    NotInCover,
    #[error("ZetaOutOfDomain: zeta = {zeta:.6e} is not below c = {c:.6e}")]
    ZetaOutOfDomain { zeta: f64, c: f64 },
    #[error("ChainNotDecreasing: {0}")]
    ChainNotDecreasing(String),
    #[error("ChainTooDeep: chain has {depth} steps, stratification depth is {max}")]
    ChainTooDeep { depth: usize, max: usize },
    #[error("SizeMismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("InvalidSurjection: {0}")]
    InvalidSurjection(String),
    #[error("GenusTooSmall: genus {0} < 2")]
    GenusTooSmall(u32),
    #[error("NotHermitian: asymmetry {0:.3e}")]
    NotHermitian(f64),
    #[error("DeformFailed: {0}")]
    DeformFailed(String),
    #[error("UnsupportedFormat: {0}")]
    UnsupportedFormat(String),
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by an invalid input surface description.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::UnmatchedEdge(_)
                | Error::NonTranslationGluing { .. }
                | Error::SelfIntersectingPolygon { .. }
                | Error::NonPositiveArea { .. }
                | Error::AngleNotMultipleOf2Pi { .. }
                | Error::SignatureMismatch(_)
                | Error::Disconnected
                | Error::Malformed(_)
                | Error::Parse(_)
                | Error::UnknownFamily(_)
                | Error::ParamOutOfRange(_)
                | Error::InvalidSurjection(_)
                | Error::InvalidConfig(_)
                | Error::UnsupportedFormat(_)
        )
    }

    /// Errors caused by search budgets or numerical tolerances.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::RankDeficient { .. }
                | Error::RankMismatch { .. }
                | Error::DeformFailed(_)
                | Error::PolygonDegenerates { .. }
                | Error::ClosureViolation { .. }
                | Error::NotHermitian(_)
                | Error::ZetaOutOfDomain { .. }
                | Error::NotInCover
        )
    }
}
