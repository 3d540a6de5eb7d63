use thiserror::Error;

use crate::geometry::Space;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space mismatch: {0} vs {1}")]
    SpaceMismatch(Space, Space),
    #[error("chart {chart} is not available for {kind} geometry")]
    IncompatibleChart { kind: String, chart: String },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),
    #[error("invalid half-space: {0}")]
    InvalidHalfSpace(String),
    #[error("antipodal points have no unique geodesic")]
    Antipodal,
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("polyhedron is not thick")]
    NotThick,
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("exploration exceeded the cap of {0} tiles")]
    TileCap(usize),
    #[error("point lies outside the explored region")]
    OutsideExplored,
    #[error("edge loop left the explored window")]
    LoopLeftWindow,
    #[error("inconsistent incidence: {0}")]
    Incidence(String),
    #[error("facet {facet} of the polyhedron is not covered by any side; enlarge the window")]
    UncoveredFacet { facet: usize },
    #[error("side {side} has no pairing among the candidates")]
    UnpairedSide { side: usize },
    #[error("side {side} is matched by several distinct candidates")]
    AmbiguousPairing { side: usize },
    #[error("pairing for side {side} does not map the polyhedron onto a neighbour: {detail}")]
    PairingMismatch { side: usize, detail: String },
    #[error("edge cycle: {0}")]
    Cycle(String),
    #[error("relation {word} does not evaluate to the identity (residual {residual:e})")]
    RelationResidual { word: String, residual: f64 },
    #[error("path meets a cell of codimension {codim} at parameter {param}")]
    PathCodim { codim: usize, param: f64 },
    #[error("factorization failed after {0} attempts")]
    FactorRetries(usize),
    #[error("factorization does not reproduce the element (residual {0:e})")]
    FactorMismatch(f64),
    #[error("basepoint is fixed by a non-identity element")]
    BasepointFixed,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable code used in CLI diagnostics and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SpaceMismatch(..) => "SPACE_MISMATCH",
            Error::IncompatibleChart { .. } => "INCOMPATIBLE_CHART",
            Error::InvalidPoint(_) => "INVALID_POINT",
            Error::InvalidIsometry(_) => "INVALID_ISOMETRY",
            Error::InvalidHalfSpace(_) => "INVALID_HALFSPACE",
            Error::Antipodal => "ANTIPODAL",
            Error::EmptyPolyhedron => "EMPTY_POLYHEDRON",
            Error::NotThick => "NOT_THICK",
            Error::Lp(_) => "LP_FAILURE",
            Error::TileCap(_) => "TILE_CAP",
            Error::OutsideExplored => "OUTSIDE_EXPLORED",
            Error::LoopLeftWindow => "LOOP_LEFT_WINDOW",
            Error::Incidence(_) => "INCIDENCE",
            Error::UncoveredFacet { .. } => "UNCOVERED_FACET",
            Error::UnpairedSide { .. } => "UNPAIRED_SIDE",
            Error::AmbiguousPairing { .. } => "AMBIGUOUS_PAIRING",
            Error::PairingMismatch { .. } => "PAIRING_MISMATCH",
            Error::Cycle(_) => "EDGE_CYCLE",
            Error::RelationResidual { .. } => "RELATION_RESIDUAL",
            Error::PathCodim { .. } => "PATH_CODIM",
            Error::FactorRetries(_) => "FACTOR_RETRIES",
            Error::FactorMismatch(_) => "FACTOR_MISMATCH",
            Error::BasepointFixed => "BASEPOINT_FIXED",
            Error::Input(_) => "INVALID_INPUT",
            Error::Unsupported(_) => "UNSUPPORTED",
        }
    }

    /// Side index carried by the error, if any.
    pub fn side(&self) -> Option<usize> {
        match self {
            Error::UnpairedSide { side }
            | Error::AmbiguousPairing { side }
            | Error::PairingMismatch { side, .. } => Some(*side),
            Error::UncoveredFacet { facet } => Some(*facet),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
