use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("ambiguous membership: two fiber roots qualify for the disk")]
    AmbiguousMembership,
    #[error("point is not in the closed domain of the Schwarz reflection")]
    NotInDomain,
    #[error("parameter outside the supported regime: {0}")]
    OutsideRegime(String),
    #[error("point lies on the branch cut")]
    BranchCut,
    #[error("fiber has no root outside the closed disk")]
    NoExteriorRoot,
    #[error("indeterminate: minimum curve distance {distance:e} within a factor 10 of tolerance {tol:e}")]
    Indeterminate { distance: f64, tol: f64 },
    #[error("itinerary hits a cell endpoint at step {0}")]
    HitsBoundary(usize),
    #[error("parabolic point is not simple (translation constant vanishes)")]
    NotSimple,
    #[error("point is not in the parabolic basin within budget")]
    NotInBasin,
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("inconsistent normalization: constant spread {spread:e}")]
    InconsistentNormalization { spread: f64 },
    #[error("degenerate quadratic (coefficient at infinity)")]
    DegenerateQuadratic,
    #[error("point is not in V_a")]
    NotInVa,
    #[error("continuation path obstructed at step {step}")]
    PathObstructed { step: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
