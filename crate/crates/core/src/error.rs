use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A curve label does not belong to the intersection graph in use.
    #[error("unknown curve: {0}")]
    UnknownCurve(String),

    /// A set of curves was required to be pairwise disjoint but is not.
    #[error("curves are not pairwise disjoint: {0} and {1} intersect")]
    NotDisjoint(String, String),

    /// A requested enumeration or count exceeds the supported size.
    #[error("result too large: {0}")]
    TooLarge(String),

    /// Genus outside the supported range (hyperbolic surfaces need g >= 2).
    #[error("invalid genus {0}: expected g >= 2")]
    InvalidGenus(usize),

    /// Two objects built over different intersection graphs were combined.
    #[error("intersection graph mismatch: {0}")]
    GraphMismatch(String),

    /// A chamber index fell outside the realized part of the development.
    #[error("unrealized chamber: {0}")]
    UnrealizedChamber(String),

    /// An iterative solver failed to meet its tolerance within its budget.
    #[error("solver failed to converge: {0}")]
    SolverNoConvergence(String),

    /// A wall operation was applied at a point not on that wall.
    #[error("point is not at the wall: {0}")]
    NotAtWall(String),

    /// A broken-geodesic path violates a structural precondition.
    #[error("malformed path: {0}")]
    MalformedPath(String),

    /// An input violates a documented constraint (range, sign, shape).
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    /// A feasibility problem (e.g. convex decomposition) has no solution;
    /// the payload carries a certificate when one is available.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A map that must be a bijection failed the bijectivity audit.
    #[error("not a bijection: {0}")]
    NotBijective(String),

    /// A claimed group relation does not hold.
    #[error("relation violated: {0}")]
    RelationViolated(String),

    /// A symmetry does not preserve the chart data it must preserve.
    #[error("chart not preserved: {0}")]
    ChartNotPreserved(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
