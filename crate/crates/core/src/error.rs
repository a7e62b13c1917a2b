use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in this crate.
///
/// Variants fall into three families which the command line front end maps
/// onto exit codes: malformed input, violated preconditions, and exhausted
/// semi-decision bounds (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid matrix pair: {0}")]
    InvalidPair(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("search bound of {0} states exhausted")]
    BoundExceeded(usize),

    #[error("the pair is not contracting (need |B_ij| < A_ij on the support of A)")]
    NotContracting,
    #[error("the matrix A is not irreducible")]
    NotIrreducible,
    #[error("the action is not pseudo-free")]
    NotPseudoFree,
    #[error("no level n has at least two paths of length n ending at every vertex")]
    DegenerateGraph,
    #[error("point does not lie in the source cylinder of the arrow")]
    IncompatibleArrow,
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("point lies outside the source of the bisection")]
    OutsideSource,
    #[error("source and range of the bisection overlap")]
    OverlappingSupport,
    #[error("not a bisection: {0}")]
    NotBisection(String),
    #[error("not a full bisection")]
    NotFull,
    #[error("a piece has nonzero degree; the element is not in the kernel groupoid")]
    NotInKernelGroupoid,
    #[error("class is not in the kernel of rho^0")]
    NotInKernel,
    #[error("nonzero index: {0}")]
    NonzeroIndex(String),
    #[error("no path of the requested length ends at vertex {0}")]
    NoPathToVertex(usize),
    #[error("rho^1 equation not solved up to level {0}")]
    SolveFailed(usize),
    #[error("limit classes live in different groups")]
    TagMismatch,
}

impl Error {
    /// Exit code used by the command line tool: 1 for unreadable input,
    /// 3 when a bounded search ran out, 2 for every other precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::InvalidPair(_)
            | Error::InvalidPath(_)
            | Error::InvalidTriple(_) => 1,
            Error::BoundExceeded(_) => 3,
            _ => 2,
        }
    }
}
