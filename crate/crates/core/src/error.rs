use alloc::string::String;

/// Errors raised by graph construction, operators, functionals and solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("nonpositive measure {mu} at vertex `{id}`")]
    NonpositiveMeasure { id: String, mu: f64 },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("nonpositive weight {w} on edge `{a}`-`{b}`")]
    NonpositiveWeight { a: String, b: String, w: f64 },
    #[error("edge `{a}`-`{b}` declared twice")]
    DuplicateEdge { a: String, b: String },
    #[error("asymmetric weight on edge `{a}`-`{b}`: {w_ab} vs {w_ba}")]
    AsymmetricWeight { a: String, b: String, w_ab: f64, w_ba: f64 },
    #[error("\u{3a9} must be nonempty")]
    EmptyInterior,
    #[error("vertex `{0}` is both interior and boundary")]
    OverlappingDomain(String),
    #[error("isolated vertex `{0}` in the domain")]
    IsolatedVertex(String),
    #[error("boundary vertex `{0}` has no interior neighbor")]
    DetachedBoundary(String),
    #[error("vertex `{outside}` is adjacent to interior vertex `{interior}` but is not a boundary vertex")]
    MissingBoundary { interior: String, outside: String },
    #[error("function has {got} values, domain has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("function is nonzero at boundary vertex `{0}` (Dirichlet function required)")]
    NotDirichlet(String),
    #[error("vertex `{0}` has neighbors outside the domain")]
    NeighborOutsideDomain(String),
    #[error("domain not closed for order m = {0}")]
    DomainNotClosed(u32),
    #[error("invalid exponent: {0}")]
    InvalidExponent(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("coefficient `{0}` must be strictly positive on the domain")]
    NonpositiveCoefficient(&'static str),
    #[error("function must be nonzero")]
    ZeroFunction,
    #[error("boundary adjacency hypothesis fails: some interior vertex has no boundary neighbor")]
    BoundaryAdjacencyFails,
    #[error("fibering map has fewer than two critical points (lambda too large for this direction)")]
    NoTwoRoots,
    #[error("coupling term vanishes along the initial direction")]
    CouplingVanishes,
    #[error("no negative-energy endpoint found along the ray")]
    NoFarEndpoint,
    #[error("mode requires {0}")]
    WrongProblemKind(&'static str),
    #[error("exact arithmetic needs {0}")]
    Inexact(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
