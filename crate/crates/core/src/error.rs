use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} has degree {found}, expected {expected}")]
    NonRegular {
        vertex: usize,
        found: usize,
        expected: usize,
    },
    #[error("edge ({0}, {1}) is a loop or parallel edge, not allowed in simple mode")]
    IllegalSimple(usize, usize),
    #[error("degree {degree} times vertex count {vertex_count} is odd")]
    OddProduct { vertex_count: usize, degree: usize },
    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },
    #[error("simple regular graphs require degree >= 3, got {0}")]
    DegreeTooSmall(usize),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("decoration was built for a different graph")]
    DecorationMismatch,
    #[error("weight {0} outside [-1, 1]")]
    WeightOutOfRange(f64),

    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),
    #[error("configuration model exceeded {attempts} attempts without a valid sample")]
    RejectionBudgetExceeded { attempts: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("kernel evaluated at an endpoint |x| = 1")]
    EndpointSingular,
    #[error("every eigenvalue was excluded from the coarse-grained density")]
    AllEigenvaluesExcluded,

    #[error("input graph is bipartite")]
    BipartiteInput,
    #[error("mu = {mu} outside the open support |mu| < {bound}")]
    OutOfSupport { mu: f64, bound: f64 },
    #[error("mu coincides with the pole at +-d")]
    PoleAtD,

    #[error("evaluation point has w^2 s^2 = 1")]
    PolePoint,

    #[error("enumeration budget exceeded ({steps} steps > {budget})")]
    BudgetExceeded { steps: u128, budget: u128 },

    #[error("phase {0} is an integer multiple of pi")]
    DegeneratePhase(f64),
    #[error("mu - d e^(i phi) vanishes")]
    Pole,
    #[error("no root of the counting-function equation near mu = {mu}")]
    NoRootInBranch { mu: f64 },
    #[error("branch jump of {jump} at mu = {mu}")]
    BranchJump { mu: f64, jump: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
