use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("edge #{edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: usize, vertex: usize },
    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },
    #[error("vertex {vertex} has negative genus {genus}")]
    NegativeGenus { vertex: usize, genus: i64 },
    #[error("vertex ids must be exactly 0..r-1 without repeats; offending id {id}")]
    NonContiguousIds { id: i64 },
    #[error("edge #{edge} refers to unknown vertex {vertex}")]
    UnknownVertex { edge: usize, vertex: i64 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("descent exceeded the cap of {cap} on the total multiplicity")]
    IterationCapExceeded { cap: u64 },
    #[error("no feasible divisor with all multiplicities <= {bound}")]
    BoundTooSmall { bound: u64 },
    #[error("componentwise minimum {minimum:?} of the feasible set is itself infeasible")]
    MinimumNotFeasible { minimum: Vec<u64> },
    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("intersection matrix is singular")]
    Singular,
    #[error("solution is not integral: m_{vertex} = {value}")]
    NonIntegralSolution { vertex: usize, value: String },
    #[error("solution is not effective: m_{vertex} = {value}")]
    NonEffectiveSolution { vertex: usize, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpenBookError {
    #[error("graph is not Milnor fillable: its intersection form is not negative definite, so no Milnor filling exists")]
    NotMilnorFillable,
    #[error("all arrowhead counts are zero: there is no binding")]
    AllZero,
    #[error("expected {expected} arrowhead counts, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arrowhead count at vertex {vertex} is negative ({count})")]
    NegativeCount { vertex: usize, count: i64 },
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable z{index} at position {position} (only {n_vars} variables)")]
    UnknownVariable {
        index: usize,
        position: usize,
        n_vars: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContactError {
    #[error("sampling failed: {accepted} of {attempts} draws converged (need {needed})")]
    SamplingFailed {
        accepted: usize,
        attempts: usize,
        needed: usize,
    },
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("tangent space degenerates at the point (smallest singular value {sigma_min:e})")]
    DegenerateTangent { sigma_min: f64 },
    #[error("hermitian metric is singular at the point")]
    SingularMetric,
    #[error("gradient of rho vanishes at the point")]
    ZeroGradient,
    #[error("point lies on the binding: |f| = {modulus:e}")]
    OnBinding { modulus: f64 },
    #[error("mesh must contain at least one point")]
    InvalidMesh,
    #[error("no mesh point satisfies |f|^2 >= eta = {eta:e}")]
    EmptyRegion { eta: f64 },
    #[error("cone violation at mesh point {index}: dtheta(R) = {dtheta_r:e} <= 0 while |pr_xi grad theta| / |grad theta| = {ratio:e}")]
    ConeViolation {
        index: usize,
        dtheta_r: f64,
        ratio: f64,
    },
    #[error("point has {found} coordinates, variety needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial uses {found} variables, variety has {expected}")]
    VariableMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
