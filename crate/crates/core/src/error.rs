use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({u},{v}) has non-positive weight {weight}")]
    NonPositiveWeight { u: usize, v: usize, weight: f64 },
    #[error("edge ({u},{v}) given twice")]
    DuplicateEdge { u: usize, v: usize },
    #[error("{0} needs at least one vertex or part")]
    EmptyConstruction(&'static str),
    #[error("{what} needs size at least {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("not a permutation of the vertex set")]
    InvalidPermutation,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumberError {
    #[error("2-adic valuation of zero is infinite")]
    ZeroValuation,
    #[error("exact values carry different square-free radicands {0} and {1}")]
    MixedRadicands(i64, i64),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("eigensolver produced non-finite values; max |entry| = {max_entry:e}")]
    EigensolverFailure { max_entry: f64 },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("empty graph has no spectrum")]
    Empty,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("Laplacian walks on direct products need both factors regular; the closed form is unknown otherwise")]
    IrregularProductLaplacian,
    #[error("part sizes must be at least 2, got {0}")]
    PartTooSmall(usize),
    #[error("at most {max} factors supported, got {got}")]
    TooManyFactors { max: usize, got: usize },
    #[error("product must have at least one factor")]
    NoFactors,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwinError {
    #[error("vertex {0} is not in the twin set")]
    NotMember(usize),
    #[error("twin eigenvalue {theta} not found in the spectrum (nearest {nearest})")]
    ThetaMissing { theta: f64, nearest: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SedentaryError {
    #[error("subset must be a non-empty proper subset of the support")]
    NotProperSubset,
    #[error("subset weight a = {0} is below 1/2")]
    WeightTooSmall(f64),
    #[error("blow-up needs m >= 2, got {0}")]
    BlowUpTooSmall(usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Twin(#[from] TwinError),
    #[error(transparent)]
    Number(#[from] NumberError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("part index {index} out of range for {parts} parts")]
    PartOutOfRange { index: usize, parts: usize },
    #[error("cell {cell} out of range for {cells} cells")]
    CellOutOfRange { cell: usize, cells: usize },
    #[error("threshold form is not connected (last cell must be complete)")]
    Disconnected,
    #[error("only adjacency and Laplacian matrices are covered")]
    UnsupportedMatrix,
    #[error(transparent)]
    Sedentary(#[from] SedentaryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Number(#[from] NumberError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
    #[error("at byte {pos}: {msg}")]
    Dsl { pos: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
