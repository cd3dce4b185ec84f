use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("reference to unknown vertex `{0}`")]
    DanglingEndpoint(String),
    #[error("ids must be nonempty")]
    EmptyId,
    #[error("edge id `{0}` contains the reserved `*`")]
    ReservedId(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph carries infinite bundles")]
    InfiniteBundlePresent,
    #[error("result exceeds the cap of {0}")]
    ResultCapExceeded(usize),
    #[error("graph contains a loop")]
    HasLoop,
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("sigma is not a permutation of the path positions")]
    InvalidPermutation,
    #[error("edge sequence is not a path")]
    NotAPath,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("longest path has length {longest}, shorter than k = {k}")]
    NoKPath { longest: usize, k: usize },
    #[error("vertices are not totally ordered by reachability")]
    NotTotallyOrdered,
    #[error("graph is not a sorted k-front followed by a longer tail")]
    NotInFkForm,
    #[error("search budget of {0} graphs exceeded")]
    SearchBudgetExceeded(usize),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("{0} vertices exceed the cap of {1}")]
    TooManyVertices(usize, usize),
    #[error("vertex set is not hereditary")]
    NotHereditary,
    #[error("map is not total: `{0}` has no image")]
    PartialMap(String),
    #[error("map is not injective")]
    NotInjective,
    #[error("map is not a graph homomorphism")]
    NotHomomorphism,
    #[error("edge `{0}` has different endpoints in the two graphs")]
    IncompatibleOverlap(String),
    #[error("ghost id `{0}` collides with an existing edge")]
    StarIdCollision(String),
    #[error("elements belong to different graphs")]
    GraphMismatch,
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("reduction exceeded the budget of {0} steps")]
    ReductionBudgetExceeded(usize),
    #[error("inclusion is not admissible")]
    NotAdmissible,
    #[error("graph is not row-finite")]
    NotRowFinite,
    #[error("intersection is not admissible")]
    NotAdmissibleIntersection,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
