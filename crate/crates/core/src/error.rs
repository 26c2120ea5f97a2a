use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("atom rank list must be nonempty")]
    EmptyComposition,
    #[error("atom ranks must be positive (got {0})")]
    NonPositiveRank(i64),
    #[error("position {position} out of range 1..={total}")]
    PositionOutOfRange { position: usize, total: usize },
    #[error("pisom pair ({row},{col}) lies below the block diagonal")]
    NotInAlgebra { row: usize, col: usize },
    #[error("duplicate row or column position in pisom pairs")]
    DuplicatePosition,
    #[error("summand atom map is not weakly monotone")]
    NotMonotone,
    #[error("codomain atom {atom} has rank {rank} but needs {needed} slots")]
    CapacityExceeded { atom: usize, rank: u32, needed: u32 },
    #[error("embedding needs at least one summand")]
    EmptySummandList,
    #[error("matrix unit relation violated: {0}")]
    RelationViolation(String),
    #[error("matrix unit image leaves the codomain algebra: {0}")]
    NotInCodomainAlgebra(String),
    #[error("matrix unit image has an irregular block restriction")]
    IrregularImage,
    #[error("partial isometry does not lie in the embedding's domain algebra")]
    NotInDomain,
    #[error("domain/codomain mismatch in composition")]
    DomainMismatch,
    #[error("embedding is not T2-degenerate ({atoms} codomain atoms touched)")]
    NotT2Degenerate { atoms: usize },
    #[error("K0 matrix columns have unequal sums")]
    InconsistentColumns,
    #[error("no locally order conserving embedding realizes this K0 matrix")]
    NoLocRealization,
    #[error("margin vectors do not match: {0}")]
    MarginMismatch(String),
    #[error("matrix support is not in staircase form")]
    NotStaircase,
    #[error("matrix support is not strictly monotone")]
    NotStrictlyMonotone,
    #[error("no positive corner entry at cell ({0},{1}); data is not realizable")]
    CornerMissing(usize, usize),
    #[error("degenerate input: the target rank distribution is zero")]
    DegenerateInput,
    #[error("operation requires a triangular domain (all atom ranks 1)")]
    NotTriangularDomain,
    #[error("group homomorphism is not order preserving")]
    NotOrderPreserving,
    #[error("direct system chain does not compose: {0}")]
    ChainMismatch(String),
    #[error("stage index {index} out of range (system has {stages} stages)")]
    StageOutOfRange { index: usize, stages: usize },
    #[error("block permutation does not preserve atom intervals")]
    NotBlockPreserving,
}

pub type Result<T> = std::result::Result<T, Error>;
