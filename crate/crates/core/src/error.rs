use thiserror::Error;

pub type Result<T, E = HfError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HfError {
    #[error("crossing {0} appears more than once in the curve system")]
    DuplicateCrossing(u32),
    #[error("missing crossing: {0}")]
    MissingCrossing(String),
    #[error("the curve graph and tubes do not form a connected surface")]
    DisconnectedMap,
    #[error("Euler characteristic {0} does not give an integer genus")]
    NonIntegerGenus(i64),
    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: u32, q: u32 },
    #[error("face at corner {0} carries no basepoint")]
    UnpointedFace(String),
    #[error("schema error at {location}: {message}")]
    SchemaError { location: String, message: String },
    #[error("curve {curve} has no basepoint on its {side} side")]
    LemmaViolation { curve: String, side: String },
    #[error("diagram is not nice: {0}")]
    NotNice(String),
    #[error("domain is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("no domain connects {0} to {1}")]
    NoConnectingDomain(String, String),
    #[error("differential does not square to zero at ({0}, {1})")]
    NotAChainComplex(String, String),
    #[error("twisted complex has {0} variables; univariate homology needs exactly one")]
    NotUnivariate(usize),
    #[error("move precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invariance violated after move {step}: {message}")]
    InvarianceViolation { step: usize, message: String },
    #[error("{faces} unpointed faces exceed the exhaustive search cap of {cap}")]
    TooLarge { faces: usize, cap: usize },
    #[error("Maslov additivity violated: {0}")]
    AdditivityViolation(String),
    #[error("integer overflow in lattice reduction")]
    Overflow,
}
