use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    InvalidField(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-commutative: b{i}*b{j} != b{j}*b{i}")]
    NonCommutative { i: usize, j: usize },
    #[error("non-associative: (b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})")]
    NonAssociative { i: usize, j: usize, k: usize },
    #[error("non-local: nilpotent elements have codimension {codim}, expected 1")]
    NonLocal { codim: usize },
    #[error("bad unit: the given unit does not act as the identity on b{0}")]
    BadUnit(usize),
    #[error("invalid algebra presentation: {0}")]
    InvalidPresentation(String),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    #[error("the ideal is the whole algebra")]
    ImproperIdeal,
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("module axiom fails: {0}")]
    ModuleAxiom(String),
    #[error("subspace is not invariant under the algebra action")]
    NotInvariant,
    #[error("map is not equivariant")]
    NotEquivariant,

    #[error("algebra is not Gorenstein (socle dimension {socle_dim})")]
    NotGorenstein { socle_dim: usize },
    #[error("module has a free direct summand; the operator needs a stable module")]
    NotStable,
    #[error("ideal does not annihilate the module")]
    AnnihilatorViolation,
    #[error("invalid degree or window: {0}")]
    InvalidDegree(String),

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("hypothesis holds on the window but could not be certified: {0}")]
    HypothesisNotCertified(String),

    #[error("{location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }
}
