use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
    #[error("unknown generator name `{0}`")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("relator index {0} out of range")]
    DanglingRelator(usize),
    #[error("identity does not verify: {0}")]
    NotAnIdentity(String),
    #[error("not boundary-preserving: {0}")]
    NotBoundaryPreserving(String),
    #[error("boundary compatibility violated: {0}")]
    BoundaryCompatibility(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not aspherical: {0}")]
    NotAspherical(String),
    #[error("missing image for generator {0}")]
    MissingImage(usize),
    #[error("not a homomorphism: relator {0} does not map to the identity")]
    NotAHomomorphism(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("not a Seifert matrix: {0}")]
    NotSeifert(String),
    #[error("H1 has positive rank")]
    PositiveRank,
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("undefined cochain value: {0}")]
    UndefinedCochain(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownGenerator(_) => "unknown_generator",
            Error::UnknownName(_) => "unknown_name",
            Error::Parse(_) => "parse",
            Error::AlphabetMismatch(_) => "alphabet_mismatch",
            Error::DanglingRelator(_) => "dangling_relator",
            Error::NotAnIdentity(_) => "not_an_identity",
            Error::NotBoundaryPreserving(_) => "not_boundary_preserving",
            Error::BoundaryCompatibility(_) => "boundary_compatibility",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NotAspherical(_) => "not_aspherical",
            Error::MissingImage(_) => "missing_image",
            Error::NotAHomomorphism(_) => "not_a_homomorphism",
            Error::Dimension(_) => "dimension",
            Error::NoSolution(_) => "no_solution",
            Error::NotSeifert(_) => "not_seifert",
            Error::PositiveRank => "positive_rank",
            Error::InvalidGroup(_) => "invalid_group",
            Error::UndefinedCochain(_) => "undefined_cochain",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
