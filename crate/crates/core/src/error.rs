use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefinedHom(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("group is not finite: factors {0:?}")]
    Infinite(Vec<u64>),
    #[error("sheaves live on different bases")]
    BaseMismatch,
    #[error("homomorphism is not Frobenius-equivariant at generator {generator}")]
    NotEquivariant { generator: usize },
    #[error("inclusion is not injective")]
    NotInjective,
    #[error("character is ill-defined on generator {generator}")]
    IllDefinedCharacter { generator: usize },
    #[error("{what}: size {actual} exceeds bound {bound}")]
    BoundExceeded {
        what: &'static str,
        bound: u64,
        actual: u64,
    },
    #[error("lattice is not split: {0}")]
    NotSplit(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
