use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field elements belong to different towers: {0} vs {1}")]
    TowerMismatch(String, String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("element {0} has no inverse")]
    ZeroDivision(String),
    #[error("tower {0} has no extension level; the top automorphism is undefined")]
    NoExtension(String),
    #[error("element {0} is not in the base field")]
    NotInBase(String),
    #[error("expected the Gaussian field Q(i), found {0}")]
    NotGaussian(String),
    #[error("wrong tower: {0}")]
    WrongTower(String),
    #[error("invalid code description: {0}")]
    InvalidSpec(String),
    #[error("constellation too large: {tuples} tuples exceeds cap {cap}")]
    TooLarge { tuples: u128, cap: u128 },
    #[error("empty constellation")]
    EmptyConstellation,
    #[error("element {0} is not an algebraic integer")]
    NonIntegral(String),
    #[error("fraction b_n/b_d = {0} does not equal b = {1}")]
    FractionMismatch(String, String),
    #[error("real input {0}: the isomorphism criterion needs non-real scalars")]
    RealInput(String),
    #[error("degenerate codebook: {0}")]
    Degenerate(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
