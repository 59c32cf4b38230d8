use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("precision {0} bits is too small")]
    PrecisionTooSmall(u32),
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("element is a square")]
    IsSquare,
    #[error("square root generates an unramified extension")]
    UnramifiedSubextension,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("element is not a norm")]
    NotANorm,
    #[error("norm solver failed to converge although the symbol is trivial")]
    SolverStalled,
    #[error("biquadratic extension is not fully ramified")]
    NotFullyRamified,
    #[error("no arrangement of u, v, uv satisfies the symbol conditions")]
    NoValidArrangement,
    #[error("target s3 = {0} unreachable")]
    TargetUnreachable(i64),
    #[error("triple not in catalog")]
    NotInCatalog,
    #[error("construction requires sqrt(-1) in the base field")]
    RequiresI,
    #[error("automorphism does not extend: defining element not fixed at step {0}")]
    NotGaloisStable(usize),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("configuration: {0}")]
    Config(String),
}
