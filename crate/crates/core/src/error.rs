use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid finite set: {0}")]
    InvalidSet(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("carrier mismatch in {op}: {detail}")]
    CarrierMismatch { op: &'static str, detail: String },

    #[error("{0} carries no factor structure")]
    MissingFactors(&'static str),

    #[error("factor count mismatch: domain has {dom} factors, codomain has {cod}")]
    FactorCountMismatch { dom: usize, cod: usize },

    #[error("factor index {index} out of range for {count} factors")]
    FactorIndex { index: usize, count: usize },

    #[error("invalid stochastic map: {0}")]
    InvalidKernel(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("size {size} exceeds the cap of {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(op: &'static str, detail: impl Into<String>) -> Error {
    Error::CarrierMismatch {
        op,
        detail: detail.into(),
    }
}
