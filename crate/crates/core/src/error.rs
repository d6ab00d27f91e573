use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("matrix is singular (pivot {pivot:e})")]
    Singular { pivot: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("value out of domain: {0}")]
    Domain(&'static str),
    #[error("non-binary symbol {value} at position {index}")]
    NonBinary { index: usize, value: u8 },
    #[error("invalid frame layout: {0}")]
    Frame(&'static str),
    #[error("no pilot symbols with encoded value {class}")]
    PilotDegenerate { class: u8 },
    #[error("both conditional likelihoods vanish")]
    DegenerateLikelihood,
    #[error("non-finite value in {0}")]
    NumericFault(&'static str),
    #[error("training data: {0}")]
    Training(&'static str),
}
