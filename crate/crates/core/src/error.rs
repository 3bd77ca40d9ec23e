use thiserror::Error;

use crate::complex::Face;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed scalar: {0}")]
    MalformedScalar(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("value is not p-integral for p = {0}")]
    NotPIntegral(u64),
    #[error("reduction mod {0} is singular (denominator vanishes)")]
    ReductionSingular(u64),
    #[error("evaluation hit a pole")]
    EvaluationPole,
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("face {0} is not in the complex")]
    MissingFace(Face),
    #[error("vertex {vertex} is not in face {face}")]
    MissingVertex { vertex: usize, face: Face },
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("chain is not a cycle: boundary is nonzero on {0}")]
    NotACycle(Face),
    #[error("degree error: exponent sum {got}, expected {expected}")]
    Degree { got: usize, expected: usize },
    #[error("degree {degree} exceeds the built range {built}")]
    Range { degree: usize, built: usize },
    #[error("general position vector is degenerate for face {0}")]
    DegenerateRho(Face),
    #[error("the degree map vanishes identically; the cycle is degenerate")]
    DegenerateCycle,
    #[error("no face tau with x_tau * u nonzero was found")]
    NoDualFace,
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("trivial input: {0}")]
    TrivialInput(String),
    #[error("dimension mismatch between characteristics at degree {degree}: {dim_p} vs {dim_q}")]
    Torsion { degree: usize, dim_p: usize, dim_q: usize },
    #[error("wrong mode: {0}")]
    WrongMode(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
