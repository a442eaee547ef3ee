use thiserror::Error;

/// Errors raised anywhere in the evaluation and certification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point is not in the upper half-plane (imaginary part must be positive)")]
    NonPositiveImaginaryPart,
    #[error("|q| is too close to 1 for {target_bits}-bit accuracy")]
    QTooCloseToOne { target_bits: u32 },
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
    #[error("Siegel index ({0}) lies in Z^2")]
    IntegerIndex(String),
    #[error("Siegel function vanished numerically at this point (magnitude below error bound)")]
    NumericalZero,
    #[error("matrix determinant is {0}, expected 1")]
    NotUnimodular(i64),
    #[error("determinant {det} is not invertible modulo {modulus}")]
    NotInvertibleDeterminant { det: i64, modulus: u64 },
    #[error("product is not Galois-stable (stable power is {0})")]
    NotGaloisStable(u64),
    #[error("m = {0} must be odd and at least 3")]
    EvenOrSmallM(i64),
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamentalDiscriminant(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {index} is {distance} away from the nearest integer")]
    CoefficientNotNearInteger { index: usize, distance: String },
    #[error("coefficient {index} needs {bits} bits, more than the {limit} bits resolved at this precision")]
    CoefficientTooLarge { index: usize, bits: u32, limit: u32 },
    #[error("coefficient {index} has imaginary part of size {magnitude}")]
    ImaginaryResidue { index: usize, magnitude: String },
    #[error("rounded polynomial does not vanish at conjugate {index} (residual 2^{log2_residual})")]
    ResidualTooLarge { index: usize, log2_residual: i64 },
    #[error("empty conjugate list")]
    EmptyConjugates,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("polynomial is not a power of a linear or quadratic integer polynomial")]
    NotQuadraticPower,
    #[error("certification failed: {0}")]
    CertificationFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
