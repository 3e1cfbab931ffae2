use thiserror::Error;

/// Errors surfaced by the fallible public operations.
///
/// Structural misuse (mixing polynomials from different ambient rings,
/// differentiating with respect to a variable that does not exist) panics
/// instead; see the individual operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix series has a singular constant term")]
    SingularConstantTerm,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,

    #[error("specialization at mu = 0 hits a pole (negative mu-power present)")]
    MuPole,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("target degree {target} is not of the form {deg_f} + {deg_g} - 2k")]
    TargetDegree {
        deg_f: u32,
        deg_g: u32,
        target: u32,
    },

    #[error("coefficients must be plain rationals (no mu, no imaginary part)")]
    NotPlainRational,

    #[error("polynomial is not a quadratic form")]
    NotQuadratic,

    #[error("numerator degree {num_degree} violates the degree-zero condition (must be {required})")]
    FractionDegree { num_degree: u32, required: u32 },

    #[error("denominator base is zero")]
    ZeroDenominator,

    #[error("chart base must be a single coordinate variable")]
    NotChartVariable,

    #[error("fractions live over different denominator bases")]
    BaseMismatch,

    #[error("series phase has a nonzero constant term; only rest initial data can be expanded")]
    NonzeroPhaseConstant,
}

pub type Result<T> = std::result::Result<T, Error>;
