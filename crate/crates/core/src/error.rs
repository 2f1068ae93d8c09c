use thiserror::Error;

/// Errors raised by lattice, decomposition and body computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("intersection form has signature ({positive}, {negative}) with nullity {zero}; expected (1, {expected_negative})")]
    Signature {
        positive: usize,
        negative: usize,
        zero: usize,
        expected_negative: usize,
    },
    #[error("intersection matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("ample class fails positivity: {0}")]
    AmpleClass(String),
    #[error("duplicate or empty curve label `{0}`")]
    Label(String),
    #[error("invalid curve `{0}`: class must be nonzero")]
    ZeroCurve(String),
    #[error("effective generators: {0}")]
    Generators(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("divisor is not pseudoeffective")]
    NotPseudoeffective,
    #[error("divisor is not big")]
    NotBig,
    #[error("divisor is not nef")]
    NotNef,
    #[error("negative support is inconsistent: {0}")]
    Support(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("negative coefficient on `{0}` in an effective combination")]
    NegativeCoefficient(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("inadmissible flag: {0}")]
    InadmissibleFlag(String),
    #[error("point `{0}` lies on no catalog curve")]
    IsolatedPoint(String),
    #[error("pseudoeffective threshold is unbounded along the given direction")]
    UnboundedThreshold,
    #[error("limiting body did not stabilize by k = {k_max}")]
    Stabilization { k_max: u32 },
    #[error("body leaves the nonnegative orthant")]
    OrthantViolation,
    #[error("invalid fixture parameter: {0}")]
    Parameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
