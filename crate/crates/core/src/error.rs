use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("systems differ (sizes {left} and {right})")]
    SystemMismatch { left: usize, right: usize },
    #[error("coefficient has length {got}, expected {expected}")]
    CoefficientLength { expected: usize, got: usize },
    #[error("brute-force search refused for n = {0} (limit {limit})", limit = crate::dynsys::BRUTE_FORCE_LIMIT)]
    OracleTooLarge(usize),
    #[error("invalid conjugacy witness: {0}")]
    InvalidWitness(String),
    #[error("point {0} is out of range")]
    PointOutOfRange(usize),
    #[error("point {point} is not fixed, so the disc parameter must be 0")]
    NotFixed { point: usize },
    #[error("point {point} is fixed by the map")]
    FixedPoint { point: usize },
    #[error("point {point} is not pre-periodic onto a fixed point (eta(eta(x)) != eta(x))")]
    NotPreperiodic { point: usize },
    #[error("disc parameter |z| = {modulus} is not inside the open disc of radius {radius}")]
    OnBoundary { modulus: f64, radius: f64 },
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("truncation must be at least 1")]
    InvalidTruncation,
    #[error("pole of the Mobius map at z = {0}")]
    Pole(num_complex::Complex64),
    #[error("singular Mobius matrix (ad - bc = 0)")]
    Singular,
    #[error("map does not send the closed unit disk into itself (max |eta| = {0})")]
    NotDiskSelfMap(f64),
    #[error("{0} is not an interior fixed point of the map")]
    NotInteriorFixed(num_complex::Complex64),
    #[error("scale parameter must be nonzero")]
    ZeroScale,
    #[error("conjugacy is not decidable for this input: {0}")]
    NotDecidable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSystem(_) => "InvalidSystem",
            Error::SystemMismatch { .. } => "SystemMismatch",
            Error::CoefficientLength { .. } => "CoefficientLength",
            Error::OracleTooLarge(_) => "OracleTooLarge",
            Error::InvalidWitness(_) => "InvalidWitness",
            Error::PointOutOfRange(_) => "PointOutOfRange",
            Error::NotFixed { .. } => "NotFixed",
            Error::FixedPoint { .. } => "FixedPoint",
            Error::NotPreperiodic { .. } => "NotPreperiodic",
            Error::OnBoundary { .. } => "OnBoundary",
            Error::InvalidRadius(_) => "InvalidRadius",
            Error::InvalidTruncation => "InvalidTruncation",
            Error::Pole(_) => "Pole",
            Error::Singular => "Singular",
            Error::NotDiskSelfMap(_) => "NotDiskSelfMap",
            Error::NotInteriorFixed(_) => "NotInteriorFixed",
            Error::ZeroScale => "ZeroScale",
            Error::NotDecidable(_) => "NotDecidable",
            Error::Parse(_) => "Parse",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
