use thiserror::Error;

/// Errors raised anywhere in the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spin must be positive: 2j = 0 is not a physical site")]
    ZeroSpin,

    #[error("operator side {required} exceeds the dimension cap {cap}")]
    DimensionCap { required: u128, cap: usize },

    #[error("site index {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a bond needs two distinct sites, got {0} twice")]
    SelfBond(usize),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("eigensolver did not converge (sector 2M = {sector:?})")]
    EigenNonConvergence { sector: Option<i64> },

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("kept sites {0} and {1} do not form a (1/2, s) pair")]
    NotMixedPair(usize, usize),

    #[error("correlator {value} outside the physical range [{min}, {max}]")]
    CorrelatorOutOfRange { value: f64, min: f64, max: f64 },

    #[error("state is not SU(2)-invariant (defect {0:.3e})")]
    NotSu2Invariant(f64),

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),

    #[error("no threshold located <= {ceiling}")]
    ThresholdNotFound { ceiling: f64 },

    #[error("no entanglement at the starting temperature {0}")]
    NotEntangledAtStart(f64),

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
