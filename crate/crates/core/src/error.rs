use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid geometry: {n_sites} sites is not of the form 7 + 4m")]
    InvalidGeometry { n_sites: usize },

    #[error("invalid couplings: need 0 < delta < big_delta, got delta = {delta}, big_delta = {big_delta}")]
    InvalidCouplings { delta: f64, big_delta: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mask {mask:#b} has {popcount} excitations but the basis stops at {max}")]
    SectorOverflow {
        mask: u64,
        popcount: u32,
        max: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("non-physical two-qubit state: {0}")]
    InvalidState(String),

    #[error(
        "second injection invalid: occupation of the target site is {occupation:e}, above the threshold {threshold:e}"
    )]
    InjectionInvalid { occupation: f64, threshold: f64 },

    #[error("no interior entanglement peak in [{start}, {end}]")]
    PeakNotFound { start: f64, end: f64 },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalFailure(_) | Error::PeakNotFound { .. } | Error::InvalidState(_)
        )
    }
}
