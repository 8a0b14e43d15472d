use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("medium is not underdense: photon energy {photon_ev} eV must exceed plasma energy {plasma_ev} eV")]
    NotUnderdense { photon_ev: f64, plasma_ev: f64 },

    #[error("ambiguous input: give either the plasma energy or the electron density, not both")]
    AmbiguousInput,

    #[error("inverse iteration did not converge for eigenpair k = {k}")]
    NumericalFailure { k: usize },

    #[error("bracket [{lo}, {hi}] holds {count} eigenvalues, expected exactly one")]
    InvalidBracket { lo: f64, hi: f64, count: usize },

    #[error("characteristic-polynomial oracle found {found} roots, expected {expected}")]
    OracleFailure { found: usize, expected: usize },

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("evanescent solution rejected: imaginary p-hat is only acceptable inside a bounded interaction region (pass allow_evanescent)")]
    EvanescentRejected,

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}
