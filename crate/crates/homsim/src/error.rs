//! Crate-wide error type.

use thiserror::Error;

use crate::beamsplitter::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs contained NaN or infinity where finite values are required.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// A beamsplitter spec failed the physicality constraints.
    #[error("unphysical beamsplitter: {0}")]
    Unphysical(ValidationReport),

    /// Wavepacket overlap outside [0, 1].
    #[error("overlap I = {0} outside [0, 1]")]
    OverlapOutOfRange(f64),

    /// A mode transform that must be unitary is not.
    #[error("mode transform is not unitary (max deviation {0:.3e}); dilate lossy transforms first")]
    NonUnitary(f64),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("permanent of {0}x{0} matrix exceeds the supported size (8)")]
    PermanentTooLarge(usize),

    #[error("unsupported particle number {0}: expected 1..=4")]
    ParticleNumber(usize),

    #[error("mode count mismatch: state has {state} modes, transform has {transform}")]
    ModeMismatch { state: usize, transform: usize },

    /// Far-delay coincidence baseline is zero, so contrast is undefined.
    #[error("classical coincidence baseline is zero; contrast undefined")]
    ZeroBaseline,

    /// One of |r|, |t| vanishes: fringes have zero visibility and no phase.
    #[error("fringe visibility is zero (|r||t| = 0); phase difference undefined")]
    NoFringes,

    #[error("timestamp streams disagree on clock frequency ({a} Hz vs {b} Hz)")]
    ClockMismatch { a: f64, b: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
