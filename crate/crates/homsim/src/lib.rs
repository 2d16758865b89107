//! Two-boson interference on lossy beamsplitters.
//!
//! A lossy splitter's reflection and transmission amplitudes `(r, t)` are
//! only constrained by sub-unitarity (`|t ± r| ≤ 1`), which frees their
//! relative phase: the two-particle coincidence rate at zero delay can dip
//! below the classical level (coalescence), exceed it (anti-coalescence), or
//! stay flat, depending on the sign of `2·Re(t²·conj(r)²)`.
//!
//! The crate provides:
//!
//! * [`beamsplitter`]: validation, loss accounting, two-particle outcome
//!   probabilities, and unitary dilation of the lossy transfer matrix;
//! * [`fock`]: an exact permanent-based few-boson oracle used to cross-check
//!   every closed-form probability;
//! * [`wavepacket`]: Gaussian spectral packets and the delay-dependent
//!   overlap integral `I(τ)`;
//! * [`interference`]: coincidence scans over delay, contrast/kind
//!   extraction, Mach-Zehnder fringes, and the classical-field benchmark;
//! * [`counting`] + [`stream`]: a Monte Carlo detection chain emitting
//!   clock-tick timestamp streams, a coincidence counter, and the stream
//!   wire formats;
//! * [`presets`]: the two characterized splitter presets (`sample-I`,
//!   `sample-II`).
//!
//! ```
//! use homsim::BeamsplitterSpec;
//! use num_complex::Complex64;
//!
//! // Quadrature phase between r and t nulls the coincidence rate.
//! let spec = BeamsplitterSpec::new(
//!     Complex64::new(0.0, 0.5),
//!     Complex64::new(0.5, 0.0),
//! );
//! assert!(spec.quantum_coincidence().unwrap() < 1e-12);
//! assert_eq!(spec.loss_fraction().unwrap(), 0.5);
//! ```
//!
//! Runnable demonstrations of each capability live under `examples/`; the
//! `homsim` binary exposes the same operations as subcommands.

pub mod beamsplitter;
pub mod cli;
pub mod counting;
pub mod error;
pub mod fock;
pub mod interference;
pub mod presets;
pub mod stream;
pub mod tol;
pub mod wavepacket;

pub use beamsplitter::{BeamsplitterSpec, OutcomeDistribution, PhaseInfo, ValidationReport};
pub use counting::{Channel, CoincidenceReport, ExperimentConfig, StreamPair, TimestampStream};
pub use error::{Error, Result};
pub use fock::{FockState, LabeledParticleState, ModeTransform};
pub use interference::{ContrastAssessment, FringeTraces, ScanKind, ScanResult};
pub use presets::PhaseVariant;
pub use wavepacket::{OverlapResult, WavepacketSpec};
