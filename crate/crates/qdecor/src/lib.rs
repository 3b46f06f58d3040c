//! Covariant decorrelation channels.
//!
//! Two-qubit decorrelators are built as Choi operators covariant under SU(2) acting on the
//! signals, either independently per qubit (`diff`) or identically on both (`ident`). Each has a
//! closed-form optimal output Bloch length and a feasibility solve for the channel parameters.
//! `gaussian` covers the continuous-variable analogue at the correlation-matrix level, and
//! `nocloning` gives a Fourier-degree witness that informative clones stay correlated.

pub mod choi;
pub mod diff;
pub mod error;
pub mod gaussian;
pub mod ident;
pub mod linalg;
pub mod nocloning;
pub mod par;
pub mod qubit;
pub mod sampling;
pub mod sweep;

pub use error::{Error, Result};
