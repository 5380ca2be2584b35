//! Polarization-resolved Fock-space simulation of passive linear optics, and a
//! four-party Bell analyzer for the post-selected polarization states.
//!
//! Everything is generic over the real scalar `T: Real` (implemented for `f32`
//! and `f64`); the `*64` aliases below are the double-precision instantiations
//! used by the command-line tool and the acceptance suite.
//!
//! ```
//! use fockbell::{postselect::scheme_superposition, bell};
//!
//! let result = scheme_superposition::<f64>();
//! let state = bell::FourPartyRegister::new(result.register).unwrap();
//! let tensor = bell::correlation_tensor(&state, &bell::PhaseSettings::standard());
//! assert!(bell::bell_verdict(&tensor).violated);
//! ```

pub mod bell;
pub mod error;
pub mod fock;
pub mod optics;
pub mod oracle;
pub mod postselect;
pub mod scalar;

pub use error::{Error, Result};
pub use fock::{FockState, Mode, OccupationVector, Pol};
pub use scalar::{Amplitude, Real};

pub type FockState64 = fock::FockState<f64>;
pub type FockState32 = fock::FockState<f32>;
pub type LinearElement64 = optics::LinearElement<f64>;
pub type Circuit64 = optics::Circuit<f64>;
pub type QubitRegister64 = postselect::QubitRegister<f64>;
pub type SchemeResult64 = postselect::SchemeResult<f64>;
pub type PhaseSettings64 = bell::PhaseSettings<f64>;
pub type CorrelationTensor64 = bell::CorrelationTensor<f64>;
pub type OperatorPolynomial64 = oracle::OperatorPolynomial<f64>;
