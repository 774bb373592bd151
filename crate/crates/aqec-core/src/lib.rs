//! Simulation and analysis core for autonomous quantum error correction under
//! a global-decoder model.
//!
//! The crate is `no_std` with `alloc`. File formats, the command-line runner
//! and thread pools live in the `aqec` crate.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod code;
pub mod decoders;
pub mod error;
pub mod lindblad;
pub mod pauli;
pub mod sampling;
pub mod trajectory;

pub use code::{five_qubit_code, repetition_code, toric_code, LogicalClass, StabilizerCode, Syndrome};
pub use decoders::{build_lookup, Decoder, ErrorBasis};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliOperator, Phase};
