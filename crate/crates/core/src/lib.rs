//! Coordinate-interleaved space-time block codes for three and four transmit
//! antennas.
//!
//! The crate builds every code as a linear-dispersion code over the real and
//! imaginary coordinates of its symbols, which makes three things mechanical:
//! the exhaustive minimum-determinant search (codeword differences are
//! codewords of symbol differences), the conditional maximum-likelihood decoder
//! (overlay symbols are cancelled by subtracting their dispersion), and the
//! equivalent channel matrix used for mutual-information analysis.
//!
//! The crate is `no_std` + `alloc` when built without the default `std`
//! feature. The `parallel` feature (on by default) spreads the determinant
//! search and the Monte-Carlo loops over a rayon pool; every result is
//! independent of the number of worker threads.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod capacity;
pub mod channel_sim;
pub mod codes;
pub mod coding_gain;
pub mod constellation;
pub mod decoding;
mod error;
pub mod linalg;
pub(crate) mod math;
pub(crate) mod par;
pub mod rng;

pub use codes::{CodeId, CodeSpec};
pub use constellation::Constellation;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
