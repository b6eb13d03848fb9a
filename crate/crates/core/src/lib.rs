//! Secret communication over the pure-loss bosonic wiretap channel.
//!
//! The scheme chains three pieces: an invertible finite-field extractor
//! ([`extractor`]), a Reed-Solomon erasure code ([`rscode`]) and
//! pulse-position modulation over a lossy photon channel ([`channel`]).
//! [`pipeline`] wires Alice's encoder and Bob's decoder together and runs
//! Monte-Carlo trials; [`bounds`] holds the closed-form capacity,
//! finite-blocklength error/secrecy bounds and the parameter optimizer.

pub mod error;
pub mod galois;
pub mod extractor;
pub mod rscode;
pub mod channel;
pub mod pipeline;
pub mod bounds;
pub mod cli;
mod special;

pub use error::{DecodeFailure, Error, Result};
