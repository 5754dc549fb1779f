//! Two-party cryptography in the bounded- and noisy-storage model.
//!
//! The crate simulates non-uniform weak string erasure (WSE) where Alice
//! encodes random dits in one of the `d + 1` mutually unbiased bases of a
//! qudit, reduces the WSE output to fully randomized oblivious transfer
//! (FROT) with purely classical post-processing, and evaluates the closed-form
//! security quantities (min-entropy rates, error exponents, security regions).
//!
//! Module map:
//!
//! - [`mub`]: construction and verification of complete MUB families, measurement
//!   entropies and the entropic uncertainty relation.
//! - [`qsim`]: per-qudit Born-rule sampling, depolarizing storage noise and
//!   posterior guessing.
//! - [`wse`]: the WSE protocol as a phase-ordered two-party state machine, adversarial
//!   strategies for Bob, and statistical checks of the index set.
//! - [`secparams`]: capacities, strong-converse exponents, `λ`, `ε`, security regions
//!   and OT parameters.
//! - [`ot`]: subset encoding, interactive hashing, Toeplitz extraction and the
//!   WSE-to-FROT reduction.
//! - [`cli`]: the `bsm` command-line front end.
//!
//! Indices are 0-based throughout: positions live in `0..n`, block rows in `0..m`.

pub mod bits;
pub mod cli;
pub mod error;
pub mod mub;
pub mod ot;
pub mod output;
pub mod qsim;
pub mod rng;
pub mod secparams;
pub mod stats;
pub mod wse;

pub use error::{Error, Result};
