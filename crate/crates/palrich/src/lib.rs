//! Palindromic richness of words, and what to expect of it in random words.
//!
//! The crate has three layers:
//!
//! * counting structures: an online palindromic tree ([`eertree`]) and a
//!   fingerprint-based distinct-square counter ([`squares`]);
//! * exact combinatorics: border arrays, border polynomials, and counts of
//!   words avoiding a fixed factor, with their growth asymptotics
//!   ([`avoidance`]);
//! * the analytic model for the expected number of distinct palindromic
//!   factors of a random word — the oscillating √n coefficients, their
//!   liminf/limsup constants, and per-length predictions ([`analytic`]) —
//!   plus the Monte Carlo and exact-enumeration harness that checks the
//!   model against measurements ([`experiments`]).
//!
//! Word generation ([`wordgen`]) is deterministic and splittable: every
//! trial's word is a pure function of a `(master, stream)` seed pair.

pub mod analytic;
pub mod avoidance;
pub mod eertree;
mod error;
pub mod experiments;
pub mod squares;
pub mod wordgen;
mod word;

pub use error::{Error, Result};
pub use word::Word;

/// Exact rationals returned by the enumeration oracles.
pub use num_rational::BigRational;
