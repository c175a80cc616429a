//! Exact and approximate algorithms for multi-sequence longest common
//! subsequence (LCS) and alignment distance.
//!
//! The crate provides three exact engines (classic dynamic programming,
//! minimal candidate frontiers, and a banded diagonal-wave algorithm backed by
//! rolling-hash equality queries), two constrained alignment DPs that maximize
//! or minimize the overlap of the unaligned characters of the first string
//! with given index sets, a below-2 approximation of the alignment distance
//! for the large-distance regime, a quadratic-in-group-size LCS approximation,
//! and a windowed estimation pipeline for inputs whose first string is
//! pseudorandom. A test kit with brute-force oracles and seeded instance
//! generators backs the acceptance suites.

pub mod error;
pub mod rat;
pub mod rng;
pub mod seq;
pub mod alignment;
pub mod exact;
pub mod similarity;
pub mod large_align;
pub mod lcs_approx;
pub mod pseudorandom;
pub mod testkit;

pub use alignment::Alignment;
pub use error::{Error, Result};
pub use rat::Rat;
pub use seq::{AlphabetMode, Interner, Sequence};
