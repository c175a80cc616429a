//! Exact multi-sequence LCS and alignment distance engines.

pub mod banded;
pub mod candidates;
pub mod dp;
pub mod hashing;

pub use banded::{banded_distance, banded_distance_seeded, banded_waves, BandedOutcome, Wave};
pub use candidates::{lcs_candidates, lcs_candidates_witness};
pub use dp::{lcs_exact, lcs_len};
pub use hashing::{equal_query, preprocess_hashes, HashIndex, HashSeeds};

use crate::error::{Error, Result};
use crate::rat::{rat_usize, Rat};
use crate::seq::{check_equal_lengths, check_inputs, Sequence};

/// Alignment distance of equal-length strings: `n - LCS`.
pub fn alignment_distance_exact(strings: &[Sequence]) -> Result<usize> {
    check_inputs(strings)?;
    let n = check_equal_lengths(strings)?;
    Ok(n - lcs_len(strings)?)
}

/// Generalized per-string alignment cost of `m` windows of possibly different
/// lengths: `(sum of lengths - m * LCS) / m`, as an exact rational.
///
/// For equal-length windows this coincides with the alignment distance.
pub fn generalized_cost(windows: &[&[u32]]) -> Result<Rat> {
    if windows.len() < 2 {
        return Err(Error::TooFewSequences {
            min: 2,
            got: windows.len(),
        });
    }
    let m = windows.len();
    let total: usize = windows.iter().map(|w| w.len()).sum();
    let l = if windows.iter().any(|w| w.is_empty()) {
        0
    } else {
        let seqs: Vec<Sequence> = windows
            .iter()
            .enumerate()
            .map(|(i, w)| Sequence::new(i as u32 + 1, w.to_vec()))
            .collect();
        lcs_len(&seqs)?
    };
    Ok((rat_usize(total) - rat_usize(m * l)) / rat_usize(m))
}
