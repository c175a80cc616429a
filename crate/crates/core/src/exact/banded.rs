//! Banded diagonal-wave computation of the alignment distance.
//!
//! Diagonals are (m-1)-vectors `d` with entries in `[-k, k]`; the h-wave
//! stores, per diagonal, the furthest row reachable with cumulative deletion
//! cost at most h. Waves advance by single deletions (from the first string:
//! the `d + 1` neighbor, from another string: an L1-distance-1 neighbor below
//! `d`) followed by a maximal free run of matches answered by fingerprint
//! equality queries.

use crate::error::{Error, Result};
use crate::exact::hashing::{equal_run, preprocess_hashes, HashSeeds, SeqView, DEFAULT_HASH_SEED};
use crate::seq::{check_equal_lengths, check_inputs, Sequence};

const MAX_DIAGONALS: usize = 1 << 26;

/// One wave: per flattened diagonal the furthest row with cumulative cost at
/// most `h` (`-1` = unreachable).
#[derive(Debug, Clone)]
pub struct Wave {
    pub h: usize,
    pub rows: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandedOutcome {
    Distance(usize),
    ExceedsThreshold,
}

struct Band<'a> {
    views: Vec<SeqView<'a>>,
    k: i64,
    strides: Vec<usize>,
    count: usize,
}

impl<'a> Band<'a> {
    fn new(views: Vec<SeqView<'a>>, k: usize) -> Result<Self> {
        let m = views.len();
        let radix = 2 * k + 1;
        let mut count = 1usize;
        for _ in 1..m {
            count = count
                .checked_mul(radix)
                .filter(|&c| c <= MAX_DIAGONALS)
                .ok_or_else(|| Error::TooLarge("banded diagonal space".into()))?;
        }
        let mut strides = vec![1usize; m - 1];
        for j in (0..m.saturating_sub(2)).rev() {
            strides[j] = strides[j + 1] * radix;
        }
        Ok(Band {
            views,
            k: k as i64,
            strides,
            count,
        })
    }

    fn slide(&self, row: i64, diag: &[i64]) -> i64 {
        let mut pos = Vec::with_capacity(self.views.len());
        pos.push(row + 1);
        for &d in diag {
            pos.push(row + 1 + d);
        }
        row + equal_run(&self.views, &pos) as i64
    }

    /// Runs waves `0..=h_max`; returns the first `h` whose wave reaches row
    /// `n_1` on the final diagonal, optionally recording every wave.
    fn run(&self, h_max: usize, mut trace: Option<&mut Vec<Wave>>) -> Option<usize> {
        let m = self.views.len();
        let n1 = self.views[0].len as i64;
        let fin: Vec<i64> = self.views[1..]
            .iter()
            .map(|v| v.len as i64 - n1)
            .collect();
        if fin.iter().any(|&d| d.abs() > self.k) {
            return None;
        }
        let fin_idx: usize = fin
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| (d + self.k) as usize * s)
            .sum();

        let mut prev = vec![-1i64; self.count];
        let zero_idx: usize = self
            .strides
            .iter()
            .map(|&s| self.k as usize * s)
            .sum();
        let zero_diag = vec![0i64; m - 1];
        prev[zero_idx] = self.slide(0, &zero_diag);
        if let Some(t) = trace.as_deref_mut() {
            t.push(Wave {
                h: 0,
                rows: prev.clone(),
            });
        }
        if prev[fin_idx] == n1 {
            return Some(0);
        }

        let mut diag = vec![0i64; m - 1];
        for h in 1..=h_max {
            let mut cur = prev.clone();
            for d in diag.iter_mut() {
                *d = -self.k;
            }
            for idx in 0..self.count {
                if idx > 0 {
                    // advance mixed-radix diagonal coordinates
                    let mut j = m - 1;
                    loop {
                        j -= 1;
                        diag[j] += 1;
                        if diag[j] <= self.k {
                            break;
                        }
                        diag[j] = -self.k;
                    }
                }
                let mut cand = -1i64;
                // deletion from string j+2: neighbor below on coordinate j
                for j in 0..m - 1 {
                    if diag[j] > -self.k {
                        let r = prev[idx - self.strides[j]];
                        if r >= 0 && r + diag[j] <= self.views[j + 1].len as i64 {
                            cand = cand.max(r);
                        }
                    }
                }
                // deletion from the first string: neighbor at d + 1
                if diag.iter().all(|&d| d < self.k) {
                    let up: usize = idx + self.strides.iter().sum::<usize>();
                    let r = prev[up];
                    if r >= 0 && r < n1 {
                        cand = cand.max(r + 1);
                    }
                }
                if cand >= 0 {
                    let slid = self.slide(cand, &diag);
                    if slid > cur[idx] {
                        cur[idx] = slid;
                    }
                }
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(Wave {
                    h,
                    rows: cur.clone(),
                });
            }
            if cur[fin_idx] == n1 {
                return Some(h);
            }
            prev = cur;
        }
        None
    }
}

fn build_views<'a>(indexes: &'a [crate::exact::hashing::HashIndex]) -> Vec<SeqView<'a>> {
    indexes.iter().map(SeqView::whole).collect()
}

/// Alignment distance of equal-length strings if it is at most `k`, else
/// [`BandedOutcome::ExceedsThreshold`]. Waves run up to cumulative cost `k*m`.
pub fn banded_distance(strings: &[Sequence], k: usize) -> Result<BandedOutcome> {
    banded_distance_seeded(strings, k, DEFAULT_HASH_SEED)
}

/// [`banded_distance`] with explicit fingerprint seed material.
pub fn banded_distance_seeded(strings: &[Sequence], k: usize, seed: u64) -> Result<BandedOutcome> {
    check_inputs(strings)?;
    let n = check_equal_lengths(strings)?;
    let m = strings.len();
    let seeds = HashSeeds::from_seed(seed);
    let indexes: Vec<_> = strings
        .iter()
        .map(|s| preprocess_hashes(s, &seeds))
        .collect();
    let band = Band::new(build_views(&indexes), k.min(n))?;
    match band.run(k * m, None) {
        Some(h) => {
            debug_assert_eq!(h % m, 0);
            Ok(BandedOutcome::Distance(h / m))
        }
        None => Ok(BandedOutcome::ExceedsThreshold),
    }
}

/// Like [`banded_distance_seeded`] but returns every computed wave, for
/// inspecting the frontier structure.
pub fn banded_waves(
    strings: &[Sequence],
    k: usize,
    seed: u64,
) -> Result<(Vec<Wave>, BandedOutcome)> {
    check_inputs(strings)?;
    let n = check_equal_lengths(strings)?;
    let m = strings.len();
    let seeds = HashSeeds::from_seed(seed);
    let indexes: Vec<_> = strings
        .iter()
        .map(|s| preprocess_hashes(s, &seeds))
        .collect();
    let band = Band::new(build_views(&indexes), k.min(n))?;
    let mut trace = Vec::new();
    let outcome = match band.run(k * m, Some(&mut trace)) {
        Some(h) => BandedOutcome::Distance(h / m),
        None => BandedOutcome::ExceedsThreshold,
    };
    Ok((trace, outcome))
}

/// Minimum cumulative deletion cost of aligning the given window views, if it
/// is at most `budget`; `None` otherwise. The band of half-width `budget` is
/// complete for every alignment within the budget.
pub(crate) fn cumulative_within(views: &[SeqView<'_>], budget: usize) -> Option<usize> {
    debug_assert!(views.len() >= 2);
    let band = Band::new(views.to_vec(), budget).ok()?;
    band.run(budget, None)
}

/// Exact alignment distance of equal-length strings via doubling banded runs.
pub fn distance_doubling(strings: &[Sequence], seed: u64) -> Result<usize> {
    let n = check_equal_lengths(strings)?;
    let mut k = 1usize;
    loop {
        match banded_distance_seeded(strings, k, seed)? {
            BandedOutcome::Distance(d) => return Ok(d),
            BandedOutcome::ExceedsThreshold => {
                if k >= n {
                    return Err(Error::Precondition(
                        "distance exceeds sequence length".into(),
                    ));
                }
                k = (k * 2).min(n);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::alignment_distance_exact;
    use crate::seq::{seqs, Sequence};
    use rand::{Rng, SeedableRng};

    #[test]
    fn identical_strings_k0() {
        let strings = seqs(&["abc", "abc", "abc"]);
        assert_eq!(
            banded_distance(&strings, 0).unwrap(),
            BandedOutcome::Distance(0)
        );
    }

    #[test]
    fn small_distance() {
        let strings = seqs(&["abc", "abd", "abe"]);
        assert_eq!(
            banded_distance(&strings, 1).unwrap(),
            BandedOutcome::Distance(1)
        );
        assert_eq!(
            banded_distance(&strings, 0).unwrap(),
            BandedOutcome::ExceedsThreshold
        );
    }

    #[test]
    fn threshold_soundness_random() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(21);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let strings: Vec<Sequence> = (0..3)
                .map(|id| Sequence::new(id, (0..n).map(|_| rng.gen_range(0..3u32)).collect()))
                .collect();
            let d = alignment_distance_exact(&strings).unwrap();
            assert_eq!(
                banded_distance(&strings, d).unwrap(),
                BandedOutcome::Distance(d)
            );
            if d > 0 {
                assert_eq!(
                    banded_distance(&strings, d - 1).unwrap(),
                    BandedOutcome::ExceedsThreshold
                );
            }
        }
    }

    #[test]
    fn waves_are_pointwise_monotone() {
        let strings = seqs(&["abcabc", "acbacb", "abacbc"]);
        let (waves, _) = banded_waves(&strings, 4, 7).unwrap();
        for pair in waves.windows(2) {
            for (a, b) in pair[0].rows.iter().zip(&pair[1].rows) {
                assert!(b >= a);
            }
        }
    }
}
