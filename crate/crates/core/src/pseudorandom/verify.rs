//! Pseudorandomness checking and generation of candidate base strings.

use crate::error::{Error, Result};
use crate::rat::{floor_usize, rat_usize, Rat};
use crate::rng::stream;
use crate::seq::Sequence;
use num::Signed;
use rand::Rng;

fn lcs2(a: &[u32], b: &[u32]) -> usize {
    let mut prev = vec![0u16; b.len() + 1];
    let mut cur = vec![0u16; b.len() + 1];
    for &x in a {
        for (j, &y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()] as usize
}

/// Exhaustively checks that every pair of disjoint length-`b` substrings of
/// `s` has pairwise distance at least `p * b`. Desk scale only: all start
/// pairs are tested.
pub fn verify_pseudorandom(s: &Sequence, p: &Rat, b: usize) -> Result<bool> {
    let n = s.len();
    if b == 0 || b > n {
        return Err(Error::ParamOutOfRange(format!(
            "block length {b} outside [1, {n}]"
        )));
    }
    // distance b - L >= p*b is equivalent to L <= floor(b - p*b)
    let slack = rat_usize(b) - p * rat_usize(b);
    if slack.is_negative() {
        return Ok(false);
    }
    let max_lcs = floor_usize(&slack);
    for i in 1..=n - b + 1 {
        for j in i + b..=n.saturating_sub(b) + 1 {
            let x = s.range(i, i + b - 1);
            let y = s.range(j, j + b - 1);
            if lcs2(x, y) > max_lcs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Uniform i.i.d. sequence over `alphabet_size` symbols, deterministic per
/// seed.
pub fn gen_pseudorandom(n: usize, alphabet_size: u32, seed: u64) -> Result<Sequence> {
    if alphabet_size < 2 {
        return Err(Error::ParamOutOfRange(
            "alphabet size must be at least 2".into(),
        ));
    }
    let mut rng = stream(seed, "pseudorandom-base");
    Ok(Sequence::new(
        1,
        (0..n).map(|_| rng.gen_range(0..alphabet_size)).collect(),
    ))
}
