//! Rolling-hash fingerprints over a 61-bit Mersenne-prime field, one table
//! per power-of-two window length, and the multi-way equality query built on
//! them.
//!
//! Two independent random-seeded bases back every fingerprint; a fingerprint
//! match at the final binary-search resolution is accepted without character
//! verification. Seeds derive from the run seed, so a collision is detectable
//! by re-running with a different seed.

use crate::error::{Error, Result};
use crate::seq::Sequence;

pub const M61: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let folded = ((t >> 61) + (t & M61 as u128)) as u64;
    if folded >= M61 {
        folded - M61
    } else {
        folded
    }
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= M61 {
        s - M61
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + M61 - b
    }
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// The two polynomial bases shared by all indexes of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashSeeds {
    b1: u64,
    b2: u64,
}

pub const DEFAULT_HASH_SEED: u64 = 0x6d6c_6373_5f68_6173;

impl HashSeeds {
    pub fn from_seed(seed: u64) -> Self {
        let mut state = seed;
        let b1 = 2 + splitmix(&mut state) % (M61 - 4);
        let b2 = 2 + splitmix(&mut state) % (M61 - 4);
        HashSeeds { b1, b2 }
    }
}

impl Default for HashSeeds {
    fn default() -> Self {
        HashSeeds::from_seed(DEFAULT_HASH_SEED)
    }
}

/// Per-level fingerprint tables of one sequence: level `l` holds the
/// fingerprints of all substrings of length `2^l`, addressable by 1-based
/// start index. Level `l` exists iff `2^l <= n`.
pub struct HashIndex {
    n: usize,
    seeds: HashSeeds,
    levels: Vec<Vec<(u64, u64)>>,
}

impl HashIndex {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn seeds(&self) -> HashSeeds {
        self.seeds
    }

    /// Fingerprint of the length-`2^level` substring starting at 1-based
    /// `start`.
    pub fn fingerprint(&self, start: usize, level: usize) -> (u64, u64) {
        self.levels[level][start - 1]
    }
}

/// Builds the `floor(log2 n) + 1` fingerprint tables of `s`.
pub fn preprocess_hashes(s: &Sequence, seeds: &HashSeeds) -> HashIndex {
    let n = s.len();
    let mut prefix1 = vec![0u64; n + 1];
    let mut prefix2 = vec![0u64; n + 1];
    let mut pow1 = vec![1u64; n + 1];
    let mut pow2 = vec![1u64; n + 1];
    for (i, &sym) in s.symbols().iter().enumerate() {
        let x = u64::from(sym) + 1;
        prefix1[i + 1] = addmod(mulmod(prefix1[i], seeds.b1), x % M61);
        prefix2[i + 1] = addmod(mulmod(prefix2[i], seeds.b2), x % M61);
        pow1[i + 1] = mulmod(pow1[i], seeds.b1);
        pow2[i + 1] = mulmod(pow2[i], seeds.b2);
    }
    let window = |start: usize, len: usize| -> (u64, u64) {
        // substring [start, start+len-1], 1-based
        let a = submod(prefix1[start + len - 1], mulmod(prefix1[start - 1], pow1[len]));
        let b = submod(prefix2[start + len - 1], mulmod(prefix2[start - 1], pow2[len]));
        (a, b)
    };
    let mut levels = Vec::new();
    let mut size = 1usize;
    while size <= n {
        let table: Vec<(u64, u64)> = (1..=n - size + 1).map(|i| window(i, size)).collect();
        levels.push(table);
        size <<= 1;
    }
    HashIndex {
        n,
        seeds: *seeds,
        levels,
    }
}

/// A window of a preprocessed sequence: positions `1..=len` of the view map
/// to `start..start+len-1` of the parent.
#[derive(Clone, Copy)]
pub struct SeqView<'a> {
    pub index: &'a HashIndex,
    pub start: usize,
    pub len: usize,
}

impl<'a> SeqView<'a> {
    pub fn whole(index: &'a HashIndex) -> Self {
        SeqView {
            index,
            start: 1,
            len: index.len(),
        }
    }
}

/// Longest common run: the largest `r` such that all views agree on the `r`
/// symbols starting at their respective 1-based positions `pos[j]`. Clamped
/// at the shortest applicable suffix.
pub(crate) fn equal_run(views: &[SeqView<'_>], pos: &[i64]) -> usize {
    let mut cap = usize::MAX;
    for (v, &p) in views.iter().zip(pos) {
        debug_assert!(p >= 1);
        let remaining = v.len as i64 - p + 1;
        if remaining <= 0 {
            return 0;
        }
        cap = cap.min(remaining as usize);
    }
    let max_level = views
        .iter()
        .map(|v| v.index.level_count())
        .min()
        .unwrap_or(0);
    let mut run = 0usize;
    for level in (0..max_level).rev() {
        let size = 1usize << level;
        if run + size > cap {
            continue;
        }
        let first = views[0]
            .index
            .fingerprint(views[0].start + pos[0] as usize - 1 + run, level);
        let all_eq = views.iter().zip(pos).skip(1).all(|(v, &p)| {
            v.index.fingerprint(v.start + p as usize - 1 + run, level) == first
        });
        if all_eq {
            run += size;
        }
    }
    run
}

/// The largest `q >= i` with `s_1[i,q] = s_j[i+d_{j-1}, q+d_{j-1}]` for all
/// `j in [2,m]`; returns `i-1` when the first positions already mismatch.
/// `q` is clamped at the shortest applicable suffix.
pub fn equal_query(indexes: &[&HashIndex], i: usize, diag: &[i64]) -> Result<usize> {
    if indexes.len() < 2 || diag.len() != indexes.len() - 1 {
        return Err(Error::InvalidInput(
            "equal_query needs m indexes and an (m-1)-vector diagonal".into(),
        ));
    }
    let n1 = indexes[0].len();
    if i < 1 || i > n1 + 1 {
        return Err(Error::IndexOutOfRange(format!("query start {i}")));
    }
    let mut views = Vec::with_capacity(indexes.len());
    let mut pos = Vec::with_capacity(indexes.len());
    views.push(SeqView::whole(indexes[0]));
    pos.push(i as i64);
    for (j, &idx) in indexes.iter().enumerate().skip(1) {
        let p = i as i64 + diag[j - 1];
        if p < 1 {
            return Err(Error::IndexOutOfRange(format!(
                "query start {p} in string {}",
                j + 1
            )));
        }
        views.push(SeqView::whole(idx));
        pos.push(p);
    }
    Ok(i + equal_run(&views, &pos) - 1)
}
