//! Windowed cost estimation for inputs whose first string is pseudorandom:
//! unique low-cost matches for the disjoint base windows, certified upper
//! bounds for the large-cost stretches, and a monotone-chain assembly over
//! the certified tuples.

pub mod estimation;
pub mod large_windows;
pub mod matching;
pub mod verify;
pub mod windows;

pub use estimation::{assemble_distance, multi_window_estimation, AssemblyResult};
pub use large_windows::{approx_large_windows, LargeStats};
pub use matching::{find_unique_match, MatchSets};
pub use verify::{gen_pseudorandom, verify_pseudorandom};
pub use windows::{beta, disjoint, window_gen, Window, WindowGrid, WindowLayer};

use crate::error::{Error, Result};
use crate::exact::banded::cumulative_within;
use crate::exact::hashing::{preprocess_hashes, HashIndex, HashSeeds, SeqView};
use crate::rat::{rat, rat_usize, Rat};
use crate::seq::{check_equal_lengths, check_inputs, Sequence};
use std::collections::BTreeMap;

/// An m-window tuple: per string the (start, end) bounds of its window.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WindowTuple(pub Vec<(u32, u32)>);

/// A certified tuple: windows plus a proven upper bound on their generalized
/// alignment cost.
#[derive(Debug, Clone)]
pub struct CertifiedTuple {
    pub windows: WindowTuple,
    pub cost: Rat,
}

/// Minimum certified cost per tuple.
pub type CostEstimation = BTreeMap<WindowTuple, Rat>;

/// Inserts with min-merge on the certified cost.
pub(crate) fn min_insert(map: &mut CostEstimation, key: WindowTuple, value: Rat) {
    match map.get_mut(&key) {
        Some(c) => {
            if value < *c {
                *c = value;
            }
        }
        None => {
            map.insert(key, value);
        }
    }
}

/// Pipeline configuration.
#[derive(Debug, Clone)]
pub struct PipelineParams {
    pub p: Rat,
    pub b: usize,
    pub epsilon: Rat,
    pub seed: u64,
    /// Re-verify the pseudorandomness hypothesis before running.
    pub verify: bool,
    /// Cumulative-cost cap for exact certification; costlier tuples fall back
    /// to the trivial upper bound.
    pub certify_cap: usize,
    /// Cap on enumerated window tuples per base window or anchor choice.
    pub tuple_budget: usize,
    /// Inputs up to this length enumerate the full per-threshold window grids
    /// in the large-cost phase; longer inputs restrict to anchor-gap windows.
    pub faithful_threshold: usize,
}

impl PipelineParams {
    pub fn new(p: Rat, b: usize, epsilon: Rat) -> Result<Self> {
        if p <= rat(0, 1) || p >= rat(1, 1) {
            return Err(Error::ParamOutOfRange("p must lie in (0, 1)".into()));
        }
        if b == 0 {
            return Err(Error::ParamOutOfRange("B must be at least 1".into()));
        }
        if epsilon <= rat(0, 1) || epsilon > rat(1, 6) {
            return Err(Error::ParamOutOfRange(
                "epsilon must lie in (0, 1/6]".into(),
            ));
        }
        Ok(PipelineParams {
            p,
            b,
            epsilon,
            seed: 0,
            verify: false,
            certify_cap: 160,
            tuple_budget: 2048,
            faithful_threshold: 20,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_verify(mut self, verify: bool) -> Self {
        self.verify = verify;
        self
    }
}

/// Shared per-run state: the strings and their fingerprint indexes.
pub(crate) struct PipelineCtx<'a> {
    pub strings: &'a [Sequence],
    pub indexes: Vec<HashIndex>,
    pub params: &'a PipelineParams,
    pub n: usize,
    pub m: usize,
    pub beta: usize,
}

impl<'a> PipelineCtx<'a> {
    pub fn new(strings: &'a [Sequence], params: &'a PipelineParams) -> Result<Self> {
        check_inputs(strings)?;
        let n = check_equal_lengths(strings)?;
        let seeds = HashSeeds::from_seed(crate::rng::stream_value(params.seed, "fingerprints"));
        let indexes = strings
            .iter()
            .map(|s| preprocess_hashes(s, &seeds))
            .collect();
        Ok(PipelineCtx {
            strings,
            indexes,
            params,
            n,
            m: strings.len(),
            beta: beta(n, params.b),
        })
    }

    pub fn view(&self, string_idx: usize, start: u32, end: u32) -> SeqView<'_> {
        SeqView {
            index: &self.indexes[string_idx],
            start: start as usize,
            len: (end - start + 1) as usize,
        }
    }

    /// Minimum cumulative alignment cost of the tuple if it is at most
    /// `budget`, else `None`.
    pub fn tuple_cumulative(&self, tuple: &WindowTuple, budget: usize) -> Option<usize> {
        let views: Vec<SeqView<'_>> = tuple
            .0
            .iter()
            .enumerate()
            .map(|(j, &(s, e))| self.view(j, s, e))
            .collect();
        cumulative_within(&views, budget)
    }

    /// A sound upper bound on the generalized cost of the tuple: exact when
    /// the cumulative cost fits under the certification cap, else the trivial
    /// bound `sum of lengths / m`. Budgets grow geometrically and a symbol
    /// multiset bound filters out hopeless tuples before any band runs.
    pub fn certify(&self, tuple: &WindowTuple) -> (Rat, bool) {
        let total: usize = tuple.0.iter().map(|&(s, e)| (e - s + 1) as usize).sum();
        let cap = total.min(self.params.certify_cap);
        let trivial = (rat_usize(total) / rat_usize(self.m), false);
        if self.cumulative_lower_bound(tuple) > cap {
            return trivial;
        }
        let mut budget = 8usize.min(cap);
        loop {
            if let Some(cum) = self.tuple_cumulative(tuple, budget) {
                return (rat_usize(cum) / rat_usize(self.m), true);
            }
            if budget == cap {
                return trivial;
            }
            budget = (budget * 2).min(cap);
        }
    }

    /// Cheap lower bound on the cumulative cost: the LCS cannot exceed the
    /// pairwise common symbol multiset of the first window with any other.
    fn cumulative_lower_bound(&self, tuple: &WindowTuple) -> usize {
        let m = tuple.0.len();
        let (s1, e1) = tuple.0[0];
        let w1 = self.strings[0].range(s1 as usize, e1 as usize);
        let mut hist: std::collections::HashMap<u32, i64> = std::collections::HashMap::new();
        for &sym in w1 {
            *hist.entry(sym).or_insert(0) += 1;
        }
        let total: usize = tuple.0.iter().map(|&(s, e)| (e - s + 1) as usize).sum();
        let mut min_common = w1.len();
        for (j, &(s, e)) in tuple.0.iter().enumerate().skip(1) {
            let mut h = hist.clone();
            let mut common = 0usize;
            for &sym in self.strings[j].range(s as usize, e as usize) {
                if let Some(c) = h.get_mut(&sym) {
                    if *c > 0 {
                        *c -= 1;
                        common += 1;
                    }
                }
            }
            min_common = min_common.min(common);
        }
        total.saturating_sub(m * min_common)
    }
}

/// Generalized cost of concrete windows resolved against their sequences.
pub fn generalized_cost_windows(windows: &[Window], strings: &[Sequence]) -> Result<Rat> {
    let contents: Vec<&[u32]> = windows
        .iter()
        .map(|w| {
            let s = strings
                .iter()
                .find(|s| s.id() == w.seq)
                .ok_or_else(|| Error::InvalidInput(format!("unknown sequence id {}", w.seq)))?;
            Ok(w.contents(s))
        })
        .collect::<Result<_>>()?;
    crate::exact::generalized_cost(&contents)
}

/// Per-run diagnostics in the vocabulary of the window classification.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub m: usize,
    pub beta: usize,
    pub base_windows: usize,
    pub uniquely_certified: usize,
    pub zeroed_windows: usize,
    pub uncovered_windows: usize,
    pub trivially_approximable: usize,
    pub large_cost_certified: usize,
    pub uncertifiable: usize,
    pub s1_tuples: usize,
    pub s2_tuples: usize,
    pub tuple_enumeration_truncated: bool,
    pub chain_length: usize,
    pub value: String,
}

/// The full pipeline: window estimation followed by the monotone assembly.
/// Returns the estimated distance (a rational in per-string units) and the
/// diagnostics report.
pub fn pseudo_align(
    strings: &[Sequence],
    params: &PipelineParams,
) -> Result<(Rat, PipelineReport)> {
    let ctx = PipelineCtx::new(strings, params)?;
    if params.verify && !verify_pseudorandom(&strings[0], &params.p, params.b.min(ctx.n))? {
        return Err(Error::Precondition(
            "first string is not (p,B)-pseudorandom".into(),
        ));
    }
    let (s1, match_sets) = matching::find_unique_match_ctx(&ctx)?;
    let (s2, large_stats) = large_windows::approx_large_windows_ctx(&ctx, &match_sets)?;
    let mut estimation: CostEstimation = s1.clone();
    for (tuple, cost) in &s2 {
        min_insert(&mut estimation, tuple.clone(), cost.clone());
    }
    let assembly = assemble_distance(&estimation, strings)?;
    let uncovered = match_sets.covered.iter().filter(|c| !**c).count();
    let report = PipelineReport {
        n: ctx.n,
        m: ctx.m,
        beta: ctx.beta,
        base_windows: match_sets.base_windows.len(),
        uniquely_certified: match_sets.covered.iter().filter(|c| **c).count(),
        zeroed_windows: match_sets.zeroed.iter().filter(|z| **z).count(),
        uncovered_windows: uncovered,
        trivially_approximable: large_stats.trivial_branch,
        large_cost_certified: large_stats.large_certified,
        uncertifiable: large_stats.fallback_trivial + large_stats.discarded,
        s1_tuples: s1.len(),
        s2_tuples: s2.len(),
        tuple_enumeration_truncated: match_sets.truncated || large_stats.truncated,
        chain_length: assembly.chain.len(),
        value: crate::rat::display(&assembly.value),
    };
    Ok((assembly.value, report))
}
