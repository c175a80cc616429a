//! Unique-match detection: per base window of the first string, the set of
//! grid windows of every other string within the low-cost threshold, their
//! maximal disjoint subsets, the over-matching zero rule, and the certified
//! tuples of the low-cost phase.

use super::windows::{disjoint, grid_geometry, Window};
use super::{CostEstimation, PipelineCtx, WindowTuple};
use crate::error::Result;
use crate::rat::{floor_usize, geometric_down, rat_usize, Rat};
use std::collections::BTreeSet;

/// Bitmask over the threshold-grid levels a window belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LevelMask(Vec<u64>);

impl LevelMask {
    fn empty(levels: usize) -> Self {
        LevelMask(vec![0; levels.div_ceil(64).max(1)])
    }

    fn set(&mut self, bit: usize) {
        self.0[bit / 64] |= 1 << (bit % 64);
    }

    fn get(&self, bit: usize) -> bool {
        self.0[bit / 64] >> (bit % 64) & 1 == 1
    }

    fn and(&self, other: &LevelMask) -> LevelMask {
        LevelMask(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a & b)
                .collect(),
        )
    }

    fn any(&self) -> bool {
        self.0.iter().any(|&w| w != 0)
    }
}

/// The candidate and disjoint match sets of every base window, kept for the
/// large-cost phase.
#[derive(Debug)]
pub struct MatchSets {
    pub beta: usize,
    /// The disjoint base-size partition of the first string.
    pub base_windows: Vec<Window>,
    /// Descending threshold grid `p/4, p/4/(1+eps), ..., >= 1/beta`.
    pub theta_grid: Vec<Rat>,
    /// `close[i][j-1]`: windows of string j+1 within pairwise cost
    /// `p*|w_i|/4` of base window i.
    pub close: Vec<Vec<Vec<Window>>>,
    /// Maximal index-disjoint subsets of `close`.
    pub disjoint_close: Vec<Vec<Vec<Window>>>,
    /// Base windows whose match sets were cleared by the over-matching rule.
    pub zeroed: Vec<bool>,
    /// Base windows that received at least one low-cost certified tuple.
    pub covered: Vec<bool>,
    /// Tuple enumeration hit the budget somewhere.
    pub truncated: bool,
}

fn sorted_common(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut common) = (0usize, 0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    common
}

fn base_partition(ctx: &PipelineCtx<'_>) -> Vec<Window> {
    let mut out = Vec::new();
    let mut start = 1usize;
    while start <= ctx.n {
        let end = (start + ctx.beta - 1).min(ctx.n);
        out.push(Window::new(ctx.strings[0].id(), start as u32, end as u32));
        start += ctx.beta;
    }
    out
}

struct Candidates {
    /// Sorted distinct (start, end) pairs with their grid-level masks.
    windows: Vec<((u32, u32), LevelMask)>,
}

fn build_candidates(ctx: &PipelineCtx<'_>, j: usize, grid: &[Rat]) -> Candidates {
    let n_j = ctx.strings[j].len() as u32;
    let geoms: Vec<_> = grid
        .iter()
        .map(|theta| grid_geometry(ctx.beta, theta, &ctx.params.epsilon))
        .collect();
    // the union only needs one enumeration per distinct stride: the grid is
    // descending in theta, so the first geometry per stride has the largest
    // (superset) size ladder
    let mut by_stride: std::collections::BTreeMap<usize, &_> = std::collections::BTreeMap::new();
    for geom in &geoms {
        by_stride.entry(geom.stride).or_insert(geom);
    }
    let mut all: BTreeSet<(u32, u32)> = BTreeSet::new();
    for geom in by_stride.values() {
        let mut start = 1u32;
        while start <= n_j {
            for &size in &geom.sizes {
                all.insert((start, (start + size as u32 - 1).min(n_j)));
            }
            start += geom.stride as u32;
        }
    }
    let windows = all
        .into_iter()
        .map(|(s, e)| {
            let mut mask = LevelMask::empty(grid.len());
            for (t, geom) in geoms.iter().enumerate() {
                if geom.contains(1, n_j, s, e) {
                    mask.set(t);
                }
            }
            ((s, e), mask)
        })
        .collect();
    Candidates { windows }
}

/// Phase one on plain inputs: builds the run context and delegates to
/// [`find_unique_match_ctx`].
pub fn find_unique_match(
    strings: &[crate::seq::Sequence],
    params: &super::PipelineParams,
) -> Result<(CostEstimation, MatchSets)> {
    let ctx = PipelineCtx::new(strings, params)?;
    find_unique_match_ctx(&ctx)
}

/// Phase one: certify every base window of the first string against the
/// overlapping window grids of the other strings at thresholds down to
/// `1/beta`, discarding over-matched windows.
pub(crate) fn find_unique_match_ctx(ctx: &PipelineCtx<'_>) -> Result<(CostEstimation, MatchSets)> {
    let m = ctx.m;
    let base = base_partition(ctx);
    let p_quarter = &ctx.params.p / rat_usize(4);
    // p/4 down to 1/beta; when p/4 is already below 1/beta the grid keeps
    // its top level, which certifies exact matches only
    let grid_floor = (rat_usize(1) / rat_usize(ctx.beta)).min(p_quarter.clone());
    let theta_grid = geometric_down(&p_quarter, &ctx.params.epsilon, &grid_floor);
    let candidates: Vec<Candidates> = (1..m)
        .map(|j| build_candidates(ctx, j, &theta_grid))
        .collect();

    let zero_threshold = rat_usize(16 * m) / (&ctx.params.p * &ctx.params.epsilon);
    let mut close: Vec<Vec<Vec<Window>>> = Vec::with_capacity(base.len());
    let mut disjoint_close: Vec<Vec<Vec<Window>>> = Vec::with_capacity(base.len());
    let mut zeroed = vec![false; base.len()];
    let mut covered = vec![false; base.len()];
    let mut truncated = false;
    let mut s1: CostEstimation = CostEstimation::new();

    for (i, w_i) in base.iter().enumerate() {
        let pair_budget = floor_usize(&(&ctx.params.p * rat_usize(w_i.len()) / rat_usize(2)));
        let mut wi_sorted: Vec<u32> = w_i.contents(&ctx.strings[0]).to_vec();
        wi_sorted.sort_unstable();
        let mut close_i: Vec<Vec<Window>> = Vec::with_capacity(m - 1);
        let mut masks_i: Vec<Vec<LevelMask>> = Vec::with_capacity(m - 1);
        for j in 1..m {
            let mut ws = Vec::new();
            let mut masks = Vec::new();
            let mut cand_sorted: Vec<u32> = Vec::new();
            for ((s, e), mask) in &candidates[j - 1].windows {
                // the common symbol multiset bounds the LCS from above, so
                // windows that cannot meet the budget skip the banded run
                cand_sorted.clear();
                cand_sorted
                    .extend_from_slice(ctx.strings[j].range(*s as usize, *e as usize));
                cand_sorted.sort_unstable();
                let common = sorted_common(&wi_sorted, &cand_sorted);
                let len = (*e - *s + 1) as usize;
                if w_i.len() + len > pair_budget + 2 * common {
                    continue;
                }
                let views = [ctx.view(0, w_i.start, w_i.end), ctx.view(j, *s, *e)];
                if crate::exact::banded::cumulative_within(&views, pair_budget).is_some() {
                    ws.push(Window::new(ctx.strings[j].id(), *s, *e));
                    masks.push(mask.clone());
                }
            }
            close_i.push(ws);
            masks_i.push(masks);
        }
        let disjoint_i: Vec<Vec<Window>> =
            close_i.iter().map(|ws| disjoint(ws)).collect();
        let total_disjoint: usize = disjoint_i.iter().map(|d| d.len()).sum();
        if rat_usize(total_disjoint) >= zero_threshold {
            zeroed[i] = true;
            close.push(vec![Vec::new(); m - 1]);
            disjoint_close.push(vec![Vec::new(); m - 1]);
            continue;
        }

        // enumerate the product of the close sets, certifying each tuple at
        // the smallest eligible grid threshold that upper-bounds its cost
        let slice_bounds: Vec<Rat> = theta_grid
            .iter()
            .map(|t| t * rat_usize(w_i.len()))
            .collect();
        let mut emitted = 0usize;
        let mut stack: Vec<usize> = vec![0; m - 1];
        let mut depth = 0usize;
        if close_i.iter().all(|ws| !ws.is_empty()) && !theta_grid.is_empty() {
            'product: loop {
                if depth == m - 1 {
                    emitted += 1;
                    if emitted > ctx.params.tuple_budget {
                        truncated = true;
                        break 'product;
                    }
                    let mut mask = masks_i[0][stack[0]].clone();
                    for j in 1..m - 1 {
                        mask = mask.and(&masks_i[j][stack[j]]);
                    }
                    if mask.any() {
                        let tuple = WindowTuple(
                            std::iter::once((w_i.start, w_i.end))
                                .chain(
                                    (0..m - 1)
                                        .map(|j| {
                                            let w = &close_i[j][stack[j]];
                                            (w.start, w.end)
                                        }),
                                )
                                .collect(),
                        );
                        // largest eligible threshold bounds the search
                        let top = (0..theta_grid.len()).find(|&t| mask.get(t)).unwrap();
                        let budget =
                            floor_usize(&(rat_usize(m) * &slice_bounds[top]));
                        if let Some(cum) = ctx.tuple_cumulative(&tuple, budget) {
                            let gcost = rat_usize(cum) / rat_usize(m);
                            // the tuple must clear some eligible slice bound;
                            // the certified value is the exact cost computed
                            // by the decision itself
                            let eligible = (0..theta_grid.len())
                                .rev()
                                .any(|t| mask.get(t) && slice_bounds[t] >= gcost);
                            if eligible {
                                covered[i] = true;
                                super::min_insert(&mut s1, tuple, gcost);
                            }
                        }
                    }
                    // advance
                    depth -= 1;
                    stack[depth] += 1;
                    continue;
                }
                if stack[depth] == close_i[depth].len() {
                    stack[depth] = 0;
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                    stack[depth] += 1;
                    continue;
                }
                depth += 1;
            }
        }
        close.push(close_i);
        disjoint_close.push(disjoint_i);
    }

    Ok((
        s1,
        MatchSets {
            beta: ctx.beta,
            base_windows: base,
            theta_grid,
            close,
            disjoint_close,
            zeroed,
            covered,
            truncated,
        },
    ))
}
