//! Large-cost window certification. Base-size multiples of the first string
//! whose neighbors carry unique low-cost matches are matched inside the
//! substring bracketed by the neighbors' matches; a large gap sum certifies
//! the trivial cost, otherwise the tuple cost is certified exactly under a
//! cumulative cap with the trivial bound as fallback.
//!
//! Small inputs enumerate the full per-threshold window grids of the listing;
//! past `faithful_threshold` the enumeration is restricted to the anchor-gap
//! windows, which are the targets a restricted monotone mapping uses.

use super::matching::MatchSets;
use super::windows::{grid_geometry, GridGeometry, Window};
use super::{min_insert, CostEstimation, PipelineCtx, WindowTuple};
use crate::error::Result;
use crate::rat::{geometric_down, rat_usize, Rat};
use crate::seq::Sequence;
use num::One;
use std::collections::BTreeSet;

/// Counters for the diagnostics report.
#[derive(Debug, Clone, Default)]
pub struct LargeStats {
    pub processed: usize,
    pub discarded: usize,
    pub trivial_branch: usize,
    pub large_certified: usize,
    pub fallback_trivial: usize,
    pub truncated: bool,
}

#[derive(Clone, Copy)]
enum Anchor {
    Edge,
    Base(usize),
}

/// Per string: matched anchor windows, `None` for a virtual edge anchor.
type AnchorChoice = Vec<(Option<Window>, Option<Window>)>;

fn anchor_options(
    ms: &MatchSets,
    anchor: Anchor,
    j: usize,
) -> Vec<Option<Window>> {
    match anchor {
        Anchor::Edge => vec![None],
        Anchor::Base(t) => ms.disjoint_close[t][j].iter().copied().map(Some).collect(),
    }
}

fn anchor_disqualified(ms: &MatchSets, anchor: Anchor) -> bool {
    match anchor {
        Anchor::Edge => false,
        Anchor::Base(t) => ms.zeroed[t] || ms.close[t].iter().any(|ws| ws.is_empty()),
    }
}

fn region_grid_windows(
    ctx: &PipelineCtx<'_>,
    region: (u32, u32),
    d: usize,
    thetas: &[Rat],
) -> Vec<(u32, u32)> {
    // one geometry per distinct stride suffices: for a fixed stride the
    // ladder of the largest threshold contains all smaller ones
    let mut by_stride: std::collections::BTreeMap<usize, GridGeometry> =
        std::collections::BTreeMap::new();
    for theta in thetas {
        let geom = grid_geometry(d, theta, &ctx.params.epsilon);
        by_stride.entry(geom.stride).or_insert(geom);
    }
    let mut set: BTreeSet<(u32, u32)> = BTreeSet::new();
    for geom in by_stride.values() {
        let mut start = region.0;
        while start <= region.1 {
            for &size in &geom.sizes {
                set.insert((start, (start + size as u32 - 1).min(region.1)));
            }
            start += geom.stride as u32;
        }
    }
    set.into_iter().collect()
}

/// Enumerates the cartesian product of per-string window lists, invoking
/// `emit` per tuple until the budget runs out. Returns whether it truncated.
fn for_each_tuple(
    lists: &[Vec<(u32, u32)>],
    budget: usize,
    mut emit: impl FnMut(&[(u32, u32)]),
) -> bool {
    if lists.iter().any(|l| l.is_empty()) {
        return false;
    }
    let k = lists.len();
    let mut stack = vec![0usize; k];
    let mut chosen: Vec<(u32, u32)> = vec![(0, 0); k];
    let mut depth = 0usize;
    let mut count = 0usize;
    loop {
        if depth == k {
            count += 1;
            if count > budget {
                return true;
            }
            emit(&chosen);
            depth -= 1;
            stack[depth] += 1;
            continue;
        }
        if stack[depth] == lists[depth].len() {
            stack[depth] = 0;
            if depth == 0 {
                return false;
            }
            depth -= 1;
            stack[depth] += 1;
            continue;
        }
        chosen[depth] = lists[depth][stack[depth]];
        depth += 1;
    }
}

struct SpanJob {
    start: u32,
    end: u32,
    left: Anchor,
    right: Anchor,
}

fn candidate_spans(ctx: &PipelineCtx<'_>, ms: &MatchSets) -> Vec<SpanJob> {
    let base = &ms.base_windows;
    let last = base.len() - 1;
    let mut jobs = Vec::new();
    let mut push = |u: usize, v: usize| {
        jobs.push(SpanJob {
            start: base[u].start,
            end: base[v].end,
            left: if u == 0 { Anchor::Edge } else { Anchor::Base(u - 1) },
            right: if v == last { Anchor::Edge } else { Anchor::Base(v + 1) },
        });
    };
    if ctx.n <= ctx.params.faithful_threshold {
        for len in 1..=base.len() {
            for u in 0..=base.len() - len {
                push(u, u + len - 1);
            }
        }
    } else {
        // maximal runs of base windows without a low-cost certificate
        let mut u = 0usize;
        while u < base.len() {
            if ms.covered[u] {
                u += 1;
                continue;
            }
            let mut v = u;
            while v + 1 < base.len() && !ms.covered[v + 1] {
                v += 1;
            }
            push(u, v);
            u = v + 1;
        }
    }
    jobs
}

/// Phase two on plain inputs: builds the run context and delegates to
/// [`approx_large_windows_ctx`].
pub fn approx_large_windows(
    strings: &[Sequence],
    params: &super::PipelineParams,
    ms: &MatchSets,
) -> Result<(CostEstimation, LargeStats)> {
    let ctx = PipelineCtx::new(strings, params)?;
    approx_large_windows_ctx(&ctx, ms)
}

/// Phase two: certified tuples for the large-cost spans of the first string.
pub(crate) fn approx_large_windows_ctx(
    ctx: &PipelineCtx<'_>,
    ms: &MatchSets,
) -> Result<(CostEstimation, LargeStats)> {
    let m = ctx.m;
    let mut s2 = CostEstimation::new();
    let mut stats = LargeStats::default();
    let faithful = ctx.n <= ctx.params.faithful_threshold;
    let large_thetas = geometric_down(
        &Rat::one(),
        &ctx.params.epsilon,
        &(&ctx.params.p / rat_usize(16)),
    );

    for job in candidate_spans(ctx, ms) {
        if anchor_disqualified(ms, job.left) || anchor_disqualified(ms, job.right) {
            stats.discarded += 1;
            continue;
        }
        stats.processed += 1;
        let span_len = (job.end - job.start + 1) as usize;

        // cartesian product of per-string anchor pairs
        let mut combos: Vec<AnchorChoice> = vec![Vec::new()];
        for j in 0..m - 1 {
            let lefts = anchor_options(ms, job.left, j);
            let rights = anchor_options(ms, job.right, j);
            let mut next = Vec::new();
            for combo in &combos {
                for l in &lefts {
                    for r in &rights {
                        if next.len() >= 4096 {
                            stats.truncated = true;
                            break;
                        }
                        let mut c = combo.clone();
                        c.push((*l, *r));
                        next.push(c);
                    }
                }
            }
            combos = next;
        }

        for combo in &combos {
            let mut gap_sum: i64 = 0;
            let mut regions: Vec<(u32, u32)> = Vec::with_capacity(m - 1);
            let mut gaps: Vec<Option<(u32, u32)>> = Vec::with_capacity(m - 1);
            let mut degenerate = false;
            for (j, (l, r)) in combo.iter().enumerate() {
                let n_j = ctx.strings[j + 1].len() as i64;
                let e_left = l.map_or(0i64, |w| i64::from(w.end));
                let s_right = r.map_or(n_j + 1, |w| i64::from(w.start));
                if s_right <= e_left {
                    degenerate = true;
                    break;
                }
                gap_sum += s_right - e_left;
                let reg_start = l.map_or(1i64, |w| (i64::from(w.start) - ctx.beta as i64).max(1));
                let reg_end = r.map_or(n_j, |w| (i64::from(w.end) + ctx.beta as i64).min(n_j));
                regions.push((reg_start as u32, reg_end as u32));
                gaps.push(if s_right - e_left >= 2 {
                    Some(((e_left + 1) as u32, (s_right - 1) as u32))
                } else {
                    None
                });
            }
            if degenerate {
                continue;
            }

            if gap_sum >= (5 * m * span_len) as i64 {
                // trivial branch: every tuple of windows no longer than the
                // span is certified at the span length
                let lists: Vec<Vec<(u32, u32)>> = if faithful {
                    regions
                        .iter()
                        .map(|&reg| {
                            region_grid_windows(ctx, reg, span_len, &[Rat::one()])
                                .into_iter()
                                .filter(|&(s, e)| (e - s + 1) as usize <= span_len)
                                .collect()
                        })
                        .collect()
                } else {
                    gaps.iter()
                        .map(|g| match g {
                            Some((s, e)) => {
                                let trimmed_start =
                                    (*s).max(e.saturating_sub(span_len as u32 - 1));
                                vec![(trimmed_start, *e)]
                            }
                            None => Vec::new(),
                        })
                        .collect()
                };
                let cost = rat_usize(span_len);
                let truncated = for_each_tuple(&lists, ctx.params.tuple_budget, |chosen| {
                    let tuple = WindowTuple(
                        std::iter::once((job.start, job.end))
                            .chain(chosen.iter().copied())
                            .collect(),
                    );
                    min_insert(&mut s2, tuple, cost.clone());
                    stats.trivial_branch += 1;
                });
                stats.truncated |= truncated;
            } else {
                let lists: Vec<Vec<(u32, u32)>> = if faithful {
                    regions
                        .iter()
                        .map(|&reg| region_grid_windows(ctx, reg, span_len, &large_thetas))
                        .collect()
                } else {
                    regions
                        .iter()
                        .zip(&gaps)
                        .map(|(&reg, gap)| {
                            let mut v = Vec::new();
                            if let Some(g) = gap {
                                v.push(*g);
                            }
                            if !v.contains(&reg) {
                                v.push(reg);
                            }
                            v
                        })
                        .collect()
                };
                let mut emitted: Vec<(WindowTuple, Rat, bool)> = Vec::new();
                let truncated = for_each_tuple(&lists, ctx.params.tuple_budget, |chosen| {
                    let tuple = WindowTuple(
                        std::iter::once((job.start, job.end))
                            .chain(chosen.iter().copied())
                            .collect(),
                    );
                    let (cost, exact) = ctx.certify(&tuple);
                    emitted.push((tuple, cost, exact));
                });
                stats.truncated |= truncated;
                for (tuple, cost, exact) in emitted {
                    if exact {
                        stats.large_certified += 1;
                    } else {
                        stats.fallback_trivial += 1;
                    }
                    min_insert(&mut s2, tuple, cost);
                }
            }
        }
    }
    Ok((s2, stats))
}
