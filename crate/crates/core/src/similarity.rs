//! Constrained common alignments: among all alignments whose cumulative cost
//! stays within a budget, maximize (or minimize) the overlap of the first
//! string's unaligned indices with a target set.
//!
//! Per cell the best overlap is kept as a function of the remaining budget in
//! a compact step representation; the full (cells x budget) table is never
//! materialized. Predecessor links are re-derived during backtracking under
//! the documented tie-break, so the witness is deterministic.

use crate::alignment::Alignment;
use crate::error::{Error, Result};
use crate::seq::{check_equal_lengths, check_inputs, Sequence};

const MAX_CELLS: usize = 1 << 24;

/// Best overlap as a function of the cumulative-cost budget `x`: value
/// `points[t].1` applies from `points[t].0` up to the next breakpoint.
/// Budgets below the first breakpoint are infeasible.
#[derive(Debug, Clone, Default)]
struct StepFn {
    points: Vec<(u32, i32)>,
}

impl StepFn {
    fn eval(&self, x: u32) -> Option<i32> {
        match self.points.partition_point(|&(px, _)| px <= x) {
            0 => None,
            t => Some(self.points[t - 1].1),
        }
    }
}

fn merge_points(cands: &mut [(u32, i32)], maximize: bool) -> StepFn {
    cands.sort_unstable_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            if maximize {
                b.1.cmp(&a.1)
            } else {
                a.1.cmp(&b.1)
            }
        })
    });
    let mut points: Vec<(u32, i32)> = Vec::new();
    for &(x, v) in cands.iter() {
        match points.last() {
            None => points.push((x, v)),
            Some(&(_, pv)) => {
                let better = if maximize { v > pv } else { v < pv };
                if better {
                    points.push((x, v));
                }
            }
        }
    }
    StepFn { points }
}

/// Result of one constrained-alignment run.
#[derive(Debug, Clone)]
pub struct SimilarityResult {
    pub sigma: Alignment,
    /// Sorted 1-based indices of the first string left unaligned.
    pub unaligned_s1: Vec<u32>,
    /// Overlap of `unaligned_s1` with the target set(s).
    pub overlap: u32,
    /// Total unaligned characters over all strings.
    pub cumulative_cost: u32,
}

/// The filled budgeted DP over prefix tuples, with enough context to replay
/// predecessor links.
pub struct DpTable {
    dims: Vec<usize>,
    strides: Vec<usize>,
    x_budget: u32,
    in_target: Vec<bool>,
    subsets: Vec<Vec<usize>>,
    cells: Vec<StepFn>,
}

fn lex_subsets(m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for j in start..m {
            cur.push(j);
            out.push(cur.clone());
            rec(j + 1, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, &mut Vec::new(), &mut out);
    out
}

impl DpTable {
    /// Fills the table for the given strings, target membership (1-based over
    /// the first string), objective direction, cumulative budget and optional
    /// band half-width.
    pub(crate) fn fill(
        strings: &[Sequence],
        in_target: Vec<bool>,
        maximize: bool,
        x_budget: u32,
        band: Option<u32>,
    ) -> Result<DpTable> {
        let m = strings.len();
        let dims: Vec<usize> = strings.iter().map(|s| s.len() + 1).collect();
        let mut total = 1usize;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_CELLS)
                .ok_or_else(|| Error::TooLarge("similarity DP table".into()))?;
        }
        let mut strides = vec![1usize; m];
        for j in (0..m - 1).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        let subsets = lex_subsets(m);
        let mut cells: Vec<StepFn> = vec![StepFn::default(); total];
        cells[0] = StepFn {
            points: vec![(0, 0)],
        };

        let mut coords = vec![0usize; m];
        let mut cand: Vec<(u32, i32)> = Vec::new();
        for idx in 1..total {
            let mut j = m;
            loop {
                j -= 1;
                coords[j] += 1;
                if coords[j] < dims[j] {
                    break;
                }
                coords[j] = 0;
            }
            if let Some(b) = band {
                let i1 = coords[0] as i64;
                if coords
                    .iter()
                    .skip(1)
                    .any(|&c| (c as i64 - i1).unsigned_abs() > u64::from(b))
                {
                    continue;
                }
            }
            cand.clear();
            // deletion transitions over every non-empty subset of strings
            for set in &subsets {
                if set.iter().any(|&j| coords[j] == 0) {
                    continue;
                }
                let pidx: usize = idx - set.iter().map(|&j| strides[j]).sum::<usize>();
                let shift = set.len() as u32;
                let delta = i32::from(set.contains(&0) && in_target[coords[0]]);
                for &(px, pv) in &cells[pidx].points {
                    let nx = px + shift;
                    if nx <= x_budget {
                        cand.push((nx, pv + delta));
                    }
                }
            }
            // match transition when all current symbols agree
            if coords.iter().all(|&c| c > 0) {
                let sym = strings[0].at(coords[0]);
                if strings.iter().zip(&coords).all(|(s, &c)| s.at(c) == sym) {
                    let pidx = idx - strides.iter().sum::<usize>();
                    cand.extend(cells[pidx].points.iter().copied());
                }
            }
            cells[idx] = merge_points(&mut cand, maximize);
        }
        Ok(DpTable {
            dims,
            strides,
            x_budget,
            in_target,
            subsets,
            cells,
        })
    }

    fn final_index(&self) -> usize {
        self.cells.len() - 1
    }

    /// Optimal overlap at the full-prefix entry within the budget.
    pub fn optimum(&self) -> Option<i32> {
        self.cells[self.final_index()].eval(self.x_budget)
    }

    pub fn budget(&self) -> u32 {
        self.x_budget
    }

    /// Replays predecessor links from `(coords, x)` down to the origin and
    /// reconstructs the aligned index set `L`, its complement, and the
    /// witness. Ties prefer the match transition, then the lexicographically
    /// first deletion subset.
    pub fn backtrack(
        &self,
        strings: &[Sequence],
        coords: &[usize],
        x: u32,
    ) -> Result<(Vec<u32>, Vec<u32>, Alignment)> {
        let mut coords = coords.to_vec();
        let mut idx: usize = coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum();
        let mut x = x.min(self.x_budget);
        let mut v = self.cells[idx].eval(x).ok_or(Error::UnreachableEntry)?;
        let full_step: usize = self.strides.iter().sum();
        let mut tuples_rev: Vec<Vec<u32>> = Vec::new();
        while coords.iter().any(|&c| c > 0) {
            let mut moved = false;
            if coords.iter().all(|&c| c > 0) {
                let sym = strings[0].at(coords[0]);
                if strings.iter().zip(&coords).all(|(s, &c)| s.at(c) == sym)
                    && self.cells[idx - full_step].eval(x) == Some(v)
                {
                    tuples_rev.push(coords.iter().map(|&c| c as u32).collect());
                    for c in coords.iter_mut() {
                        *c -= 1;
                    }
                    idx -= full_step;
                    moved = true;
                }
            }
            if !moved {
                for set in &self.subsets {
                    if set.iter().any(|&j| coords[j] == 0) {
                        continue;
                    }
                    let shift = set.len() as u32;
                    if shift > x {
                        continue;
                    }
                    let delta = i32::from(set.contains(&0) && self.in_target[coords[0]]);
                    let pidx: usize =
                        idx - set.iter().map(|&j| self.strides[j]).sum::<usize>();
                    if self.cells[pidx].eval(x - shift) == Some(v - delta) {
                        for &j in set {
                            coords[j] -= 1;
                        }
                        idx = pidx;
                        x -= shift;
                        v -= delta;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                return Err(Error::UnreachableEntry);
            }
        }
        if v != 0 {
            return Err(Error::UnreachableEntry);
        }
        tuples_rev.reverse();
        let sigma = Alignment::new(tuples_rev);
        let n1 = self.dims[0] - 1;
        let aligned = sigma.aligned_indices(0);
        let mut is_aligned = vec![false; n1 + 1];
        for &i in &aligned {
            is_aligned[i as usize] = true;
        }
        let unaligned: Vec<u32> = (1..=n1 as u32)
            .filter(|&i| !is_aligned[i as usize])
            .collect();
        Ok((aligned, unaligned, sigma))
    }
}

fn target_membership(n: usize, sets: &[&[u32]]) -> Result<Vec<bool>> {
    let mut member = vec![false; n + 1];
    for set in sets {
        let mut prev = 0u32;
        for &i in *set {
            if i == 0 || i as usize > n {
                return Err(Error::IndexOutOfRange(format!("target index {i}")));
            }
            if i <= prev {
                return Err(Error::InvalidInput(
                    "index set must be sorted and duplicate-free".into(),
                ));
            }
            prev = i;
            member[i as usize] = true;
        }
    }
    Ok(member)
}

pub(crate) fn similar_alignment(
    strings: &[Sequence],
    in_target: Vec<bool>,
    maximize: bool,
    x_budget: u32,
    band: Option<u32>,
) -> Result<SimilarityResult> {
    let table = DpTable::fill(strings, in_target, maximize, x_budget, band)?;
    let Some(value) = table.optimum() else {
        return Err(Error::InfeasibleBudget {
            budget: u64::from(x_budget),
        });
    };
    let full: Vec<usize> = table.dims.iter().map(|d| d - 1).collect();
    let (_, unaligned, sigma) = table.backtrack(strings, &full, x_budget)?;
    let total_len: usize = strings.iter().map(|s| s.len()).sum();
    let cumulative = (total_len - strings.len() * sigma.len()) as u32;
    debug_assert!(cumulative <= x_budget);
    Ok(SimilarityResult {
        sigma,
        overlap: value as u32,
        cumulative_cost: cumulative,
        unaligned_s1: unaligned,
    })
}

fn validate_budget(strings: &[Sequence], d: usize) -> Result<usize> {
    check_inputs(strings)?;
    let n = check_equal_lengths(strings)?;
    if d > n {
        return Err(Error::ParamOutOfRange(format!(
            "budget d = {d} exceeds n = {n}"
        )));
    }
    Ok(n)
}

/// Among all common alignments of cumulative cost at most `d*m`, returns one
/// maximizing the overlap of the first string's unaligned indices with `s`.
pub fn max_del_similar(
    strings: &[Sequence],
    s: &[u32],
    d: usize,
) -> Result<SimilarityResult> {
    let n = validate_budget(strings, d)?;
    let target = target_membership(n, &[s])?;
    similar_alignment(strings, target, true, (d * strings.len()) as u32, None)
}

/// Among all common alignments of cumulative cost at most `d*m`, returns one
/// minimizing the overlap of the first string's unaligned indices with the
/// union of the given sets.
pub fn min_del_similar(
    strings: &[Sequence],
    sets: &[Vec<u32>],
    d: usize,
) -> Result<SimilarityResult> {
    if sets.is_empty() {
        return Err(Error::ParamOutOfRange("need at least one index set".into()));
    }
    let n = validate_budget(strings, d)?;
    let refs: Vec<&[u32]> = sets.iter().map(|s| s.as_slice()).collect();
    let target = target_membership(n, &refs)?;
    similar_alignment(strings, target, false, (d * strings.len()) as u32, None)
}

/// Band-restricted variants (states with `|i_j - i_1| <= d` only). Both paths
/// return identical results.
pub fn max_del_similar_banded(
    strings: &[Sequence],
    s: &[u32],
    d: usize,
) -> Result<SimilarityResult> {
    let n = validate_budget(strings, d)?;
    let target = target_membership(n, &[s])?;
    similar_alignment(
        strings,
        target,
        true,
        (d * strings.len()) as u32,
        Some(d as u32),
    )
}

pub fn min_del_similar_banded(
    strings: &[Sequence],
    sets: &[Vec<u32>],
    d: usize,
) -> Result<SimilarityResult> {
    if sets.is_empty() {
        return Err(Error::ParamOutOfRange("need at least one index set".into()));
    }
    let n = validate_budget(strings, d)?;
    let refs: Vec<&[u32]> = sets.iter().map(|s| s.as_slice()).collect();
    let target = target_membership(n, &refs)?;
    similar_alignment(
        strings,
        target,
        false,
        (d * strings.len()) as u32,
        Some(d as u32),
    )
}
