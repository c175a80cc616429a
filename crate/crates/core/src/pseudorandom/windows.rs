//! Window construction: the overlapping multi-size grids produced by the
//! window generating function, and the greedy maximal disjoint subset.

use crate::rat::{floor_usize, rat_usize, Rat};
use crate::seq::Sequence;
use num::{One, Zero};

/// A substring reference: 1-based inclusive bounds into one sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Window {
    pub seq: u32,
    pub start: u32,
    pub end: u32,
}

impl Window {
    pub fn new(seq: u32, start: u32, end: u32) -> Self {
        debug_assert!(start >= 1 && start <= end);
        Window { seq, start, end }
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contents<'a>(&self, s: &'a Sequence) -> &'a [u32] {
        s.range(self.start as usize, self.end as usize)
    }

    pub fn overlaps(&self, other: &Window) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

/// One size layer of a window grid.
#[derive(Debug, Clone)]
pub struct WindowLayer {
    pub tau: Rat,
    pub high_len: usize,
    pub low_len: usize,
    pub stride: usize,
    pub highs: Vec<Window>,
    pub lows: Vec<Window>,
}

/// The output of the window generating function for one (sequence, base
/// size, cost threshold) triple.
#[derive(Debug, Clone)]
pub struct WindowGrid {
    pub d: usize,
    pub theta: Rat,
    pub eps: Rat,
    pub layers: Vec<WindowLayer>,
}

impl WindowGrid {
    /// All windows of the grid, deduplicated and sorted.
    pub fn all_windows(&self) -> Vec<Window> {
        let mut out: Vec<Window> = self
            .layers
            .iter()
            .flat_map(|l| l.highs.iter().chain(&l.lows).copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn emit_row(s: &Sequence, size: usize, stride: usize) -> Vec<Window> {
    let n = s.len();
    if size == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut start = 1usize;
    while start <= n {
        let end = (start + size - 1).min(n);
        out.push(Window::new(s.id(), start as u32, end as u32));
        start += stride;
    }
    out
}

/// The window generating function: the tau ladder `{0, 1/d, (1+eps)/d, ...,
/// theta}` with sizes `floor(d +- tau*d)` and a common stride
/// `max(1, floor(eps*theta*d))`. Windows truncated at the string end are
/// emitted at reduced length.
pub fn window_gen(s: &Sequence, d: usize, theta: &Rat, eps: &Rat) -> WindowGrid {
    let stride = floor_usize(&(eps * theta * rat_usize(d))).max(1);
    let mut layers = Vec::new();
    layers.push(WindowLayer {
        tau: Rat::zero(),
        high_len: d,
        low_len: d,
        stride,
        highs: emit_row(s, d, stride),
        lows: Vec::new(),
    });
    if theta.is_zero() {
        return WindowGrid {
            d,
            theta: theta.clone(),
            eps: eps.clone(),
            layers,
        };
    }
    let ratio = Rat::one() + eps;
    let mut pow = Rat::one(); // (1+eps)^k, starting at k = 0 (tau = 1/d)
    loop {
        let tau = &pow / rat_usize(d);
        if &tau > theta {
            break;
        }
        let high_len = floor_usize(&(rat_usize(d) + &pow));
        let low_rat = rat_usize(d) - &pow;
        let low_len = if low_rat.is_negative() {
            0
        } else {
            floor_usize(&low_rat)
        };
        layers.push(WindowLayer {
            tau,
            high_len,
            low_len,
            stride,
            highs: emit_row(s, high_len, stride),
            lows: emit_row(s, low_len, stride),
        });
        pow *= &ratio;
    }
    WindowGrid {
        d,
        theta: theta.clone(),
        eps: eps.clone(),
        layers,
    }
}

/// The size/stride geometry of one grid, equivalent to materializing
/// [`window_gen`] and reading off the distinct window shapes.
#[derive(Debug, Clone)]
pub struct GridGeometry {
    pub stride: usize,
    pub sizes: std::collections::BTreeSet<usize>,
    pub max_size: usize,
}

/// Computes the tau-ladder sizes and the stride without materializing
/// windows. Matches [`window_gen`] layer for layer.
pub fn grid_geometry(d: usize, theta: &Rat, eps: &Rat) -> GridGeometry {
    let stride = floor_usize(&(eps * theta * rat_usize(d))).max(1);
    let mut sizes = std::collections::BTreeSet::new();
    sizes.insert(d);
    if !theta.is_zero() {
        let ratio = Rat::one() + eps;
        let mut pow = Rat::one();
        loop {
            let tau = &pow / rat_usize(d);
            if &tau > theta {
                break;
            }
            sizes.insert(floor_usize(&(rat_usize(d) + &pow)));
            let low = rat_usize(d) - &pow;
            if !low.is_negative() {
                let l = floor_usize(&low);
                if l >= 1 {
                    sizes.insert(l);
                }
            }
            pow *= &ratio;
        }
    }
    let max_size = *sizes.iter().next_back().unwrap();
    GridGeometry {
        stride,
        sizes,
        max_size,
    }
}

impl GridGeometry {
    /// Whether the grid over `[lo, hi]` of the parent emits the window
    /// `(start, end)`. Windows running past `hi` are truncated there.
    pub fn contains(&self, lo: u32, hi: u32, start: u32, end: u32) -> bool {
        if start < lo || end > hi || start > end {
            return false;
        }
        if !((start - lo) as usize).is_multiple_of(self.stride) {
            return false;
        }
        let len = (end - start + 1) as usize;
        if self.sizes.contains(&len) {
            return true;
        }
        end == hi && self.max_size >= len
    }

    /// All windows the grid emits over `[lo, hi]`, deduplicated and sorted.
    pub fn enumerate(&self, seq_id: u32, lo: u32, hi: u32) -> Vec<Window> {
        let mut set = std::collections::BTreeSet::new();
        let mut start = lo;
        while start <= hi {
            for &size in &self.sizes {
                let end = (start + size as u32 - 1).min(hi);
                set.insert((start, end));
            }
            start += self.stride as u32;
        }
        set.into_iter()
            .map(|(s, e)| Window::new(seq_id, s, e))
            .collect()
    }
}

/// Greedy maximal index-disjoint subset, scanning by ascending start index.
pub fn disjoint(windows: &[Window]) -> Vec<Window> {
    let mut sorted: Vec<Window> = windows.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<Window> = Vec::new();
    let mut last_end = 0u32;
    for w in sorted {
        if w.start > last_end {
            last_end = w.end;
            out.push(w);
        }
    }
    out
}

/// The base window size of the pipeline: `max(B, ceil(sqrt(n)))`.
pub fn beta(n: usize, b: usize) -> usize {
    let mut r = 1usize;
    while r * r < n {
        r += 1;
    }
    b.max(r)
}

use num::Signed;
