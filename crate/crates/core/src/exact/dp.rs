//! Classic m-dimensional dynamic program: the reference engine.

use crate::alignment::Alignment;
use crate::error::{Error, Result};
use crate::seq::{check_inputs, Sequence};

const MAX_CELLS: usize = 1 << 26;

pub(crate) struct LcsTable {
    pub dims: Vec<usize>,   // n_j + 1
    pub strides: Vec<usize>,
    pub values: Vec<u16>,
}

pub(crate) fn fill_table(strings: &[Sequence]) -> Result<LcsTable> {
    let m = strings.len();
    let dims: Vec<usize> = strings.iter().map(|s| s.len() + 1).collect();
    let mut total: usize = 1;
    for &d in &dims {
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_CELLS)
            .ok_or_else(|| Error::TooLarge("exact DP table".into()))?;
    }
    let mut strides = vec![1usize; m];
    for j in (0..m - 1).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    let full_step: usize = strides.iter().sum();

    let mut values = vec![0u16; total];
    let mut coords = vec![0usize; m];
    for idx in 1..total {
        // advance mixed-radix coordinates
        let mut j = m;
        loop {
            j -= 1;
            coords[j] += 1;
            if coords[j] < dims[j] {
                break;
            }
            coords[j] = 0;
        }
        let mut best = 0u16;
        for j in 0..m {
            if coords[j] > 0 {
                best = best.max(values[idx - strides[j]]);
            }
        }
        if coords.iter().all(|&c| c > 0) {
            let sym = strings[0].at(coords[0]);
            if strings
                .iter()
                .zip(&coords)
                .all(|(s, &c)| s.at(c) == sym)
            {
                best = best.max(values[idx - full_step] + 1);
            }
        }
        values[idx] = best;
    }
    Ok(LcsTable {
        dims,
        strides,
        values,
    })
}

/// LCS length of `m >= 2` non-empty sequences (lengths may differ).
pub fn lcs_len(strings: &[Sequence]) -> Result<usize> {
    check_inputs(strings)?;
    let t = fill_table(strings)?;
    Ok(t.values[t.values.len() - 1] as usize)
}

/// LCS length plus a witness alignment.
///
/// The witness is deterministic: at equal value the match transition is
/// preferred, then deletion from the lowest-numbered string.
pub fn lcs_exact(strings: &[Sequence]) -> Result<(usize, Alignment)> {
    check_inputs(strings)?;
    let t = fill_table(strings)?;
    let full_step: usize = t.strides.iter().sum();

    let mut coords: Vec<usize> = t.dims.iter().map(|d| d - 1).collect();
    let mut idx = t.values.len() - 1;
    let mut v = t.values[idx];
    let mut tuples_rev: Vec<Vec<u32>> = Vec::with_capacity(v as usize);
    while v > 0 {
        let all_positive = coords.iter().all(|&c| c > 0);
        let matched = all_positive && {
            let sym = strings[0].at(coords[0]);
            strings.iter().zip(&coords).all(|(s, &c)| s.at(c) == sym)
        };
        if matched && t.values[idx - full_step] + 1 == v {
            tuples_rev.push(coords.iter().map(|&c| c as u32).collect());
            for c in coords.iter_mut() {
                *c -= 1;
            }
            idx -= full_step;
            v -= 1;
            continue;
        }
        let mut moved = false;
        for (coord, stride) in coords.iter_mut().zip(&t.strides) {
            if *coord > 0 && t.values[idx - stride] == v {
                *coord -= 1;
                idx -= stride;
                moved = true;
                break;
            }
        }
        if !moved {
            return Err(Error::UnreachableEntry);
        }
    }
    tuples_rev.reverse();
    let len = tuples_rev.len();
    Ok((len, Alignment::new(tuples_rev)))
}
