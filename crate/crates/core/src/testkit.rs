//! Brute-force oracles, seeded instance generators, and ratio audits shared
//! by the acceptance suites and the CLI `audit` command.

use crate::error::{Error, Result};
use crate::exact::banded::{banded_distance, distance_doubling, BandedOutcome};
use crate::exact::{alignment_distance_exact, lcs_len};
use crate::large_align::{gap_multi_align_dist, large_align};
use crate::lcs_approx::multi_lcs_approx;
use crate::pseudorandom::{gen_pseudorandom, verify_pseudorandom};
use crate::rat::{display, rat, rat_usize, Rat};
use crate::rng::stream;
use crate::seq::Sequence;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

const BRUTE_MAX_N: usize = 12;

/// One enumerated common subsequence, carried as the index set it uses in
/// the first string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteEntry {
    pub s1_indices: Vec<u32>,
    pub symbols: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
pub enum BruteFilter {
    /// Keep subsequences of at least this length.
    MinLen(usize),
    /// Keep subsequences with `n_1 - len` at most this cost.
    MaxCost(usize),
}

fn is_subsequence(symbols: &[u32], s: &Sequence) -> bool {
    let mut pos = 0usize;
    for &sym in symbols {
        let hay = s.symbols();
        while pos < hay.len() && hay[pos] != sym {
            pos += 1;
        }
        if pos == hay.len() {
            return false;
        }
        pos += 1;
    }
    true
}

/// Every index subset of the first string that spells a common subsequence
/// of all strings and meets the filter, in ascending bitmask order.
pub fn brute_subsequences(
    strings: &[Sequence],
    filter: BruteFilter,
) -> Result<Vec<BruteEntry>> {
    if strings.is_empty() {
        return Err(Error::TooFewSequences { min: 1, got: 0 });
    }
    let n = strings[0].len();
    if n > BRUTE_MAX_N {
        return Err(Error::TooLarge(format!(
            "brute enumeration guard: n = {n} > {BRUTE_MAX_N}"
        )));
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let len = mask.count_ones() as usize;
        match filter {
            BruteFilter::MinLen(l) => {
                if len < l {
                    continue;
                }
            }
            BruteFilter::MaxCost(c) => {
                if n - len > c {
                    continue;
                }
            }
        }
        let s1_indices: Vec<u32> = (0..n as u32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let symbols: Vec<u32> = s1_indices
            .iter()
            .map(|&i| strings[0].at(i as usize))
            .collect();
        if strings.iter().skip(1).all(|s| is_subsequence(&symbols, s)) {
            out.push(BruteEntry {
                s1_indices,
                symbols,
            });
        }
    }
    Ok(out)
}

/// Brute optimum for the constrained-similarity problems: over all common
/// alignments of cumulative cost at most `d*m`, the max (or min) of
/// `|unaligned(s_1) ∩ union(sets)|`. `None` when no alignment fits.
pub fn brute_similarity_optimum(
    strings: &[Sequence],
    sets: &[Vec<u32>],
    d: usize,
    maximize: bool,
) -> Result<Option<usize>> {
    let n = strings[0].len();
    let m = strings.len();
    let mut member = vec![false; n + 1];
    for set in sets {
        for &i in set {
            member[i as usize] = true;
        }
    }
    let total: usize = strings.iter().map(|s| s.len()).sum();
    let mut best: Option<usize> = None;
    for entry in brute_subsequences(strings, BruteFilter::MinLen(0))? {
        let cumulative = total - m * entry.s1_indices.len();
        if cumulative > d * m {
            continue;
        }
        let mut used = vec![false; n + 1];
        for &i in &entry.s1_indices {
            used[i as usize] = true;
        }
        let overlap = (1..=n).filter(|&i| !used[i] && member[i]).count();
        best = Some(match best {
            None => overlap,
            Some(b) if maximize => b.max(overlap),
            Some(b) => b.min(overlap),
        });
    }
    Ok(best)
}

/// How an instance is planted.
#[derive(Debug, Clone)]
pub enum Planting {
    None,
    /// Embed a shared random core of length `ceil(lambda * n)` in every
    /// string.
    CommonCore { lambda: Rat },
    /// Mutate a shared base with up to `floor(theta * n)` deletion+insertion
    /// pairs per string.
    BoundedDistance { theta: Rat },
    /// A pseudorandom first string and budget-edited copies.
    PseudorandomBase { p: Rat, b: usize, budget: usize },
}

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub m: usize,
    pub n: usize,
    pub alphabet_size: u32,
    pub seed: u64,
    pub planting: Planting,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub strings: Vec<Sequence>,
    pub realized_lcs: Option<usize>,
    pub realized_distance: Option<usize>,
    pub pseudorandom_ok: Option<bool>,
}

fn random_symbols(rng: &mut impl Rng, n: usize, alphabet: u32) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..alphabet)).collect()
}

/// Deletes `k` random symbols and re-inserts `k` random ones, keeping the
/// length fixed.
fn mutate_keep_len(rng: &mut impl Rng, base: &[u32], k: usize, alphabet: u32) -> Vec<u32> {
    let mut v = base.to_vec();
    for _ in 0..k {
        if v.len() > 1 {
            let at = rng.gen_range(0..v.len());
            v.remove(at);
        }
    }
    while v.len() < base.len() {
        let at = rng.gen_range(0..=v.len());
        v.insert(at, rng.gen_range(0..alphabet));
    }
    v
}

fn exact_feasible(m: usize, n: usize) -> bool {
    (n + 1).pow(m as u32) <= 1 << 22
}

/// Deterministic instance generation; planted targets are achieved-or-
/// reported via the recorded realized metrics.
pub fn gen_instance(spec: &InstanceSpec) -> Result<Instance> {
    if spec.m < 2 || spec.n == 0 || spec.alphabet_size < 2 {
        return Err(Error::ParamOutOfRange(format!(
            "instance spec m={} n={} alphabet={}",
            spec.m, spec.n, spec.alphabet_size
        )));
    }
    match &spec.planting {
        Planting::CommonCore { lambda } if *lambda <= rat(0, 1) || *lambda > rat(1, 1) => {
            return Err(Error::ParamOutOfRange("core density must lie in (0, 1]".into()));
        }
        Planting::BoundedDistance { theta } if *theta < rat(0, 1) || *theta > rat(1, 1) => {
            return Err(Error::ParamOutOfRange("distance density must lie in [0, 1]".into()));
        }
        Planting::PseudorandomBase { p, b, .. }
            if *p <= rat(0, 1) || *p >= rat(1, 1) || *b == 0 =>
        {
            return Err(Error::ParamOutOfRange("need p in (0,1) and B >= 1".into()));
        }
        _ => {}
    }
    let mut rng = stream(spec.seed, "instance");
    let (strings, pseudorandom_ok) = match &spec.planting {
        Planting::None => {
            let strings: Vec<Sequence> = (1..=spec.m)
                .map(|id| {
                    Sequence::new(id as u32, random_symbols(&mut rng, spec.n, spec.alphabet_size))
                })
                .collect();
            (strings, None)
        }
        Planting::CommonCore { lambda } => {
            let core_len = crate::rat::ceil_usize(&(lambda * rat_usize(spec.n))).min(spec.n);
            let core = random_symbols(&mut rng, core_len, spec.alphabet_size);
            let strings = (1..=spec.m)
                .map(|id| {
                    let mut v = core.clone();
                    while v.len() < spec.n {
                        let at = rng.gen_range(0..=v.len());
                        v.insert(at, rng.gen_range(0..spec.alphabet_size));
                    }
                    Sequence::new(id as u32, v)
                })
                .collect();
            (strings, None)
        }
        Planting::BoundedDistance { theta } => {
            let budget = crate::rat::floor_usize(&(theta * rat_usize(spec.n)));
            let base = random_symbols(&mut rng, spec.n, spec.alphabet_size);
            let strings = (1..=spec.m)
                .map(|id| {
                    let k = rng.gen_range(0..=budget);
                    Sequence::new(
                        id as u32,
                        mutate_keep_len(&mut rng, &base, k, spec.alphabet_size),
                    )
                })
                .collect();
            (strings, None)
        }
        Planting::PseudorandomBase { p, b, budget } => {
            let s1 = gen_pseudorandom(
                spec.n,
                spec.alphabet_size,
                crate::rng::stream_value(spec.seed, "instance-base"),
            )?;
            let ok = verify_pseudorandom(&s1, p, (*b).min(spec.n))?;
            let mut strings = vec![s1.clone()];
            for id in 2..=spec.m {
                let k = rng.gen_range(0..=*budget);
                strings.push(Sequence::new(
                    id as u32,
                    mutate_keep_len(&mut rng, s1.symbols(), k, spec.alphabet_size),
                ));
            }
            (strings, Some(ok))
        }
    };

    let mut realized_lcs = None;
    let mut realized_distance = None;
    if exact_feasible(spec.m, spec.n) {
        realized_lcs = Some(lcs_len(&strings)?);
        realized_distance = Some(spec.n - realized_lcs.unwrap());
    } else if let Planting::PseudorandomBase { budget, .. } = &spec.planting {
        // banded oracle up to a generous multiple of the edit budget
        let cap = (4 * budget + 4).min(spec.n);
        if let BandedOutcome::Distance(d) = banded_distance(&strings, cap)? {
            realized_distance = Some(d);
            realized_lcs = Some(spec.n - d);
        }
    }
    Ok(Instance {
        strings,
        realized_lcs,
        realized_distance,
        pseudorandom_ok,
    })
}

/// One audited instance.
#[derive(Debug, Clone, Serialize)]
pub struct AuditRecord {
    pub instance: String,
    pub algorithm: String,
    pub value: String,
    pub oracle: String,
    pub bound: String,
    pub ok: bool,
}

/// Line-delimited audit output.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub suite: String,
    pub instances: usize,
    pub violations: usize,
    pub skipped: usize,
    #[serde(skip)]
    pub records: Vec<AuditRecord>,
}

impl OracleReport {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

fn collect_report(suite: &str, records: Vec<Option<AuditRecord>>) -> OracleReport {
    let skipped = records.iter().filter(|r| r.is_none()).count();
    let records: Vec<AuditRecord> = records.into_iter().flatten().collect();
    OracleReport {
        suite: suite.to_string(),
        instances: records.len(),
        violations: records.iter().filter(|r| !r.ok).count(),
        skipped,
        records,
    }
}

fn engines_record(seed: u64, i: usize) -> Result<Option<AuditRecord>> {
    let mut rng = stream(seed, &format!("audit-engines-{i}"));
    let m = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=10);
    let alphabet = rng.gen_range(2..=4);
    let strings: Vec<Sequence> = (1..=m)
        .map(|id| Sequence::new(id as u32, random_symbols(&mut rng, n, alphabet)))
        .collect();
    let exact = lcs_len(&strings)?;
    let cand = crate::exact::lcs_candidates(&strings)?;
    let dist = alignment_distance_exact(&strings)?;
    let banded = match banded_distance(&strings, n)? {
        BandedOutcome::Distance(d) => d,
        BandedOutcome::ExceedsThreshold => usize::MAX,
    };
    let ok = exact == cand && dist == banded;
    Ok(Some(AuditRecord {
        instance: format!("engines-{seed}-{i}"),
        algorithm: "lcs_candidates/banded_distance".into(),
        value: format!("{cand}/{banded}"),
        oracle: format!("{exact}/{dist}"),
        bound: "exact agreement".into(),
        ok,
    }))
}

fn similarity_record(seed: u64, i: usize) -> Result<Option<AuditRecord>> {
    let mut rng = stream(seed, &format!("audit-similarity-{i}"));
    let m = rng.gen_range(2..=3);
    let n = rng.gen_range(1..=7);
    let alphabet = rng.gen_range(2..=3);
    let strings: Vec<Sequence> = (1..=m)
        .map(|id| Sequence::new(id as u32, random_symbols(&mut rng, n, alphabet)))
        .collect();
    let set: Vec<u32> = (1..=n as u32).filter(|_| rng.gen_bool(0.5)).collect();
    let d = rng.gen_range(0..=n);
    let maximize = rng.gen_bool(0.5);
    let oracle = brute_similarity_optimum(&strings, std::slice::from_ref(&set), d, maximize)?;
    let got = if maximize {
        crate::similarity::max_del_similar(&strings, &set, d)
    } else {
        crate::similarity::min_del_similar(&strings, std::slice::from_ref(&set), d)
    };
    let (value, ok) = match (&got, oracle) {
        (Ok(r), Some(o)) => (r.overlap.to_string(), r.overlap as usize == o),
        (Err(Error::InfeasibleBudget { .. }), None) => ("infeasible".into(), true),
        (Err(_), _) => ("error".into(), false),
        (Ok(r), None) => (r.overlap.to_string(), false),
    };
    Ok(Some(AuditRecord {
        instance: format!("similarity-{seed}-{i}"),
        algorithm: if maximize { "max_del_similar" } else { "min_del_similar" }.into(),
        value,
        oracle: oracle.map_or("infeasible".into(), |o| o.to_string()),
        bound: "exact optimum".into(),
        ok,
    }))
}

fn gap_sweep_record(seed: u64, i: usize) -> Result<Option<AuditRecord>> {
    let spec = InstanceSpec {
        m: 4,
        n: 12,
        alphabet_size: 3,
        seed: seed ^ (i as u64).wrapping_mul(0x9e37),
        planting: Planting::BoundedDistance { theta: rat(1, 3) },
    };
    let inst = gen_instance(&spec)?;
    let a = inst.realized_distance.expect("exact distance feasible");
    if a == 0 {
        return Ok(None);
    }
    let eps = rat(1, 10);
    let (cost, witness) = large_align(&inst.strings, &eps)?;
    witness.validate(&inst.strings).map_err(|_| {
        Error::InvalidInput("large_align witness failed validation".into())
    })?;
    let theta = rat_usize(a) / rat_usize(12);
    let bound = (rat_usize(2) - rat(3, 16) * &theta + &eps) * rat_usize(a);
    let ok = cost >= a && rat_usize(cost) <= bound;
    // both gap sides
    let hi = gap_multi_align_dist(&inst.strings, &theta)?;
    let lo_theta = &theta / rat_usize(4);
    let lo = gap_multi_align_dist(&inst.strings, &lo_theta)?;
    let lo_must_reject =
        (rat_usize(2) - rat(3, 16) * &lo_theta) * &lo_theta * rat_usize(12) < rat_usize(a);
    let gap_ok = hi.accepted && (!lo_must_reject || !lo.accepted);
    Ok(Some(AuditRecord {
        instance: format!("gap-sweep-{seed}-{i}"),
        algorithm: "large_align".into(),
        value: cost.to_string(),
        oracle: a.to_string(),
        bound: format!("<= {}", display(&bound)),
        ok: ok && gap_ok,
    }))
}

fn lcs_floor_record(seed: u64, i: usize) -> Result<Option<AuditRecord>> {
    let spec = InstanceSpec {
        m: 3,
        n: 12,
        alphabet_size: 4,
        seed: seed ^ (i as u64).wrapping_mul(0x51_7c),
        planting: Planting::CommonCore { lambda: rat(1, 2) },
    };
    let inst = gen_instance(&spec)?;
    let l = inst.realized_lcs.expect("exact LCS feasible");
    if l == 0 {
        return Ok(None);
    }
    let w = multi_lcs_approx(&inst.strings, &rat(1, 10))?;
    w.validate(&inst.strings)
        .map_err(|_| Error::InvalidInput("lcs witness failed validation".into()))?;
    // |w| >= lambda^2 n / (2 + eps) with lambda = l / n
    let floor = rat_usize(l * l) / rat_usize(12) / rat(21, 10);
    let ok = rat_usize(w.len()) >= floor;
    Ok(Some(AuditRecord {
        instance: format!("lcs-floor-{seed}-{i}"),
        algorithm: "multi_lcs_approx".into(),
        value: w.len().to_string(),
        oracle: l.to_string(),
        bound: format!(">= {}", display(&floor)),
        ok,
    }))
}

/// Runs a named audit suite over `count` seeded instances; instances
/// parallelize, records merge in instance order.
pub fn ratio_audit(suite: &str, seed: u64, count: usize) -> Result<OracleReport> {
    let runner: fn(u64, usize) -> Result<Option<AuditRecord>> = match suite {
        "engines" => engines_record,
        "similarity" => similarity_record,
        "gap-sweep" => gap_sweep_record,
        "lcs-floor" => lcs_floor_record,
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown audit suite `{suite}` (expected engines | similarity | gap-sweep | lcs-floor)"
            )))
        }
    };
    let records: Vec<Option<AuditRecord>> = (0..count)
        .into_par_iter()
        .map(|i| runner(seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect_report(suite, records))
}

/// Exact distance helper for oracles: banded doubling.
pub fn exact_distance_oracle(strings: &[Sequence]) -> Result<usize> {
    distance_doubling(strings, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::seqs;

    #[test]
    fn brute_enumeration_basics() {
        let strings = seqs(&["ab", "ab"]);
        let all = brute_subsequences(&strings, BruteFilter::MinLen(2)).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].s1_indices, vec![1, 2]);
        let one = brute_subsequences(&seqs(&["ab", "ba"]), BruteFilter::MinLen(1)).unwrap();
        assert_eq!(one.len(), 2);
    }

    #[test]
    fn brute_agrees_with_dp_max_len() {
        let strings = seqs(&["abcabc", "cbacba", "aabbcc"]);
        let best = brute_subsequences(&strings, BruteFilter::MinLen(0))
            .unwrap()
            .into_iter()
            .map(|e| e.s1_indices.len())
            .max()
            .unwrap();
        assert_eq!(best, lcs_len(&strings).unwrap());
    }

    #[test]
    fn generator_is_deterministic() {
        let spec = InstanceSpec {
            m: 3,
            n: 8,
            alphabet_size: 3,
            seed: 5,
            planting: Planting::None,
        };
        let a = gen_instance(&spec).unwrap();
        let b = gen_instance(&spec).unwrap();
        assert_eq!(a.strings, b.strings);
    }

    #[test]
    fn common_core_achieves_lambda() {
        let spec = InstanceSpec {
            m: 3,
            n: 8,
            alphabet_size: 3,
            seed: 9,
            planting: Planting::CommonCore { lambda: rat(1, 2) },
        };
        let inst = gen_instance(&spec).unwrap();
        assert!(inst.realized_lcs.unwrap() >= 4);
    }

    #[test]
    fn audit_suites_run_clean() {
        for suite in ["engines", "similarity"] {
            let report = ratio_audit(suite, 42, 20).unwrap();
            assert_eq!(report.violations, 0, "suite {suite}");
        }
        assert!(ratio_audit("nope", 1, 1).is_err());
    }
}
