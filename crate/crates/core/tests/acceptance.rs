//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Every tolerance is pinned in code; a criterion passes only with zero
//! violations.

use mlcs_core::exact::banded::{banded_distance, BandedOutcome};
use mlcs_core::exact::{alignment_distance_exact, generalized_cost, lcs_candidates, lcs_len};
use mlcs_core::large_align::{enumerate_alignments, gap_multi_align_dist, group_align, large_align};
use mlcs_core::lcs_approx::{enumerate_lcs, multi_lcs_approx};
use mlcs_core::pseudorandom::{
    assemble_distance, gen_pseudorandom, multi_window_estimation, pseudo_align, PipelineParams,
};
use mlcs_core::rat::{rat, rat_usize};
use mlcs_core::rng::stream;
use mlcs_core::seq::Sequence;
use mlcs_core::similarity::{max_del_similar, min_del_similar};
use mlcs_core::testkit::{
    brute_similarity_optimum, brute_subsequences, gen_instance, BruteFilter, InstanceSpec,
    Planting,
};
use mlcs_core::Error;
use rand::Rng;

fn conclude(name: &str, violations: usize, total: usize) {
    let verdict = if violations == 0 { "PASS" } else { "FAIL" };
    println!(
        "criterion {name}: {verdict} ({}/{total} checks ok)",
        total - violations
    );
    assert_eq!(violations, 0, "criterion {name}: {violations} violations");
}

fn random_strings(rng: &mut impl Rng, m: usize, n: usize, alphabet: u32) -> Vec<Sequence> {
    (1..=m)
        .map(|id| {
            Sequence::new(
                id as u32,
                (0..n).map(|_| rng.gen_range(0..alphabet)).collect(),
            )
        })
        .collect()
}

/// Criterion 1: engine agreement over 500 random instances.
#[test]
fn criterion_1_engine_agreement() {
    let mut rng = stream(0xC1, "acceptance-engines");
    let mut violations = 0usize;
    for _ in 0..500 {
        let m = rng.gen_range(2..=4);
        let n = rng.gen_range(1..=10);
        let alphabet = rng.gen_range(2..=4);
        let strings = random_strings(&mut rng, m, n, alphabet);
        let exact = lcs_len(&strings).unwrap();
        let cand = lcs_candidates(&strings).unwrap();
        let dist = alignment_distance_exact(&strings).unwrap();
        let banded = banded_distance(&strings, n).unwrap();
        if exact != cand || banded != BandedOutcome::Distance(dist) {
            violations += 1;
        }
    }
    conclude("1 (engine agreement)", violations, 500);
}

/// Criterion 2: similarity-DP optimality against exhaustive enumeration.
#[test]
fn criterion_2_similarity_optimality() {
    let mut rng = stream(0xC2, "acceptance-similarity");
    let mut violations = 0usize;
    let mut total = 0usize;
    for _ in 0..200 {
        let m = rng.gen_range(2..=3);
        let n = rng.gen_range(1..=7);
        let alphabet = rng.gen_range(2..=3);
        let strings = random_strings(&mut rng, m, n, alphabet);
        let d = rng.gen_range(0..=n);
        let q = rng.gen_range(1..=2);
        let sets: Vec<Vec<u32>> = (0..q)
            .map(|_| (1..=n as u32).filter(|_| rng.gen_bool(0.5)).collect())
            .collect();
        let union: Vec<u32> = {
            let mut v: Vec<u32> = sets.iter().flatten().copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };

        for maximize in [true, false] {
            total += 1;
            let oracle = brute_similarity_optimum(&strings, &sets, d, maximize).unwrap();
            let got = if maximize {
                max_del_similar(&strings, &union, d)
            } else {
                min_del_similar(&strings, &sets, d)
            };
            let ok = match (got, oracle) {
                (Ok(r), Some(o)) => {
                    r.overlap as usize == o
                        && r.cumulative_cost as usize <= d * m
                        && r.sigma.validate(&strings).is_ok()
                }
                (Err(Error::InfeasibleBudget { .. }), None) => true,
                _ => false,
            };
            if !ok {
                violations += 1;
            }
        }
    }
    conclude("2 (similarity-DP optimality)", violations, total);
}

/// Criterion 3: the covering disjunction of the alignment cover and the
/// intersection floor of the LCS cover, both checked exhaustively at n = 8.
#[test]
fn criterion_3_covering_properties() {
    let n = 8usize;
    let mut violations = 0usize;
    let mut total = 0usize;

    // (a) alignment cover: theta * n in {2, 3, 4}
    for tn in 2..=4usize {
        let theta = rat_usize(tn) / rat_usize(n);
        let mut tested = 0usize;
        let mut seed = 0u64;
        while tested < 40 && seed < 4000 {
            seed += 1;
            let spec = InstanceSpec {
                m: 2,
                n,
                alphabet_size: 3,
                seed: 0xC3_0000 + seed * 8 + tn as u64,
                planting: Planting::BoundedDistance {
                    theta: rat_usize(tn) / rat_usize(n),
                },
            };
            let inst = gen_instance(&spec).unwrap();
            if inst.realized_distance.unwrap() > tn {
                continue;
            }
            tested += 1;
            total += 1;
            let cover = enumerate_alignments(&inst.strings, &theta).unwrap();
            if cover.members.len() > mlcs_core::rat::ceil_usize(&(rat_usize(4) / &theta)) {
                violations += 1;
                continue;
            }
            let clause1 = cover
                .members
                .iter()
                .any(|m| rat_usize(m.deletions.len()) <= rat(3, 4) * &theta * rat_usize(n));
            if clause1 {
                continue;
            }
            let floor = rat(3, 16) * &theta * &theta * rat_usize(n);
            for entry in
                brute_subsequences(&inst.strings, BruteFilter::MaxCost(tn)).unwrap()
            {
                let mut unaligned = vec![true; n + 1];
                for &i in &entry.s1_indices {
                    unaligned[i as usize] = false;
                }
                let covered = cover.members.iter().any(|mbr| {
                    let hit = mbr
                        .deletions
                        .iter()
                        .filter(|&&i| unaligned[i as usize])
                        .count();
                    rat_usize(hit) >= floor
                });
                if !covered {
                    violations += 1;
                    break;
                }
            }
        }
        assert_eq!(tested, 40, "not enough valid (G_1, theta={tn}/8) cases");
    }

    // (b) LCS cover: lambda * n in {2, 3, 4}
    for ln in 2..=4usize {
        let lambda = rat_usize(ln) / rat_usize(n);
        let mut tested = 0usize;
        let mut seed = 0u64;
        while tested < 40 && seed < 4000 {
            seed += 1;
            let spec = InstanceSpec {
                m: 2,
                n,
                alphabet_size: 3,
                seed: 0xC3_8000 + seed * 8 + ln as u64,
                planting: Planting::CommonCore {
                    lambda: rat_usize(ln) / rat_usize(n),
                },
            };
            let inst = gen_instance(&spec).unwrap();
            if inst.realized_lcs.unwrap() < ln {
                continue;
            }
            tested += 1;
            total += 1;
            let cover = enumerate_lcs(&inst.strings, &lambda).unwrap();
            if cover.members.len() > mlcs_core::rat::ceil_usize(&(rat_usize(2) / &lambda)) {
                violations += 1;
                continue;
            }
            let floor = &lambda * &lambda * rat_usize(n) / rat_usize(2);
            for entry in brute_subsequences(&inst.strings, BruteFilter::MinLen(ln)).unwrap() {
                let covered = cover.members.iter().any(|mbr| {
                    let hit = mbr
                        .s1_indices
                        .iter()
                        .filter(|i| entry.s1_indices.binary_search(i).is_ok())
                        .count();
                    rat_usize(hit) >= floor
                });
                if !covered {
                    violations += 1;
                    break;
                }
            }
        }
        assert_eq!(tested, 40, "not enough valid (G_1, lambda={ln}/8) cases");
    }
    conclude("3 (covering properties)", violations, total);
}

/// Criterion 4: gap correctness on both sides plus the sweep and group
/// ratio bounds, with exact distances as oracles.
#[test]
fn criterion_4_gap_and_sweep_ratios() {
    let eps = rat(1, 10);
    let mut violations = 0usize;
    let mut total = 0usize;
    let mut tested = 0usize;
    let mut seed = 0u64;
    while tested < 100 && seed < 1000 {
        seed += 1;
        let inst = gen_instance(&InstanceSpec {
            m: 4,
            n: 12,
            alphabet_size: 3,
            seed: 0xC4_0000 + seed,
            planting: Planting::BoundedDistance { theta: rat(1, 3) },
        })
        .unwrap();
        let a = inst.realized_distance.unwrap();
        if a == 0 {
            continue;
        }
        tested += 1;
        total += 1;
        let n = 12usize;
        let theta = rat_usize(a) / rat_usize(n);

        // gap side 1: distance <= theta * n must accept
        let hi = gap_multi_align_dist(&inst.strings, &theta).unwrap();
        // gap side 0: (2 - 3 theta/16) theta n < distance must reject
        let lo_theta = &theta / rat_usize(4);
        let lo = gap_multi_align_dist(&inst.strings, &lo_theta).unwrap();
        let lo_bound = (rat_usize(2) - rat(3, 16) * &lo_theta) * &lo_theta * rat_usize(n);
        let lo_ok = if lo_bound < rat_usize(a) {
            !lo.accepted
        } else {
            true
        };

        let (cost, witness) = large_align(&inst.strings, &eps).unwrap();
        let bound = (rat_usize(2) - rat(3, 16) * &theta + &eps) * rat_usize(a);
        let sweep_ok = cost >= a
            && rat_usize(cost) <= bound
            && witness.validate(&inst.strings).is_ok()
            && witness.unaligned_indices(0, n).len() == cost;

        if !(hi.accepted && lo_ok && sweep_ok) {
            violations += 1;
        }
    }
    assert_eq!(tested, 100, "not enough planted gap instances");

    // group variant: c = 4 on m = 6
    let mut gtested = 0usize;
    let mut seed = 0u64;
    while gtested < 25 && seed < 400 {
        seed += 1;
        let inst = gen_instance(&InstanceSpec {
            m: 6,
            n: 10,
            alphabet_size: 3,
            seed: 0xC4_8000 + seed,
            planting: Planting::BoundedDistance { theta: rat(3, 10) },
        })
        .unwrap();
        let a = inst.realized_distance.unwrap();
        if a == 0 {
            continue;
        }
        gtested += 1;
        total += 1;
        let theta = rat_usize(a) / rat_usize(10);
        let (cost, witness) = group_align(&inst.strings, 4, &eps).unwrap();
        let bound = rat_usize(4) * (rat_usize(1) - rat(3, 32) * &theta + &eps) * rat_usize(a);
        let ok = cost >= a
            && rat_usize(cost) <= bound
            && witness.validate(&inst.strings).is_ok();
        if !ok {
            violations += 1;
        }
    }
    assert_eq!(gtested, 25, "not enough group instances");
    conclude("4 (gap/sweep ratios)", violations, total);
}

/// Criterion 5: the LCS approximation floor over 200 instances with the
/// exact LCS as the oracle.
#[test]
fn criterion_5_lcs_floor() {
    let mut violations = 0usize;
    let mut total = 0usize;
    let mut tested = 0usize;
    let mut seed = 0u64;
    while tested < 200 && seed < 2000 {
        seed += 1;
        let lambda_num = 1 + (seed % 3); // planted densities 1/4, 2/4, 3/4
        let inst = gen_instance(&InstanceSpec {
            m: 3,
            n: 12,
            alphabet_size: 4,
            seed: 0xC5_0000 + seed,
            planting: if seed.is_multiple_of(4) {
                Planting::None
            } else {
                Planting::CommonCore {
                    lambda: rat(lambda_num as i64, 4),
                }
            },
        })
        .unwrap();
        let l = inst.realized_lcs.unwrap();
        if l == 0 {
            continue;
        }
        tested += 1;
        total += 1;
        let witness = multi_lcs_approx(&inst.strings, &rat(1, 10)).unwrap();
        // floor: lambda^2 n / (2 + eps) with lambda = l/n, eps = 0.1
        let floor = rat_usize(l * l) / rat_usize(12) / rat(21, 10);
        let ok = witness.validate(&inst.strings).is_ok()
            && rat_usize(witness.len()) >= floor;
        if !ok {
            violations += 1;
        }
    }
    assert_eq!(tested, 200, "not enough LCS instances");
    conclude("5 (LCS approximation floor)", violations, total);
}

fn adversarial_block_instance(seed: u64) -> Vec<Sequence> {
    let base = gen_pseudorandom(512, 256, seed).unwrap();
    let mut rng = stream(seed, "acceptance-adversarial");
    let block_start = rng.gen_range(100..=300usize);
    let block_len = 48usize;
    let mut strings = vec![base.clone()];
    for id in 2..=3u32 {
        let mut v = base.symbols().to_vec();
        for (off, slot) in v.iter_mut().enumerate().skip(block_start - 1).take(block_len) {
            *slot = 1_000 + id * 1_000 + off as u32;
        }
        strings.push(Sequence::new(id, v));
    }
    strings
}

/// Criteria 6 and 7: the pipeline sandwich on planted pseudorandom instances,
/// the banded lower bound on adversarial ones, and exact recomputation of
/// every emitted certificate.
#[test]
fn criterion_6_and_7_pipeline() {
    let p = rat(1, 2);
    let eps = rat(1, 50); // 0.02
    let factor = rat_usize(2) - rat(3, 1024) + rat(89, 50);
    let mut sandwich_violations = 0usize;
    let mut certificate_checks = 0usize;
    let mut certificate_violations = 0usize;
    let mut total = 0usize;

    let mut check_certificates = |estimation: &mlcs_core::pseudorandom::CostEstimation,
                                  strings: &[Sequence]| {
        for (tuple, cost) in estimation {
            certificate_checks += 1;
            let contents: Vec<&[u32]> = tuple
                .0
                .iter()
                .enumerate()
                .map(|(j, &(s, e))| strings[j].range(s as usize, e as usize))
                .collect();
            let exact = generalized_cost(&contents).unwrap();
            if *cost < exact {
                certificate_violations += 1;
            }
        }
    };

    // 50 planted instances
    let mut verified_base = 0usize;
    for seed in 0..50u64 {
        total += 1;
        let inst = gen_instance(&InstanceSpec {
            m: 3,
            n: 512,
            alphabet_size: 256,
            seed: 0xC6_0000 + seed,
            planting: Planting::PseudorandomBase {
                p: p.clone(),
                b: 16,
                budget: 24,
            },
        })
        .unwrap();
        if inst.pseudorandom_ok == Some(true) {
            verified_base += 1;
        }
        let a = inst.realized_distance.expect("banded oracle certifies A");
        let params = PipelineParams::new(p.clone(), 16, eps.clone())
            .unwrap()
            .with_seed(0xC6_0000 + seed);
        let (estimation, _, _) = multi_window_estimation(&inst.strings, &params).unwrap();
        assert!(estimation.len() <= 200_000, "certified set unexpectedly large");
        let value = assemble_distance(&estimation, &inst.strings).unwrap().value;
        if seed == 0 {
            // the orchestrating entry point computes the same value
            let (direct, _) = pseudo_align(&inst.strings, &params).unwrap();
            assert_eq!(direct, value);
        }
        let lower_ok = value >= rat_usize(a);
        let upper_ok = if a == 0 {
            value == rat_usize(0)
        } else {
            value <= factor.clone() * rat_usize(a)
        };
        if !(lower_ok && upper_ok) {
            sandwich_violations += 1;
            eprintln!("planted seed {seed}: A = {a}, value = {value}");
        }
        check_certificates(&estimation, &inst.strings);
    }

    // 20 adversarial large-distance instances: only the banded lower bound
    for seed in 0..20u64 {
        total += 1;
        let strings = adversarial_block_instance(0xC6_8000 + seed);
        let k_cap = 32usize;
        let lb = match banded_distance(&strings, k_cap).unwrap() {
            BandedOutcome::ExceedsThreshold => k_cap + 1,
            BandedOutcome::Distance(d) => d,
        };
        let params = PipelineParams::new(p.clone(), 16, eps.clone())
            .unwrap()
            .with_seed(0xC6_8000 + seed);
        let (estimation, _, _) = multi_window_estimation(&strings, &params).unwrap();
        let value = assemble_distance(&estimation, &strings).unwrap().value;
        if value < rat_usize(lb) {
            sandwich_violations += 1;
            eprintln!("adversarial seed {seed}: lb = {lb}, value = {value}");
        }
        check_certificates(&estimation, &strings);
    }

    // the generator's base strings verify the hypothesis nearly always
    assert!(
        verified_base * 100 >= 95 * 50,
        "only {verified_base}/50 base strings verified pseudorandom"
    );
    conclude("6 (pipeline sandwich)", sandwich_violations, total);
    conclude(
        "7 (certificate soundness)",
        certificate_violations,
        certificate_checks,
    );
}

/// Invariant regression: monotone waves on a fixed instance (backing the
/// banded engine used throughout the suite).
#[test]
fn wave_monotonicity_spotcheck() {
    let mut rng = stream(0xC9, "acceptance-waves");
    let mut violations = 0;
    for _ in 0..50 {
        let n = rng.gen_range(2..=8);
        let strings = random_strings(&mut rng, 3, n, 3);
        let (waves, _) = mlcs_core::exact::banded::banded_waves(&strings, n, 7).unwrap();
        for pair in waves.windows(2) {
            if pair[0]
                .rows
                .iter()
                .zip(&pair[1].rows)
                .any(|(a, b)| b < a)
            {
                violations += 1;
            }
        }
    }
    conclude("aux (monotone waves)", violations, 50);
}
