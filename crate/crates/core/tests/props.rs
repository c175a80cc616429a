//! Property tests for the spec invariants that are cheap enough to fuzz.

use mlcs_core::exact::banded::{banded_distance, BandedOutcome};
use mlcs_core::exact::{alignment_distance_exact, lcs_candidates, lcs_exact, lcs_len};
use mlcs_core::lcs_approx::enumerate_lcs;
use mlcs_core::pseudorandom::{window_gen, Window};
use mlcs_core::rat::{rat, rat_usize};
use mlcs_core::seq::Sequence;
use mlcs_core::similarity::{max_del_similar, min_del_similar};
use mlcs_core::Error;
use proptest::prelude::*;

fn arb_strings(
    m: std::ops::RangeInclusive<usize>,
    n: std::ops::RangeInclusive<usize>,
    alphabet: u32,
) -> impl Strategy<Value = Vec<Sequence>> {
    (m, n).prop_flat_map(move |(m, n)| {
        proptest::collection::vec(
            proptest::collection::vec(0..alphabet, n),
            m,
        )
        .prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, symbols)| Sequence::new(i as u32 + 1, symbols))
                .collect()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn engines_agree(strings in arb_strings(2..=4, 1..=8, 3)) {
        let exact = lcs_len(&strings).unwrap();
        prop_assert_eq!(lcs_candidates(&strings).unwrap(), exact);
        let n = strings[0].len();
        let dist = alignment_distance_exact(&strings).unwrap();
        prop_assert_eq!(banded_distance(&strings, n).unwrap(), BandedOutcome::Distance(dist));
    }

    #[test]
    fn witness_replays_and_validates(strings in arb_strings(2..=3, 1..=8, 3)) {
        let (len, witness) = lcs_exact(&strings).unwrap();
        prop_assert_eq!(witness.len(), len);
        prop_assert!(witness.validate(&strings).is_ok());
        for (j, s) in strings.iter().enumerate() {
            prop_assert_eq!(
                witness.unaligned_indices(j, s.len()).len(),
                s.len() - len
            );
        }
    }

    #[test]
    fn banded_never_reports_above_threshold(
        strings in arb_strings(2..=3, 1..=8, 2),
        k in 0usize..=8,
    ) {
        let dist = alignment_distance_exact(&strings).unwrap();
        match banded_distance(&strings, k).unwrap() {
            BandedOutcome::Distance(d) => {
                prop_assert!(d <= k);
                prop_assert_eq!(d, dist);
            }
            BandedOutcome::ExceedsThreshold => prop_assert!(dist > k),
        }
    }

    #[test]
    fn similarity_budget_monotonicity(
        strings in arb_strings(2..=3, 1..=6, 2),
        set_mask in 0u32..64,
    ) {
        let n = strings[0].len();
        let set: Vec<u32> = (1..=n as u32).filter(|i| set_mask >> (i - 1) & 1 == 1).collect();
        let mut prev_max: Option<u32> = None;
        let mut prev_min: Option<u32> = None;
        for d in 0..=n {
            match max_del_similar(&strings, &set, d) {
                Ok(r) => {
                    if let Some(p) = prev_max {
                        prop_assert!(r.overlap >= p);
                    }
                    prop_assert!(r.cumulative_cost as usize <= d * strings.len());
                    prev_max = Some(r.overlap);
                }
                Err(Error::InfeasibleBudget { .. }) => prop_assert!(prev_max.is_none()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
            match min_del_similar(&strings, std::slice::from_ref(&set), d) {
                Ok(r) => {
                    if let Some(p) = prev_min {
                        prop_assert!(r.overlap <= p);
                    }
                    prev_min = Some(r.overlap);
                }
                Err(Error::InfeasibleBudget { .. }) => prop_assert!(prev_min.is_none()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn window_grid_geometry(
        n in 1usize..=40,
        d in 1usize..=12,
        theta_num in 0i64..=4,
        eps_num in 1i64..=4,
    ) {
        let theta = rat(theta_num, 4);
        let eps = rat(eps_num, 4);
        let s = Sequence::new(1, (0..n as u32).collect());
        let grid = window_gen(&s, d, &theta, &eps);
        let lo = mlcs_core::rat::floor_usize(&(rat_usize(d) - &theta * rat_usize(d)));
        let hi = mlcs_core::rat::floor_usize(&(rat_usize(d) + &theta * rat_usize(d)));
        for layer in &grid.layers {
            for w in layer.highs.iter().chain(&layer.lows) {
                prop_assert!(w.start >= 1 && w.start <= w.end && w.end as usize <= n);
                // layer starts step by the common stride
                prop_assert_eq!((w.start as usize - 1) % layer.stride, 0);
                // lengths stay inside [floor(d - theta d), floor(d + theta d)]
                // except where the string end truncates the window
                let len = w.len();
                prop_assert!(len <= hi.max(d));
                prop_assert!(len >= lo.min(d) || w.end as usize == n);
            }
        }
    }

    #[test]
    fn lcs_cover_members_disjoint_and_bounded(
        strings in arb_strings(2..=2, 2..=8, 2),
        lam_num in 1i64..=2,
    ) {
        let n = strings[0].len();
        let lambda = rat(lam_num, 4);
        let l = lcs_len(&strings).unwrap();
        prop_assume!(rat_usize(l) >= lambda.clone() * rat_usize(n));
        let cover = enumerate_lcs(&strings, &lambda).unwrap();
        let cap = mlcs_core::rat::ceil_usize(&(rat_usize(2) / &lambda));
        prop_assert!(cover.members.len() <= cap);
        let mut seen = std::collections::BTreeSet::new();
        for mbr in &cover.members {
            for &i in &mbr.s1_indices {
                prop_assert!(seen.insert(i));
            }
        }
    }

    #[test]
    fn disjoint_subsets_are_maximal(
        raw in proptest::collection::vec((1u32..=20, 1u32..=6), 0..=12),
    ) {
        let windows: Vec<Window> = raw
            .into_iter()
            .map(|(s, len)| Window::new(1, s, s + len - 1))
            .collect();
        let picked = mlcs_core::pseudorandom::disjoint(&windows);
        for pair in picked.windows(2) {
            prop_assert!(pair[0].end < pair[1].start);
        }
        for w in &windows {
            let conflicts = picked.iter().any(|p| p.overlaps(w));
            prop_assert!(conflicts, "excluded window {w:?} is disjoint from all picked");
        }
    }
}
