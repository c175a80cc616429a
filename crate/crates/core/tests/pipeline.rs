//! End-to-end checks of the windowed estimation pipeline.

use mlcs_core::exact::banded::{banded_distance, BandedOutcome};
use mlcs_core::exact::generalized_cost;
use mlcs_core::pseudorandom::{
    assemble_distance, multi_window_estimation, pseudo_align, PipelineParams,
};
use mlcs_core::rat::{rat, rat_usize, Rat};
use mlcs_core::seq::Sequence;
use mlcs_core::testkit::{gen_instance, InstanceSpec, Planting};

fn params(p: Rat, b: usize) -> PipelineParams {
    PipelineParams::new(p, b, rat(1, 50)).unwrap().with_seed(7)
}

#[test]
fn identical_strings_cost_zero() {
    let inst = gen_instance(&InstanceSpec {
        m: 3,
        n: 64,
        alphabet_size: 64,
        seed: 3,
        planting: Planting::PseudorandomBase {
            p: rat(1, 2),
            b: 8,
            budget: 0,
        },
    })
    .unwrap();
    let (value, report) = pseudo_align(&inst.strings, &params(rat(1, 2), 8)).unwrap();
    assert_eq!(value, rat(0, 1), "report: {report:?}");
}

#[test]
fn planted_instance_sandwich_small() {
    for seed in 0..5 {
        let inst = gen_instance(&InstanceSpec {
            m: 3,
            n: 128,
            alphabet_size: 128,
            seed,
            planting: Planting::PseudorandomBase {
                p: rat(1, 2),
                b: 12,
                budget: 6,
            },
        })
        .unwrap();
        let a = inst.realized_distance.expect("banded oracle feasible");
        let (value, report) = pseudo_align(&inst.strings, &params(rat(1, 2), 12)).unwrap();
        assert!(
            value >= rat_usize(a),
            "seed {seed}: value {value} below exact {a} ({report:?})"
        );
        // 2 - 3p/512 + 89 eps with p = 1/2, eps = 1/50
        let factor = rat(2, 1) - rat(3, 1024) + rat(89, 50);
        assert!(
            value <= factor * rat_usize(a.max(1)),
            "seed {seed}: value {value} breaks the sandwich for distance {a}"
        );
    }
}

#[test]
fn certificates_are_sound() {
    let inst = gen_instance(&InstanceSpec {
        m: 3,
        n: 96,
        alphabet_size: 96,
        seed: 11,
        planting: Planting::PseudorandomBase {
            p: rat(1, 2),
            b: 10,
            budget: 5,
        },
    })
    .unwrap();
    let p = params(rat(1, 2), 10);
    let (estimation, _, _) = multi_window_estimation(&inst.strings, &p).unwrap();
    assert!(!estimation.is_empty());
    for (tuple, cost) in &estimation {
        let contents: Vec<&[u32]> = tuple
            .0
            .iter()
            .enumerate()
            .map(|(j, &(s, e))| inst.strings[j].range(s as usize, e as usize))
            .collect();
        let exact = generalized_cost(&contents).unwrap();
        assert!(
            *cost >= exact,
            "unsound certificate {cost} < {exact} for {tuple:?}"
        );
    }
    let assembled = assemble_distance(&estimation, &inst.strings).unwrap();
    let a = inst.realized_distance.unwrap();
    assert!(assembled.value >= rat_usize(a));
}

#[test]
fn adversarial_block_lower_bound() {
    // replace a middle block with fresh symbols in every adversarial string
    let base = mlcs_core::pseudorandom::gen_pseudorandom(128, 100, 23).unwrap();
    let mut strings = vec![base.clone()];
    for id in 2..=3u32 {
        let mut v = base.symbols().to_vec();
        for (off, slot) in v.iter_mut().enumerate().skip(40).take(48) {
            *slot = 100 + (id * 48) + (off as u32 % 8);
        }
        strings.push(Sequence::new(id, v));
    }
    let k = 24;
    assert!(matches!(
        banded_distance(&strings, k).unwrap(),
        BandedOutcome::ExceedsThreshold
    ));
    let (value, _) = pseudo_align(&strings, &params(rat(1, 2), 10)).unwrap();
    assert!(value > rat_usize(k), "value {value} not above lower bound {k}");
}
