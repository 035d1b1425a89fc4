use std::path::PathBuf;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use soi_core::algebra::{catalog_get, Aggregator};
use soi_core::classify::{
    banana_rulebase, ClassLabel, FarcHd, Mode, So5i, So5iSettings, TABLE5_KERNELS, TABLE7_KERNELS,
};
use soi_core::dataio::{parse_keel, Dataset};
use soi_core::inference::ConjImplPair;

fn banana() -> &'static Dataset {
    static DATA: OnceLock<Dataset> = OnceLock::new();
    DATA.get_or_init(|| {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/banana.dat");
        parse_keel(path).unwrap()
    })
}

fn kernels(ids: impl IntoIterator<Item = String>) -> Vec<Aggregator> {
    ids.into_iter()
        .map(|id| catalog_get(&id, &[]).unwrap())
        .collect()
}

/// Kernels of mixed run `run` (1-based) from a per-rule assignment table.
fn run_kernels(table: &[&str; 13], run: usize, prefix: &str) -> Vec<Aggregator> {
    kernels(
        table
            .iter()
            .map(|row| format!("{prefix}{}", &row[run - 1..run])),
    )
}

fn so5i(run: usize, step: f64) -> So5i {
    let settings = So5iSettings {
        step,
        ..So5iSettings::default()
    };
    So5i::new(
        &banana_rulebase(Mode::So5i),
        &run_kernels(&TABLE7_KERNELS, run, "so"),
        settings,
    )
    .unwrap()
}

fn random_samples(seed: u64, n: usize) -> Vec<Vec<f64>> {
    let data = banana();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            data.samples[rng.gen_range(0..data.samples.len())]
                .values
                .clone()
        })
        .collect()
}

#[test]
fn scores_stay_in_the_unit_interval() {
    let farc = FarcHd::new(
        &banana_rulebase(Mode::FarcHd),
        run_kernels(&TABLE5_KERNELS, 2, "o_"),
    )
    .unwrap();
    let so = so5i(4, 0.05);
    for x in random_samples(1, 200) {
        let p = farc.classify(&x).unwrap();
        assert!(
            p.scores.iter().all(|c| (0.0..=1.0 + 1e-12).contains(c)),
            "{p:?}"
        );
        let q = so.classify(&x).unwrap();
        assert!(q.scores.iter().all(|s| (0.0..=1.0).contains(s)), "{q:?}");
    }
}

#[test]
fn farc_plateau_and_empty_region() {
    let rb = banana_rulebase(Mode::FarcHd);
    let farc = FarcHd::new(&rb, kernels(vec!["o_a".to_string(); 13])).unwrap();
    let mu = farc.matching(&[-2.0, 0.0]).unwrap();
    assert_eq!(mu[0], 1.0);
    let p = farc.classify(&[-2.0, 0.0]).unwrap();
    assert!((p.scores[0] - 1.0 / 6.0).abs() < 1e-15);

    let far = farc.classify(&[10.0, 10.0]).unwrap();
    assert!(far.scores.iter().all(|&c| c == 0.0));
    assert!(far.tie);
    assert_eq!(far.class, ClassLabel::new(1).unwrap());
}

#[test]
fn so5i_disjoint_support_scores_zero() {
    let rb = banana_rulebase(Mode::So5i);
    let so = So5i::new(
        &rb,
        &kernels(vec!["so3".to_string(); 13]),
        So5iSettings::default(),
    )
    .unwrap();
    let scores = so.matching(&[-2.0, 0.0]).unwrap();
    assert!((scores[0] - 0.891).abs() <= 0.01);
    // Rule 6 sits in the opposite corner.
    assert_eq!(scores[5], 0.0);
}

/// Direct evaluation over a square twice as wide as the fuzzifier's
/// support; `A*` vanishes outside, so the maximum must not move.
fn wide_oracle(x: &[f64], rule: usize, pair: &ConjImplPair) -> f64 {
    let rb = banana_rulebase(Mode::So5i);
    let r = &rb.rules[rule];
    let b = r.consequent.unwrap();
    let tri = |o: f64| (1.0 - o.abs() / 0.25).max(0.0);
    let mut best: f64 = 0.0;
    for i in 0..=100 {
        let o1 = -0.5 + i as f64 * 0.01;
        for k in 0..=100 {
            let o2 = -0.5 + k as f64 * 0.01;
            let s = tri(o1).min(tri(o2));
            let a = r.antecedents[0]
                .eval(x[0] + o1)
                .min(r.antecedents[1].eval(x[1] + o2));
            best = best.max(pair.quintuple_term(s, a, b));
        }
    }
    best
}

#[test]
fn enlarging_the_region_changes_nothing() {
    let so = so5i(1, 0.01);
    let pairs: Vec<ConjImplPair> = run_kernels(&TABLE7_KERNELS, 1, "so")
        .iter()
        .map(|k| ConjImplPair::waiving_neutral(k).unwrap())
        .collect();
    for x in random_samples(2, 12) {
        let scores = so.matching(&x).unwrap();
        for (j, pair) in pairs.iter().enumerate() {
            let wide = wide_oracle(&x, j, pair);
            // The wide grid samples the same points up to float rounding
            // of the offsets.
            assert!(
                (scores[j] - wide).abs() <= 1e-6,
                "rule {} at {x:?}: {} vs {wide}",
                j + 1,
                scores[j]
            );
        }
    }
}

#[test]
fn halving_the_step_rarely_flips_a_prediction() {
    let samples = random_samples(8, 100);
    for run in 1..=5 {
        let (coarse, fine) = (so5i(run, 0.02), so5i(run, 0.01));
        let flips = samples
            .iter()
            .filter(|x| coarse.classify(x).unwrap().class != fine.classify(x).unwrap().class)
            .count();
        assert!(flips <= 1, "run {run}: {flips} flips");
    }
}

#[test]
fn predictions_do_not_depend_on_the_pool() {
    let so = so5i(2, 0.02);
    let samples = random_samples(3, 300);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                samples
                    .par_iter()
                    .map(|x| so.classify(x).unwrap())
                    .collect::<Vec<_>>()
            })
    };
    let serial: Vec<_> = samples.iter().map(|x| so.classify(x).unwrap()).collect();
    assert_eq!(run(1), serial);
    assert_eq!(run(4), serial);
}
