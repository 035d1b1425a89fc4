use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use soi_core::algebra::{
    catalog_entries, catalog_get, check_axiom, expected_failures, from_ratio, weighted_sum,
    Aggregator, Axiom, GridSpec,
};

// Shared so each member's properties are computed once.
fn semi_overlaps() -> &'static [Aggregator] {
    static POOL: OnceLock<Vec<Aggregator>> = OnceLock::new();
    POOL.get_or_init(|| {
        catalog_entries()
            .iter()
            .filter(|e| expected_failures(e.id).is_empty())
            .map(|e| catalog_get(e.id, &[]).unwrap())
            .collect()
    })
}

#[test]
fn boundary_axioms_hold_exactly_for_the_catalog() {
    let grid = GridSpec::axiom_default();
    for f in semi_overlaps() {
        for axiom in [Axiom::S1, Axiom::S2, Axiom::S3, Axiom::S4] {
            let c = check_axiom(f, axiom, &grid);
            assert!(c.holds, "{} fails {axiom} at {:?}", f.id(), c.witness);
        }
    }
}

#[test]
fn arithmetic_mean_is_the_erratum() {
    let f = catalog_get("t1_arith_mean", &[]).unwrap();
    let c = check_axiom(&f, Axiom::S2, &GridSpec::axiom_default());
    let w = c.witness.expect("a witness");
    assert!(!c.holds);
    assert_eq!(w[0], 0.0);
    assert!(w[1] > 0.0);
}

#[test]
fn neutral_element_membership() {
    for id in [
        "t1_min",
        "t1_product",
        "t1_lukasiewicz",
        "t1_hamacher",
        "ex33_minmaxsq",
    ] {
        assert!(
            catalog_get(id, &[])
                .unwrap()
                .declared_props()
                .contains(Axiom::NeutralOne),
            "{id}"
        );
    }
    for (id, p) in [
        ("t1_min_pow", 2.0),
        ("t1_min_pow", 0.5),
        ("ex33_powprod", 2.0),
        ("ex33_powprod", 3.0),
    ] {
        let f = catalog_get(id, &[("p", p)]).unwrap();
        let c = check_axiom(&f, Axiom::NeutralOne, &GridSpec::axiom_default());
        assert!(!c.holds && c.witness.is_some(), "{id} p={p}");
    }
    let mean = catalog_get("t1_arith_mean", &[]).unwrap();
    assert!(!mean.declared_props().contains(Axiom::NeutralOne));
}

/// Ten seeded convex combinations stay semi-overlap functions.
#[test]
fn convex_combinations_are_closed() {
    let pool = semi_overlaps();
    let grid = GridSpec::law_default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let k = rng.gen_range(2..=4);
        let members: Vec<Aggregator> = (0..k)
            .map(|_| pool[rng.gen_range(0..pool.len())].clone())
            .collect();
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let f = weighted_sum(&members, &weights).unwrap();
        for axiom in Axiom::SEMI_OVERLAP {
            let c = check_axiom(&f, axiom, &grid);
            assert!(c.holds, "{} fails {axiom} at {:?}", f.id(), c.witness);
        }
    }
}

fn catalog_index() -> impl Strategy<Value = usize> {
    0..semi_overlaps().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn symmetric_and_monotone(i in catalog_index(), u in 0.0..=1.0f64, v in 0.0..=1.0f64, d in 0.0..=1.0f64) {
        let f = &semi_overlaps()[i];
        prop_assert_eq!(f.eval(u, v), f.eval(v, u));
        let y = f.eval(u, v);
        prop_assert!((0.0..=1.0).contains(&y));
        let u2 = (u + d).min(1.0);
        prop_assert!(f.eval(u2, v) >= y, "{} decreases from ({u}, {v}) to ({u2}, {v})", f.id());
    }

    /// Approaching from below along a chain converges to the value, for
    /// every member and every convex mix.
    #[test]
    fn weighted_sums_commute_with_sup_from_below(
        i in catalog_index(), j in catalog_index(), w in 0.0..=1.0f64,
        u in 0.0..=1.0f64, v in 0.01..=1.0f64,
    ) {
        let pool = semi_overlaps();
        let f = weighted_sum(&[pool[i].clone(), pool[j].clone()], &[w, 1.0 - w]).unwrap();
        let target = f.eval(u, v);
        let chain: Vec<f64> = (1..=40).map(|k| f.eval(u, v - v * 0.5f64.powi(k))).collect();
        prop_assert!(chain.windows(2).all(|c| c[0] <= c[1]));
        let sup = chain.iter().cloned().fold(0.0, f64::max);
        prop_assert!(sup <= target);
        prop_assert!(target - sup < 1e-6, "{}: sup {sup} vs value {target} at ({u}, {v})", f.id());
    }

    #[test]
    fn ratio_construction_is_symmetric(u in 0.0..=1.0f64, v in 0.0..=1.0f64) {
        let f = ratio();
        prop_assert_eq!(f.eval(u, v), f.eval(v, u));
    }
}

fn ratio() -> Aggregator {
    static F: OnceLock<Aggregator> = OnceLock::new();
    F.get_or_init(|| from_ratio(|u: f64, v: f64| u.min(v), |u: f64, v: f64| 1.0 - u * v).unwrap())
        .clone()
}
