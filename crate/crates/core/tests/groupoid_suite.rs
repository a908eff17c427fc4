//! Groupoid-level properties: validation across the generator zoo and
//! random unions, and the bisection translation calculus.

mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hopfoid::fixtures;
use hopfoid::groupoid::{
    bisection_inverse, bisection_product, compose_partial_bijection, invert_partial_bijection,
    is_bisection, tau_of_bisection, validate_groupoid, Bisection, FiniteGroupoid,
};

#[test]
fn every_generator_output_validates() {
    for g in support::generator_roster() {
        let report = validate_groupoid(&g);
        assert!(report.ok, "{:?}", report.violation);
    }
}

#[test]
fn arrow_counts_match_the_closed_forms() {
    for n in 1..=4 {
        assert_eq!(hopfoid::groupoid::pair_groupoid(n).arrow_count(), n * n);
    }
    let base = hopfoid::BaseSet::range(2);
    let sigma = std::collections::BTreeMap::from([
        (hopfoid::Point::new("1"), hopfoid::Point::new("2")),
        (hopfoid::Point::new("2"), hopfoid::Point::new("1")),
    ]);
    let act = hopfoid::groupoid::action_groupoid(2, &base, &sigma).unwrap();
    assert_eq!(act.arrow_count(), 2 * 2);
}

#[test]
fn random_unions_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..30 {
        let g = fixtures::random_disjoint_union(&mut rng, 40);
        assert!(validate_groupoid(&g).ok);
    }
}

/// Greedy random bisection: arrows with pairwise fresh sources and targets.
fn random_bisection<R: Rng>(rng: &mut R, g: &FiniteGroupoid) -> Bisection {
    let mut srcs = std::collections::BTreeSet::new();
    let mut tgts = std::collections::BTreeSet::new();
    let mut ids = Vec::new();
    let mut order: Vec<usize> = (0..g.arrow_count()).collect();
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    for i in order {
        let a = g.arrow(i);
        if srcs.contains(&a.src) || tgts.contains(&a.tgt) {
            continue;
        }
        srcs.insert(a.src.clone());
        tgts.insert(a.tgt.clone());
        ids.push(a.id.clone());
    }
    Bisection::new(ids)
}

#[test]
fn tau_functoriality_on_random_bisections() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in [
        hopfoid::groupoid::pair_groupoid(4),
        fixtures::random_disjoint_union(&mut ChaCha8Rng::seed_from_u64(1), 25),
    ] {
        for _ in 0..40 {
            let u = random_bisection(&mut rng, &g);
            let v = random_bisection(&mut rng, &g);
            assert!(is_bisection(&g, &u).unwrap());
            let uv = bisection_product(&g, &u, &v).unwrap();
            assert!(is_bisection(&g, &uv).unwrap());
            let tau_u = tau_of_bisection(&g, &u).unwrap();
            let tau_v = tau_of_bisection(&g, &v).unwrap();
            let tau_uv = tau_of_bisection(&g, &uv).unwrap();
            assert_eq!(tau_uv, compose_partial_bijection(&tau_u, &tau_v));
            let uinv = bisection_inverse(&g, &u).unwrap();
            assert_eq!(
                tau_of_bisection(&g, &uinv).unwrap(),
                invert_partial_bijection(&tau_u)
            );
        }
    }
}
