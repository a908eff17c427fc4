//! Shared fixtures: the two-generator counterexample coalgebra, the
//! non-groupoid Hopf algebroid, solver edge cases, and seeded random
//! families for the roundtrip suites.

use std::collections::BTreeMap;

use num_traits::One;
use rand::Rng;

use crate::base::{rat_int, BaseRingElement, BaseSet, Point, Rational};
use crate::coalgebra::{BasisEntry, Coalgebra, GradedVector};
use crate::groupoid::{
    action_groupoid, cyclic_group, disjoint_union, pair_groupoid, trivial_groupoid,
    FiniteGroupoid,
};
use crate::hopf::{AlgBasisEntry, HopfAlgebroid};
use crate::sheaf::{sheaf_coalgebra, FiniteSheaf};

fn pt(i: usize) -> Point {
    Point::new(i.to_string())
}

/// The free rank-two counterexample coalgebra over `M = {1, 2}` with
/// `p = δ_1`: basis `e1`, `e2` with `Δ(e1) = e1 ⊗ e1`, `ε(e1) = 1`,
/// `Δ(e2) = e1 ⊗ e2 + e2 ⊗ e1 + p·e2 ⊗ e2`, `ε(e2) = 0`. Its grouplikes
/// `e1` and `c = e1 + p e2` are rationally dependent through `q = δ_2`.
/// Graded form: four basis elements `e{i}@{x}`, and the `e2 ⊗ e2` term
/// survives only in the stalk at 1.
pub fn dependent_grouplikes() -> Coalgebra {
    let base = BaseSet::range(2);
    let basis = vec![
        BasisEntry { id: "e1@1".into(), grade: pt(1) },
        BasisEntry { id: "e2@1".into(), grade: pt(1) },
        BasisEntry { id: "e1@2".into(), grade: pt(2) },
        BasisEntry { id: "e2@2".into(), grade: pt(2) },
    ];
    let one = Rational::one();
    let mut delta = BTreeMap::new();
    delta.insert("e1@1".into(), vec![("e1@1".into(), "e1@1".into(), one.clone())]);
    delta.insert("e1@2".into(), vec![("e1@2".into(), "e1@2".into(), one.clone())]);
    delta.insert(
        "e2@1".into(),
        vec![
            ("e1@1".into(), "e2@1".into(), one.clone()),
            ("e2@1".into(), "e1@1".into(), one.clone()),
            ("e2@1".into(), "e2@1".into(), one.clone()),
        ],
    );
    delta.insert(
        "e2@2".into(),
        vec![
            ("e1@2".into(), "e2@2".into(), one.clone()),
            ("e2@2".into(), "e1@2".into(), one),
        ],
    );
    let mut epsilon = BTreeMap::new();
    epsilon.insert("e1@1".into(), BaseRingElement::indicator(&base, &pt(1)).unwrap());
    epsilon.insert("e1@2".into(), BaseRingElement::indicator(&base, &pt(2)).unwrap());
    Coalgebra::new(base, basis, delta, epsilon).unwrap()
}

/// Global elements of the counterexample coalgebra: `e1`, `e2`, and the
/// second grouplike `c = e1 + p·e2`.
pub fn dependent_grouplikes_element(name: &str) -> GradedVector {
    let mut v = GradedVector::zero();
    match name {
        "e1" => {
            v.set("e1@1", rat_int(1));
            v.set("e1@2", rat_int(1));
        }
        "e2" => {
            v.set("e2@1", rat_int(1));
            v.set("e2@2", rat_int(1));
        }
        "c" => {
            v.set("e1@1", rat_int(1));
            v.set("e1@2", rat_int(1));
            v.set("e2@1", rat_int(1));
        }
        other => panic!("unknown element {other}"),
    }
    v
}

/// The group coalgebra of `Z/k` over one point: grouplike basis, counit one.
pub fn group_coalgebra(k: usize) -> Coalgebra {
    let base = BaseSet::from_ids(["*"]).unwrap();
    let star = Point::new("*");
    let mut basis = Vec::new();
    let mut delta = BTreeMap::new();
    let mut epsilon = BTreeMap::new();
    for a in 0..k {
        let id = format!("g{a}");
        basis.push(BasisEntry { id: id.clone(), grade: star.clone() });
        delta.insert(id.clone(), vec![(id.clone(), id.clone(), Rational::one())]);
        epsilon.insert(id, BaseRingElement::indicator(&base, &star).unwrap());
    }
    Coalgebra::new(base, basis, delta, epsilon).unwrap()
}

/// A sheaf over `{1, ..., n}` with the given stalk sizes; elements `s{i}_{j}`.
pub fn sheaf_with_sizes(sizes: &[usize]) -> FiniteSheaf {
    assert!(!sizes.is_empty());
    let base = BaseSet::range(sizes.len());
    let stalks = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            (
                pt(i + 1),
                (0..s).map(|j| format!("s{}_{}", i + 1, j)).collect(),
            )
        })
        .collect();
    FiniteSheaf::new(base, stalks).unwrap()
}

pub fn sheaf_coalgebra_sizes(sizes: &[usize]) -> Coalgebra {
    sheaf_coalgebra(&sheaf_with_sizes(sizes))
}

/// A coalgebra whose dual is `Q[t]/(t² + 1)`: no rational grouplikes, and
/// the solver refuses with a not-split obstruction.
pub fn rotation_coalgebra() -> Coalgebra {
    let base = BaseSet::from_ids(["*"]).unwrap();
    let star = Point::new("*");
    let basis = vec![
        BasisEntry { id: "c0".into(), grade: star.clone() },
        BasisEntry { id: "c1".into(), grade: star.clone() },
    ];
    let mut delta = BTreeMap::new();
    delta.insert(
        "c0".into(),
        vec![
            ("c0".into(), "c0".into(), rat_int(1)),
            ("c1".into(), "c1".into(), rat_int(-1)),
        ],
    );
    delta.insert(
        "c1".into(),
        vec![
            ("c0".into(), "c1".into(), rat_int(1)),
            ("c1".into(), "c0".into(), rat_int(1)),
        ],
    );
    let mut epsilon = BTreeMap::new();
    epsilon.insert("c0".into(), BaseRingElement::indicator(&base, &star).unwrap());
    Coalgebra::new(base, basis, delta, epsilon).unwrap()
}

/// The valid non-groupoid Hopf algebroid: the monoid algebra
/// `Q[x]/(x² = x)` with `Δx = x ⊗ x`, `εx = 1`, `Sx = 1 − x`. All six
/// axioms hold, the stalk is two-dimensional, but only the unit survives
/// the S-invariance cut, so the spectral groupoid has a single arrow.
pub fn idempotent_monoid_algebroid() -> HopfAlgebroid {
    let base = BaseSet::from_ids(["*"]).unwrap();
    let star = Point::new("*");
    let basis = vec![
        AlgBasisEntry { id: "u".into(), tgt: star.clone(), src: star.clone() },
        AlgBasisEntry { id: "x".into(), tgt: star.clone(), src: star.clone() },
    ];
    let one = Rational::one();
    let mut product = BTreeMap::new();
    product.insert(("u".into(), "u".into()), vec![("u".into(), one.clone())]);
    product.insert(("u".into(), "x".into()), vec![("x".into(), one.clone())]);
    product.insert(("x".into(), "u".into()), vec![("x".into(), one.clone())]);
    product.insert(("x".into(), "x".into()), vec![("x".into(), one.clone())]);
    let mut delta = BTreeMap::new();
    delta.insert("u".into(), vec![("u".into(), "u".into(), one.clone())]);
    delta.insert("x".into(), vec![("x".into(), "x".into(), one.clone())]);
    let mut epsilon = BTreeMap::new();
    epsilon.insert("u".into(), BaseRingElement::indicator(&base, &star).unwrap());
    epsilon.insert("x".into(), BaseRingElement::indicator(&base, &star).unwrap());
    let mut antipode = BTreeMap::new();
    antipode.insert("u".into(), vec![("u".into(), one.clone())]);
    antipode.insert(
        "x".into(),
        vec![("u".into(), one), ("x".into(), rat_int(-1))],
    );
    let units = BTreeMap::from([(star, "u".to_string())]);
    HopfAlgebroid::new(base, basis, product, delta, epsilon, antipode, units).unwrap()
}

/// The truncated primitive-element table: `x² = 0`, `Δx = x ⊗ 1 + 1 ⊗ x`,
/// `εx = 0`, `Sx = −x`. Over the rationals this *fails* multiplicativity
/// (axiom iii): `Δ(x)Δ(x) = 2(x ⊗ x)` while `Δ(x²) = 0`. Kept as the
/// named-axiom failure fixture; its underlying coalgebra is lawful and has
/// exactly one grouplike.
pub fn primitive_element_algebroid() -> HopfAlgebroid {
    let base = BaseSet::from_ids(["*"]).unwrap();
    let star = Point::new("*");
    let basis = vec![
        AlgBasisEntry { id: "u".into(), tgt: star.clone(), src: star.clone() },
        AlgBasisEntry { id: "x".into(), tgt: star.clone(), src: star.clone() },
    ];
    let one = Rational::one();
    let mut product = BTreeMap::new();
    product.insert(("u".into(), "u".into()), vec![("u".into(), one.clone())]);
    product.insert(("u".into(), "x".into()), vec![("x".into(), one.clone())]);
    product.insert(("x".into(), "u".into()), vec![("x".into(), one.clone())]);
    let mut delta = BTreeMap::new();
    delta.insert("u".into(), vec![("u".into(), "u".into(), one.clone())]);
    delta.insert(
        "x".into(),
        vec![
            ("x".into(), "u".into(), one.clone()),
            ("u".into(), "x".into(), one.clone()),
        ],
    );
    let mut epsilon = BTreeMap::new();
    epsilon.insert("u".into(), BaseRingElement::indicator(&base, &star).unwrap());
    let mut antipode = BTreeMap::new();
    antipode.insert("u".into(), vec![("u".into(), one)]);
    antipode.insert("x".into(), vec![("x".into(), rat_int(-1))]);
    let units = BTreeMap::from([(star, "u".to_string())]);
    HopfAlgebroid::new(base, basis, product, delta, epsilon, antipode, units).unwrap()
}

/// The lawful coalgebra underneath the primitive-element table; grouplikes
/// are exactly the unit.
pub fn primitive_element_coalgebra() -> Coalgebra {
    primitive_element_algebroid().coalgebra().unwrap()
}

/// Seeded random sheaf: up to `max_points` points, stalk sizes up to
/// `max_stalk` (empty allowed).
pub fn random_sheaf<R: Rng>(rng: &mut R, max_points: usize, max_stalk: usize) -> FiniteSheaf {
    let n = rng.gen_range(1..=max_points);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max_stalk)).collect();
    sheaf_with_sizes(&sizes)
}

/// Seeded random disjoint union of namespaced small components (pair
/// groupoids, cyclic groups, swap actions, trivial groupoids) with at most
/// `max_arrows` arrows.
pub fn random_disjoint_union<R: Rng>(rng: &mut R, max_arrows: usize) -> FiniteGroupoid {
    let mut result: Option<FiniteGroupoid> = None;
    let mut arrows = 0usize;
    for idx in 0.. {
        let component = match rng.gen_range(0..4) {
            0 => pair_groupoid(rng.gen_range(1..=3)),
            1 => cyclic_group(rng.gen_range(1..=4)),
            2 => {
                let base = BaseSet::range(2);
                let sigma = BTreeMap::from([
                    (pt(1), pt(2)),
                    (pt(2), pt(1)),
                ]);
                action_groupoid(2, &base, &sigma).unwrap()
            }
            _ => trivial_groupoid(&BaseSet::range(rng.gen_range(1..=2))),
        };
        let component = component.relabel(&format!("c{idx}."));
        if arrows + component.arrow_count() > max_arrows {
            break;
        }
        arrows += component.arrow_count();
        result = Some(match result {
            None => component,
            Some(acc) => disjoint_union(&acc, &component).unwrap(),
        });
        if arrows >= max_arrows.saturating_sub(3) {
            break;
        }
    }
    result.unwrap_or_else(|| trivial_groupoid(&BaseSet::range(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::check_coalgebra;
    use crate::groupoid::validate_groupoid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixture_laws() {
        assert!(check_coalgebra(&dependent_grouplikes()).all_ok());
        assert!(check_coalgebra(&group_coalgebra(4)).all_ok());
        assert!(check_coalgebra(&rotation_coalgebra()).all_ok());
        assert!(check_coalgebra(&primitive_element_coalgebra()).all_ok());
    }

    #[test]
    fn random_unions_validate_and_respect_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let g = random_disjoint_union(&mut rng, 40);
            assert!(g.arrow_count() <= 40);
            assert!(validate_groupoid(&g).ok);
        }
    }

    #[test]
    fn random_sheaves_within_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let e = random_sheaf(&mut rng, 4, 5);
            assert!(e.base().len() <= 4);
            assert!(e.stalks().values().all(|s| s.len() <= 5));
        }
    }
}
