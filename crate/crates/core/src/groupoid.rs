//! Finite groupoids over the base set, with validation, bisections,
//! morphisms, and the generator zoo used by the fixtures.
//!
//! Composition is stored as a total table over composable pairs; desk scale
//! makes exhaustive tables cheap and keeps every axiom check a plain loop.

use std::collections::{BTreeMap, BTreeSet};

use crate::base::{BaseSet, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowEntry {
    pub id: String,
    pub src: Point,
    pub tgt: Point,
}

/// A finite groupoid: arrows over `base` with composition, units, inverses.
/// The constructor resolves ids and checks shape; the groupoid *axioms* are
/// the verdict of [`validate_groupoid`], so corrupted fixtures remain
/// constructible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    base: BaseSet,
    arrows: Vec<ArrowEntry>,
    index: BTreeMap<String, usize>,
    compose: BTreeMap<(usize, usize), usize>,
    unit: BTreeMap<Point, usize>,
    inverse: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn new(
        base: BaseSet,
        arrows: Vec<ArrowEntry>,
        compose: BTreeMap<(String, String), String>,
        unit: BTreeMap<Point, String>,
        inverse: BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if a.id.is_empty() {
                return Err(Error::structural("empty arrow id"));
            }
            if !base.contains(&a.src) || !base.contains(&a.tgt) {
                return Err(Error::structural(format!(
                    "arrow {} has endpoints outside the base set",
                    a.id
                )));
            }
            if index.insert(a.id.clone(), i).is_some() {
                return Err(Error::structural(format!("duplicate arrow id {}", a.id)));
            }
        }
        let resolve = |id: &str| -> Result<usize> {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::structural(format!("unknown arrow id {id}")))
        };
        let mut compose_idx = BTreeMap::new();
        for ((g, h), gh) in &compose {
            compose_idx.insert((resolve(g)?, resolve(h)?), resolve(gh)?);
        }
        let mut unit_idx = BTreeMap::new();
        for x in base.points() {
            let Some(id) = unit.get(x) else {
                return Err(Error::structural(format!("no unit arrow at {x}")));
            };
            unit_idx.insert(x.clone(), resolve(id)?);
        }
        let mut inverse_idx = vec![usize::MAX; arrows.len()];
        for (g, ginv) in &inverse {
            inverse_idx[resolve(g)?] = resolve(ginv)?;
        }
        if inverse_idx.contains(&usize::MAX) {
            return Err(Error::structural("inverse table is not total"));
        }
        Ok(FiniteGroupoid { base, arrows, index, compose: compose_idx, unit: unit_idx, inverse: inverse_idx })
    }

    pub fn base(&self) -> &BaseSet {
        &self.base
    }

    pub fn arrows(&self) -> &[ArrowEntry] {
        &self.arrows
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::structural(format!("unknown arrow id {id}")))
    }

    pub fn arrow(&self, i: usize) -> &ArrowEntry {
        &self.arrows[i]
    }

    pub fn compose_ids(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.compose
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose.get(&(g, h)).copied()
    }

    pub fn unit_at(&self, x: &Point) -> Option<usize> {
        self.unit.get(x).copied()
    }

    pub fn inverse_of(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// Copy with every point id and arrow id prefixed; used to make
    /// components disjoint before a union.
    pub fn relabel(&self, prefix: &str) -> FiniteGroupoid {
        let rename_point = |p: &Point| Point::new(format!("{prefix}{p}"));
        let base = BaseSet::new(self.base.points().iter().map(rename_point).collect()).unwrap();
        let arrows: Vec<ArrowEntry> = self
            .arrows
            .iter()
            .map(|a| ArrowEntry {
                id: format!("{prefix}{}", a.id),
                src: rename_point(&a.src),
                tgt: rename_point(&a.tgt),
            })
            .collect();
        let compose = self
            .compose
            .iter()
            .map(|(&(g, h), &gh)| {
                (
                    (arrows[g].id.clone(), arrows[h].id.clone()),
                    arrows[gh].id.clone(),
                )
            })
            .collect();
        let unit = self
            .unit
            .iter()
            .map(|(x, &u)| (rename_point(x), arrows[u].id.clone()))
            .collect();
        let inverse = self
            .inverse
            .iter()
            .enumerate()
            .map(|(g, &gi)| (arrows[g].id.clone(), arrows[gi].id.clone()))
            .collect();
        FiniteGroupoid::new(base, arrows, compose, unit, inverse).unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidReport {
    pub ok: bool,
    pub violation: Option<String>,
}

/// Runs the groupoid axioms exhaustively: composability domain, source and
/// target coherence, associativity on composable triples, unit laws, and
/// inverse laws. Reports the first violation found.
pub fn validate_groupoid(g: &FiniteGroupoid) -> GroupoidReport {
    let fail = |msg: String| GroupoidReport { ok: false, violation: Some(msg) };
    let n = g.arrows.len();
    for a in 0..n {
        for b in 0..n {
            let composable = g.arrows[a].src == g.arrows[b].tgt;
            match g.compose(a, b) {
                Some(ab) => {
                    if !composable {
                        return fail(format!(
                            "composition defined for non-composable pair ({}, {})",
                            g.arrows[a].id, g.arrows[b].id
                        ));
                    }
                    if g.arrows[ab].src != g.arrows[b].src || g.arrows[ab].tgt != g.arrows[a].tgt {
                        return fail(format!(
                            "endpoints of {}·{} = {} are incoherent",
                            g.arrows[a].id, g.arrows[b].id, g.arrows[ab].id
                        ));
                    }
                }
                None => {
                    if composable {
                        return fail(format!(
                            "missing composition for composable pair ({}, {})",
                            g.arrows[a].id, g.arrows[b].id
                        ));
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if g.arrows[a].src != g.arrows[b].tgt {
                continue;
            }
            let ab = g.compose(a, b).unwrap();
            for c in 0..n {
                if g.arrows[b].src != g.arrows[c].tgt {
                    continue;
                }
                let bc = g.compose(b, c).unwrap();
                let left = g.compose(ab, c).unwrap();
                let right = g.compose(a, bc).unwrap();
                if left != right {
                    return fail(format!(
                        "associativity fails on ({}, {}, {})",
                        g.arrows[a].id, g.arrows[b].id, g.arrows[c].id
                    ));
                }
            }
        }
    }
    for x in g.base.points() {
        let u = g.unit_at(x).unwrap();
        if g.arrows[u].src != *x || g.arrows[u].tgt != *x {
            return fail(format!("unit at {x} has wrong endpoints"));
        }
    }
    for a in 0..n {
        let ut = g.unit_at(&g.arrows[a].tgt).unwrap();
        let us = g.unit_at(&g.arrows[a].src).unwrap();
        if g.compose(ut, a) != Some(a) || g.compose(a, us) != Some(a) {
            return fail(format!("unit laws fail on {}", g.arrows[a].id));
        }
        let ai = g.inverse_of(a);
        if g.arrows[ai].src != g.arrows[a].tgt || g.arrows[ai].tgt != g.arrows[a].src {
            return fail(format!("inverse of {} has wrong endpoints", g.arrows[a].id));
        }
        if g.compose(a, ai) != Some(ut) || g.compose(ai, a) != Some(us) {
            return fail(format!("inverse laws fail on {}", g.arrows[a].id));
        }
    }
    GroupoidReport { ok: true, violation: None }
}

/// A set of arrows with pairwise distinct sources and pairwise distinct
/// targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    pub arrows: BTreeSet<String>,
}

impl Bisection {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(ids: I) -> Self {
        Bisection { arrows: ids.into_iter().map(Into::into).collect() }
    }
}

pub fn is_bisection(g: &FiniteGroupoid, u: &Bisection) -> Result<bool> {
    let mut srcs = BTreeSet::new();
    let mut tgts = BTreeSet::new();
    for id in &u.arrows {
        let i = g.index_of(id)?;
        if !srcs.insert(g.arrows[i].src.clone()) || !tgts.insert(g.arrows[i].tgt.clone()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The partial bijection `τ_U : s(U) → t(U)`, `src(g) ↦ tgt(g)` over `g ∈ U`.
pub fn tau_of_bisection(g: &FiniteGroupoid, u: &Bisection) -> Result<BTreeMap<Point, Point>> {
    if !is_bisection(g, u)? {
        return Err(Error::precondition("arrow set is not a bisection"));
    }
    let mut tau = BTreeMap::new();
    for id in &u.arrows {
        let i = g.index_of(id)?;
        tau.insert(g.arrows[i].src.clone(), g.arrows[i].tgt.clone());
    }
    Ok(tau)
}

/// `τ_U ∘ τ_V` on the composable part of two partial bijections on points.
pub fn compose_partial_bijection(
    tau_u: &BTreeMap<Point, Point>,
    tau_v: &BTreeMap<Point, Point>,
) -> BTreeMap<Point, Point> {
    let mut out = BTreeMap::new();
    for (v, w) in tau_v {
        if let Some(z) = tau_u.get(w) {
            out.insert(v.clone(), z.clone());
        }
    }
    out
}

pub fn invert_partial_bijection(tau: &BTreeMap<Point, Point>) -> BTreeMap<Point, Point> {
    tau.iter().map(|(a, b)| (b.clone(), a.clone())).collect()
}

/// The set product `UV = {gh}` of two bisections, when both are bisections.
pub fn bisection_product(g: &FiniteGroupoid, u: &Bisection, v: &Bisection) -> Result<Bisection> {
    let mut arrows = BTreeSet::new();
    for uid in &u.arrows {
        let ui = g.index_of(uid)?;
        for vid in &v.arrows {
            let vi = g.index_of(vid)?;
            if let Some(p) = g.compose(ui, vi) {
                arrows.insert(g.arrows[p].id.clone());
            }
        }
    }
    Ok(Bisection { arrows })
}

pub fn bisection_inverse(g: &FiniteGroupoid, u: &Bisection) -> Result<Bisection> {
    let mut arrows = BTreeSet::new();
    for id in &u.arrows {
        let i = g.index_of(id)?;
        arrows.insert(g.arrows[g.inverse_of(i)].id.clone());
    }
    Ok(Bisection { arrows })
}

/// A map of arrows over a fixed base, preserving sources and targets by
/// construction; composition and unit preservation are checked by
/// [`GroupoidMorphism::preserves_structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMorphism {
    pub source: FiniteGroupoid,
    pub target: FiniteGroupoid,
    map: Vec<usize>,
}

impl GroupoidMorphism {
    pub fn new(
        source: FiniteGroupoid,
        target: FiniteGroupoid,
        map: BTreeMap<String, String>,
    ) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::precondition(
                "groupoid morphisms are over a fixed base set",
            ));
        }
        let mut idx_map = Vec::with_capacity(source.arrows.len());
        for a in &source.arrows {
            let Some(image) = map.get(&a.id) else {
                return Err(Error::structural(format!("morphism undefined on {}", a.id)));
            };
            let i = target.index_of(image)?;
            if target.arrows[i].src != a.src || target.arrows[i].tgt != a.tgt {
                return Err(Error::structural(format!(
                    "image of {} does not preserve endpoints",
                    a.id
                )));
            }
            idx_map.push(i);
        }
        Ok(GroupoidMorphism { source, target, map: idx_map })
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidMorphism {
            source: g.clone(),
            target: g.clone(),
            map: (0..g.arrows.len()).collect(),
        }
    }

    pub fn apply(&self, id: &str) -> Result<&str> {
        let i = self.source.index_of(id)?;
        Ok(&self.target.arrows[self.map[i]].id)
    }

    /// The underlying arrow map by id.
    pub fn pairs(&self) -> BTreeMap<String, String> {
        self.source
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), self.target.arrows[self.map[i]].id.clone()))
            .collect()
    }

    pub fn compose(&self, inner: &GroupoidMorphism) -> Result<GroupoidMorphism> {
        if inner.target != self.source {
            return Err(Error::structural("composition of non-composable groupoid morphisms"));
        }
        let map = inner.map.iter().map(|&i| self.map[i]).collect();
        Ok(GroupoidMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            map,
        })
    }

    /// Composition and unit preservation (endpoint preservation is enforced
    /// at construction).
    pub fn preserves_structure(&self) -> bool {
        for (&(a, b), &ab) in &self.source.compose {
            match self.target.compose(self.map[a], self.map[b]) {
                Some(image) if image == self.map[ab] => {}
                _ => return false,
            }
        }
        for x in self.source.base.points() {
            let u = self.source.unit_at(x).unwrap();
            if self.target.unit_at(x) != Some(self.map[u]) {
                return false;
            }
        }
        true
    }
}

/// True exactly when `φ` is a structure-preserving bijection on arrows.
pub fn is_groupoid_isomorphism(phi: &GroupoidMorphism) -> bool {
    if !phi.preserves_structure() {
        return false;
    }
    if phi.source.arrows.len() != phi.target.arrows.len() {
        return false;
    }
    let mut seen = vec![false; phi.target.arrows.len()];
    for &i in &phi.map {
        if seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// The pair groupoid on `{1, ..., n}`: one arrow `e_i_j` from `j` to `i`.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    assert!(n >= 1);
    let base = BaseSet::range(n);
    let pts: Vec<Point> = base.points().to_vec();
    let mut arrows = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            arrows.push(ArrowEntry {
                id: format!("e_{i}_{j}"),
                src: Point::new(j.to_string()),
                tgt: Point::new(i.to_string()),
            });
        }
    }
    let mut compose = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                compose.insert(
                    (format!("e_{i}_{j}"), format!("e_{j}_{k}")),
                    format!("e_{i}_{k}"),
                );
            }
        }
    }
    let unit = pts
        .iter()
        .map(|p| (p.clone(), format!("e_{p}_{p}", p = p.id())))
        .collect();
    let mut inverse = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            inverse.insert(format!("e_{i}_{j}"), format!("e_{j}_{i}"));
        }
    }
    FiniteGroupoid::new(base, arrows, compose, unit, inverse).unwrap()
}

/// The cyclic group of order `k` as a groupoid over one object `*`.
pub fn cyclic_group(k: usize) -> FiniteGroupoid {
    assert!(k >= 1);
    let base = BaseSet::from_ids(["*"]).unwrap();
    let star = Point::new("*");
    let arrows = (0..k)
        .map(|a| ArrowEntry { id: format!("g{a}"), src: star.clone(), tgt: star.clone() })
        .collect();
    let mut compose = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            compose.insert((format!("g{a}"), format!("g{b}")), format!("g{}", (a + b) % k));
        }
    }
    let unit = BTreeMap::from([(star, "g0".to_string())]);
    let inverse = (0..k)
        .map(|a| (format!("g{a}"), format!("g{}", (k - a) % k)))
        .collect();
    FiniteGroupoid::new(base, arrows, compose, unit, inverse).unwrap()
}

/// The action groupoid of the cyclic group of order `k` acting on `base`
/// through a permutation `sigma` with `sigma^k = id`. Arrows `r{a}@{x}` run
/// from `x` to `sigma^a(x)`; there are `k · |base|` of them.
pub fn action_groupoid(
    k: usize,
    base: &BaseSet,
    sigma: &BTreeMap<Point, Point>,
) -> Result<FiniteGroupoid> {
    if k == 0 {
        return Err(Error::structural("cyclic order must be at least 1"));
    }
    let points = base.points();
    let mut seen = BTreeSet::new();
    for x in points {
        let Some(y) = sigma.get(x) else {
            return Err(Error::structural(format!("action undefined at {x}")));
        };
        if !base.contains(y) || !seen.insert(y.clone()) {
            return Err(Error::structural("action table is not a permutation"));
        }
    }
    let apply = |x: &Point, times: usize| -> Point {
        let mut y = x.clone();
        for _ in 0..times % k {
            y = sigma[&y].clone();
        }
        y
    };
    for x in points {
        let mut y = x.clone();
        for _ in 0..k {
            y = sigma[&y].clone();
        }
        if y != *x {
            return Err(Error::structural(format!(
                "permutation order does not divide {k} at {x}"
            )));
        }
    }
    let id_of = |a: usize, x: &Point| format!("r{a}@{x}");
    let mut arrows = Vec::new();
    for a in 0..k {
        for x in points {
            arrows.push(ArrowEntry { id: id_of(a, x), src: x.clone(), tgt: apply(x, a) });
        }
    }
    let mut compose = BTreeMap::new();
    for a in 0..k {
        for x in points {
            let y = apply(x, a);
            for b in 0..k {
                compose.insert((id_of(b, &y), id_of(a, x)), id_of((a + b) % k, x));
            }
        }
    }
    let unit = points.iter().map(|x| (x.clone(), id_of(0, x))).collect();
    let mut inverse = BTreeMap::new();
    for a in 0..k {
        for x in points {
            inverse.insert(id_of(a, x), id_of((k - a) % k, &apply(x, a)));
        }
    }
    FiniteGroupoid::new(base.clone(), arrows, compose, unit, inverse)
}

/// The groupoid with only unit arrows.
pub fn trivial_groupoid(base: &BaseSet) -> FiniteGroupoid {
    let arrows: Vec<ArrowEntry> = base
        .points()
        .iter()
        .map(|x| ArrowEntry { id: format!("id_{x}"), src: x.clone(), tgt: x.clone() })
        .collect();
    let compose = base
        .points()
        .iter()
        .map(|x| ((format!("id_{x}"), format!("id_{x}")), format!("id_{x}")))
        .collect();
    let unit = base.points().iter().map(|x| (x.clone(), format!("id_{x}"))).collect();
    let inverse = base
        .points()
        .iter()
        .map(|x| (format!("id_{x}"), format!("id_{x}")))
        .collect();
    FiniteGroupoid::new(base.clone(), arrows, compose, unit, inverse).unwrap()
}

/// Disjoint union over the disjoint union of the bases. Point sets and
/// arrow ids must already be disjoint; relabel first if they are not.
pub fn disjoint_union(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Result<FiniteGroupoid> {
    for p in g.base.points() {
        if h.base.contains(p) {
            return Err(Error::structural(format!("bases overlap at {p}")));
        }
    }
    let base = BaseSet::new(
        g.base
            .points()
            .iter()
            .chain(h.base.points())
            .cloned()
            .collect(),
    )?;
    let arrows: Vec<ArrowEntry> = g.arrows.iter().chain(&h.arrows).cloned().collect();
    let mut compose = BTreeMap::new();
    for (part, offset) in [(g, 0usize), (h, g.arrows.len())] {
        for (&(a, b), &ab) in &part.compose {
            compose.insert(
                (
                    arrows[a + offset].id.clone(),
                    arrows[b + offset].id.clone(),
                ),
                arrows[ab + offset].id.clone(),
            );
        }
    }
    let mut unit = BTreeMap::new();
    for (part, offset) in [(g, 0usize), (h, g.arrows.len())] {
        for (x, &u) in &part.unit {
            unit.insert(x.clone(), arrows[u + offset].id.clone());
        }
    }
    let mut inverse = BTreeMap::new();
    for (part, offset) in [(g, 0usize), (h, g.arrows.len())] {
        for (a, &ai) in part.inverse.iter().enumerate() {
            inverse.insert(arrows[a + offset].id.clone(), arrows[ai + offset].id.clone());
        }
    }
    FiniteGroupoid::new(base, arrows, compose, unit, inverse)
}
