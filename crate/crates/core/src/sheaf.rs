//! Finite sheaves on the base set, the sheaf-coalgebra functor, the spectral
//! sheaf, the unit and counit of the adjunction, and the sheaf-coalgebra
//! classifier.
//!
//! A sheaf here is a finite family of stalks; its coalgebra has the stalk
//! elements as basis with `Δ(e) = e ⊗ e` and `ε(e) = δ_{π(e)}`. The spectral
//! sheaf of a coalgebra has the grouplike set of the local coalgebra as its
//! stalk, with elements labeled by canonical coordinate strings so that
//! isomorphism checks are plain string comparisons after solving.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::base::{format_rational, BaseRingElement, BaseSet, Point, Rational};
use crate::coalgebra::{
    grouplikes, localize, BasisEntry, Coalgebra, CoalgebraMorphism, GradedVector,
};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSheaf {
    base: BaseSet,
    stalks: BTreeMap<Point, Vec<String>>,
}

impl FiniteSheaf {
    /// Stalk element ids must be globally unique; points without an entry
    /// get an empty stalk.
    pub fn new(base: BaseSet, stalks: BTreeMap<Point, Vec<String>>) -> Result<Self> {
        let mut all = BTreeSet::new();
        for (p, elems) in &stalks {
            if !base.contains(p) {
                return Err(Error::structural(format!("stalk at {p} outside the base set")));
            }
            for e in elems {
                if e.is_empty() {
                    return Err(Error::structural("empty stalk element id"));
                }
                if !all.insert(e.clone()) {
                    return Err(Error::structural(format!("duplicate stalk element id {e}")));
                }
            }
        }
        let mut full = stalks;
        for p in base.points() {
            full.entry(p.clone()).or_default();
        }
        Ok(FiniteSheaf { base, stalks: full })
    }

    pub fn empty(base: &BaseSet) -> Self {
        FiniteSheaf::new(base.clone(), BTreeMap::new()).unwrap()
    }

    pub fn base(&self) -> &BaseSet {
        &self.base
    }

    pub fn stalk(&self, p: &Point) -> &[String] {
        self.stalks.get(p).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn stalks(&self) -> &BTreeMap<Point, Vec<String>> {
        &self.stalks
    }

    pub fn total_size(&self) -> usize {
        self.stalks.values().map(Vec::len).sum()
    }

    pub fn point_of(&self, element: &str) -> Result<&Point> {
        for (p, elems) in &self.stalks {
            if elems.iter().any(|e| e == element) {
                return Ok(p);
            }
        }
        Err(Error::structural(format!("unknown stalk element {element}")))
    }
}

/// A stalk-preserving map of sheaves over the same base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafMorphism {
    pub source: FiniteSheaf,
    pub target: FiniteSheaf,
    map: BTreeMap<String, String>,
}

impl SheafMorphism {
    pub fn new(
        source: FiniteSheaf,
        target: FiniteSheaf,
        map: BTreeMap<String, String>,
    ) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::structural("sheaf morphism across different base sets"));
        }
        for p in source.base.points() {
            for e in source.stalk(p) {
                let Some(f) = map.get(e) else {
                    return Err(Error::structural(format!("morphism undefined on {e}")));
                };
                if target.point_of(f)? != p {
                    return Err(Error::structural(format!(
                        "image of {e} leaves the {p}-stalk"
                    )));
                }
            }
        }
        Ok(SheafMorphism { source, target, map })
    }

    pub fn identity(e: &FiniteSheaf) -> Self {
        let map = e
            .stalks
            .values()
            .flatten()
            .map(|s| (s.clone(), s.clone()))
            .collect();
        SheafMorphism { source: e.clone(), target: e.clone(), map }
    }

    pub fn apply(&self, element: &str) -> Result<&str> {
        self.map
            .get(element)
            .map(String::as_str)
            .ok_or_else(|| Error::structural(format!("unknown stalk element {element}")))
    }

    pub fn pairs(&self) -> &BTreeMap<String, String> {
        &self.map
    }

    pub fn compose(&self, inner: &SheafMorphism) -> Result<SheafMorphism> {
        if inner.target != self.source {
            return Err(Error::structural("composition of non-composable sheaf morphisms"));
        }
        let mut map = BTreeMap::new();
        for (e, f) in &inner.map {
            map.insert(e.clone(), self.apply(f)?.to_string());
        }
        SheafMorphism::new(inner.source.clone(), self.target.clone(), map)
    }

    pub fn is_bijection(&self) -> bool {
        let mut image = BTreeSet::new();
        for f in self.map.values() {
            if !image.insert(f.clone()) {
                return false;
            }
        }
        self.source.total_size() == self.target.total_size()
            && image.len() == self.target.total_size()
    }
}

/// The coalgebra of a sheaf: basis = stalk elements with `Δ(e) = e ⊗ e` and
/// `ε(e) = δ_{π(e)}`.
pub fn sheaf_coalgebra(e: &FiniteSheaf) -> Coalgebra {
    let mut basis = Vec::new();
    let mut delta = BTreeMap::new();
    let mut epsilon = BTreeMap::new();
    for p in e.base.points() {
        for s in e.stalk(p) {
            basis.push(BasisEntry { id: s.clone(), grade: p.clone() });
            delta.insert(s.clone(), vec![(s.clone(), s.clone(), Rational::one())]);
            epsilon.insert(s.clone(), BaseRingElement::indicator(&e.base, p).unwrap());
        }
    }
    Coalgebra::new(e.base.clone(), basis, delta, epsilon).unwrap()
}

/// The coalgebra map `φ_+` induced by a sheaf morphism: basis element to
/// basis element, extended linearly (so fibers add up).
pub fn pushforward(phi: &SheafMorphism) -> Result<CoalgebraMorphism> {
    let source = sheaf_coalgebra(&phi.source);
    let target = sheaf_coalgebra(&phi.target);
    let mut images = BTreeMap::new();
    for e in phi.map.keys() {
        images.insert(e.clone(), GradedVector::basis(phi.apply(e)?));
    }
    CoalgebraMorphism::new(source, target, images)
}

/// The fibered product sheaf: stalk at `x` is the product of the stalks,
/// with elements named `(a,b)`.
pub fn fibered_product(e: &FiniteSheaf, f: &FiniteSheaf) -> Result<FiniteSheaf> {
    if e.base != f.base {
        return Err(Error::structural("fibered product across different base sets"));
    }
    let mut stalks = BTreeMap::new();
    for p in e.base.points() {
        let mut elems = Vec::new();
        for a in e.stalk(p) {
            for b in f.stalk(p) {
                elems.push(pair_id(a, b));
            }
        }
        stalks.insert(p.clone(), elems);
    }
    FiniteSheaf::new(e.base.clone(), stalks)
}

pub fn pair_id(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// The tensor identification `Ω(u ⊗ v)`: coordinates `u_a · v_b` on pairs in
/// the same stalk, as an element over the fibered-product coalgebra.
pub fn stalk_tensor(
    e: &FiniteSheaf,
    f: &FiniteSheaf,
    u: &GradedVector,
    v: &GradedVector,
) -> Result<GradedVector> {
    if e.base != f.base {
        return Err(Error::structural("stalk tensor across different base sets"));
    }
    let ce = sheaf_coalgebra(e);
    let cf = sheaf_coalgebra(f);
    let mut out = GradedVector::zero();
    for (a, ca) in u.coords() {
        let pa = ce.grade_of(a)?;
        for (b, cb) in v.coords() {
            if cf.grade_of(b)? != pa {
                continue;
            }
            out.add_term(&pair_id(a, b), &(ca * cb));
        }
    }
    Ok(out)
}

/// Canonical label of a grouplike: the point and the dense coordinate vector
/// over the local basis in parent order.
pub fn grouplike_label(point: &Point, coords: &[Rational]) -> String {
    let parts: Vec<String> = coords.iter().map(format_rational).collect();
    format!("{point}:({})", parts.join(","))
}

/// The spectral sheaf together with the grouplike vector behind each label,
/// embedded in the parent coalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSheaf {
    pub sheaf: FiniteSheaf,
    pub elements: BTreeMap<String, (Point, GradedVector)>,
}

/// The sheaf with stalk `G(C_x)` at `x`. Solver failures carry the point.
pub fn spectral_sheaf(c: &Coalgebra) -> Result<SpectralSheaf> {
    let mut stalks = BTreeMap::new();
    let mut elements = BTreeMap::new();
    for x in c.base().points() {
        let local = localize(c, x)?;
        let mut labels = Vec::new();
        for zeta in grouplikes(&local)? {
            let label = grouplike_label(x, &local.to_dense(&zeta)?);
            labels.push(label.clone());
            elements.insert(label, (x.clone(), zeta));
        }
        stalks.insert(x.clone(), labels);
    }
    Ok(SpectralSheaf { sheaf: FiniteSheaf::new(c.base().clone(), stalks)?, elements })
}

/// Functorial action of the spectral sheaf on a coalgebra morphism: the
/// grouplike `ζ` at `x` maps to `α_x(ζ)`.
pub fn spectral_sheaf_map(
    alpha: &CoalgebraMorphism,
    sp_source: &SpectralSheaf,
    sp_target: &SpectralSheaf,
) -> Result<SheafMorphism> {
    let mut map = BTreeMap::new();
    for (label, (x, zeta)) in &sp_source.elements {
        let image = alpha.apply(zeta)?;
        let local = localize(&alpha.target, x)?;
        let image_label = grouplike_label(x, &local.to_dense(&image)?);
        if !sp_target.elements.contains_key(&image_label) {
            return Err(Error::integrity(format!(
                "image of grouplike {label} is not grouplike in the target"
            )));
        }
        map.insert(label.clone(), image_label);
    }
    SheafMorphism::new(sp_source.sheaf.clone(), sp_target.sheaf.clone(), map)
}

#[derive(Debug, Clone)]
pub struct UnitIsoSheaf {
    pub morphism: SheafMorphism,
    pub is_isomorphism: bool,
}

/// `Φ_E : E → E_sp(C(E))`, sending a stalk element to its class as a
/// grouplike of the localized sheaf coalgebra. A stalk-preserving bijection
/// for every finite sheaf.
pub fn unit_iso_sheaf(e: &FiniteSheaf) -> Result<UnitIsoSheaf> {
    let c = sheaf_coalgebra(e);
    let sp = spectral_sheaf(&c)?;
    let mut map = BTreeMap::new();
    for x in e.base.points() {
        let local = localize(&c, x)?;
        for s in e.stalk(x) {
            let unit_vec = GradedVector::basis(s.clone());
            let label = grouplike_label(x, &local.to_dense(&unit_vec)?);
            map.insert(s.clone(), label);
        }
    }
    let morphism = SheafMorphism::new(e.clone(), sp.sheaf.clone(), map)?;
    let is_isomorphism = morphism.is_bijection();
    Ok(UnitIsoSheaf { morphism, is_isomorphism })
}

#[derive(Debug, Clone)]
pub struct CounitHom {
    pub morphism: CoalgebraMorphism,
    pub injective: bool,
    pub surjective: bool,
}

/// `Ψ_C : C(E_sp(C)) → C` (or its `Λ`-restricted form), sending the basis
/// element `ζ at x` to `ζ ∈ C_x ⊆ C`, with exact rank verdicts. Surjectivity
/// is normal generation and injectivity is normal independence of `Λ`.
pub fn counit_hom(c: &Coalgebra, lambda: Option<&[GradedVector]>) -> Result<CounitHom> {
    let restricted = match lambda {
        None => spectral_sheaf(c)?,
        Some(family) => restricted_spectral_sheaf(c, family)?,
    };
    let domain = sheaf_coalgebra(&restricted.sheaf);
    let mut images = BTreeMap::new();
    for (label, (_, zeta)) in &restricted.elements {
        images.insert(label.clone(), zeta.clone());
    }
    let morphism = CoalgebraMorphism::new(domain, c.clone(), images)?;
    let injective = morphism.is_injective()?;
    let surjective = morphism.is_surjective()?;
    Ok(CounitHom { morphism, injective, surjective })
}

/// The subsheaf of the spectral sheaf cut out by a family `Λ`: the stalk at
/// `x` consists of the distinct localizations of the members normalized at
/// `x`. Members must localize to grouplikes (weakly grouplike inputs do).
pub fn restricted_spectral_sheaf(c: &Coalgebra, lambda: &[GradedVector]) -> Result<SpectralSheaf> {
    let mut stalks = BTreeMap::new();
    let mut elements = BTreeMap::new();
    for x in c.base().points() {
        let local = localize(c, x)?;
        let mut labels = Vec::new();
        for v in lambda {
            if !crate::coalgebra::is_normalized_at(c, v, x)? {
                continue;
            }
            let proj = c.project(v, x)?;
            if !local.is_grouplike(&proj)? {
                return Err(Error::precondition(format!(
                    "{v} localizes at {x} to a non-grouplike element"
                )));
            }
            let label = grouplike_label(x, &local.to_dense(&proj)?);
            if let std::collections::btree_map::Entry::Vacant(slot) = elements.entry(label.clone()) {
                slot.insert((x.clone(), proj));
                labels.push(label);
            }
        }
        labels.sort();
        stalks.insert(x.clone(), labels);
    }
    Ok(SpectralSheaf { sheaf: FiniteSheaf::new(c.base().clone(), stalks)?, elements })
}

#[derive(Debug, Clone)]
pub struct SheafClassification {
    pub is_sheaf_coalgebra: bool,
    /// `Ψ_C` when the verdict is positive.
    pub witness: Option<CoalgebraMorphism>,
    /// Failing point, grouplike count, stalk dimension, and rank defect, or
    /// the solver obstruction message.
    pub failure: Option<SheafClassificationFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafClassificationFailure {
    pub point: Option<Point>,
    pub grouplike_count: Option<usize>,
    pub stalk_dim: Option<usize>,
    pub defect: Option<usize>,
    pub reason: String,
}

/// Decides whether `C` is (isomorphic to) a sheaf coalgebra: at every point
/// the grouplikes of the local coalgebra must form a basis. A solver
/// obstruction counts as a negative verdict with its reason.
pub fn classify_sheaf_coalgebra(c: &Coalgebra) -> Result<SheafClassification> {
    for x in c.base().points() {
        let local = localize(c, x)?;
        let g = match grouplikes(&local) {
            Ok(g) => g,
            Err(Error::SolverInapplicable { point, reason }) => {
                return Ok(SheafClassification {
                    is_sheaf_coalgebra: false,
                    witness: None,
                    failure: Some(SheafClassificationFailure {
                        point,
                        grouplike_count: None,
                        stalk_dim: Some(local.dim()),
                        defect: None,
                        reason: format!("grouplike solver inapplicable: {reason}"),
                    }),
                });
            }
            Err(e) => return Err(e),
        };
        // Grouplikes are independent over the field, so a count match makes
        // them a basis.
        if g.len() != local.dim() {
            return Ok(SheafClassification {
                is_sheaf_coalgebra: false,
                witness: None,
                failure: Some(SheafClassificationFailure {
                    point: Some(x.clone()),
                    grouplike_count: Some(g.len()),
                    stalk_dim: Some(local.dim()),
                    defect: Some(local.dim() - g.len()),
                    reason: format!(
                        "{} grouplikes against dimension {} at {x}",
                        g.len(),
                        local.dim()
                    ),
                }),
            });
        }
    }
    let hom = counit_hom(c, None)?;
    if !(hom.injective && hom.surjective) {
        return Err(Error::integrity(
            "grouplike bases found but the counit map is not an isomorphism",
        ));
    }
    Ok(SheafClassification {
        is_sheaf_coalgebra: true,
        witness: Some(hom.morphism),
        failure: None,
    })
}

/// Dimension and rank facts behind the tensor identification: the graded
/// tensor square maps bijectively onto the fibered-product coalgebra.
pub fn stalk_tensor_is_bijective(e: &FiniteSheaf, f: &FiniteSheaf) -> Result<bool> {
    let prod = fibered_product(e, f)?;
    let cp = sheaf_coalgebra(&prod);
    let expected: usize = e
        .base
        .points()
        .iter()
        .map(|p| e.stalk(p).len() * f.stalk(p).len())
        .sum();
    if cp.dim() != expected {
        return Ok(false);
    }
    // Images of the pure tensors of basis elements span iff the map is onto;
    // injectivity then follows by dimension count.
    let mut rows = Vec::new();
    for p in e.base.points() {
        for a in e.stalk(p) {
            for b in f.stalk(p) {
                let t = stalk_tensor(e, f, &GradedVector::basis(a.clone()), &GradedVector::basis(b.clone()))?;
                rows.push(cp.to_dense(&t)?);
            }
        }
    }
    if rows.is_empty() {
        return Ok(expected == 0);
    }
    Ok(QMatrix::from_rows(rows).rank() == expected)
}
