//! Hopf algebroids over `R = Fun(M, Q)` in the discrete model: the axiom
//! engine, the convolution algebroid of a finite groupoid, the translation
//! operators, and the spectral groupoid reconstruction with its unit,
//! counit, and classifier.
//!
//! The underlying vector space is (target, source)-bigraded: `δ_y · b = b`
//! picks the target grade and `b · δ_x = b` the source grade. The four
//! tensor quotients used by the axioms have canonical bases given by the
//! grade-compatible basis pairs: same target for `⊗ll`, first source equal
//! to second target for `⊗rl`, same source for `⊗rr`, and both for the
//! `ϖ`-quotient.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::base::{BaseRingElement, BaseSet, Point, Rational};
use crate::coalgebra::{
    grouplikes, localize, BasisEntry, Coalgebra, DeltaRow, GradedVector, LawCheck,
};
use crate::error::{Error, Result};
use crate::groupoid::{
    validate_groupoid, ArrowEntry, FiniteGroupoid, GroupoidMorphism,
};
use crate::linalg::QMatrix;
use crate::sheaf::grouplike_label;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgBasisEntry {
    pub id: String,
    pub tgt: Point,
    pub src: Point,
}

/// Sparse linear combination over basis indices.
pub type LinComb = BTreeMap<usize, Rational>;

/// Sparse element of a two-factor tensor quotient.
pub type TensorElem = BTreeMap<(usize, usize), Rational>;

/// The four tensor quotients of `A ⊗ A` over the two `R`-actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind {
    /// Left action on both factors: pairs with equal targets.
    LL,
    /// Right action on the first, left on the second: `src(a) = tgt(b)`.
    RL,
    /// Right action on both factors: pairs with equal sources.
    RR,
    /// Both actions identified: equal targets and equal sources.
    LLRR,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfAlgebroid {
    base: BaseSet,
    basis: Vec<AlgBasisEntry>,
    index: BTreeMap<String, usize>,
    product: BTreeMap<(usize, usize), LinComb>,
    delta: Vec<Vec<(usize, usize, Rational)>>,
    epsilon: Vec<BaseRingElement>,
    antipode: Vec<LinComb>,
    units: BTreeMap<Point, usize>,
}

impl HopfAlgebroid {
    /// Structural construction: ids resolve, grades cohere (product grading,
    /// `Δ` in the target stalk square, `ε` at the target, antipode swapping
    /// grades), and a distinguished unit element per point. The algebra and
    /// Hopf *laws* are the verdicts of [`check_hopf_axioms`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        base: BaseSet,
        basis: Vec<AlgBasisEntry>,
        product: BTreeMap<(String, String), Vec<(String, Rational)>>,
        delta: BTreeMap<String, DeltaRow>,
        epsilon: BTreeMap<String, BaseRingElement>,
        antipode: BTreeMap<String, Vec<(String, Rational)>>,
        units: BTreeMap<Point, String>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            if b.id.is_empty() {
                return Err(Error::structural("empty basis id"));
            }
            if !base.contains(&b.tgt) || !base.contains(&b.src) {
                return Err(Error::structural(format!("grades of {} outside the base set", b.id)));
            }
            if index.insert(b.id.clone(), i).is_some() {
                return Err(Error::structural(format!("duplicate basis id {}", b.id)));
            }
        }
        let resolve = |id: &str| -> Result<usize> {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::structural(format!("unknown basis id {id}")))
        };
        let mut product_idx: BTreeMap<(usize, usize), LinComb> = BTreeMap::new();
        for ((l, r), terms) in &product {
            let (li, ri) = (resolve(l)?, resolve(r)?);
            let mut comb = LinComb::new();
            for (id, c) in terms {
                let k = resolve(id)?;
                let entry = comb.entry(k).or_insert_with(Rational::zero);
                *entry += c;
            }
            comb.retain(|_, c| !c.is_zero());
            if comb.is_empty() {
                continue;
            }
            if basis[li].src != basis[ri].tgt {
                return Err(Error::structural(format!(
                    "nonzero product on grade-mismatched pair ({l}, {r})"
                )));
            }
            for k in comb.keys() {
                if basis[*k].tgt != basis[li].tgt || basis[*k].src != basis[ri].src {
                    return Err(Error::structural(format!(
                        "product of ({l}, {r}) leaves its grade"
                    )));
                }
            }
            product_idx.insert((li, ri), comb);
        }
        let mut delta_rows = vec![Vec::new(); basis.len()];
        for (id, row) in delta {
            let k = resolve(&id)?;
            let tgt = &basis[k].tgt;
            let mut canon: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (l, r, c) in row {
                let (li, ri) = (resolve(&l)?, resolve(&r)?);
                if &basis[li].tgt != tgt || &basis[ri].tgt != tgt {
                    return Err(Error::structural(format!(
                        "delta of {id} leaves the target stalk square"
                    )));
                }
                *canon.entry((li, ri)).or_insert_with(Rational::zero) += c;
            }
            delta_rows[k] = canon
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((l, r), c)| (l, r, c))
                .collect();
        }
        let mut eps_rows = vec![BaseRingElement::zero(&base); basis.len()];
        for (id, f) in epsilon {
            let k = resolve(&id)?;
            if f.base() != &base {
                return Err(Error::structural("epsilon value over a different base set"));
            }
            if f.support().iter().any(|p| p != &basis[k].tgt) {
                return Err(Error::structural(format!("epsilon of {id} not supported at its target")));
            }
            eps_rows[k] = f;
        }
        let mut antipode_rows = vec![LinComb::new(); basis.len()];
        for (id, terms) in antipode {
            let k = resolve(&id)?;
            let mut comb = LinComb::new();
            for (tid, c) in terms {
                let t = resolve(&tid)?;
                if basis[t].tgt != basis[k].src || basis[t].src != basis[k].tgt {
                    return Err(Error::structural(format!(
                        "antipode of {id} does not swap grades"
                    )));
                }
                *comb.entry(t).or_insert_with(Rational::zero) += c;
            }
            comb.retain(|_, c| !c.is_zero());
            antipode_rows[k] = comb;
        }
        let mut unit_idx = BTreeMap::new();
        for x in base.points() {
            let Some(id) = units.get(x) else {
                return Err(Error::structural(format!("no unit element at {x}")));
            };
            let u = resolve(id)?;
            if basis[u].tgt != *x || basis[u].src != *x {
                return Err(Error::structural(format!("unit at {x} has wrong grades")));
            }
            unit_idx.insert(x.clone(), u);
        }
        Ok(HopfAlgebroid {
            base,
            basis,
            index,
            product: product_idx,
            delta: delta_rows,
            epsilon: eps_rows,
            antipode: antipode_rows,
            units: unit_idx,
        })
    }

    pub fn base(&self) -> &BaseSet {
        &self.base
    }

    pub fn basis(&self) -> &[AlgBasisEntry] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::structural(format!("unknown basis id {id}")))
    }

    pub fn unit_index(&self, x: &Point) -> usize {
        self.units[x]
    }

    pub fn units(&self) -> &BTreeMap<Point, usize> {
        &self.units
    }

    pub fn delta_row(&self, k: usize) -> &[(usize, usize, Rational)] {
        &self.delta[k]
    }

    pub fn epsilon_row(&self, k: usize) -> &BaseRingElement {
        &self.epsilon[k]
    }

    pub fn antipode_row(&self, k: usize) -> &LinComb {
        &self.antipode[k]
    }

    pub fn product_row(&self, l: usize, r: usize) -> LinComb {
        self.product.get(&(l, r)).cloned().unwrap_or_default()
    }

    /// `R ⊆ A`: the ring element as a combination of unit elements.
    pub fn ring_embed(&self, f: &BaseRingElement) -> GradedVector {
        let mut v = GradedVector::zero();
        for (p, c) in f.values() {
            v.set(self.basis[self.units[p]].id.clone(), c.clone());
        }
        v
    }

    pub fn unit_sum(&self) -> GradedVector {
        self.ring_embed(&BaseRingElement::one(&self.base))
    }

    fn to_sparse(&self, v: &GradedVector) -> Result<LinComb> {
        let mut out = LinComb::new();
        for (id, c) in v.coords() {
            out.insert(self.index_of(id)?, c.clone());
        }
        Ok(out)
    }

    fn sparse_to_vector(&self, v: &LinComb) -> GradedVector {
        let mut out = GradedVector::zero();
        for (&k, c) in v {
            out.set(self.basis[k].id.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, v: &GradedVector, w: &GradedVector) -> Result<GradedVector> {
        let sv = self.to_sparse(v)?;
        let sw = self.to_sparse(w)?;
        let mut out = LinComb::new();
        for (&a, ca) in &sv {
            for (&b, cb) in &sw {
                if let Some(terms) = self.product.get(&(a, b)) {
                    let c = ca * cb;
                    for (&k, d) in terms {
                        let entry = out.entry(k).or_insert_with(Rational::zero);
                        *entry += &c * d;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(self.sparse_to_vector(&out))
    }

    pub fn antipode_of(&self, v: &GradedVector) -> Result<GradedVector> {
        let sv = self.to_sparse(v)?;
        let mut out = LinComb::new();
        for (&a, ca) in &sv {
            for (&k, d) in &self.antipode[a] {
                let entry = out.entry(k).or_insert_with(Rational::zero);
                *entry += ca * d;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(self.sparse_to_vector(&out))
    }

    pub fn epsilon_of(&self, v: &GradedVector) -> Result<BaseRingElement> {
        let sv = self.to_sparse(v)?;
        let mut out = BaseRingElement::zero(&self.base);
        for (&a, ca) in &sv {
            out = out.add(&self.epsilon[a].scale(ca))?;
        }
        Ok(out)
    }

    /// `Δ(v)` in the `⊗ll` quotient.
    pub fn delta_of(&self, v: &GradedVector) -> Result<TensorElem> {
        let sv = self.to_sparse(v)?;
        let mut out = TensorElem::new();
        for (&a, ca) in &sv {
            for (l, r, c) in &self.delta[a] {
                let entry = out.entry((*l, *r)).or_insert_with(Rational::zero);
                *entry += ca * c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Whether a basis pair survives in the given tensor quotient.
    pub fn pair_allowed(&self, kind: TensorKind, l: usize, r: usize) -> bool {
        let (bl, br) = (&self.basis[l], &self.basis[r]);
        match kind {
            TensorKind::LL => bl.tgt == br.tgt,
            TensorKind::RL => bl.src == br.tgt,
            TensorKind::RR => bl.src == br.src,
            TensorKind::LLRR => bl.tgt == br.tgt && bl.src == br.src,
        }
    }

    /// Projects a raw pair expansion into a tensor quotient, dropping the
    /// pairs that the identifications kill.
    pub fn project_tensor(&self, kind: TensorKind, raw: TensorElem) -> TensorElem {
        raw.into_iter()
            .filter(|&((l, r), ref c)| self.pair_allowed(kind, l, r) && !c.is_zero())
            .collect()
    }

    /// `v ⊗ w` in a tensor quotient.
    pub fn tensor_of(&self, kind: TensorKind, v: &GradedVector, w: &GradedVector) -> Result<TensorElem> {
        let sv = self.to_sparse(v)?;
        let sw = self.to_sparse(w)?;
        let mut out = TensorElem::new();
        for (&a, ca) in &sv {
            for (&b, cb) in &sw {
                if self.pair_allowed(kind, a, b) {
                    let c = ca * cb;
                    if !c.is_zero() {
                        *out.entry((a, b)).or_insert_with(Rational::zero) += c;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Componentwise product of tensor elements, projected into `kind`.
    fn tensor_mul(&self, kind: TensorKind, s: &TensorElem, t: &TensorElem) -> TensorElem {
        let mut out = TensorElem::new();
        for (&(a, b), c) in s {
            for (&(x, y), d) in t {
                let left = self.product_row(a, x);
                let right = self.product_row(b, y);
                for (&l, cl) in &left {
                    for (&r, cr) in &right {
                        if self.pair_allowed(kind, l, r) {
                            let v = c * d * cl * cr;
                            if !v.is_zero() {
                                *out.entry((l, r)).or_insert_with(Rational::zero) += v;
                            }
                        }
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `S ⊗ id` on a tensor element, then projection into `to`.
    fn tensor_s_left(&self, to: TensorKind, t: &TensorElem) -> TensorElem {
        let mut out = TensorElem::new();
        for (&(a, b), c) in t {
            for (&k, d) in &self.antipode[a] {
                if self.pair_allowed(to, k, b) {
                    let v = c * d;
                    if !v.is_zero() {
                        *out.entry((k, b)).or_insert_with(Rational::zero) += v;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `S ⊗ S` on a tensor element, then projection into `to`.
    fn tensor_s_both(&self, to: TensorKind, t: &TensorElem) -> TensorElem {
        let mut out = TensorElem::new();
        for (&(a, b), c) in t {
            for (&k, d) in &self.antipode[a] {
                for (&m, e) in &self.antipode[b] {
                    if self.pair_allowed(to, k, m) {
                        let v = c * d * e;
                        if !v.is_zero() {
                            *out.entry((k, m)).or_insert_with(Rational::zero) += v;
                        }
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Multiplication `μ : A ⊗rl A → A` applied to a tensor element.
    fn tensor_mu(&self, t: &TensorElem) -> GradedVector {
        let mut out = LinComb::new();
        for (&(a, b), c) in t {
            if let Some(terms) = self.product.get(&(a, b)) {
                for (&k, d) in terms {
                    let entry = out.entry(k).or_insert_with(Rational::zero);
                    *entry += c * d;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        self.sparse_to_vector(&out)
    }

    /// `Δ̄ : A ⊗rl A → A ⊗ll A`, `a ⊗ b ↦ Δ(a)(r ⊗ b)` with `r b = b`.
    fn delta_bar(&self, t: &TensorElem) -> TensorElem {
        let mut out = TensorElem::new();
        for (&(a, b), c) in t {
            let tgt_b = &self.basis[b].tgt;
            for (l, r, d) in &self.delta[a] {
                // l · u_{tgt b} keeps l exactly when src(l) = tgt(b).
                if &self.basis[*l].src != tgt_b {
                    continue;
                }
                for (&rb, e) in &self.product_row(*r, b) {
                    if self.pair_allowed(TensorKind::LL, *l, rb) {
                        let v = c * d * e;
                        if !v.is_zero() {
                            *out.entry((*l, rb)).or_insert_with(Rational::zero) += v;
                        }
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// The underlying coalgebra over the left (target) grading.
    pub fn coalgebra(&self) -> Result<Coalgebra> {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisEntry { id: b.id.clone(), grade: b.tgt.clone() })
            .collect();
        let delta = self
            .basis
            .iter()
            .enumerate()
            .map(|(k, b)| {
                (
                    b.id.clone(),
                    self.delta[k]
                        .iter()
                        .map(|(l, r, c)| (self.basis[*l].id.clone(), self.basis[*r].id.clone(), c.clone()))
                        .collect::<DeltaRow>(),
                )
            })
            .collect();
        let epsilon = self
            .basis
            .iter()
            .enumerate()
            .map(|(k, b)| (b.id.clone(), self.epsilon[k].clone()))
            .collect();
        Coalgebra::new(self.base.clone(), basis, delta, epsilon)
    }

    /// Dense coordinates on the full basis.
    pub fn to_dense(&self, v: &GradedVector) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (id, c) in v.coords() {
            out[self.index_of(id)?] = c.clone();
        }
        Ok(out)
    }

    /// Left action `f · v` through the target grade.
    pub fn act_left(&self, f: &BaseRingElement, v: &GradedVector) -> Result<GradedVector> {
        let mut out = GradedVector::zero();
        for (id, c) in v.coords() {
            let k = self.index_of(id)?;
            out.set(id.clone(), c * f.value(&self.basis[k].tgt));
        }
        Ok(out)
    }

    /// Right action `v · f` through the source grade.
    pub fn act_right(&self, v: &GradedVector, f: &BaseRingElement) -> Result<GradedVector> {
        let mut out = GradedVector::zero();
        for (id, c) in v.coords() {
            let k = self.index_of(id)?;
            out.set(id.clone(), c * f.value(&self.basis[k].src));
        }
        Ok(out)
    }
}

/// Report over the axiom suite: structure laws (unit identity and
/// associativity), the six defining axioms, and — when every basis element
/// is a witnessed S-invariant weakly grouplike — the generation identities.
#[derive(Debug, Clone)]
pub struct HopfAxiomReport {
    pub structure: LawCheck,
    pub counit: LawCheck,
    pub base_compatibility: LawCheck,
    pub multiplicativity: LawCheck,
    pub antipode_involution: LawCheck,
    pub antipode_antihom: LawCheck,
    pub antipode_counit: LawCheck,
    pub generation: Option<GenerationIdentityReport>,
}

impl HopfAxiomReport {
    pub fn axiom(&self, n: usize) -> &LawCheck {
        match n {
            1 => &self.counit,
            2 => &self.base_compatibility,
            3 => &self.multiplicativity,
            4 => &self.antipode_involution,
            5 => &self.antipode_antihom,
            6 => &self.antipode_counit,
            _ => panic!("axiom index out of range"),
        }
    }

    pub fn core_ok(&self) -> bool {
        self.structure.ok
            && (1..=6).all(|n| self.axiom(n).ok)
    }

    pub fn first_failure(&self) -> Option<String> {
        if !self.structure.ok {
            return Some(format!("structure: {:?}", self.structure.counterexample));
        }
        for n in 1..=6 {
            if !self.axiom(n).ok {
                return Some(format!(
                    "axiom ({}): {:?}",
                    ["i", "ii", "iii", "iv", "v", "vi"][n - 1],
                    self.axiom(n).counterexample
                ));
            }
        }
        None
    }
}

fn law_pass() -> LawCheck {
    LawCheck { ok: true, counterexample: None }
}

fn law_fail(msg: impl Into<String>) -> LawCheck {
    LawCheck { ok: false, counterexample: Some(msg.into()) }
}

/// Exact evaluation of the defining axioms on every basis element and pair.
pub fn check_hopf_axioms(a: &HopfAlgebroid) -> HopfAxiomReport {
    let n = a.dim();
    let basis_vec = |k: usize| GradedVector::basis(a.basis[k].id.clone());

    // Structure: the sum of units is a two-sided identity, and the product
    // is associative on composable triples.
    let mut structure = law_pass();
    let one = a.unit_sum();
    for k in 0..n {
        let b = basis_vec(k);
        let left = a.mul(&one, &b).unwrap();
        let right = a.mul(&b, &one).unwrap();
        if structure.ok && (left != b || right != b) {
            structure = law_fail(format!("units are not an identity on {}", a.basis[k].id));
        }
    }
    if structure.ok {
        'outer: for i in 0..n {
            for j in 0..n {
                if a.basis[i].src != a.basis[j].tgt {
                    continue;
                }
                for k in 0..n {
                    if a.basis[j].src != a.basis[k].tgt {
                        continue;
                    }
                    let ij_k = a.mul(&a.mul(&basis_vec(i), &basis_vec(j)).unwrap(), &basis_vec(k)).unwrap();
                    let i_jk = a.mul(&basis_vec(i), &a.mul(&basis_vec(j), &basis_vec(k)).unwrap()).unwrap();
                    if ij_k != i_jk {
                        structure = law_fail(format!(
                            "associativity fails on ({}, {}, {})",
                            a.basis[i].id, a.basis[j].id, a.basis[k].id
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }

    // (i) counit laws with ε acting through the left action.
    let mut counit = law_pass();
    for k in 0..n {
        let y = &a.basis[k].tgt;
        let mut left = vec![Rational::zero(); n];
        let mut right = vec![Rational::zero(); n];
        for (l, r, c) in &a.delta[k] {
            left[*l] += c * a.epsilon[*r].value(y);
            right[*r] += c * a.epsilon[*l].value(y);
        }
        let is_unit = |v: &[Rational]| {
            v.iter()
                .enumerate()
                .all(|(i, x)| if i == k { x.is_one() } else { x.is_zero() })
        };
        if counit.ok && !(is_unit(&left) && is_unit(&right)) {
            counit = law_fail(a.basis[k].id.clone());
        }
    }

    // (ii) ε and Δ restrict canonically to R, and the two right actions
    // agree on the image of Δ.
    let mut base_compat = law_pass();
    for (x, &u) in &a.units {
        let eps_ok = a.epsilon[u] == BaseRingElement::indicator(&a.base, x).unwrap();
        let delta_ok = a.delta[u] == vec![(u, u, Rational::one())];
        if base_compat.ok && !(eps_ok && delta_ok) {
            base_compat = law_fail(format!("R-part at {x}"));
        }
    }
    if base_compat.ok {
        for k in 0..n {
            for (l, r, c) in &a.delta[k] {
                if !c.is_zero() && a.basis[*l].src != a.basis[*r].src {
                    base_compat = law_fail(format!(
                        "right actions differ on Δ({})",
                        a.basis[k].id
                    ));
                    break;
                }
            }
            if !base_compat.ok {
                break;
            }
        }
    }

    // (iii) Δ(ab) = Δ(a)Δ(b).
    let mut multiplicativity = law_pass();
    'mult: for i in 0..n {
        for j in 0..n {
            if a.basis[i].src != a.basis[j].tgt {
                continue;
            }
            let prod = a.mul(&basis_vec(i), &basis_vec(j)).unwrap();
            let lhs = a.delta_of(&prod).unwrap();
            let di = a.delta_of(&basis_vec(i)).unwrap();
            let dj = a.delta_of(&basis_vec(j)).unwrap();
            let rhs = a.tensor_mul(TensorKind::LL, &di, &dj);
            if lhs != rhs {
                multiplicativity = law_fail(format!("({}, {})", a.basis[i].id, a.basis[j].id));
                break 'mult;
            }
        }
    }

    // (iv) S fixes R and is an involution.
    let mut involution = law_pass();
    for (x, &u) in &a.units {
        if involution.ok && a.antipode[u] != LinComb::from([(u, Rational::one())]) {
            involution = law_fail(format!("S moves the unit at {x}"));
        }
    }
    for k in 0..n {
        let ss = a.antipode_of(&a.antipode_of(&basis_vec(k)).unwrap()).unwrap();
        if involution.ok && ss != basis_vec(k) {
            involution = law_fail(a.basis[k].id.clone());
        }
    }

    // (v) S(ab) = S(b)S(a).
    let mut antihom = law_pass();
    'anti: for i in 0..n {
        for j in 0..n {
            if a.basis[i].src != a.basis[j].tgt {
                continue;
            }
            let lhs = a.antipode_of(&a.mul(&basis_vec(i), &basis_vec(j)).unwrap()).unwrap();
            let rhs = a
                .mul(
                    &a.antipode_of(&basis_vec(j)).unwrap(),
                    &a.antipode_of(&basis_vec(i)).unwrap(),
                )
                .unwrap();
            if lhs != rhs {
                antihom = law_fail(format!("({}, {})", a.basis[i].id, a.basis[j].id));
                break 'anti;
            }
        }
    }

    // (vi) μ ∘ (S ⊗ id) ∘ Δ = ε ∘ S.
    let mut antipode_counit = law_pass();
    for k in 0..n {
        let d = a.delta_of(&basis_vec(k)).unwrap();
        let lhs = a.tensor_mu(&a.tensor_s_left(TensorKind::RL, &d));
        let s = a.antipode_of(&basis_vec(k)).unwrap();
        let rhs = a.ring_embed(&a.epsilon_of(&s).unwrap());
        if antipode_counit.ok && lhs != rhs {
            antipode_counit = law_fail(a.basis[k].id.clone());
        }
    }

    let generation = check_generation_identities(a).ok();

    HopfAxiomReport {
        structure,
        counit,
        base_compatibility: base_compat,
        multiplicativity,
        antipode_involution: involution,
        antipode_antihom: antihom,
        antipode_counit,
        generation,
    }
}

/// The convolution algebroid of a finite groupoid: arrow basis, product by
/// composition, grouplike comultiplication, counit to the target indicator,
/// antipode by inversion, units at the unit arrows.
pub fn convolution_algebroid(g: &FiniteGroupoid) -> Result<HopfAlgebroid> {
    let report = validate_groupoid(g);
    if !report.ok {
        return Err(Error::precondition(format!(
            "convolution algebroid of an invalid groupoid: {}",
            report.violation.unwrap_or_default()
        )));
    }
    let basis = g
        .arrows()
        .iter()
        .map(|arr| AlgBasisEntry { id: arr.id.clone(), tgt: arr.tgt.clone(), src: arr.src.clone() })
        .collect();
    let mut product = BTreeMap::new();
    for (&(x, y), &xy) in g.compose_ids() {
        product.insert(
            (g.arrows()[x].id.clone(), g.arrows()[y].id.clone()),
            vec![(g.arrows()[xy].id.clone(), Rational::one())],
        );
    }
    let mut delta = BTreeMap::new();
    let mut epsilon = BTreeMap::new();
    let mut antipode = BTreeMap::new();
    for (i, arr) in g.arrows().iter().enumerate() {
        delta.insert(
            arr.id.clone(),
            vec![(arr.id.clone(), arr.id.clone(), Rational::one())],
        );
        epsilon.insert(
            arr.id.clone(),
            BaseRingElement::indicator(g.base(), &arr.tgt).unwrap(),
        );
        antipode.insert(
            arr.id.clone(),
            vec![(g.arrows()[g.inverse_of(i)].id.clone(), Rational::one())],
        );
    }
    let units = g
        .base()
        .points()
        .iter()
        .map(|x| (x.clone(), g.arrows()[g.unit_at(x).unwrap()].id.clone()))
        .collect();
    HopfAlgebroid::new(g.base().clone(), basis, product, delta, epsilon, antipode, units)
}

/// Finds `a'` with `Δ(a) = a ⊗ a'` and `Δ(S(a)) = S(a') ⊗ S(a)`, the
/// algebroid analogue of being supported on a bisection. Both conditions
/// are linear in `a'`; the combined system is solved exactly and the
/// canonical solution (free coordinates zero) is returned.
#[allow(clippy::needless_range_loop)]
pub fn s_invariant_wg_witness(a: &HopfAlgebroid, v: &GradedVector) -> Result<Option<GradedVector>> {
    let n = a.dim();
    let dense = a.to_dense(v)?;
    let sv = a.antipode_of(v)?;
    let s_dense = a.to_dense(&sv)?;
    let delta_v = a.delta_of(v)?;
    let delta_sv = a.delta_of(&sv)?;

    // Equations over LL pairs for both conditions; unknowns are the
    // coordinates of a'.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !a.pair_allowed(TensorKind::LL, i, j) {
                continue;
            }
            // (a ⊗ a')_{ij} = a_i · a'_j.
            let mut row = vec![Rational::zero(); n];
            row[j] = dense[i].clone();
            rows.push(row);
            rhs.push(delta_v.get(&(i, j)).cloned().unwrap_or_else(Rational::zero));
        }
    }
    for k in 0..n {
        for m in 0..n {
            if !a.pair_allowed(TensorKind::LL, k, m) {
                continue;
            }
            // (S(a') ⊗ S(a))_{km} = Σ_j S_{jk} a'_j · S(a)_m.
            let mut row = vec![Rational::zero(); n];
            for j in 0..n {
                if let Some(c) = a.antipode[j].get(&k) {
                    row[j] = c * &s_dense[m];
                }
            }
            rows.push(row);
            rhs.push(delta_sv.get(&(k, m)).cloned().unwrap_or_else(Rational::zero));
        }
    }
    if rows.is_empty() {
        return Ok(Some(GradedVector::zero()));
    }
    let system = QMatrix::from_rows(rows);
    match system.solve(&rhs) {
        None => Ok(None),
        Some(x) => {
            let mut w = GradedVector::zero();
            for (j, c) in x.into_iter().enumerate() {
                w.set(a.basis[j].id.clone(), c);
            }
            Ok(Some(w))
        }
    }
}

/// The translation operator `T_a(f) = ε(S(f a))`.
pub fn translation(a: &HopfAlgebroid, v: &GradedVector, f: &BaseRingElement) -> Result<BaseRingElement> {
    if s_invariant_wg_witness(a, v)?.is_none() {
        return Err(Error::precondition(
            "translation requires an S-invariant weakly grouplike element",
        ));
    }
    translation_unchecked(a, v, f)
}

fn translation_unchecked(
    a: &HopfAlgebroid,
    v: &GradedVector,
    f: &BaseRingElement,
) -> Result<BaseRingElement> {
    let fa = a.act_left(f, v)?;
    let sfa = a.antipode_of(&fa)?;
    a.epsilon_of(&sfa)
}

/// The partial bijection `τ_{W,a} : V → W` read off by evaluating the
/// translation operator on indicators: `T_a(δ_w) = δ_{τ^{-1}(w)}` exactly.
pub fn tau_of_element(
    a: &HopfAlgebroid,
    v: &GradedVector,
    w: &[Point],
) -> Result<BTreeMap<Point, Point>> {
    if s_invariant_wg_witness(a, v)?.is_none() {
        return Err(Error::precondition(
            "tau requires an S-invariant weakly grouplike element",
        ));
    }
    let eps = a.epsilon_of(v)?;
    for p in w {
        if !eps.value(p).is_one() {
            return Err(Error::precondition(format!("element is not normalized at {p}")));
        }
    }
    let mut tau = BTreeMap::new();
    for p in w {
        let t = translation_unchecked(a, v, &BaseRingElement::indicator(&a.base, p)?)?;
        let support = t.support();
        if support.len() != 1 || !t.value(&support[0]).is_one() {
            return Err(Error::integrity(format!(
                "translation of the indicator at {p} is not a single indicator"
            )));
        }
        if tau.insert(support[0].clone(), p.clone()).is_some() {
            return Err(Error::integrity("translation collapses two points"));
        }
    }
    Ok(tau)
}

/// The spectral groupoid together with the vector behind every arrow label.
#[derive(Debug, Clone)]
pub struct SpectralGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Arrow id → (target point, embedded vector in the algebroid).
    pub arrows: BTreeMap<String, (Point, GradedVector)>,
}

/// Builds the spectral groupoid of a Hopf algebroid: arrows at `y` are the
/// grouplikes of the target-grade stalk whose antipode image is again
/// grouplike, the source is read off `ε(S(ζ))`, composition is the product,
/// the unit at `y` is the unit element, and the inverse is the antipode.
pub fn spectral_groupoid(a: &HopfAlgebroid) -> Result<SpectralGroupoid> {
    let report = check_hopf_axioms(a);
    if !report.core_ok() {
        return Err(Error::precondition(format!(
            "spectral groupoid of a non-Hopf input: {}",
            report.first_failure().unwrap_or_default()
        )));
    }
    let c = a.coalgebra()?;
    let mut arrow_entries: Vec<ArrowEntry> = Vec::new();
    let mut vectors: BTreeMap<String, (Point, GradedVector)> = BTreeMap::new();
    let mut by_point: BTreeMap<Point, Vec<String>> = BTreeMap::new();
    for y in a.base.points() {
        let local = localize(&c, y)?;
        let mut labels = Vec::new();
        for zeta in grouplikes(&local)? {
            // S-invariance of the lift: the antipode image must again be
            // grouplike in its own stalk.
            let s_img = a.antipode_of(&zeta)?;
            let ds = a.delta_of(&s_img)?;
            let outer = a.tensor_of(TensorKind::LL, &s_img, &s_img)?;
            if ds != outer {
                continue;
            }
            // Source: ε(S(ζ)) must be a single indicator.
            let eps_s = a.epsilon_of(&s_img)?;
            let support = eps_s.support();
            if support.len() != 1 || !eps_s.value(&support[0]).is_one() {
                return Err(Error::integrity(format!(
                    "arrow candidate at {y} has no well-defined source"
                )));
            }
            let label = grouplike_label(y, &local.to_dense(&zeta)?);
            arrow_entries.push(ArrowEntry {
                id: label.clone(),
                src: support[0].clone(),
                tgt: y.clone(),
            });
            vectors.insert(label.clone(), (y.clone(), zeta));
            labels.push(label);
        }
        by_point.insert(y.clone(), labels);
    }

    let label_of = |point: &Point, vector: &GradedVector| -> Result<String> {
        let local = localize(&c, point)?;
        Ok(grouplike_label(point, &local.to_dense(vector)?))
    };

    let mut unit = BTreeMap::new();
    for y in a.base.points() {
        let u = GradedVector::basis(a.basis[a.units[y]].id.clone());
        let label = label_of(y, &u)?;
        if !vectors.contains_key(&label) {
            return Err(Error::integrity(format!("unit at {y} is not an arrow")));
        }
        unit.insert(y.clone(), label);
    }

    let mut compose = BTreeMap::new();
    for beta in &arrow_entries {
        for alpha in &arrow_entries {
            if beta.src != alpha.tgt {
                continue;
            }
            let (_, bv) = &vectors[&beta.id];
            let (_, av) = &vectors[&alpha.id];
            let prod = a.mul(bv, av)?;
            let label = label_of(&beta.tgt, &prod)?;
            if !vectors.contains_key(&label) {
                return Err(Error::integrity(format!(
                    "product of arrows {} · {} is not an arrow",
                    beta.id, alpha.id
                )));
            }
            compose.insert((beta.id.clone(), alpha.id.clone()), label);
        }
    }
    let mut inverse = BTreeMap::new();
    for e in &arrow_entries {
        let (_, v) = &vectors[&e.id];
        let s_img = a.antipode_of(v)?;
        let label = label_of(&e.src, &s_img)?;
        if !vectors.contains_key(&label) {
            return Err(Error::integrity(format!("antipode image of {} is not an arrow", e.id)));
        }
        inverse.insert(e.id.clone(), label);
    }
    let groupoid = FiniteGroupoid::new(a.base.clone(), arrow_entries, compose, unit, inverse)?;
    let report = validate_groupoid(&groupoid);
    if !report.ok {
        return Err(Error::GroupoidIntegrity(report.violation.unwrap_or_default()));
    }
    Ok(SpectralGroupoid { groupoid, arrows: vectors })
}

#[derive(Debug, Clone)]
pub struct UnitIsoGroupoid {
    pub morphism: GroupoidMorphism,
    pub is_isomorphism: bool,
}

/// `Φ_G : G → G_sp(C_c(G))`, sending an arrow to its class as a stalk
/// grouplike of the convolution algebroid at its target.
pub fn unit_iso_groupoid(g: &FiniteGroupoid) -> Result<UnitIsoGroupoid> {
    let a = convolution_algebroid(g)?;
    let sp = spectral_groupoid(&a)?;
    let c = a.coalgebra()?;
    let mut map = BTreeMap::new();
    for arr in g.arrows() {
        let local = localize(&c, &arr.tgt)?;
        let label = grouplike_label(&arr.tgt, &local.to_dense(&GradedVector::basis(arr.id.clone()))?);
        map.insert(arr.id.clone(), label);
    }
    let morphism = GroupoidMorphism::new(g.clone(), sp.groupoid.clone(), map)?;
    let is_isomorphism = crate::groupoid::is_groupoid_isomorphism(&morphism);
    Ok(UnitIsoGroupoid { morphism, is_isomorphism })
}

/// A grade-preserving linear map of Hopf algebroids given on basis
/// elements; the homomorphism laws are checked by [`AlgebroidMorphism::is_homomorphism`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebroidMorphism {
    pub source: HopfAlgebroid,
    pub target: HopfAlgebroid,
    matrix: Vec<GradedVector>,
}

impl AlgebroidMorphism {
    pub fn new(
        source: HopfAlgebroid,
        target: HopfAlgebroid,
        images: BTreeMap<String, GradedVector>,
    ) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::structural("algebroid morphism across different base sets"));
        }
        let mut matrix = Vec::with_capacity(source.dim());
        for entry in &source.basis {
            let image = images.get(&entry.id).cloned().unwrap_or_default();
            for id in image.coords().keys() {
                let k = target.index_of(id)?;
                if target.basis[k].tgt != entry.tgt || target.basis[k].src != entry.src {
                    return Err(Error::structural(format!(
                        "image of {} is not bigrade-preserving",
                        entry.id
                    )));
                }
            }
            matrix.push(image);
        }
        Ok(AlgebroidMorphism { source, target, matrix })
    }

    pub fn identity(a: &HopfAlgebroid) -> Self {
        let matrix = a.basis.iter().map(|b| GradedVector::basis(b.id.clone())).collect();
        AlgebroidMorphism { source: a.clone(), target: a.clone(), matrix }
    }

    pub fn apply(&self, v: &GradedVector) -> Result<GradedVector> {
        let mut out = GradedVector::zero();
        for (id, c) in v.coords() {
            let k = self.source.index_of(id)?;
            out = out.add(&self.matrix[k].scale(c));
        }
        Ok(out)
    }

    /// Basis id to image, for reports.
    pub fn images(&self) -> BTreeMap<String, GradedVector> {
        self.source
            .basis
            .iter()
            .enumerate()
            .map(|(k, e)| (e.id.clone(), self.matrix[k].clone()))
            .collect()
    }

    pub fn compose(&self, inner: &AlgebroidMorphism) -> Result<AlgebroidMorphism> {
        if inner.target != self.source {
            return Err(Error::structural("composition of non-composable algebroid morphisms"));
        }
        let mut images = BTreeMap::new();
        for entry in &inner.source.basis {
            let v = self.apply(&inner.apply(&GradedVector::basis(entry.id.clone()))?)?;
            images.insert(entry.id.clone(), v);
        }
        AlgebroidMorphism::new(inner.source.clone(), self.target.clone(), images)
    }

    /// Algebra, coalgebra, antipode, and R-part compatibility, checked
    /// exactly on basis elements.
    pub fn is_homomorphism(&self) -> Result<bool> {
        let s = &self.source;
        let t = &self.target;
        for x in s.base.points() {
            let u_img = self.apply(&GradedVector::basis(s.basis[s.units[x]].id.clone()))?;
            if u_img != GradedVector::basis(t.basis[t.units[x]].id.clone()) {
                return Ok(false);
            }
        }
        for i in 0..s.dim() {
            let bi = GradedVector::basis(s.basis[i].id.clone());
            let img_i = &self.matrix[i];
            for j in 0..s.dim() {
                let bj = GradedVector::basis(s.basis[j].id.clone());
                let lhs = self.apply(&s.mul(&bi, &bj)?)?;
                let rhs = t.mul(img_i, &self.matrix[j])?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
            // Coalgebra compatibility.
            let lhs = t.delta_of(img_i)?;
            let mut rhs = TensorElem::new();
            for (l, r, c) in s.delta_row(i) {
                for (pair, d) in t.tensor_of(TensorKind::LL, &self.matrix[*l], &self.matrix[*r])? {
                    *rhs.entry(pair).or_insert_with(Rational::zero) += c * &d;
                }
            }
            rhs.retain(|_, c| !c.is_zero());
            if lhs != rhs {
                return Ok(false);
            }
            if t.epsilon_of(img_i)? != *s.epsilon_row(i) {
                return Ok(false);
            }
            let lhs = self.apply(&s.antipode_of(&bi)?)?;
            let rhs = t.antipode_of(img_i)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn rank(&self) -> Result<usize> {
        if self.source.dim() == 0 {
            return Ok(0);
        }
        let mut rows = Vec::new();
        for v in &self.matrix {
            rows.push(self.target.to_dense(v)?);
        }
        Ok(QMatrix::from_rows(rows).rank())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.rank()? == self.source.dim())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.rank()? == self.target.dim())
    }
}

/// Functorial action of the convolution algebroid on groupoid morphisms.
pub fn convolution_map(phi: &GroupoidMorphism) -> Result<AlgebroidMorphism> {
    let source = convolution_algebroid(&phi.source)?;
    let target = convolution_algebroid(&phi.target)?;
    let mut images = BTreeMap::new();
    for arr in phi.source.arrows() {
        images.insert(arr.id.clone(), GradedVector::basis(phi.apply(&arr.id)?));
    }
    AlgebroidMorphism::new(source, target, images)
}

/// Functorial action of the spectral groupoid on algebroid morphisms.
pub fn spectral_groupoid_map(
    alpha: &AlgebroidMorphism,
    sp_source: &SpectralGroupoid,
    sp_target: &SpectralGroupoid,
) -> Result<GroupoidMorphism> {
    let c = alpha.target.coalgebra()?;
    let mut map = BTreeMap::new();
    for (label, (y, zeta)) in &sp_source.arrows {
        let image = alpha.apply(zeta)?;
        let local = localize(&c, y)?;
        let image_label = grouplike_label(y, &local.to_dense(&image)?);
        if !sp_target.arrows.contains_key(&image_label) {
            return Err(Error::integrity(format!(
                "image of arrow {label} is not an arrow of the target"
            )));
        }
        map.insert(label.clone(), image_label);
    }
    GroupoidMorphism::new(sp_source.groupoid.clone(), sp_target.groupoid.clone(), map)
}

#[derive(Debug, Clone)]
pub struct CounitHomAlgebroid {
    pub morphism: AlgebroidMorphism,
    pub injective: bool,
    pub surjective: bool,
    pub is_homomorphism: bool,
}

/// `Θ_A : C_c(G_sp(A)) → A`, sending the basis arrow `ζ at y` to `ζ ∈ A`,
/// with exact rank verdicts. Surjectivity is normal generation by the
/// S-invariant weakly grouplike elements and injectivity their normal
/// independence.
pub fn counit_hom_algebroid(a: &HopfAlgebroid) -> Result<CounitHomAlgebroid> {
    let sp = spectral_groupoid(a)?;
    counit_hom_from_spectral(a, &sp)
}

fn counit_hom_from_spectral(a: &HopfAlgebroid, sp: &SpectralGroupoid) -> Result<CounitHomAlgebroid> {
    let domain = convolution_algebroid(&sp.groupoid)?;
    let mut images = BTreeMap::new();
    for (label, (_, zeta)) in &sp.arrows {
        images.insert(label.clone(), zeta.clone());
    }
    let morphism = AlgebroidMorphism::new(domain, a.clone(), images)?;
    let injective = morphism.is_injective()?;
    let surjective = morphism.is_surjective()?;
    let is_homomorphism = morphism.is_homomorphism()?;
    Ok(CounitHomAlgebroid { morphism, injective, surjective, is_homomorphism })
}

#[derive(Debug, Clone)]
pub struct GroupoidClassification {
    pub is_groupoid_algebroid: bool,
    /// `Θ_A` and the spectral groupoid when the verdict is positive.
    pub witness: Option<(CounitHomAlgebroid, FiniteGroupoid)>,
    pub failure: Option<GroupoidClassificationFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidClassificationFailure {
    pub point: Option<Point>,
    pub arrow_count: Option<usize>,
    pub stalk_dim: Option<usize>,
    pub defect: Option<usize>,
    pub reason: String,
}

/// Decides whether `A` is (isomorphic to) the convolution algebroid of a
/// finite groupoid: the arrows with target `y` must form a basis of the
/// target-grade stalk at every `y`. Axiom failures, solver obstructions and
/// integrity failures all count as negative verdicts with their reason.
pub fn classify_groupoid_algebroid(a: &HopfAlgebroid) -> Result<GroupoidClassification> {
    let negative = |point: Option<Point>, count: Option<usize>, dim: Option<usize>, reason: String| {
        GroupoidClassification {
            is_groupoid_algebroid: false,
            witness: None,
            failure: Some(GroupoidClassificationFailure {
                point,
                arrow_count: count,
                stalk_dim: dim,
                defect: match (count, dim) {
                    (Some(c), Some(d)) => Some(d - c),
                    _ => None,
                },
                reason,
            }),
        }
    };
    let sp = match spectral_groupoid(a) {
        Ok(sp) => sp,
        Err(Error::SolverInapplicable { point, reason }) => {
            return Ok(negative(point, None, None, format!("grouplike solver inapplicable: {reason}")));
        }
        Err(Error::GroupoidIntegrity(msg)) => {
            return Ok(negative(None, None, None, format!("spectral construction failed: {msg}")));
        }
        Err(Error::Precondition(msg)) => {
            return Ok(negative(None, None, None, format!("not a Hopf algebroid: {msg}")));
        }
        Err(e) => return Err(e),
    };
    for y in a.base.points() {
        let dim = a.basis.iter().filter(|b| b.tgt == *y).count();
        let count = sp.groupoid.arrows().iter().filter(|arr| arr.tgt == *y).count();
        if count != dim {
            return Ok(negative(
                Some(y.clone()),
                Some(count),
                Some(dim),
                format!("{count} arrows against dimension {dim} at {y}"),
            ));
        }
    }
    let hom = counit_hom_from_spectral(a, &sp)?;
    if !(hom.injective && hom.surjective && hom.is_homomorphism) {
        return Err(Error::integrity(
            "arrow bases found but the counit map is not an isomorphism",
        ));
    }
    Ok(GroupoidClassification {
        is_groupoid_algebroid: true,
        witness: Some((hom, sp.groupoid)),
        failure: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementIdentityReport {
    pub counit_absorption: bool,
    pub antipode_absorption: bool,
    pub delta_flip: bool,
    pub delta_antipode_flip: bool,
    pub epsilon_product: bool,
    pub epsilon_antipode_product: bool,
}

impl ElementIdentityReport {
    pub fn all_ok(&self) -> bool {
        self.counit_absorption
            && self.antipode_absorption
            && self.delta_flip
            && self.delta_antipode_flip
            && self.epsilon_product
            && self.epsilon_antipode_product
    }
}

/// The six absorption and flip identities for one S-invariant weakly
/// grouplike element, evaluated exactly through the algebra operations.
pub fn check_element_identities(a: &HopfAlgebroid, v: &GradedVector) -> Result<ElementIdentityReport> {
    let Some(w) = s_invariant_wg_witness(a, v)? else {
        return Err(Error::precondition(
            "identities require an S-invariant weakly grouplike element",
        ));
    };
    let sv = a.antipode_of(v)?;
    let sw = a.antipode_of(&w)?;
    let eps_v = a.ring_embed(&a.epsilon_of(v)?);
    let eps_w = a.ring_embed(&a.epsilon_of(&w)?);
    let eps_sv = a.ring_embed(&a.epsilon_of(&sv)?);
    let eps_sw = a.ring_embed(&a.epsilon_of(&sw)?);

    // (i) a = ε(a)a' = ε(a')a = aε(S(a')) = a'ε(S(a)).
    let counit_absorption = *v == a.mul(&eps_v, &w)?
        && *v == a.mul(&eps_w, v)?
        && *v == a.mul(v, &eps_sw)?
        && *v == a.mul(&w, &eps_sv)?;
    // (ii) S(a) = ε(S(a'))S(a) = ε(S(a))S(a') = S(a')ε(a) = S(a)ε(a').
    let antipode_absorption = sv == a.mul(&eps_sw, &sv)?
        && sv == a.mul(&eps_sv, &sw)?
        && sv == a.mul(&sw, &eps_v)?
        && sv == a.mul(&sv, &eps_w)?;
    // (iii) Δ(a) = ε(a)a' ⊗ a' = a' ⊗ a.
    let dv = a.delta_of(v)?;
    let delta_flip = dv == a.tensor_of(TensorKind::LL, &a.mul(&eps_v, &w)?, &w)?
        && dv == a.tensor_of(TensorKind::LL, &w, v)?;
    // (iv) Δ(S(a)) = S(a') ⊗ S(a')ε(a) = S(a) ⊗ S(a').
    let dsv = a.delta_of(&sv)?;
    let delta_antipode_flip = dsv
        == a.tensor_of(TensorKind::LL, &sw, &a.mul(&sw, &eps_v)?)?
        && dsv == a.tensor_of(TensorKind::LL, &sv, &sw)?;
    // (v) ε(a) = aS(a') = a'S(a).
    let epsilon_product = eps_v == a.mul(v, &sw)? && eps_v == a.mul(&w, &sv)?;
    // (vi) ε(S(a)) = S(a')a = S(a)a'.
    let epsilon_antipode_product = eps_sv == a.mul(&sw, v)? && eps_sv == a.mul(&sv, &w)?;

    Ok(ElementIdentityReport {
        counit_absorption,
        antipode_absorption,
        delta_flip,
        delta_antipode_flip,
        epsilon_product,
        epsilon_antipode_product,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationIdentityReport {
    pub generated_by_witnessed: bool,
    pub cocommutative_coassociative: bool,
    pub epsilon_collapse: bool,
    pub delta_bar_involution: bool,
    pub pi_antipode_symmetry: bool,
    pub gamma_fixes_generators: bool,
}

impl GenerationIdentityReport {
    pub fn all_ok(&self) -> bool {
        self.generated_by_witnessed
            && self.cocommutative_coassociative
            && self.epsilon_collapse
            && self.delta_bar_involution
            && self.pi_antipode_symmetry
            && self.gamma_fixes_generators
    }
}

/// The identities available once the algebroid is generated by S-invariant
/// weakly grouplike elements (verified as: every basis element carries a
/// witness). Includes the γ construction: the unique linear map on the
/// image of Δ with γ ∘ Δ ∘ S = (S ⊗ S) ∘ Δ, fixed on the generators.
pub fn check_generation_identities(a: &HopfAlgebroid) -> Result<GenerationIdentityReport> {
    let n = a.dim();
    let basis_vec = |k: usize| GradedVector::basis(a.basis[k].id.clone());
    for k in 0..n {
        if s_invariant_wg_witness(a, &basis_vec(k))?.is_none() {
            return Err(Error::precondition(format!(
                "{} is not S-invariant weakly grouplike; the algebroid is not visibly generated by witnessed elements",
                a.basis[k].id
            )));
        }
    }
    let generated_by_witnessed = true;

    let c = a.coalgebra()?;
    let law = crate::coalgebra::check_coalgebra(&c);
    let cocommutative_coassociative = law.coassociative.ok && law.cocommutative.ok;

    // (iii) ε(ab) = ε(aε(b)).
    let mut epsilon_collapse = true;
    'eps: for i in 0..n {
        for j in 0..n {
            let ab = a.mul(&basis_vec(i), &basis_vec(j))?;
            let lhs = a.epsilon_of(&ab)?;
            let aeb = a.mul(&basis_vec(i), &a.ring_embed(&a.epsilon_of(&basis_vec(j))?))?;
            let rhs = a.epsilon_of(&aeb)?;
            if lhs != rhs {
                epsilon_collapse = false;
                break 'eps;
            }
        }
    }

    // (iv) (S ⊗ id) ∘ Δ̄ ∘ (S ⊗ id) ∘ Δ̄ = id on A ⊗rl A.
    let mut delta_bar_involution = true;
    'bar: for i in 0..n {
        for j in 0..n {
            if !a.pair_allowed(TensorKind::RL, i, j) {
                continue;
            }
            let start = TensorElem::from([((i, j), Rational::one())]);
            let step1 = a.tensor_s_left(TensorKind::RL, &a.delta_bar(&start));
            let step2 = a.tensor_s_left(TensorKind::RL, &a.delta_bar(&step1));
            if step2 != start {
                delta_bar_involution = false;
                break 'bar;
            }
        }
    }

    // (v) ϖ ∘ Δ ∘ S = ϖ ∘ (S ⊗ S) ∘ Δ.
    let mut pi_antipode_symmetry = true;
    for k in 0..n {
        let lhs = a.project_tensor(TensorKind::LLRR, a.delta_of(&a.antipode_of(&basis_vec(k))?)?);
        let rhs = a.tensor_s_both(TensorKind::LLRR, &a.delta_of(&basis_vec(k))?);
        if lhs != rhs {
            pi_antipode_symmetry = false;
            break;
        }
    }

    // (vi) γ(Δ(a)) = Δ(a) = flip(Δ(a)) on generators, where γ is defined by
    // linear extension of Δ(S(b)) ↦ (S ⊗ S)(Δ(b)).
    let pair_index: Vec<(usize, usize)> = {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if a.pair_allowed(TensorKind::LL, i, j) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    };
    let to_dense_tensor = |t: &TensorElem| -> Vec<Rational> {
        pair_index
            .iter()
            .map(|p| t.get(p).cloned().unwrap_or_else(Rational::zero))
            .collect()
    };
    let mut span_cols = Vec::new();
    let mut gamma_images = Vec::new();
    for k in 0..n {
        let ds = a.delta_of(&a.antipode_of(&basis_vec(k))?)?;
        span_cols.push(to_dense_tensor(&ds));
        gamma_images.push(a.tensor_s_both(TensorKind::LL, &a.delta_of(&basis_vec(k))?));
    }
    let span = QMatrix::from_columns(span_cols);
    if span.rank() != n {
        return Err(Error::precondition(
            "Δ ∘ S is not injective; γ is not well-defined",
        ));
    }
    let mut gamma_fixes_generators = true;
    for k in 0..n {
        let da = a.delta_of(&basis_vec(k))?;
        // Express Δ(a) through the spanning set {Δ(S(b_m))} and push the
        // coordinates through γ's defining images.
        let Some(coords) = span.solve(&to_dense_tensor(&da)) else {
            gamma_fixes_generators = false;
            break;
        };
        let mut gamma_da = TensorElem::new();
        for (m, coeff) in coords.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (&pair, d) in &gamma_images[m] {
                *gamma_da.entry(pair).or_insert_with(Rational::zero) += coeff * d;
            }
        }
        gamma_da.retain(|_, v| !v.is_zero());
        let flipped: TensorElem = da.iter().map(|(&(l, r), v)| ((r, l), v.clone())).collect();
        if gamma_da != da || flipped != da {
            gamma_fixes_generators = false;
            break;
        }
    }

    Ok(GenerationIdentityReport {
        generated_by_witnessed,
        cocommutative_coassociative,
        epsilon_collapse,
        delta_bar_involution,
        pi_antipode_symmetry,
        gamma_fixes_generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::rat_int;
    use crate::fixtures;
    use crate::groupoid::{cyclic_group, pair_groupoid, trivial_groupoid};

    fn pt(i: usize) -> Point {
        Point::new(i.to_string())
    }

    fn e(id: &str) -> GradedVector {
        GradedVector::basis(id)
    }

    #[test]
    fn pair_groupoid_convolution_is_matrix_algebra() {
        let a = convolution_algebroid(&pair_groupoid(2)).unwrap();
        // e_12 · e_21 = e_11, e_12 · e_12 = 0.
        assert_eq!(a.mul(&e("e_1_2"), &e("e_2_1")).unwrap(), e("e_1_1"));
        assert!(a.mul(&e("e_1_2"), &e("e_1_2")).unwrap().is_zero());
        // ε(e_12) is the indicator at the target 1.
        assert_eq!(
            a.epsilon_of(&e("e_1_2")).unwrap(),
            BaseRingElement::indicator(a.base(), &pt(1)).unwrap()
        );
        // S is inversion.
        assert_eq!(a.antipode_of(&e("e_1_2")).unwrap(), e("e_2_1"));
        // Δ is grouplike on arrows.
        let d = a.delta_of(&e("e_1_2")).unwrap();
        let i = a.index_of("e_1_2").unwrap();
        assert_eq!(d, TensorElem::from([((i, i), Rational::one())]));
    }

    #[test]
    fn convolution_of_trivial_groupoid_is_the_base_ring() {
        let a = convolution_algebroid(&trivial_groupoid(&BaseSet::range(3))).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(check_hopf_axioms(&a).core_ok());
        // Every basis element is a unit element.
        assert_eq!(a.units().len(), 3);
    }

    #[test]
    fn axioms_pass_on_convolution_and_idempotent_fixtures() {
        for g in [pair_groupoid(2), cyclic_group(4)] {
            let a = convolution_algebroid(&g).unwrap();
            let report = check_hopf_axioms(&a);
            assert!(report.core_ok(), "{:?}", report.first_failure());
            // Convolution algebroids are generated by witnessed elements, so
            // the generation identities are available and hold.
            assert!(report.generation.unwrap().all_ok());
        }
        let report = check_hopf_axioms(&fixtures::idempotent_monoid_algebroid());
        assert!(report.core_ok(), "{:?}", report.first_failure());
    }

    #[test]
    fn primitive_element_table_fails_multiplicativity() {
        let report = check_hopf_axioms(&fixtures::primitive_element_algebroid());
        assert!(report.counit.ok);
        assert!(report.base_compatibility.ok);
        assert!(!report.multiplicativity.ok);
        assert_eq!(report.multiplicativity.counterexample.as_deref(), Some("(x, x)"));
        assert!(report.antipode_involution.ok);
        assert!(report.antipode_antihom.ok);
    }

    #[test]
    fn witness_frozen_cases() {
        let a = convolution_algebroid(&pair_groupoid(2)).unwrap();
        // A basis arrow is its own witness.
        assert_eq!(s_invariant_wg_witness(&a, &e("e_1_2")).unwrap(), Some(e("e_1_2")));
        // Coincident targets: not even weakly grouplike.
        let same_target = e("e_1_1").add(&e("e_1_2"));
        assert_eq!(s_invariant_wg_witness(&a, &same_target).unwrap(), None);
        // Coincident sources: weakly grouplike but the antipode side fails.
        let same_source = e("e_1_1").add(&e("e_2_1"));
        assert_eq!(s_invariant_wg_witness(&a, &same_source).unwrap(), None);
        // A true bisection: distinct sources and targets.
        let swap = e("e_1_2").add(&e("e_2_1"));
        assert_eq!(s_invariant_wg_witness(&a, &swap).unwrap(), Some(swap.clone()));
        // Units are witnessed by themselves.
        assert_eq!(s_invariant_wg_witness(&a, &e("e_1_1")).unwrap(), Some(e("e_1_1")));
        // Scaled bisections keep an (unscaled) witness.
        let scaled = e("e_1_2").scale(&rat_int(3));
        assert_eq!(s_invariant_wg_witness(&a, &scaled).unwrap(), Some(e("e_1_2")));
    }

    #[test]
    fn translation_frozen_cases() {
        let a = convolution_algebroid(&pair_groupoid(2)).unwrap();
        let d1 = BaseRingElement::indicator(a.base(), &pt(1)).unwrap();
        let d2 = BaseRingElement::indicator(a.base(), &pt(2)).unwrap();
        // T_{e_12}(δ_1) = ε(S(e_12)) = ε(e_21) = δ_2.
        assert_eq!(translation(&a, &e("e_1_2"), &d1).unwrap(), d2);
        // T at a unit restricts to the point.
        let f = d1.scale(&rat_int(5)).add(&d2.scale(&rat_int(7))).unwrap();
        assert_eq!(translation(&a, &e("e_1_1"), &f).unwrap(), d1.scale(&rat_int(5)));
        // Precondition: a non-witnessed element is refused.
        let bad = e("e_1_1").add(&e("e_1_2"));
        assert!(matches!(
            translation(&a, &bad, &d1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tau_frozen_cases() {
        let a = convolution_algebroid(&pair_groupoid(2)).unwrap();
        // τ_{W, e_12} with W = {1}: the partial bijection {2 ↦ 1}.
        let tau = tau_of_element(&a, &e("e_1_2"), &[pt(1)]).unwrap();
        assert_eq!(tau, BTreeMap::from([(pt(2), pt(1))]));
        // The unit sum gives the identity on all of M.
        let one = a.unit_sum();
        let tau = tau_of_element(&a, &one, &[pt(1), pt(2)]).unwrap();
        assert_eq!(tau, BTreeMap::from([(pt(1), pt(1)), (pt(2), pt(2))]));
        // τ_{V, S(a)} is the inverse of τ_{W, a}.
        let sv = a.antipode_of(&e("e_1_2")).unwrap();
        let tau_inv = tau_of_element(&a, &sv, &[pt(2)]).unwrap();
        assert_eq!(tau_inv, BTreeMap::from([(pt(1), pt(2))]));
        // Normalization precondition.
        assert!(matches!(
            tau_of_element(&a, &e("e_1_2"), &[pt(2)]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tau_integrity_error_on_non_hopf_input() {
        // Corrupt ε(e_2_1) to 2·δ_2: e_1_2 keeps its witness but the
        // translation of δ_1 is no longer a single indicator.
        let a = convolution_algebroid(&pair_groupoid(2)).unwrap();
        let mut doc = crate::io::algebroid_to_doc(&a);
        for row in &mut doc.epsilon {
            if row.id == "e_2_1" {
                row.coeff = "2".to_string();
            }
        }
        let bad = crate::io::doc_to_algebroid(&doc).unwrap();
        assert!(s_invariant_wg_witness(&bad, &e("e_1_2")).unwrap().is_some());
        assert!(matches!(
            tau_of_element(&bad, &e("e_1_2"), &[pt(1)]),
            Err(Error::GroupoidIntegrity(_))
        ));
    }

    #[test]
    fn spectral_groupoid_of_pair_three() {
        let g = pair_groupoid(3);
        let a = convolution_algebroid(&g).unwrap();
        let sp = spectral_groupoid(&a).unwrap();
        assert_eq!(sp.groupoid.arrow_count(), 9);
        let unit = unit_iso_groupoid(&g).unwrap();
        assert!(unit.is_isomorphism);
    }

    #[test]
    fn spectral_groupoid_of_group_algebra() {
        let a = convolution_algebroid(&cyclic_group(2)).unwrap();
        let sp = spectral_groupoid(&a).unwrap();
        assert_eq!(sp.groupoid.arrow_count(), 2);
        assert_eq!(sp.groupoid.base().len(), 1);
    }

    #[test]
    fn spectral_groupoid_of_idempotent_fixture_is_unit_only() {
        let a = fixtures::idempotent_monoid_algebroid();
        let sp = spectral_groupoid(&a).unwrap();
        assert_eq!(sp.groupoid.arrow_count(), 1);
        let hom = counit_hom_algebroid(&a).unwrap();
        assert!(hom.is_homomorphism);
        assert!(hom.injective);
        assert!(!hom.surjective);
        assert_eq!(hom.morphism.rank().unwrap(), 1);
    }

    #[test]
    fn classification_verdicts() {
        let good = classify_groupoid_algebroid(&convolution_algebroid(&pair_groupoid(3)).unwrap()).unwrap();
        assert!(good.is_groupoid_algebroid);
        assert!(good.witness.is_some());

        let bad = classify_groupoid_algebroid(&fixtures::idempotent_monoid_algebroid()).unwrap();
        assert!(!bad.is_groupoid_algebroid);
        let failure = bad.failure.unwrap();
        assert_eq!(failure.arrow_count, Some(1));
        assert_eq!(failure.stalk_dim, Some(2));
        assert_eq!(failure.defect, Some(1));

        // R alone (trivial groupoid algebra) is a groupoid algebroid.
        let r = convolution_algebroid(&trivial_groupoid(&BaseSet::range(2))).unwrap();
        assert!(classify_groupoid_algebroid(&r).unwrap().is_groupoid_algebroid);

        // A non-Hopf input classifies negative with its reason.
        let prim = classify_groupoid_algebroid(&fixtures::primitive_element_algebroid()).unwrap();
        assert!(!prim.is_groupoid_algebroid);
        assert!(prim.failure.unwrap().reason.contains("not a Hopf algebroid"));
    }

    #[test]
    fn element_identities_hold_on_witnessed_elements() {
        let a = convolution_algebroid(&pair_groupoid(2)).unwrap();
        for id in ["e_1_1", "e_1_2", "e_2_1", "e_2_2"] {
            let report = check_element_identities(&a, &e(id)).unwrap();
            assert!(report.all_ok(), "{id}: {report:?}");
        }
        // The bisection element with its own witness.
        let swap = e("e_1_2").add(&e("e_2_1"));
        assert!(check_element_identities(&a, &swap).unwrap().all_ok());
        // Units: identities collapse to ε(u_x) = δ_x.
        assert!(check_element_identities(&a, &e("e_1_1")).unwrap().all_ok());
        // Non-witnessed input is a precondition error.
        assert!(matches!(
            check_element_identities(&a, &e("e_1_1").add(&e("e_1_2"))),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn generation_identities_on_convolution_and_refusal() {
        let a = convolution_algebroid(&pair_groupoid(2)).unwrap();
        let report = check_generation_identities(&a).unwrap();
        assert!(report.all_ok(), "{report:?}");
        assert!(matches!(
            check_generation_identities(&fixtures::primitive_element_algebroid()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn unit_iso_on_generators() {
        for g in [
            pair_groupoid(2),
            cyclic_group(3),
            trivial_groupoid(&BaseSet::range(2)),
        ] {
            let unit = unit_iso_groupoid(&g).unwrap();
            assert!(unit.is_isomorphism);
        }
        // Canonical labeling: e_1_2 lands on the second coordinate of the
        // stalk at its target.
        let unit = unit_iso_groupoid(&pair_groupoid(2)).unwrap();
        assert_eq!(unit.morphism.apply("e_1_2").unwrap(), "1:(0,1)");
    }

    #[test]
    fn adjunction_triangles_on_small_fixtures() {
        for g in [pair_groupoid(2), cyclic_group(3)] {
            let a = convolution_algebroid(&g).unwrap();
            // Θ_{C_c(G)} ∘ (Φ_G)_+ = id.
            let unit = unit_iso_groupoid(&g).unwrap();
            let theta = counit_hom_algebroid(&a).unwrap();
            let composite = theta.morphism.compose(&convolution_map(&unit.morphism).unwrap()).unwrap();
            assert_eq!(composite, AlgebroidMorphism::identity(&a));
            // G_sp(Θ_A) ∘ Φ_{G_sp(A)} = id.
            let sp = spectral_groupoid(&a).unwrap();
            let unit_sp = unit_iso_groupoid(&sp.groupoid).unwrap();
            let sp_of_domain = spectral_groupoid(&theta.morphism.source).unwrap();
            let mapped = spectral_groupoid_map(&theta.morphism, &sp_of_domain, &sp).unwrap();
            let composite = mapped.compose(&unit_sp.morphism).unwrap();
            assert_eq!(composite, GroupoidMorphism::identity(&sp.groupoid));
        }
    }
}
