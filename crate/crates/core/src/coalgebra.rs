//! Coalgebras over `R = Fun(M, Q)` in the finite discrete model.
//!
//! A locally unitary module over `R` with finite `M` is the same thing as an
//! `M`-graded rational vector space: the indicators `δ_x` form a complete
//! family of orthogonal idempotents and grade each basis element. The
//! comultiplication is stalk-wise (`Δ` of a grade-`y` element lives in the
//! `y`-stalk tensor square) and the counit of a grade-`y` element is a ring
//! element supported at `y`. Localization at `x` is the grade-`x` projection:
//! `N_x(C)` is the span of all other grades and the exact sequence splits.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::base::{format_rational, BaseRingElement, BaseSet, Point, Rational};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::solver;

/// A basis element together with its grade: the unique point `y` with
/// `δ_y · b = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisEntry {
    pub id: String,
    pub grade: Point,
}

/// Formal sum of basis pairs with rational coefficients; the sparse value of
/// `Δ` on one basis element.
pub type DeltaRow = Vec<(String, String, Rational)>;

/// An element of a coalgebra (or Hopf algebroid), sparse over basis ids.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct GradedVector {
    coords: BTreeMap<String, Rational>,
}

impl GradedVector {
    pub fn zero() -> Self {
        GradedVector::default()
    }

    pub fn basis(id: impl Into<String>) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(id.into(), Rational::one());
        GradedVector { coords }
    }

    pub fn from_coords(coords: BTreeMap<String, Rational>) -> Self {
        let coords = coords.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        GradedVector { coords }
    }

    pub fn coords(&self) -> &BTreeMap<String, Rational> {
        &self.coords
    }

    pub fn coord(&self, id: &str) -> Rational {
        self.coords.get(id).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn set(&mut self, id: impl Into<String>, c: Rational) {
        let id = id.into();
        if c.is_zero() {
            self.coords.remove(&id);
        } else {
            self.coords.insert(id, c);
        }
    }

    pub fn add_term(&mut self, id: &str, c: &Rational) {
        let v = self.coord(id) + c;
        self.set(id.to_string(), v);
    }

    pub fn add(&self, other: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        for (id, c) in &other.coords {
            out.add_term(id, c);
        }
        out
    }

    pub fn sub(&self, other: &GradedVector) -> GradedVector {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> GradedVector {
        if c.is_zero() {
            return GradedVector::zero();
        }
        GradedVector {
            coords: self.coords.iter().map(|(id, v)| (id.clone(), v * c)).collect(),
        }
    }
}

impl fmt::Display for GradedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(id, c)| {
                if c.is_one() {
                    id.clone()
                } else {
                    format!("{}·{}", format_rational(c), id)
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// An `M`-graded coalgebra with named basis, stalk-wise `Δ` and `ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalgebra {
    base: BaseSet,
    basis: Vec<BasisEntry>,
    index: BTreeMap<String, usize>,
    delta: Vec<Vec<(usize, usize, Rational)>>,
    epsilon: Vec<BaseRingElement>,
}

impl Coalgebra {
    /// Builds a coalgebra from sparse tables. Structural coherence (unique
    /// ids, grades in the base, `Δ` in the stalk tensor square, `ε` supported
    /// at the grade) is enforced here; the coalgebra *laws* are verdicts of
    /// [`check_coalgebra`], so law-violating fixtures remain constructible.
    pub fn new(
        base: BaseSet,
        basis: Vec<BasisEntry>,
        delta: BTreeMap<String, DeltaRow>,
        epsilon: BTreeMap<String, BaseRingElement>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, entry) in basis.iter().enumerate() {
            if entry.id.is_empty() {
                return Err(Error::structural("empty basis id"));
            }
            if !base.contains(&entry.grade) {
                return Err(Error::structural(format!(
                    "grade {} of basis element {} outside the base set",
                    entry.grade, entry.id
                )));
            }
            if index.insert(entry.id.clone(), i).is_some() {
                return Err(Error::structural(format!("duplicate basis id {}", entry.id)));
            }
        }
        let mut delta_rows = vec![Vec::new(); basis.len()];
        for (id, row) in delta {
            let Some(&k) = index.get(&id) else {
                return Err(Error::structural(format!("delta row for unknown id {id}")));
            };
            let grade = &basis[k].grade;
            let mut canon: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (l, r, c) in row {
                let (Some(&li), Some(&ri)) = (index.get(&l), index.get(&r)) else {
                    return Err(Error::structural(format!("delta term with unknown id in row {id}")));
                };
                if &basis[li].grade != grade || &basis[ri].grade != grade {
                    return Err(Error::structural(format!(
                        "delta of {id} leaves the {grade}-stalk tensor square"
                    )));
                }
                let entry = canon.entry((li, ri)).or_insert_with(Rational::zero);
                *entry += c;
            }
            delta_rows[k] = canon
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((l, r), c)| (l, r, c))
                .collect();
        }
        let mut eps_rows = vec![BaseRingElement::zero(&base); basis.len()];
        for (id, f) in epsilon {
            let Some(&k) = index.get(&id) else {
                return Err(Error::structural(format!("epsilon row for unknown id {id}")));
            };
            if f.base() != &base {
                return Err(Error::structural("epsilon value over a different base set"));
            }
            if f.support().iter().any(|p| p != &basis[k].grade) {
                return Err(Error::structural(format!(
                    "epsilon of {id} not supported at its grade"
                )));
            }
            eps_rows[k] = f;
        }
        Ok(Coalgebra { base, basis, index, delta: delta_rows, epsilon: eps_rows })
    }

    pub fn base(&self) -> &BaseSet {
        &self.base
    }

    pub fn basis(&self) -> &[BasisEntry] {
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

    pub fn grade_of(&self, id: &str) -> Result<&Point> {
        Ok(&self.basis[self.index_of(id)?].grade)
    }

    pub fn delta_row(&self, k: usize) -> &[(usize, usize, Rational)] {
        &self.delta[k]
    }

    pub fn epsilon_row(&self, k: usize) -> &BaseRingElement {
        &self.epsilon[k]
    }

    /// `Δ(v)` as a sparse tensor over basis-index pairs.
    pub fn delta_of(&self, v: &GradedVector) -> Result<BTreeMap<(usize, usize), Rational>> {
        let mut out: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (id, c) in v.coords() {
            let k = self.index_of(id)?;
            for (l, r, d) in &self.delta[k] {
                let entry = out.entry((*l, *r)).or_insert_with(Rational::zero);
                *entry += c * d;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// `ε(v)` in the base ring.
    pub fn epsilon_of(&self, v: &GradedVector) -> Result<BaseRingElement> {
        let mut out = BaseRingElement::zero(&self.base);
        for (id, c) in v.coords() {
            let k = self.index_of(id)?;
            out = out.add(&self.epsilon[k].scale(c))?;
        }
        Ok(out)
    }

    /// `v ⊗ w` in `C ⊗_R C`: pairs of distinct grades vanish.
    pub fn tensor(&self, v: &GradedVector, w: &GradedVector) -> Result<BTreeMap<(usize, usize), Rational>> {
        let mut out = BTreeMap::new();
        for (a, ca) in v.coords() {
            let i = self.index_of(a)?;
            for (b, cb) in w.coords() {
                let j = self.index_of(b)?;
                if self.basis[i].grade != self.basis[j].grade {
                    continue;
                }
                let c = ca * cb;
                if !c.is_zero() {
                    *out.entry((i, j)).or_insert_with(Rational::zero) += c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Basis indices of grade `x`, in basis order.
    pub fn stalk_indices(&self, x: &Point) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&k| &self.basis[k].grade == x)
            .collect()
    }

    /// Grade-`x` projection of `v` (the localization image `v_x`).
    pub fn project(&self, v: &GradedVector, x: &Point) -> Result<GradedVector> {
        let mut out = GradedVector::zero();
        for (id, c) in v.coords() {
            if self.grade_of(id)? == x {
                out.set(id.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Dense coordinates of `v` on the full basis.
    pub fn to_dense(&self, v: &GradedVector) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.basis.len()];
        for (id, c) in v.coords() {
            out[self.index_of(id)?] = c.clone();
        }
        Ok(out)
    }

    /// The left `R`-action: `f · b = f(grade(b)) · b` on basis elements.
    pub fn act(&self, f: &BaseRingElement, v: &GradedVector) -> Result<GradedVector> {
        if f.base() != &self.base {
            return Err(Error::structural("action by a ring element over a different base set"));
        }
        let mut out = GradedVector::zero();
        for (id, c) in v.coords() {
            let grade = self.grade_of(id)?;
            let scaled = c * f.value(grade);
            out.set(id.clone(), scaled);
        }
        Ok(out)
    }
}

/// One law check with a counterexample basis id when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub ok: bool,
    pub counterexample: Option<String>,
}

impl LawCheck {
    fn pass() -> Self {
        LawCheck { ok: true, counterexample: None }
    }

    fn fail(id: &str) -> Self {
        LawCheck { ok: false, counterexample: Some(id.to_string()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraReport {
    pub counit_ok: LawCheck,
    pub coassociative: LawCheck,
    pub cocommutative: LawCheck,
}

impl CoalgebraReport {
    pub fn all_ok(&self) -> bool {
        self.counit_ok.ok && self.coassociative.ok && self.cocommutative.ok
    }
}

/// Checks the counit law, coassociativity and cocommutativity by exact
/// expansion on every basis element.
pub fn check_coalgebra(c: &Coalgebra) -> CoalgebraReport {
    let mut counit = LawCheck::pass();
    let mut coassoc = LawCheck::pass();
    let mut cocomm = LawCheck::pass();
    for (k, entry) in c.basis.iter().enumerate() {
        let y = &entry.grade;
        // (id ⊗ ε) ∘ Δ = id and (ε ⊗ id) ∘ Δ = id, with ε acting through the
        // left R-action: ε(r)·l = ε(r)(y)·l for grade-y elements.
        let mut left = vec![Rational::zero(); c.dim()];
        let mut right = vec![Rational::zero(); c.dim()];
        for (l, r, coeff) in &c.delta[k] {
            left[*l] += coeff * c.epsilon[*r].value(y);
            right[*r] += coeff * c.epsilon[*l].value(y);
        }
        let is_unit = |v: &[Rational]| {
            v.iter()
                .enumerate()
                .all(|(i, x)| if i == k { x.is_one() } else { x.is_zero() })
        };
        if counit.ok && !(is_unit(&left) && is_unit(&right)) {
            counit = LawCheck::fail(&entry.id);
        }
        // (Δ ⊗ id) ∘ Δ vs (id ⊗ Δ) ∘ Δ on triples.
        let mut lhs: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        let mut rhs: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (l, r, coeff) in &c.delta[k] {
            for (a, b, d) in &c.delta[*l] {
                *lhs.entry((*a, *b, *r)).or_insert_with(Rational::zero) += coeff * d;
            }
            for (a, b, d) in &c.delta[*r] {
                *rhs.entry((*l, *a, *b)).or_insert_with(Rational::zero) += coeff * d;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        if coassoc.ok && lhs != rhs {
            coassoc = LawCheck::fail(&entry.id);
        }
        let mut flipped: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (l, r, coeff) in &c.delta[k] {
            *flipped.entry((*r, *l)).or_insert_with(Rational::zero) += coeff.clone();
        }
        flipped.retain(|_, v| !v.is_zero());
        let plain: BTreeMap<(usize, usize), Rational> = c.delta[k]
            .iter()
            .map(|(l, r, coeff)| ((*l, *r), coeff.clone()))
            .collect();
        if cocomm.ok && flipped != plain {
            cocomm = LawCheck::fail(&entry.id);
        }
    }
    CoalgebraReport { counit_ok: counit, coassociative: coassoc, cocommutative: cocomm }
}

/// The local coalgebra `C_x = C / N_x(C)`: the grade-`x` summand, with the
/// counit taking values in the scalar field (the germ ring at a point of a
/// zero-dimensional base is the field itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCoalgebra {
    point: Point,
    /// Parent basis ids of grade `point`, in parent basis order.
    ids: Vec<String>,
    delta: Vec<Vec<(usize, usize, Rational)>>,
    epsilon: Vec<Rational>,
}

impl LocalCoalgebra {
    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn delta_row(&self, k: usize) -> &[(usize, usize, Rational)] {
        &self.delta[k]
    }

    pub fn epsilon_coeff(&self, k: usize) -> &Rational {
        &self.epsilon[k]
    }

    fn local_index(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|i| i == id)
            .ok_or_else(|| Error::structural(format!("{id} is not a grade-{} basis id", self.point)))
    }

    /// Dense local coordinates of a vector supported on this stalk.
    pub fn to_dense(&self, v: &GradedVector) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (id, c) in v.coords() {
            out[self.local_index(id)?] = c.clone();
        }
        Ok(out)
    }

    pub fn from_dense(&self, coords: &[Rational]) -> GradedVector {
        let mut v = GradedVector::zero();
        for (k, c) in coords.iter().enumerate() {
            v.set(self.ids[k].clone(), c.clone());
        }
        v
    }

    /// `Δ_x(v)` as a dense matrix over local indices.
    pub fn delta_matrix_of(&self, coords: &[Rational]) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zero(n, n);
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, r, d) in &self.delta[k] {
                m[(*l, *r)] += c * d;
            }
        }
        m
    }

    pub fn epsilon_of(&self, coords: &[Rational]) -> Rational {
        coords
            .iter()
            .zip(&self.epsilon)
            .map(|(c, e)| c * e)
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Exact check of `Δ_x(ζ) = ζ ⊗ ζ` and `ε_x(ζ) = 1`.
    pub fn is_grouplike(&self, v: &GradedVector) -> Result<bool> {
        let coords = self.to_dense(v)?;
        if !self.epsilon_of(&coords).is_one() {
            return Ok(false);
        }
        let lhs = self.delta_matrix_of(&coords);
        let n = self.dim();
        let mut outer = QMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                outer[(i, j)] = &coords[i] * &coords[j];
            }
        }
        Ok(lhs == outer)
    }
}

/// Grade-`x` localization. `N_x(C)` is the span of the other grades; the
/// quotient projection is the grade projection.
pub fn localize(c: &Coalgebra, x: &Point) -> Result<LocalCoalgebra> {
    if !c.base.contains(x) {
        return Err(Error::structural(format!("localization point {x} outside the base set")));
    }
    let global = c.stalk_indices(x);
    let to_local: BTreeMap<usize, usize> = global.iter().enumerate().map(|(l, &g)| (g, l)).collect();
    let ids = global.iter().map(|&g| c.basis[g].id.clone()).collect();
    let delta = global
        .iter()
        .map(|&g| {
            c.delta[g]
                .iter()
                .map(|(l, r, coeff)| (to_local[l], to_local[r], coeff.clone()))
                .collect()
        })
        .collect();
    let epsilon = global.iter().map(|&g| c.epsilon[g].value(x)).collect();
    Ok(LocalCoalgebra { point: x.clone(), ids, delta, epsilon })
}

/// The complete set of grouplike elements of a local coalgebra, in canonical
/// (coordinate-lexicographic) order. See the solver module for the
/// applicability class; every returned element is re-verified exactly.
pub fn grouplikes(l: &LocalCoalgebra) -> Result<Vec<GradedVector>> {
    if l.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut sols = solver::local_grouplikes(l)?;
    sols.sort();
    let out: Vec<GradedVector> = sols.iter().map(|coords| l.from_dense(coords)).collect();
    for v in &out {
        if !l.is_grouplike(v)? {
            return Err(Error::integrity(format!(
                "solver returned a non-grouplike element {v} at {}",
                l.point()
            )));
        }
    }
    Ok(out)
}

/// Finds `c'` with `Δ(c) = c ⊗ c'`, the stalk-wise rank-one factorization
/// through `c`. The zero vector factors through the zero witness.
pub fn weakly_grouplike_witness(c: &Coalgebra, v: &GradedVector) -> Result<Option<GradedVector>> {
    let dense = c.to_dense(v)?;
    let mut witness = GradedVector::zero();
    for x in c.base.points() {
        let stalk = c.stalk_indices(x);
        if stalk.is_empty() {
            continue;
        }
        let n = stalk.len();
        let to_local: BTreeMap<usize, usize> = stalk.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let mut t = QMatrix::zero(n, n);
        for (li, &g) in stalk.iter().enumerate() {
            let _ = li;
            if dense[g].is_zero() {
                continue;
            }
            for (l, r, d) in &c.delta[g] {
                t[(to_local[l], to_local[r])] += &dense[g] * d;
            }
        }
        let cx: Vec<Rational> = stalk.iter().map(|&g| dense[g].clone()).collect();
        if cx.iter().all(|z| z.is_zero()) {
            if (0..n).any(|i| (0..n).any(|j| !t[(i, j)].is_zero())) {
                return Ok(None);
            }
            continue;
        }
        let i0 = cx.iter().position(|z| !z.is_zero()).unwrap();
        let inv = cx[i0].recip();
        let w: Vec<Rational> = (0..n).map(|j| &t[(i0, j)] * &inv).collect();
        for i in 0..n {
            for j in 0..n {
                if t[(i, j)] != &cx[i] * &w[j] {
                    return Ok(None);
                }
            }
        }
        for (j, &g) in stalk.iter().enumerate() {
            if !w[j].is_zero() {
                witness.set(c.basis[g].id.clone(), w[j].clone());
            }
        }
    }
    Ok(Some(witness))
}

/// `ε(c)(x) = 1` in the discrete model of germ-level normalization.
pub fn is_normalized_at(c: &Coalgebra, v: &GradedVector, x: &Point) -> Result<bool> {
    Ok(c.epsilon_of(v)?.value(x).is_one())
}

/// A verdict evaluated at every point of the base, with the conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointwiseVerdict {
    pub per_point: BTreeMap<Point, bool>,
    pub all: bool,
}

impl PointwiseVerdict {
    fn collect(per_point: BTreeMap<Point, bool>) -> Self {
        let all = per_point.values().all(|&b| b);
        PointwiseVerdict { per_point, all }
    }

    pub fn at(&self, x: &Point) -> bool {
        *self.per_point.get(x).unwrap_or(&false)
    }
}

fn normalized_localizations(
    c: &Coalgebra,
    lambda: &[GradedVector],
    x: &Point,
) -> Result<Vec<Vec<Rational>>> {
    let local = localize(c, x)?;
    let mut out = Vec::new();
    for v in lambda {
        if is_normalized_at(c, v, x)? {
            let proj = c.project(v, x)?;
            out.push(local.to_dense(&proj)?);
        }
    }
    Ok(out)
}

/// Whether the `ε`-normalized localizations of `Λ` span `C_x`, per point.
pub fn normally_generates(c: &Coalgebra, lambda: &[GradedVector]) -> Result<PointwiseVerdict> {
    let mut per_point = BTreeMap::new();
    for x in c.base.points() {
        let vecs = normalized_localizations(c, lambda, x)?;
        let dim = c.stalk_indices(x).len();
        let rank = if vecs.is_empty() { 0 } else { QMatrix::from_rows(vecs).rank() };
        per_point.insert(x.clone(), rank == dim);
    }
    Ok(PointwiseVerdict::collect(per_point))
}

/// Whether the *distinct* `ε`-normalized localizations of `Λ` are linearly
/// independent, per point. Coinciding localizations are merged first,
/// mirroring the escape clause in the definition of normal independence.
pub fn normally_independent(c: &Coalgebra, lambda: &[GradedVector]) -> Result<PointwiseVerdict> {
    let mut per_point = BTreeMap::new();
    for x in c.base.points() {
        let mut vecs = normalized_localizations(c, lambda, x)?;
        vecs.sort();
        vecs.dedup();
        let rank = if vecs.is_empty() {
            0
        } else {
            QMatrix::from_rows(vecs.clone()).rank()
        };
        per_point.insert(x.clone(), rank == vecs.len());
    }
    Ok(PointwiseVerdict::collect(per_point))
}

/// Linear independence of a set of grouplikes of a local coalgebra. Over the
/// rationals the hypotheses of the independence theorem for grouplikes hold
/// automatically, so distinct grouplikes are expected independent; this is
/// the executable witness of that fact.
pub fn check_grouplike_independence(l: &LocalCoalgebra, g: &[GradedVector]) -> Result<bool> {
    let mut rows = Vec::new();
    for v in g {
        if !l.is_grouplike(v)? {
            return Err(Error::precondition(format!(
                "{v} is not grouplike in the local coalgebra at {}",
                l.point()
            )));
        }
        rows.push(l.to_dense(v)?);
    }
    if rows.is_empty() {
        return Ok(true);
    }
    let count = rows.len();
    Ok(QMatrix::from_rows(rows).rank() == count)
}

/// A grade-preserving linear map between coalgebras, given on basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraMorphism {
    pub source: Coalgebra,
    pub target: Coalgebra,
    matrix: Vec<GradedVector>,
}

impl CoalgebraMorphism {
    pub fn new(
        source: Coalgebra,
        target: Coalgebra,
        images: BTreeMap<String, GradedVector>,
    ) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::structural("coalgebra morphism across different base sets"));
        }
        let mut matrix = Vec::with_capacity(source.dim());
        for entry in &source.basis {
            let image = images.get(&entry.id).cloned().unwrap_or_default();
            for id in image.coords().keys() {
                if target.grade_of(id)? != &entry.grade {
                    return Err(Error::structural(format!(
                        "image of {} is not grade-preserving",
                        entry.id
                    )));
                }
            }
            matrix.push(image);
        }
        Ok(CoalgebraMorphism { source, target, matrix })
    }

    pub fn identity(c: &Coalgebra) -> Self {
        let matrix = c.basis.iter().map(|e| GradedVector::basis(e.id.clone())).collect();
        CoalgebraMorphism { source: c.clone(), target: c.clone(), matrix }
    }

    pub fn image_of_basis(&self, k: usize) -> &GradedVector {
        &self.matrix[k]
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

    pub fn apply(&self, v: &GradedVector) -> Result<GradedVector> {
        let mut out = GradedVector::zero();
        for (id, c) in v.coords() {
            let k = self.source.index_of(id)?;
            out = out.add(&self.matrix[k].scale(c));
        }
        Ok(out)
    }

    pub fn compose(&self, inner: &CoalgebraMorphism) -> Result<CoalgebraMorphism> {
        if inner.target != self.source {
            return Err(Error::structural("composition of non-composable coalgebra morphisms"));
        }
        let mut images = BTreeMap::new();
        for entry in &inner.source.basis {
            let v = self.apply(&inner.apply(&GradedVector::basis(entry.id.clone()))?)?;
            images.insert(entry.id.clone(), v);
        }
        CoalgebraMorphism::new(inner.source.clone(), self.target.clone(), images)
    }

    /// Exact check that the map commutes with `Δ` and `ε`.
    pub fn is_coalgebra_morphism(&self) -> Result<bool> {
        for (k, entry) in self.source.basis.iter().enumerate() {
            let image = &self.matrix[k];
            let delta_after = self.target.delta_of(image)?;
            let mut delta_before: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (l, r, c) in self.source.delta_row(k) {
                let il = &self.matrix[*l];
                let ir = &self.matrix[*r];
                for (pair, d) in self.target.tensor(il, ir)? {
                    *delta_before.entry(pair).or_insert_with(Rational::zero) += c * &d;
                }
            }
            delta_before.retain(|_, v| !v.is_zero());
            if delta_after != delta_before {
                return Ok(false);
            }
            if self.target.epsilon_of(image)? != *self.source.epsilon_row(k) {
                let _ = entry;
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{rat_int, BaseRingElement};
    use crate::fixtures;

    fn pt(i: usize) -> Point {
        Point::new(i.to_string())
    }

    /// The group coalgebra of Z/2 over one point: both basis elements
    /// grouplike with counit one.
    fn z2_coalgebra() -> Coalgebra {
        fixtures::group_coalgebra(2)
    }

    #[test]
    fn group_coalgebra_satisfies_all_laws() {
        let report = check_coalgebra(&z2_coalgebra());
        assert!(report.all_ok());
    }

    #[test]
    fn dependent_grouplikes_fixture_satisfies_all_laws() {
        let report = check_coalgebra(&fixtures::dependent_grouplikes());
        assert!(report.counit_ok.ok);
        assert!(report.coassociative.ok);
        assert!(report.cocommutative.ok);
    }

    #[test]
    fn broken_counit_is_reported_with_counterexample() {
        // Δ(b) = b ⊗ b but ε(b) = 0.
        let base = BaseSet::range(1);
        let basis = vec![BasisEntry { id: "b".into(), grade: pt(1) }];
        let mut delta = BTreeMap::new();
        delta.insert("b".to_string(), vec![("b".to_string(), "b".to_string(), rat_int(1))]);
        let c = Coalgebra::new(base, basis, delta, BTreeMap::new()).unwrap();
        let report = check_coalgebra(&c);
        assert!(!report.counit_ok.ok);
        assert_eq!(report.counit_ok.counterexample.as_deref(), Some("b"));
    }

    #[test]
    fn localize_dependent_grouplikes_at_point_two_drops_the_p_term() {
        let c = fixtures::dependent_grouplikes();
        let l = localize(&c, &pt(2)).unwrap();
        assert_eq!(l.dim(), 2);
        // Δ_2(e2) = e1 ⊗ e2 + e2 ⊗ e1; the e2 ⊗ e2 term dies since p = δ_1
        // vanishes at 2.
        let e2 = l.local_index("e2@2").unwrap();
        let e1 = l.local_index("e1@2").unwrap();
        let mut row: Vec<(usize, usize, Rational)> = l.delta_row(e2).to_vec();
        row.sort_by_key(|(l, r, _)| (*l, *r));
        let expected = {
            let mut v = vec![
                (e1, e2, rat_int(1)),
                (e2, e1, rat_int(1)),
            ];
            v.sort_by_key(|(l, r, _)| (*l, *r));
            v
        };
        assert_eq!(row, expected);
    }

    #[test]
    fn localize_single_point_coalgebra_is_whole() {
        let c = z2_coalgebra();
        let l = localize(&c, &Point::new("*")).unwrap();
        assert_eq!(l.dim(), c.dim());
    }

    #[test]
    fn localize_outside_base_is_structural_error() {
        let c = z2_coalgebra();
        assert!(matches!(localize(&c, &pt(9)), Err(Error::Structural(_))));
    }

    #[test]
    fn grouplikes_of_z2_are_unit_and_flip() {
        let c = z2_coalgebra();
        let l = localize(&c, &Point::new("*")).unwrap();
        let g = grouplikes(&l).unwrap();
        assert_eq!(g.len(), 2);
        // Frozen from the quadratic system a² = a, b² = b, ab = 0, a + b = 1:
        // the two solutions are the basis elements themselves, ordered by
        // coordinate vector.
        assert_eq!(g[0], GradedVector::basis("g1"));
        assert_eq!(g[1], GradedVector::basis("g0"));
    }

    #[test]
    fn grouplikes_of_dependent_grouplikes_localizations() {
        let c = fixtures::dependent_grouplikes();
        let g1 = grouplikes(&localize(&c, &pt(1)).unwrap()).unwrap();
        // Frozen from a² = a, ab = b, b² = b, a = 1: solutions e1 and e1+e2,
        // in coordinate-lexicographic order.
        let e1 = GradedVector::basis("e1@1");
        let e1e2 = e1.add(&GradedVector::basis("e2@1"));
        assert_eq!(g1, vec![e1, e1e2]);
        let g2 = grouplikes(&localize(&c, &pt(2)).unwrap()).unwrap();
        // Frozen: b² = 0 forces b = 0, leaving e1 alone.
        assert_eq!(g2, vec![GradedVector::basis("e1@2")]);
    }

    #[test]
    fn primitive_element_coalgebra_has_unit_grouplike_only() {
        let c = fixtures::primitive_element_coalgebra();
        let l = localize(&c, &Point::new("*")).unwrap();
        let g = grouplikes(&l).unwrap();
        assert_eq!(g, vec![GradedVector::basis("u")]);
    }

    #[test]
    fn witness_for_basis_and_sums() {
        let c = fixtures::sheaf_coalgebra_sizes(&[2, 1]);
        // A single basis arrow is its own witness.
        let e = GradedVector::basis("s1_0");
        let w = weakly_grouplike_witness(&c, &e).unwrap();
        assert_eq!(w, Some(e.clone()));
        // Two distinct same-grade basis elements have stalk rank 2: no witness.
        let f = GradedVector::basis("s1_1");
        assert_eq!(weakly_grouplike_witness(&c, &e.add(&f)).unwrap(), None);
        // Per-stalk factorization across grades: δ_1·e + δ_2·g factors with
        // witness e + g.
        let g = GradedVector::basis("s2_0");
        let v = e.add(&g);
        assert_eq!(weakly_grouplike_witness(&c, &v).unwrap(), Some(v.clone()));
        // Zero factors through zero.
        assert_eq!(
            weakly_grouplike_witness(&c, &GradedVector::zero()).unwrap(),
            Some(GradedVector::zero())
        );
    }

    #[test]
    fn normalization_checks_on_dependent_grouplikes() {
        let c = fixtures::dependent_grouplikes();
        let e2 = fixtures::dependent_grouplikes_element("e2");
        assert!(!is_normalized_at(&c, &e2, &pt(1)).unwrap());
        let e1 = fixtures::dependent_grouplikes_element("e1");
        assert!(is_normalized_at(&c, &e1.add(&e2), &pt(1)).unwrap());
        // Group elements have counit one everywhere.
        let z2 = z2_coalgebra();
        let g = GradedVector::basis("g1");
        assert!(is_normalized_at(&z2, &g, &Point::new("*")).unwrap());
    }

    #[test]
    fn sheaf_basis_arrows_are_normally_independent_everywhere() {
        let sc = fixtures::sheaf_coalgebra_sizes(&[2, 3]);
        let all: Vec<GradedVector> = sc
            .basis()
            .iter()
            .map(|e| GradedVector::basis(e.id.clone()))
            .collect();
        assert!(normally_independent(&sc, &all).unwrap().all);
    }

    #[test]
    fn normal_generation_on_dependent_grouplikes() {
        let c = fixtures::dependent_grouplikes();
        let e1 = fixtures::dependent_grouplikes_element("e1");
        let ce = fixtures::dependent_grouplikes_element("c");
        let verdict = normally_generates(&c, &[e1.clone(), ce.clone()]).unwrap();
        assert!(verdict.at(&pt(1)));
        // At 2 only the e1-direction survives: c localizes to e1 there.
        assert!(!verdict.at(&pt(2)));
        assert!(!verdict.all);
        // In a sheaf coalgebra the basis arrows generate everywhere.
        let sc = fixtures::sheaf_coalgebra_sizes(&[2, 1]);
        let all: Vec<GradedVector> = sc.basis().iter().map(|e| GradedVector::basis(e.id.clone())).collect();
        assert!(normally_generates(&sc, &all).unwrap().all);
        // The empty family generates nothing.
        assert!(!normally_generates(&c, &[]).unwrap().all);
    }

    #[test]
    fn normal_independence_merges_coinciding_localizations() {
        let c = fixtures::dependent_grouplikes();
        let e1 = fixtures::dependent_grouplikes_element("e1");
        let ce = fixtures::dependent_grouplikes_element("c");
        // q·e1 = q·c with q = δ_2: R-linearly dependent, yet normally
        // independent after the merge clause.
        let q = BaseRingElement::indicator(c.base(), &pt(2)).unwrap();
        let qe1 = c.act(&q, &e1).unwrap();
        let qc = c.act(&q, &ce).unwrap();
        assert_eq!(qe1, qc);
        let verdict = normally_independent(&c, &[e1, ce]).unwrap();
        assert!(verdict.at(&pt(1)));
        assert!(verdict.at(&pt(2)));
        assert!(verdict.all);
    }

    #[test]
    fn zero_vector_is_discarded_by_normalization() {
        let c = fixtures::dependent_grouplikes();
        let verdict = normally_independent(&c, &[GradedVector::zero()]).unwrap();
        assert!(verdict.all);
    }

    #[test]
    fn grouplike_independence_is_verified() {
        let c = fixtures::dependent_grouplikes();
        let l = localize(&c, &pt(1)).unwrap();
        let g = grouplikes(&l).unwrap();
        assert!(check_grouplike_independence(&l, &g).unwrap());
        // Non-grouplike input violates the precondition.
        let bogus = GradedVector::basis("e2@1");
        assert!(matches!(
            check_grouplike_independence(&l, &[bogus]),
            Err(Error::Precondition(_))
        ));
    }
}
