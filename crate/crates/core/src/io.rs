//! One JSON document format for every object, with a `type` discriminator.
//! Serialization is canonical (basis order, sorted tables, normalized
//! rational strings), so serialize → parse is the identity and emitted
//! files are byte-identical across runs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::base::{format_rational, parse_rational, BaseRingElement, BaseSet, Point};
use crate::coalgebra::{BasisEntry, Coalgebra, DeltaRow, GradedVector};
use crate::error::{Error, Result};
use crate::groupoid::{ArrowEntry, FiniteGroupoid};
use crate::hopf::{AlgBasisEntry, HopfAlgebroid};
use crate::sheaf::FiniteSheaf;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Document {
    Groupoid(GroupoidDoc),
    Coalgebra(CoalgebraDoc),
    Sheaf(SheafDoc),
    Algebroid(AlgebroidDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => "groupoid",
            Document::Coalgebra(_) => "coalgebra",
            Document::Sheaf(_) => "sheaf",
            Document::Algebroid(_) => "algebroid",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupoidDoc {
    pub points: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub compose: Vec<[String; 3]>,
    pub units: BTreeMap<String, String>,
    pub inverses: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisDoc {
    pub id: String,
    pub grade: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DeltaTermDoc {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DeltaRowDoc {
    pub id: String,
    pub terms: Vec<DeltaTermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EpsilonValueDoc {
    pub point: String,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EpsilonRowDoc {
    pub id: String,
    pub values: Vec<EpsilonValueDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoalgebraDoc {
    pub points: Vec<String>,
    pub basis: Vec<BasisDoc>,
    pub delta: Vec<DeltaRowDoc>,
    pub epsilon: Vec<EpsilonRowDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SheafDoc {
    pub points: Vec<String>,
    pub stalks: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgBasisDoc {
    pub id: String,
    pub tgt: String,
    pub src: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CombTermDoc {
    pub id: String,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProductRowDoc {
    pub left: String,
    pub right: String,
    pub result: Vec<CombTermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgEpsilonRowDoc {
    pub id: String,
    pub point: String,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AntipodeRowDoc {
    pub id: String,
    pub result: Vec<CombTermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebroidDoc {
    pub points: Vec<String>,
    pub basis: Vec<AlgBasisDoc>,
    pub product: Vec<ProductRowDoc>,
    pub delta: Vec<DeltaRowDoc>,
    pub epsilon: Vec<AlgEpsilonRowDoc>,
    pub antipode: Vec<AntipodeRowDoc>,
    pub units: BTreeMap<String, String>,
}

pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serialization");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::structural(format!("invalid document: {e}")))
}

pub fn groupoid_to_doc(g: &FiniteGroupoid) -> GroupoidDoc {
    let arrows = g
        .arrows()
        .iter()
        .map(|a| ArrowDoc { id: a.id.clone(), src: a.src.id().to_string(), tgt: a.tgt.id().to_string() })
        .collect();
    let compose = g
        .compose_ids()
        .iter()
        .map(|(&(a, b), &ab)| {
            [
                g.arrows()[a].id.clone(),
                g.arrows()[b].id.clone(),
                g.arrows()[ab].id.clone(),
            ]
        })
        .collect();
    let units = g
        .base()
        .points()
        .iter()
        .map(|x| {
            (
                x.id().to_string(),
                g.arrows()[g.unit_at(x).unwrap()].id.clone(),
            )
        })
        .collect();
    let inverses = g
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| (a.id.clone(), g.arrows()[g.inverse_of(i)].id.clone()))
        .collect();
    GroupoidDoc {
        points: g.base().points().iter().map(|p| p.id().to_string()).collect(),
        arrows,
        compose,
        units,
        inverses,
    }
}

pub fn doc_to_groupoid(doc: &GroupoidDoc) -> Result<FiniteGroupoid> {
    let base = BaseSet::from_ids(doc.points.iter().cloned())?;
    let arrows = doc
        .arrows
        .iter()
        .map(|a| ArrowEntry {
            id: a.id.clone(),
            src: Point::new(a.src.clone()),
            tgt: Point::new(a.tgt.clone()),
        })
        .collect();
    let compose = doc
        .compose
        .iter()
        .map(|[a, b, ab]| ((a.clone(), b.clone()), ab.clone()))
        .collect();
    let units = doc
        .units
        .iter()
        .map(|(x, u)| (Point::new(x.clone()), u.clone()))
        .collect();
    let inverses = doc
        .inverses
        .iter()
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    FiniteGroupoid::new(base, arrows, compose, units, inverses)
}

pub fn coalgebra_to_doc(c: &Coalgebra) -> CoalgebraDoc {
    let basis = c
        .basis()
        .iter()
        .map(|b| BasisDoc { id: b.id.clone(), grade: b.grade.id().to_string() })
        .collect();
    let mut delta = Vec::new();
    let mut epsilon = Vec::new();
    for (k, b) in c.basis().iter().enumerate() {
        let terms: Vec<DeltaTermDoc> = c
            .delta_row(k)
            .iter()
            .map(|(l, r, coeff)| DeltaTermDoc {
                left: c.basis()[*l].id.clone(),
                right: c.basis()[*r].id.clone(),
                coeff: format_rational(coeff),
            })
            .collect();
        if !terms.is_empty() {
            delta.push(DeltaRowDoc { id: b.id.clone(), terms });
        }
        let values: Vec<EpsilonValueDoc> = c
            .epsilon_row(k)
            .values()
            .iter()
            .map(|(p, v)| EpsilonValueDoc { point: p.id().to_string(), coeff: format_rational(v) })
            .collect();
        if !values.is_empty() {
            epsilon.push(EpsilonRowDoc { id: b.id.clone(), values });
        }
    }
    CoalgebraDoc {
        points: c.base().points().iter().map(|p| p.id().to_string()).collect(),
        basis,
        delta,
        epsilon,
    }
}

pub fn doc_to_coalgebra(doc: &CoalgebraDoc) -> Result<Coalgebra> {
    let base = BaseSet::from_ids(doc.points.iter().cloned())?;
    let basis = doc
        .basis
        .iter()
        .map(|b| BasisEntry { id: b.id.clone(), grade: Point::new(b.grade.clone()) })
        .collect();
    let mut delta = BTreeMap::new();
    for row in &doc.delta {
        let mut terms: DeltaRow = Vec::new();
        for t in &row.terms {
            terms.push((t.left.clone(), t.right.clone(), parse_rational(&t.coeff)?));
        }
        delta.insert(row.id.clone(), terms);
    }
    let mut epsilon = BTreeMap::new();
    for row in &doc.epsilon {
        let mut values = BTreeMap::new();
        for v in &row.values {
            values.insert(Point::new(v.point.clone()), parse_rational(&v.coeff)?);
        }
        epsilon.insert(row.id.clone(), BaseRingElement::from_values(&base, values)?);
    }
    Coalgebra::new(base, basis, delta, epsilon)
}

pub fn sheaf_to_doc(e: &FiniteSheaf) -> SheafDoc {
    SheafDoc {
        points: e.base().points().iter().map(|p| p.id().to_string()).collect(),
        stalks: e
            .stalks()
            .iter()
            .map(|(p, elems)| (p.id().to_string(), elems.clone()))
            .collect(),
    }
}

pub fn doc_to_sheaf(doc: &SheafDoc) -> Result<FiniteSheaf> {
    let base = BaseSet::from_ids(doc.points.iter().cloned())?;
    let stalks = doc
        .stalks
        .iter()
        .map(|(p, elems)| (Point::new(p.clone()), elems.clone()))
        .collect();
    FiniteSheaf::new(base, stalks)
}

pub fn algebroid_to_doc(a: &HopfAlgebroid) -> AlgebroidDoc {
    let basis_entries = a.basis();
    let basis = basis_entries
        .iter()
        .map(|b| AlgBasisDoc {
            id: b.id.clone(),
            tgt: b.tgt.id().to_string(),
            src: b.src.id().to_string(),
        })
        .collect();
    let mut product = Vec::new();
    for l in 0..a.dim() {
        for r in 0..a.dim() {
            let row = a.product_row(l, r);
            if row.is_empty() {
                continue;
            }
            product.push(ProductRowDoc {
                left: basis_entries[l].id.clone(),
                right: basis_entries[r].id.clone(),
                result: row
                    .iter()
                    .map(|(&k, c)| CombTermDoc {
                        id: basis_entries[k].id.clone(),
                        coeff: format_rational(c),
                    })
                    .collect(),
            });
        }
    }
    let mut delta = Vec::new();
    let mut epsilon = Vec::new();
    let mut antipode = Vec::new();
    for (k, b) in basis_entries.iter().enumerate() {
        let terms: Vec<DeltaTermDoc> = a
            .delta_row(k)
            .iter()
            .map(|(l, r, coeff)| DeltaTermDoc {
                left: basis_entries[*l].id.clone(),
                right: basis_entries[*r].id.clone(),
                coeff: format_rational(coeff),
            })
            .collect();
        if !terms.is_empty() {
            delta.push(DeltaRowDoc { id: b.id.clone(), terms });
        }
        for (p, v) in a.epsilon_row(k).values() {
            epsilon.push(AlgEpsilonRowDoc {
                id: b.id.clone(),
                point: p.id().to_string(),
                coeff: format_rational(v),
            });
        }
        let s = a.antipode_row(k);
        if !s.is_empty() {
            antipode.push(AntipodeRowDoc {
                id: b.id.clone(),
                result: s
                    .iter()
                    .map(|(&m, c)| CombTermDoc {
                        id: basis_entries[m].id.clone(),
                        coeff: format_rational(c),
                    })
                    .collect(),
            });
        }
    }
    let units = a
        .units()
        .iter()
        .map(|(x, &u)| (x.id().to_string(), basis_entries[u].id.clone()))
        .collect();
    AlgebroidDoc {
        points: a.base().points().iter().map(|p| p.id().to_string()).collect(),
        basis,
        product,
        delta,
        epsilon,
        antipode,
        units,
    }
}

pub fn doc_to_algebroid(doc: &AlgebroidDoc) -> Result<HopfAlgebroid> {
    let base = BaseSet::from_ids(doc.points.iter().cloned())?;
    let basis = doc
        .basis
        .iter()
        .map(|b| AlgBasisEntry {
            id: b.id.clone(),
            tgt: Point::new(b.tgt.clone()),
            src: Point::new(b.src.clone()),
        })
        .collect();
    let mut product = BTreeMap::new();
    for row in &doc.product {
        let mut terms = Vec::new();
        for t in &row.result {
            terms.push((t.id.clone(), parse_rational(&t.coeff)?));
        }
        product.insert((row.left.clone(), row.right.clone()), terms);
    }
    let mut delta = BTreeMap::new();
    for row in &doc.delta {
        let mut terms: DeltaRow = Vec::new();
        for t in &row.terms {
            terms.push((t.left.clone(), t.right.clone(), parse_rational(&t.coeff)?));
        }
        delta.insert(row.id.clone(), terms);
    }
    let mut epsilon: BTreeMap<String, BaseRingElement> = BTreeMap::new();
    for row in &doc.epsilon {
        let entry = epsilon
            .entry(row.id.clone())
            .or_insert_with(|| BaseRingElement::zero(&base));
        let mut updated = entry.clone();
        updated.set_value(Point::new(row.point.clone()), parse_rational(&row.coeff)?);
        *entry = updated;
    }
    let mut antipode = BTreeMap::new();
    for row in &doc.antipode {
        let mut terms = Vec::new();
        for t in &row.result {
            terms.push((t.id.clone(), parse_rational(&t.coeff)?));
        }
        antipode.insert(row.id.clone(), terms);
    }
    let units = doc
        .units
        .iter()
        .map(|(x, u)| (Point::new(x.clone()), u.clone()))
        .collect();
    HopfAlgebroid::new(base, basis, product, delta, epsilon, antipode, units)
}

/// Typed wrappers so callers can round-trip whole documents.
pub fn groupoid_document(g: &FiniteGroupoid) -> Document {
    Document::Groupoid(groupoid_to_doc(g))
}

pub fn coalgebra_document(c: &Coalgebra) -> Document {
    Document::Coalgebra(coalgebra_to_doc(c))
}

pub fn sheaf_document(e: &FiniteSheaf) -> Document {
    Document::Sheaf(sheaf_to_doc(e))
}

pub fn algebroid_document(a: &HopfAlgebroid) -> Document {
    Document::Algebroid(algebroid_to_doc(a))
}

/// Serializes a graded vector for report output.
pub fn vector_to_doc(v: &GradedVector) -> BTreeMap<String, String> {
    v.coords()
        .iter()
        .map(|(id, c)| (id.clone(), format_rational(c)))
        .collect()
}
