//! The finite base set `M`, exact rational scalars, and the base ring
//! `R = Fun(M, Q)` with pointwise operations.
//!
//! Everything downstream is graded over `M`; an element of `R` is a finite
//! map from points to rationals with absent entries read as zero. The
//! indicator `δ_x` is the local identity at `x` and, for finite `M`, the
//! indicators sum to the ring identity.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. `BigRational` keeps values in lowest terms with a
/// positive denominator, which is exactly the invariant the artifact needs.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"n"`. The serialized form is always normalized, but the
/// parser accepts any exact rational string and normalizes it.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::structural(format!("invalid integer {t:?} in rational")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let n = parse_int(num)?;
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(Error::structural(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Formats a rational as `"n"` when integral and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A point of the base set, identified by a nonempty string label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(String);

impl Point {
    pub fn new(id: impl Into<String>) -> Self {
        Point(id.into())
    }

    pub fn id(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Point {
    fn from(s: &str) -> Self {
        Point::new(s)
    }
}

/// The finite base set `M`. Points are kept in lexicographic order so every
/// downstream report is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSet {
    points: Vec<Point>,
}

impl BaseSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::structural("base set must be nonempty"));
        }
        let mut points = points;
        points.sort();
        for pair in points.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::structural(format!("duplicate point id {}", pair[0])));
            }
        }
        if points.iter().any(|p| p.id().is_empty()) {
            return Err(Error::structural("point ids must be nonempty"));
        }
        Ok(BaseSet { points })
    }

    /// Base set `{"1", ..., "n"}`.
    pub fn range(n: usize) -> Self {
        assert!(n >= 1, "base set must be nonempty");
        BaseSet::new((1..=n).map(|i| Point::new(i.to_string())).collect()).unwrap()
    }

    pub fn from_ids<I: IntoIterator<Item = S>, S: Into<String>>(ids: I) -> Result<Self> {
        BaseSet::new(ids.into_iter().map(|s| Point::new(s)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }
}

/// An element of `R = Fun(M, Q)`: a finite map from points to rationals.
/// Zero values are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseRingElement {
    base: BaseSet,
    values: BTreeMap<Point, Rational>,
}

/// The pointwise operations exposed by `ring_combine`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
    Scale(Rational),
}

impl BaseRingElement {
    pub fn zero(base: &BaseSet) -> Self {
        BaseRingElement {
            base: base.clone(),
            values: BTreeMap::new(),
        }
    }

    pub fn from_values(base: &BaseSet, values: BTreeMap<Point, Rational>) -> Result<Self> {
        for p in values.keys() {
            if !base.contains(p) {
                return Err(Error::structural(format!("value at {p} outside the base set")));
            }
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(BaseRingElement { base: base.clone(), values })
    }

    /// The indicator `δ_x`: the function equal to 1 at `x` and 0 elsewhere.
    pub fn indicator(base: &BaseSet, x: &Point) -> Result<Self> {
        let mut values = BTreeMap::new();
        values.insert(x.clone(), Rational::one());
        BaseRingElement::from_values(base, values)
    }

    /// The constant function 1, i.e. the ring identity for finite `M`.
    pub fn one(base: &BaseSet) -> Self {
        let values = base
            .points()
            .iter()
            .map(|p| (p.clone(), Rational::one()))
            .collect();
        BaseRingElement { base: base.clone(), values }
    }

    pub fn base(&self) -> &BaseSet {
        &self.base
    }

    pub fn value(&self, p: &Point) -> Rational {
        self.values.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &BTreeMap<Point, Rational> {
        &self.values
    }

    pub fn set_value(&mut self, p: Point, v: Rational) {
        if v.is_zero() {
            self.values.remove(&p);
        } else {
            self.values.insert(p, v);
        }
    }

    /// The set of points with nonzero value.
    pub fn support(&self) -> Vec<Point> {
        self.values.keys().cloned().collect()
    }

    pub fn add(&self, other: &BaseRingElement) -> Result<BaseRingElement> {
        ring_combine(self, other, RingOp::Add)
    }

    pub fn mul(&self, other: &BaseRingElement) -> Result<BaseRingElement> {
        ring_combine(self, other, RingOp::Mul)
    }

    pub fn scale(&self, c: &Rational) -> BaseRingElement {
        let values = self
            .values
            .iter()
            .map(|(p, v)| (p.clone(), v * c))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        BaseRingElement { base: self.base.clone(), values }
    }

    /// `f ∘ τ` for a partial map `τ` on points: `(f ∘ τ)(v) = f(τ(v))` where τ
    /// is defined, 0 elsewhere.
    pub fn compose_partial(&self, tau: &BTreeMap<Point, Point>) -> BaseRingElement {
        let mut out = BaseRingElement::zero(&self.base);
        for (v, w) in tau {
            let val = self.value(w);
            if !val.is_zero() {
                out.values.insert(v.clone(), val);
            }
        }
        out
    }
}

/// Pointwise combination of two base ring elements. `Scale` ignores `g`.
pub fn ring_combine(
    f: &BaseRingElement,
    g: &BaseRingElement,
    kind: RingOp,
) -> Result<BaseRingElement> {
    if f.base != g.base {
        return Err(Error::structural("ring_combine on mismatched base sets"));
    }
    let mut values = BTreeMap::new();
    match kind {
        RingOp::Add => {
            for p in f.values.keys().chain(g.values.keys()) {
                let v = f.value(p) + g.value(p);
                if !v.is_zero() {
                    values.insert(p.clone(), v);
                }
            }
        }
        RingOp::Mul => {
            for p in f.values.keys() {
                let v = f.value(p) * g.value(p);
                if !v.is_zero() {
                    values.insert(p.clone(), v);
                }
            }
        }
        RingOp::Scale(c) => {
            if c.is_zero() {
                return Ok(BaseRingElement::zero(&f.base));
            }
            for (p, v) in &f.values {
                values.insert(p.clone(), v * &c);
            }
        }
    }
    Ok(BaseRingElement { base: f.base.clone(), values })
}

impl fmt::Display for BaseRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(p, v)| format!("{}·δ_{}", format_rational(v), p))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
