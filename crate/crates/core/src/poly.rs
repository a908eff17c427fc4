//! Univariate polynomial helpers over the rationals.
//!
//! The grouplike solver needs exactly three facts about a minimal polynomial:
//! whether it is squarefree, which rational roots it has, and whether the
//! rational roots exhaust its degree. Rational roots are found without any
//! integer factorization: the polynomial is rescaled to a monic integer one,
//! whose rational roots are integers, and those are isolated by Sturm-chain
//! bisection on half-integer endpoints (a monic integer polynomial has no
//! half-integer roots, so the endpoints are never roots).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::base::Rational;

/// Coefficients low to high; the zero polynomial is the empty vector.
pub type Poly = Vec<Rational>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn eval(p: &Poly, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

/// Euclidean remainder of `a` by `b` (`b` nonzero).
fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let factor = &r[dr] / &lead;
        let shift = dr - db;
        for i in 0..=db {
            let t = &r[i + shift] - &(&factor * &b[i]);
            r[i + shift] = t;
        }
        r = trim(r);
    }
    r
}

/// Monic gcd.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = a[d].recip();
        for c in &mut a {
            *c *= inv.clone();
        }
    }
    a
}

pub fn is_squarefree(p: &Poly) -> bool {
    match degree(p) {
        None | Some(0) => true,
        Some(_) => degree(&gcd(p, &derivative(p))) == Some(0),
    }
}

/// Exact quotient (caller guarantees divisibility).
fn div_exact(a: &Poly, b: &Poly) -> Poly {
    let mut r = trim(a.clone());
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let factor = &r[dr] / &lead;
        let shift = dr - db;
        q[shift] = factor.clone();
        for i in 0..=db {
            let t = &r[i + shift] - &(&factor * &b[i]);
            r[i + shift] = t;
        }
        r = trim(r);
    }
    debug_assert!(r.is_empty(), "div_exact on non-divisible input");
    trim(q)
}

/// The radical `p / gcd(p, p')`: same roots, each simple.
pub fn squarefree_part(p: &Poly) -> Poly {
    match degree(p) {
        None | Some(0) => trim(p.clone()),
        Some(_) => {
            let g = gcd(p, &derivative(p));
            if degree(&g) == Some(0) {
                trim(p.clone())
            } else {
                div_exact(p, &g)
            }
        }
    }
}

fn lcm_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b / num_integer_gcd(a, b)).abs()
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// All rational roots of a squarefree nonconstant polynomial, sorted, plus a
/// flag telling whether they exhaust its degree (i.e. the polynomial splits
/// into rational linear factors).
pub fn rational_roots_squarefree(p: &Poly) -> (Vec<Rational>, bool) {
    let p = trim(p.clone());
    let deg = degree(&p).expect("nonconstant polynomial expected");
    assert!(deg >= 1);
    // Clear denominators.
    let mut denom_lcm = BigInt::one();
    for c in &p {
        denom_lcm = lcm_bigint(&denom_lcm, c.denom());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    // q(u) = a_n^(n-1) p(u / a_n) is monic with integer coefficients; the
    // rational roots of p are u / a_n for the integer roots u of q. The
    // coefficient of u^i is a_i a_n^(n-1-i), which is 1 at i = n.
    let lead = ints[deg].clone();
    let mut monic: Vec<BigInt> = Vec::with_capacity(deg + 1);
    for (i, a) in ints.iter().enumerate() {
        if i == deg {
            monic.push(BigInt::one());
        } else {
            monic.push(a * lead.pow((deg - 1 - i) as u32));
        }
    }
    let int_roots = integer_roots_monic(&monic);
    let mut roots: Vec<Rational> = int_roots
        .into_iter()
        .map(|u| BigRational::new(u, lead.clone()))
        .collect();
    roots.sort();
    let split = roots.len() == deg;
    (roots, split)
}

/// Integer roots of a monic squarefree integer polynomial.
fn integer_roots_monic(q: &[BigInt]) -> Vec<BigInt> {
    let mut q: Vec<BigInt> = q.to_vec();
    let mut roots = Vec::new();
    // Strip a root at zero (squarefree: multiplicity one).
    if q[0].is_zero() {
        roots.push(BigInt::zero());
        q.remove(0);
    }
    let deg = q.len() - 1;
    if deg == 0 {
        return roots;
    }
    let qq: Poly = q
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    if deg == 1 {
        // u + a0 = 0
        let r = -q[0].clone();
        roots.push(r);
        roots.sort();
        return roots;
    }
    let chain = sturm_chain(&qq);
    // Cauchy bound: integer roots lie in [-B, B].
    let bound = BigInt::one()
        + q[..deg]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let lo = BigRational::from_integer(-bound.clone()) - &half;
    let hi = BigRational::from_integer(bound) + &half;
    let mut stack = vec![(lo, hi)];
    while let Some((lo, hi)) = stack.pop() {
        let count = variations(&chain, &lo) as i64 - variations(&chain, &hi) as i64;
        if count <= 0 {
            continue;
        }
        let width = (&hi - &lo).to_integer();
        if width == BigInt::one() {
            // Exactly one integer inside (k - 1/2, k + 1/2).
            let k = (&lo + &half).to_integer();
            if eval(&qq, &BigRational::from_integer(k.clone())).is_zero() {
                roots.push(k);
            }
            continue;
        }
        // Split at a half-integer strictly inside; never a root of q.
        let mid = &lo + BigRational::from_integer(&width / BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![trim(p.clone()), trim(derivative(p))];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = rem(&chain[n - 2], &chain[n - 1]);
        chain.push(trim(r.into_iter().map(|c| -c).collect()));
    }
    chain
}

fn variations(chain: &[Poly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = eval(p, x);
        if v.is_zero() {
            continue;
        }
        let sign = v.is_positive();
        if let Some(prev) = last {
            if prev != sign {
                count += 1;
            }
        }
        last = Some(sign);
    }
    count
}
