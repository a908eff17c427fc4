//! Shared test support: the brute-force grouplike oracle (quadratic system
//! solved by elimination, fully independent of the eigensplitting solver),
//! corrupted fixtures failing one named axiom each, and fixture rosters.
//!
//! Each test binary uses its own subset of this module.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use hopfoid::base::Rational;
use hopfoid::coalgebra::LocalCoalgebra;
use hopfoid::fixtures;
use hopfoid::groupoid::{
    action_groupoid, cyclic_group, pair_groupoid, trivial_groupoid, FiniteGroupoid,
};
use hopfoid::hopf::HopfAlgebroid;
use hopfoid::io::{algebroid_to_doc, doc_to_algebroid};
use hopfoid::{BaseSet, Point};

// ---------------------------------------------------------------------------
// Brute-force grouplike oracle.
//
// Solves Δζ = ζ ⊗ ζ, εζ = 1 on a local coalgebra of dimension ≤ 3: the
// counit equation eliminates one variable; in the remaining ≤ 2 variables
// the quadratic equations are reduced by pairwise Sylvester resultants and
// rational root extraction; every candidate is verified exactly against the
// full original system. No dual algebras, no eigensplitting.
// ---------------------------------------------------------------------------

type UniPoly = Vec<Rational>;

fn uni_trim(mut p: UniPoly) -> UniPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn uni_add(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    uni_trim(out)
}

fn uni_neg(a: &UniPoly) -> UniPoly {
    a.iter().map(|c| -c).collect()
}

fn uni_mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    uni_trim(out)
}

fn uni_eval(p: &UniPoly, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Rational roots by the rational root theorem on a cleared-denominator
/// polynomial; divisors found by trial division (test-scale coefficients).
fn uni_rational_roots(p: &UniPoly) -> Vec<Rational> {
    let p = uni_trim(p.clone());
    if p.len() <= 1 {
        return vec![];
    }
    let mut denom_lcm = BigInt::one();
    for c in &p {
        let gcd = gcd_int(&denom_lcm, c.denom());
        denom_lcm = (&denom_lcm * c.denom()) / gcd;
    }
    let mut ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * Rational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    while ints.first().is_some_and(|c| c.is_zero()) {
        if roots.is_empty() {
            roots.push(Rational::zero());
        }
        ints.remove(0);
    }
    if ints.len() <= 1 {
        return roots;
    }
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = Rational::new(&num * BigInt::from(sign), den.clone());
                if uni_eval(&p, &cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    assert!(
        n <= &BigInt::from(1_000_000_000u64),
        "oracle coefficient outside test scale"
    );
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let n_u64: u64 = n.to_string().parse().unwrap();
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n_u64 {
        if n_u64.is_multiple_of(d) {
            out.push(BigInt::from(d));
            out.push(BigInt::from(n_u64 / d));
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Polynomial in at most two variables, exponent pairs to coefficients.
type BiPoly = BTreeMap<(usize, usize), Rational>;

fn bi_insert(p: &mut BiPoly, key: (usize, usize), c: Rational) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(key).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        p.remove(&key);
    }
}

/// Coefficients of `p` as a polynomial in the second variable, each a
/// univariate polynomial in the first.
fn coeffs_in_v(p: &BiPoly) -> Vec<UniPoly> {
    let deg_v = p.keys().map(|&(_, j)| j).max().unwrap_or(0);
    let mut out = vec![vec![]; deg_v + 1];
    for (&(i, j), c) in p {
        let poly = &mut out[j];
        if poly.len() <= i {
            poly.resize(i + 1, Rational::zero());
        }
        poly[i] += c;
    }
    out.into_iter().map(uni_trim).collect()
}

fn bi_swap_vars(p: &BiPoly) -> BiPoly {
    p.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect()
}

fn bi_eval_first(p: &BiPoly, u: &Rational) -> UniPoly {
    let mut out: UniPoly = vec![];
    for (&(i, j), c) in p {
        let mut pow = Rational::one();
        for _ in 0..i {
            pow *= u;
        }
        if out.len() <= j {
            out.resize(j + 1, Rational::zero());
        }
        out[j] += c * pow;
    }
    uni_trim(out)
}

/// Determinant of a small square matrix of univariate polynomials, by
/// cofactor expansion.
fn poly_det(m: &[Vec<UniPoly>]) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return vec![Rational::one()];
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det: UniPoly = vec![];
    for (j, top) in m[0].iter().enumerate() {
        if top.is_empty() {
            continue;
        }
        let minor: Vec<Vec<UniPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = uni_mul(top, &poly_det(&minor));
        det = if j % 2 == 0 {
            uni_add(&det, &term)
        } else {
            uni_add(&det, &uni_neg(&term))
        };
    }
    det
}

/// Sylvester resultant eliminating the second variable; both inputs must
/// have positive degree in it.
fn resultant_v(p: &BiPoly, q: &BiPoly) -> UniPoly {
    let pc = coeffs_in_v(p);
    let qc = coeffs_in_v(q);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    assert!(m >= 1 && n >= 1);
    let size = m + n;
    let mut mat = vec![vec![vec![]; size]; size];
    for row in 0..n {
        for (k, c) in pc.iter().enumerate() {
            mat[row][row + (m - k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in qc.iter().enumerate() {
            mat[n + row][row + (n - k)] = c.clone();
        }
    }
    poly_det(&mat)
}

/// All solutions of the grouplike system on a local coalgebra of dimension
/// at most 3, as dense coordinate vectors in canonical order.
pub fn brute_force_grouplikes(l: &LocalCoalgebra) -> Vec<Vec<Rational>> {
    let n = l.dim();
    assert!(n <= 3, "oracle is specified for dimension <= 3");
    if n == 0 {
        return vec![];
    }
    let eps: Vec<Rational> = (0..n).map(|k| l.epsilon_coeff(k).clone()).collect();
    let Some(m) = eps.iter().position(|e| !e.is_zero()) else {
        return vec![];
    };
    let free: Vec<usize> = (0..n).filter(|&k| k != m).collect();

    // z_k for k free are the unknowns; z_m = (1 - Σ ε_k z_k) / ε_m. Each z
    // as an affine BiPoly in the free variables (coded as exponents on the
    // first and second variable respectively).
    let var = |k: usize| -> BiPoly {
        let mut p = BiPoly::new();
        if k == m {
            bi_insert(&mut p, (0, 0), Rational::one() / &eps[m]);
            for (slot, &f) in free.iter().enumerate() {
                let key = if slot == 0 { (1, 0) } else { (0, 1) };
                bi_insert(&mut p, key, -(&eps[f] / &eps[m]));
            }
        } else {
            let slot = free.iter().position(|&f| f == k).unwrap();
            let key = if slot == 0 { (1, 0) } else { (0, 1) };
            bi_insert(&mut p, key, Rational::one());
        }
        p
    };
    let zs: Vec<BiPoly> = (0..n).map(var).collect();
    let bi_mul = |a: &BiPoly, b: &BiPoly| -> BiPoly {
        let mut out = BiPoly::new();
        for (&(i1, j1), c1) in a {
            for (&(i2, j2), c2) in b {
                bi_insert(&mut out, (i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    };

    // Quadratic equations: Σ_k δ_k[(i,j)] z_k − z_i z_j = 0 for all pairs.
    let mut equations: Vec<BiPoly> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut eq = BiPoly::new();
            for (k, z) in zs.iter().enumerate() {
                for (a, b, c) in l.delta_row(k) {
                    if *a == i && *b == j {
                        for (&key, coeff) in z {
                            bi_insert(&mut eq, key, coeff * c);
                        }
                    }
                }
            }
            for (&key, coeff) in &bi_mul(&zs[i], &zs[j]) {
                bi_insert(&mut eq, key, -coeff.clone());
            }
            if !eq.is_empty() {
                equations.push(eq);
            }
        }
    }

    let assemble = |values: &BTreeMap<usize, Rational>| -> Vec<Rational> {
        let mut z = vec![Rational::zero(); n];
        for (&k, v) in values {
            z[k] = v.clone();
        }
        let correction: Rational = free
            .iter()
            .map(|&f| &eps[f] * &z[f])
            .fold(Rational::zero(), |a, b| a + b);
        z[m] = (Rational::one() - correction) / &eps[m];
        z
    };

    let mut candidates: Vec<Vec<Rational>> = Vec::new();
    match free.len() {
        0 => {
            candidates.push(assemble(&BTreeMap::new()));
        }
        1 => {
            // All equations are univariate in the single free variable.
            let mut polys: Vec<UniPoly> = equations
                .iter()
                .map(|eq| {
                    let c = coeffs_in_v(&bi_swap_vars(eq));
                    // coeffs_in_v after the swap: index = power of var one.
                    let mut p: UniPoly = vec![];
                    for (deg, cf) in c.iter().enumerate() {
                        let val = if cf.is_empty() { Rational::zero() } else { cf[0].clone() };
                        if p.len() <= deg {
                            p.resize(deg + 1, Rational::zero());
                        }
                        p[deg] = val;
                    }
                    uni_trim(p)
                })
                .filter(|p| !p.is_empty())
                .collect();
            polys.retain(|p| p.len() > 1);
            if polys.is_empty() {
                // Either no constraint (degenerate, impossible for lawful
                // coalgebras) or contradictory constants.
                if equations.iter().all(|eq| eq.is_empty()) {
                    panic!("degenerate oracle input");
                }
                return vec![];
            }
            for r in uni_rational_roots(&polys[0]) {
                candidates.push(assemble(&BTreeMap::from([(free[0], r)])));
            }
        }
        2 => {
            let with_v: Vec<&BiPoly> = equations
                .iter()
                .filter(|eq| eq.keys().any(|&(_, j)| j > 0))
                .collect();
            let mut u_constraints: Vec<UniPoly> = equations
                .iter()
                .filter(|eq| eq.keys().all(|&(_, j)| j == 0))
                .map(|eq| {
                    let mut p: UniPoly = vec![];
                    for (&(i, _), c) in eq.iter() {
                        if p.len() <= i {
                            p.resize(i + 1, Rational::zero());
                        }
                        p[i] += c;
                    }
                    uni_trim(p)
                })
                .filter(|p| p.len() > 1)
                .collect();
            for a in 0..with_v.len() {
                for b in (a + 1)..with_v.len() {
                    let r = resultant_v(with_v[a], with_v[b]);
                    if r.len() > 1 {
                        u_constraints.push(r);
                    }
                }
            }
            assert!(
                !u_constraints.is_empty(),
                "degenerate oracle input: no univariate constraint"
            );
            let mut u_candidates: Vec<Rational> = Vec::new();
            // Roots common to every constraint.
            let mut first = true;
            for p in &u_constraints {
                let roots = uni_rational_roots(p);
                if first {
                    u_candidates = roots;
                    first = false;
                } else {
                    u_candidates.retain(|r| roots.contains(r));
                }
            }
            for u in u_candidates {
                let mut v_polys: Vec<UniPoly> = equations
                    .iter()
                    .map(|eq| bi_eval_first(eq, &u))
                    .filter(|p| !p.is_empty())
                    .collect();
                v_polys.retain(|p| p.len() > 1);
                if v_polys.is_empty() {
                    panic!("degenerate oracle input: v unconstrained at u = {u}");
                }
                for v in uni_rational_roots(&v_polys[0]) {
                    candidates.push(assemble(&BTreeMap::from([
                        (free[0], u.clone()),
                        (free[1], v),
                    ])));
                }
            }
        }
        _ => unreachable!(),
    }

    // Exact verification of every candidate against the original system.
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for z in candidates {
        let v = l.from_dense(&z);
        if l.is_grouplike(&v).unwrap() && !out.contains(&z) {
            out.push(z);
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Corrupted algebroids, one per named axiom.
// ---------------------------------------------------------------------------

fn rational_str(n: i64) -> String {
    n.to_string()
}

/// (i): the comultiplication of one arrow loses its counit section.
pub fn corrupted_counit() -> HopfAlgebroid {
    let mut doc = algebroid_to_doc(&hopfoid::hopf::convolution_algebroid(&pair_groupoid(2)).unwrap());
    for row in &mut doc.delta {
        if row.id == "e_1_2" {
            row.terms[0].right = "e_1_1".to_string();
        }
    }
    doc_to_algebroid(&doc).unwrap()
}

/// (ii): the right actions separate on the image of Δ while the counit laws
/// survive (ε(e_1_2) is 1 at the point 1).
pub fn corrupted_base_compat() -> HopfAlgebroid {
    let mut doc = algebroid_to_doc(&hopfoid::hopf::convolution_algebroid(&pair_groupoid(2)).unwrap());
    for row in &mut doc.delta {
        if row.id == "e_1_1" {
            row.terms = vec![
                hopfoid::io::DeltaTermDoc {
                    left: "e_1_1".into(),
                    right: "e_1_2".into(),
                    coeff: rational_str(1),
                },
                hopfoid::io::DeltaTermDoc {
                    left: "e_1_2".into(),
                    right: "e_1_1".into(),
                    coeff: rational_str(1),
                },
                hopfoid::io::DeltaTermDoc {
                    left: "e_1_2".into(),
                    right: "e_1_2".into(),
                    coeff: rational_str(-1),
                },
            ];
        }
    }
    doc_to_algebroid(&doc).unwrap()
}

/// (iii): one product entry doubled.
pub fn corrupted_multiplicativity() -> HopfAlgebroid {
    let mut doc = algebroid_to_doc(&hopfoid::hopf::convolution_algebroid(&pair_groupoid(2)).unwrap());
    for row in &mut doc.product {
        if row.left == "e_1_2" && row.right == "e_2_1" {
            row.result[0].coeff = rational_str(2);
        }
    }
    doc_to_algebroid(&doc).unwrap()
}

/// (iv): the antipode of one arrow negated, so S ∘ S = -id there.
pub fn corrupted_involution() -> HopfAlgebroid {
    let mut doc = algebroid_to_doc(&hopfoid::hopf::convolution_algebroid(&pair_groupoid(2)).unwrap());
    for row in &mut doc.antipode {
        if row.id == "e_1_2" {
            row.result[0].coeff = rational_str(-1);
        }
    }
    doc_to_algebroid(&doc).unwrap()
}

/// (v): a sign cocycle that is not multiplicative: S(e_1_3) = −e_3_1 and
/// S(e_3_1) = −e_1_3 inside the pair groupoid on three points. S² = id and
/// S fixes R, but S(e_1_2 e_2_3) ≠ S(e_2_3) S(e_1_2).
pub fn corrupted_antihom() -> HopfAlgebroid {
    let mut doc = algebroid_to_doc(&hopfoid::hopf::convolution_algebroid(&pair_groupoid(3)).unwrap());
    for row in &mut doc.antipode {
        if row.id == "e_1_3" || row.id == "e_3_1" {
            row.result[0].coeff = rational_str(-1);
        }
    }
    doc_to_algebroid(&doc).unwrap()
}

/// (vi): the antipode of a cyclic group frozen to the identity map; the
/// involution and antihomomorphism laws survive (the group is abelian) but
/// μ (S ⊗ id) Δ no longer collapses to ε ∘ S.
pub fn corrupted_antipode_counit() -> HopfAlgebroid {
    let mut doc = algebroid_to_doc(&hopfoid::hopf::convolution_algebroid(&cyclic_group(3)).unwrap());
    for row in &mut doc.antipode {
        row.result = vec![hopfoid::io::CombTermDoc { id: row.id.clone(), coeff: rational_str(1) }];
    }
    doc_to_algebroid(&doc).unwrap()
}

// ---------------------------------------------------------------------------
// Fixture rosters.
// ---------------------------------------------------------------------------

/// The deterministic groupoid roster behind the roundtrip criteria: pair
/// groupoids to 4, cyclic groups to 6, and the swap action groupoid.
pub fn generator_roster() -> Vec<FiniteGroupoid> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(pair_groupoid(n));
    }
    for k in 1..=6 {
        out.push(cyclic_group(k));
    }
    let base = BaseSet::range(2);
    let sigma = BTreeMap::from([
        (Point::new("1"), Point::new("2")),
        (Point::new("2"), Point::new("1")),
    ]);
    out.push(action_groupoid(2, &base, &sigma).unwrap());
    out.push(trivial_groupoid(&BaseSet::range(3)));
    out
}

/// Local coalgebras of dimension ≤ 3 arising from the fixture set, each
/// with a short name for failure messages.
pub fn small_local_coalgebras() -> Vec<(String, LocalCoalgebra)> {
    let mut out: Vec<(String, LocalCoalgebra)> = Vec::new();
    let mut push_all = |name: &str, c: &hopfoid::Coalgebra| {
        for x in c.base().points() {
            let l = hopfoid::coalgebra::localize(c, x).unwrap();
            if l.dim() <= 3 {
                out.push((format!("{name}@{x}"), l));
            }
        }
    };
    push_all("dependent-grouplikes", &fixtures::dependent_grouplikes());
    push_all("primitive", &fixtures::primitive_element_coalgebra());
    push_all(
        "idempotent",
        &fixtures::idempotent_monoid_algebroid().coalgebra().unwrap(),
    );
    for k in 1..=3 {
        push_all(&format!("group{k}"), &fixtures::group_coalgebra(k));
    }
    for sizes in [vec![1], vec![2, 1], vec![3], vec![0, 2], vec![1, 1, 1]] {
        push_all(&format!("sheaf{sizes:?}"), &fixtures::sheaf_coalgebra_sizes(&sizes));
    }
    for (i, g) in generator_roster().into_iter().enumerate() {
        let a = hopfoid::hopf::convolution_algebroid(&g).unwrap();
        push_all(&format!("conv{i}"), &a.coalgebra().unwrap());
    }
    out
}
