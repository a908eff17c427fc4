//! Grouplike enumeration for local coalgebras.
//!
//! Grouplikes of a finite-dimensional local coalgebra `L` correspond exactly
//! to the unit-preserving algebra characters of the dual algebra on the dual
//! basis: a vector `ζ` pairs with the dual as the functional `g_i ↦ ζ_i`,
//! multiplicativity of that functional is `Δζ = ζ ⊗ ζ`, and sending the dual
//! unit (the counit) to 1 is `εζ = 1`.
//!
//! Characters are found by iteratively splitting the dual algebra along the
//! rational generalized eigenspaces of the multiplication-by-generator
//! operators until every surviving block carries a single eigenvalue per
//! generator, then reading each character off its block. Generalized
//! eigenspaces (kernels of `(M - λ)^dim`) keep the enumeration complete in
//! the presence of nilpotents: a character kills the radical, and its local
//! factor sits inside the generalized eigenspace for each of its values.
//! Blocks whose minimal polynomial does not split into rational linear
//! factors carry no rational characters up to a field extension; the solver
//! refuses those rather than answer partially.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::base::Rational;
use crate::coalgebra::LocalCoalgebra;
use crate::error::{Error, Result, SolverObstruction};
use crate::linalg::{minimal_polynomial, QMatrix};
use crate::poly::{degree, rational_roots_squarefree, squarefree_part};

/// Complete list of grouplikes of `l`, as dense local coordinate vectors.
/// Order is unspecified here; the caller sorts canonically.
pub(crate) fn local_grouplikes(l: &LocalCoalgebra) -> Result<Vec<Vec<Rational>>> {
    let n = l.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let inapplicable = |reason: SolverObstruction| Error::SolverInapplicable {
        point: Some(l.point().clone()),
        reason,
    };

    // Dual commutativity = cocommutativity of the stalk.
    for k in 0..n {
        let row: BTreeMap<(usize, usize), Rational> = l
            .delta_row(k)
            .iter()
            .map(|(a, b, c)| ((*a, *b), c.clone()))
            .collect();
        let flipped: BTreeMap<(usize, usize), Rational> =
            row.iter().map(|(&(a, b), c)| ((b, a), c.clone())).collect();
        if row != flipped {
            return Err(inapplicable(SolverObstruction::NoncommutativeDual));
        }
    }
    // Dual associativity = coassociativity of the stalk.
    for k in 0..n {
        let mut lhs: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        let mut rhs: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (a, b, c) in l.delta_row(k) {
            for (p, q, d) in l.delta_row(*a) {
                *lhs.entry((*p, *q, *b)).or_insert_with(Rational::zero) += c * d;
            }
            for (p, q, d) in l.delta_row(*b) {
                *rhs.entry((*a, *p, *q)).or_insert_with(Rational::zero) += c * d;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        if lhs != rhs {
            return Err(inapplicable(SolverObstruction::NonassociativeDual));
        }
    }

    // Multiplication operators of the dual: (M_i)_{k,j} is the coefficient
    // of the pair (i, j) in Δ(b_k).
    let mut mult = vec![QMatrix::zero(n, n); n];
    for k in 0..n {
        for (i, j, c) in l.delta_row(k) {
            mult[*i][(k, *j)] += c.clone();
        }
    }
    // The counit is the dual unit; localizations of lawful coalgebras always
    // satisfy this, and the unital regular representation is what makes the
    // character enumeration complete.
    let mut unit_op = QMatrix::zero(n, n);
    for (i, m) in mult.iter().enumerate() {
        let e = l.epsilon_coeff(i).clone();
        if !e.is_zero() {
            unit_op = unit_op.add(&m.scale(&e));
        }
    }
    if unit_op != QMatrix::identity(n) {
        return Err(Error::structural(format!(
            "counit law fails in the local coalgebra at {}",
            l.point()
        )));
    }

    // Iterative splitting. Each block is a list of ambient basis vectors
    // spanning a subspace invariant under every M_i.
    let mut blocks: Vec<Vec<Vec<Rational>>> = vec![(0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        })
        .collect()];
    for m in &mult {
        let mut next = Vec::new();
        for block in blocks {
            let d = block.len();
            let bmat = QMatrix::from_columns(block.clone());
            let restricted = restrict(m, &bmat, d)?;
            let minpoly = minimal_polynomial(&restricted);
            let reduced = squarefree_part(&minpoly);
            if degree(&reduced) == Some(0) {
                next.push(block);
                continue;
            }
            let (roots, split) = rational_roots_squarefree(&reduced);
            if !split {
                return Err(inapplicable(SolverObstruction::NotSplit));
            }
            for lambda in roots {
                let mut shifted = restricted.clone();
                for i in 0..d {
                    shifted[(i, i)] -= lambda.clone();
                }
                // Generalized eigenspace: d bounds the nilpotency degree.
                let kernel = shifted.pow(d).kernel();
                if kernel.is_empty() {
                    continue;
                }
                let sub: Vec<Vec<Rational>> = kernel.iter().map(|k| bmat.mul_vec(k)).collect();
                next.push(sub);
            }
        }
        blocks = next;
    }

    let mut out = Vec::new();
    for block in blocks {
        let d = block.len();
        let bmat = QMatrix::from_columns(block.clone());
        // Every generator acts on a final block as a rational scalar plus a
        // nilpotent; the scalar is the character value.
        let mut zeta = Vec::with_capacity(n);
        for m in &mult {
            let restricted = restrict(m, &bmat, d)?;
            let trace = (0..d).fold(Rational::zero(), |a, i| a + &restricted[(i, i)]);
            let lambda = trace / Rational::from_integer(d.into());
            let mut shifted = restricted;
            for i in 0..d {
                shifted[(i, i)] -= lambda.clone();
            }
            if !shifted.pow(d).is_zero() {
                return Err(Error::integrity("final block is not scalar plus nilpotent"));
            }
            zeta.push(lambda);
        }
        // Unit preservation: automatic once the counit law holds; kept as a
        // filter so a defect cannot leak a spurious grouplike.
        let pairing = zeta
            .iter()
            .enumerate()
            .map(|(i, z)| z * l.epsilon_coeff(i))
            .fold(Rational::zero(), |a, b| a + b);
        if pairing.is_one() {
            out.push(zeta);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Matrix of `m` restricted to the column span of `bmat` (dimension `d`),
/// in block coordinates.
fn restrict(m: &QMatrix, bmat: &QMatrix, d: usize) -> Result<QMatrix> {
    let image = m.mul(bmat);
    let mut restricted = QMatrix::zero(d, d);
    for j in 0..d {
        let x = bmat
            .solve(&image.column(j))
            .ok_or_else(|| Error::integrity("eigenblock not invariant under the dual product"))?;
        for i in 0..d {
            restricted[(i, j)] = x[i].clone();
        }
    }
    Ok(restricted)
}
