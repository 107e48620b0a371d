use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lll::lll_gram;
use super::{IntMatrix, LinalgError};

/// All integer vectors `v` with `vᵀ·g·v = target`, for `g` negative definite.
///
/// The list is complete and closed under negation. It is sorted by the
/// canonical representative (first nonzero coordinate positive) in
/// lexicographic order, each representative immediately followed by its
/// negative.
pub fn enumerate_norm_vectors(g: &IntMatrix, target: &BigInt) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    if !g.is_square() {
        return Err(LinalgError::DimensionMismatch);
    }
    if !g.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    if !target.is_negative() {
        return Err(LinalgError::NonNegativeTarget);
    }
    let n = g.rows();
    let mut pos = g.clone();
    for i in 0..n {
        for j in 0..n {
            pos[(i, j)] = -std::mem::take(&mut pos[(i, j)]);
        }
    }
    let bound = -target;
    let (t, reduced) = lll_gram(&pos)?;
    let chol = cholesky(&reduced).ok_or(LinalgError::IndefiniteForm)?;

    let mut found = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    search(&chol, &reduced, &bound, n, &BigRational::from_integer(bound.clone()), &mut x, &mut found);

    let mut reps: Vec<Vec<BigInt>> = found
        .into_iter()
        .map(|y| canonical(t.left_apply(&y)))
        .collect();
    reps.sort();
    reps.dedup();
    let mut out = Vec::with_capacity(2 * reps.len());
    for r in reps {
        let neg: Vec<BigInt> = r.iter().map(|c| -c).collect();
        out.push(r);
        out.push(neg);
    }
    Ok(out)
}

/// True iff the symmetric matrix is positive definite.
pub fn is_positive_definite(g: &IntMatrix) -> bool {
    g.is_symmetric() && cholesky(g).is_some()
}

fn canonical(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => v.into_iter().map(|c| -c).collect(),
        _ => v,
    }
}

/// Rational Cholesky in completed-square form:
/// `Q(x) = Σ_i q[i][i]·(x_i + Σ_{j>i} q[i][j]·x_j)²`.
/// Returns `None` if a pivot is not positive.
fn cholesky(g: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = g.rows();
    let mut q: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(g[(i, j)].clone())).collect())
        .collect();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return None;
        }
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[k][i] * &q[i][l];
                q[k][l] -= v;
            }
        }
    }
    Some(q)
}

/// Depth-first Fincke–Pohst: level `i` fixes coordinate `i - 1` given all
/// higher ones. Interval ends come from an integer square root widened by
/// one, and every candidate is re-checked exactly before descending.
fn search(
    q: &[Vec<BigRational>],
    gram: &IntMatrix,
    target: &BigInt,
    level: usize,
    remaining: &BigRational,
    x: &mut Vec<BigInt>,
    found: &mut Vec<Vec<BigInt>>,
) {
    if level == 0 {
        if x.iter().all(Zero::is_zero) {
            return;
        }
        if quad_form(gram, x) == *target {
            found.push(x.clone());
        }
        return;
    }
    let i = level - 1;
    let n = x.len();
    let mut center = BigRational::zero();
    for j in i + 1..n {
        if !x[j].is_zero() {
            center -= &q[i][j] * BigRational::from_integer(x[j].clone());
        }
    }
    let radius_sq = remaining / &q[i][i];
    let r = radius_sq.floor().to_integer().sqrt() + BigInt::from(1);
    let lo = center.floor().to_integer() - &r;
    let hi = center.ceil().to_integer() + &r;
    let mut xi = lo;
    while xi <= hi {
        let diff = BigRational::from_integer(xi.clone()) - &center;
        let used = &q[i][i] * &diff * &diff;
        if used <= *remaining {
            let rest = remaining - &used;
            x[i] = xi.clone();
            search(q, gram, target, i, &rest, x, found);
        }
        xi += 1;
    }
    x[i] = BigInt::zero();
}

fn quad_form(g: &IntMatrix, x: &[BigInt]) -> BigInt {
    let gx = g.left_apply(x);
    gx.iter().zip(x).map(|(a, b)| a * b).sum()
}
