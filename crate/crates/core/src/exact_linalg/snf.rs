use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hnf::hnf;
use super::{IntMatrix, LinalgError};

/// Smith normal form `left · m · right = diag(invariant_factors)`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub invariant_factors: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl Snf {
    /// Invariant factors different from 1: the cyclic decomposition of the
    /// cokernel.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Smith normal form of a square nonsingular integer matrix.
pub fn snf(m: &IntMatrix) -> Result<Snf, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch);
    }
    if m.determinant()?.is_zero() {
        return Err(LinalgError::SingularMatrix);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut left = IntMatrix::identity(n);
    let mut right = IntMatrix::identity(n);
    loop {
        diagonalize(&mut a, &mut left, &mut right);
        let bad = (0..n).find_map(|i| {
            (i + 1..n)
                .find(|&j| !a[(j, j)].is_multiple_of(&a[(i, i)]))
                .map(|j| (i, j))
        });
        match bad {
            Some((i, j)) => {
                // column i += column j puts d_j below d_i; the next row HNF
                // replaces d_i by gcd(d_i, d_j)
                for r in 0..n {
                    let v = a[(r, j)].clone();
                    a[(r, i)] += v;
                    let w = right[(r, j)].clone();
                    right[(r, i)] += w;
                }
            }
            None => break,
        }
    }
    let invariant_factors = (0..n).map(|i| a[(i, i)].clone()).collect();
    Ok(Snf {
        invariant_factors,
        left,
        right,
    })
}

fn diagonalize(a: &mut IntMatrix, left: &mut IntMatrix, right: &mut IntMatrix) {
    while !a.is_diagonal() {
        let (h, u) = hnf(a);
        *left = u.mul(left);
        let (ht, v) = hnf(&h.transpose());
        *a = ht.transpose();
        *right = right.mul(&v.transpose());
    }
    for i in 0..a.rows() {
        if a[(i, i)].is_negative() {
            a.negate_row(i);
            left.negate_row(i);
        }
    }
}
