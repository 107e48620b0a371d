use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, LinalgError};

/// Row Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u · m = h`. Nonzero rows of `h`
/// come first, pivots strictly move right, pivots are positive and the
/// entries above each pivot lie in `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut r = 0;
    for c in 0..h.cols() {
        if r == h.rows() {
            break;
        }
        loop {
            // smallest nonzero entry in this column at or below r becomes the pivot
            let best = (r..h.rows())
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..h.rows() {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                let neg = -q;
                h.add_row_multiple(i, r, &neg);
                u.add_row_multiple(i, r, &neg);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                let neg = -q;
                h.add_row_multiple(i, r, &neg);
                u.add_row_multiple(i, r, &neg);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Number of nonzero rows of a matrix already in row echelon form.
pub fn echelon_rank(h: &IntMatrix) -> usize {
    (0..h.rows()).take_while(|&i| !h.is_zero_row(i)).count()
}

/// The nonzero rows of the HNF: a basis of the row lattice.
pub fn row_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(m);
    let rank = echelon_rank(&h);
    h.select_rows(&(0..rank).collect::<Vec<_>>())
}

/// Finds an integer row vector `x` with `x · m = b`.
pub fn solve_integral(m: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
    if b.len() != m.cols() {
        return Err(LinalgError::DimensionMismatch);
    }
    let (h, u) = hnf(m);
    let y = solve_echelon(&h, b)?;
    Ok(u.left_apply(&y))
}

/// Solves `y · h = b` for `h` in row echelon form (zero rows get coefficient 0).
pub(crate) fn solve_echelon(h: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
    let rank = echelon_rank(h);
    let mut y = vec![BigInt::zero(); h.rows()];
    let mut residual = b.to_vec();
    let mut col = 0;
    for i in 0..rank {
        while h[(i, col)].is_zero() {
            if !residual[col].is_zero() {
                return Err(LinalgError::NoSolution);
            }
            col += 1;
        }
        let (q, rem) = residual[col].div_rem(&h[(i, col)]);
        if !rem.is_zero() {
            return Err(LinalgError::NoSolution);
        }
        for (j, r) in residual.iter_mut().enumerate().skip(col) {
            let hij = &h[(i, j)];
            if !hij.is_zero() {
                *r -= &q * hij;
            }
        }
        y[i] = q;
        col += 1;
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return Err(LinalgError::NoSolution);
    }
    Ok(y)
}

/// Basis of the integer left kernel `{x : x · m = 0}`. The result is
/// saturated (a primitive sublattice of ℤ^rows).
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(m);
    let rank = echelon_rank(&h);
    u.select_rows(&(rank..m.rows()).collect::<Vec<_>>())
}
