//! Integral LLL on a Gram matrix, used to precondition short-vector
//! enumeration. Orthogonal complements of classes with huge coefficients come
//! out of the HNF with a badly skewed basis; enumeration on that basis would
//! never finish.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, LinalgError};

/// Reduces the positive definite Gram matrix `g` (δ = 3/4).
///
/// Returns `(t, reduced)` with `t` unimodular and `reduced = t · g · tᵀ`;
/// row `i` of `t` expresses the i-th reduced vector in the input basis.
/// All arithmetic is integral (the subdeterminant formulation).
pub(crate) fn lll_gram(g: &IntMatrix) -> Result<(IntMatrix, IntMatrix), LinalgError> {
    let n = g.rows();
    let mut st = State {
        gram: g.clone(),
        h: IntMatrix::identity(n),
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
        d: vec![BigInt::zero(); n + 1],
    };
    if n <= 1 {
        if n == 1 && !g[(0, 0)].is_positive() {
            return Err(LinalgError::IndefiniteForm);
        }
        return Ok((st.h, st.gram));
    }
    st.d[0] = BigInt::from(1);
    st.d[1] = st.gram[(0, 0)].clone();
    if !st.d[1].is_positive() {
        return Err(LinalgError::IndefiniteForm);
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = st.gram[(k - 1, j - 1)].clone();
                for i in 1..j {
                    u = (&st.d[i] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i - 1];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(LinalgError::IndefiniteForm);
                    }
                    st.d[k] = u;
                }
            }
        }
        loop {
            st.reduce(k, k - 1);
            let lhs = BigInt::from(4) * &st.d[k] * &st.d[k - 2];
            let rhs = BigInt::from(3) * &st.d[k - 1] * &st.d[k - 1]
                - BigInt::from(4) * &st.lam[k][k - 1] * &st.lam[k][k - 1];
            if lhs < rhs {
                st.swap(k, kmax);
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    st.reduce(k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Ok((st.h, st.gram))
}

struct State {
    gram: IntMatrix,
    h: IntMatrix,
    /// 1-based λ_{k,j}
    lam: Vec<Vec<BigInt>>,
    /// d[0] = 1, d[i] = Gram determinant of the first i vectors
    d: Vec<BigInt>,
}

impl State {
    fn reduce(&mut self, k: usize, l: usize) {
        let two_lam = BigInt::from(2) * &self.lam[k][l];
        if two_lam.abs() <= self.d[l] {
            return;
        }
        // nearest integer to λ/d
        let q = (&two_lam + &self.d[l]).div_floor(&(BigInt::from(2) * &self.d[l]));
        let neg = -&q;
        let (kr, lr) = (k - 1, l - 1);
        self.gram.add_row_multiple(kr, lr, &neg);
        let n = self.gram.rows();
        for i in 0..n {
            let v = &self.gram[(i, lr)] * &neg;
            self.gram[(i, kr)] += v;
        }
        self.h.add_row_multiple(kr, lr, &neg);
        let delta = &q * &self.d[l];
        self.lam[k][l] -= delta;
        for i in 1..l {
            let v = &q * &self.lam[l][i];
            self.lam[k][i] -= v;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        let (a, b) = (k - 1, k - 2);
        self.gram.swap_rows(a, b);
        let n = self.gram.rows();
        for i in 0..n {
            let x = self.gram[(i, a)].clone();
            self.gram[(i, a)] = self.gram[(i, b)].clone();
            self.gram[(i, b)] = x;
        }
        self.h.swap_rows(a, b);
        for j in 1..k - 1 {
            let x = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], x);
        }
        let lam = self.lam[k][k - 1].clone();
        let big_b = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&big_b * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = big_b;
    }
}
