//! The rank-4 lattices `𝐋_A` and `𝐋_X` related by the degree-3 quotient map,
//! and the index of the pushed-forward transcendental lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::exact_linalg::{left_kernel, solve_integral, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FmError {
    #[error("invalid polarization {0:?}: {1}")]
    InvalidPolarization([i64; 4], &'static str),
}

pub fn gram_la() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 2, 3], &[0, 0, 3, 6]])
}

pub fn gram_lx() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 3, 0, 0], &[3, 0, 0, 0], &[0, 0, 6, 3], &[0, 0, 3, 2]])
}

/// `π_*`: row `i` is the image of `g_i` in the basis `ζ₁, …, ζ₄`.
pub fn push() -> IntMatrix {
    IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 3]])
}

/// `π^*`: row `i` is the image of `ζ_i` in the basis `g₁, …, g₄`.
pub fn pull() -> IntMatrix {
    IntMatrix::from_i64(&[&[3, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 1]])
}

#[derive(Debug, Clone, Serialize)]
pub struct FMModel {
    pub gram_la: IntMatrix,
    pub gram_lx: IntMatrix,
    pub push: IntMatrix,
    pub pull: IntMatrix,
    /// `L_X` in the basis `ζ₁, …, ζ₄`.
    pub polarization: [i64; 4],
    pub lx_square: i64,
    /// `π^*L_X = ν·L_A`.
    pub nu: i64,
    /// `L_A` in the basis `g₁, …, g₄`.
    pub la: [i64; 4],
    /// `[𝐋_X : π_*(𝐋_A)]`.
    pub push_index: u64,
    /// Bases of `L_X⊥ ⊂ 𝐋_X` and `L_A⊥ ⊂ 𝐋_A`.
    pub t_x: IntMatrix,
    pub t_a: IntMatrix,
}

fn pairing(g: &IntMatrix, a: &[BigInt], b: &[BigInt]) -> BigInt {
    g.left_apply(a).iter().zip(b).map(|(x, y)| x * y).sum()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn orthogonal(g: &IntMatrix, v: &[BigInt]) -> IntMatrix {
    let col = IntMatrix::from_rows(g.left_apply(v).into_iter().map(|x| vec![x]));
    left_kernel(&col)
}

pub fn build(polarization: [i64; 4]) -> Result<FMModel, FmError> {
    let invalid = |why| FmError::InvalidPolarization(polarization, why);
    let [n1, n2, n3, n4] = polarization;
    if [n1, n2, n3, n4].iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
        return Err(invalid("coefficients are not coprime"));
    }
    let gx = gram_lx();
    let lx = big(&polarization);
    let lx_square = pairing(&gx, &lx, &lx);
    if !lx_square.is_positive() {
        return Err(invalid("L_X^2 must be positive"));
    }
    let lx_square: i64 = lx_square.try_into().expect("small");
    let (la, nu) = if n4 % 3 != 0 {
        ([3 * n1, 3 * n2, 3 * n3, n4], 1)
    } else {
        if [n1, n2, n3].iter().fold(3i64, |g, x| g.gcd(x)) != 1 {
            return Err(invalid("3 divides every coefficient of L_A"));
        }
        ([n1, n2, n3, n4 / 3], 3)
    };
    let (push, pull) = (push(), pull());
    let ga = gram_la();
    let t_x = orthogonal(&gx, &lx);
    let t_a = orthogonal(&ga, &big(&la));
    let push_index = push.determinant().expect("square").abs().try_into().expect("small");
    Ok(FMModel {
        gram_la: ga,
        gram_lx: gx,
        push,
        pull,
        polarization,
        lx_square,
        nu,
        la,
        push_index,
        t_x,
        t_a,
    })
}

impl FMModel {
    /// `π_*` applied to the rows of `m` (coordinates in `g` to coordinates in `ζ`).
    pub fn push_rows(&self, m: &IntMatrix) -> IntMatrix {
        m.mul(&self.push)
    }

    /// Gram matrix of `π_*(𝐋_A)` in the basis `π_*(g_i)`.
    pub fn pushed_gram(&self) -> IntMatrix {
        self.push.congruence(&self.gram_lx)
    }
}

/// `[T(X) : π_*(T(A))]`.
pub fn transcendental_index(m: &FMModel) -> u64 {
    let pushed = m.push_rows(&m.t_a);
    let coords: Vec<Vec<BigInt>> = (0..pushed.rows())
        .map(|i| solve_integral(&m.t_x, pushed.row(i)).expect("π_* maps T(A) into T(X)"))
        .collect();
    IntMatrix::from_rows(coords)
        .determinant()
        .expect("square")
        .abs()
        .try_into()
        .expect("small")
}
