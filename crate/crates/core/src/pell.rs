//! The Pell–Fermat equation `x² − D·y² = 1`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("{0} is a perfect square: x^2 - {0}y^2 = 1 has only trivial solutions")]
    NoSolution(u64),
    #[error("D must be at least 2, got {0}")]
    InvalidD(u64),
    #[error("({x}, {y}) does not satisfy x^2 - {d}y^2 = 1")]
    InvalidSolution { d: u64, x: BigInt, y: BigInt },
}

/// Fundamental (least positive) solution of `x² − D·y² = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellFundamental {
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub x0: BigInt,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub y0: BigInt,
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Fundamental solution by the continued fraction of √D.
///
/// The convergent preceding the end of the first period solves either the
/// +1 or the −1 equation; in the latter case the end of the second period
/// gives the +1 solution.
pub fn fundamental_solution(d: u64) -> Result<PellFundamental, PellError> {
    if d < 2 {
        return Err(PellError::InvalidD(d));
    }
    let a0 = d.sqrt();
    if a0 * a0 == d {
        return Err(PellError::NoSolution(d));
    }
    let big_d = BigInt::from(d);
    // m, den, a stay below 2√D, so u64 is plenty
    let (mut m, mut den, mut a) = (0u64, 1u64, a0);
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    loop {
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        if a == 2 * a0 && &p * &p - &big_d * &q * &q == BigInt::one() {
            return Ok(PellFundamental { d, x0: p, y0: q });
        }
        let p_next = BigInt::from(a) * &p + &p_prev;
        let q_next = BigInt::from(a) * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

impl PellFundamental {
    pub fn satisfies(&self, x: &BigInt, y: &BigInt) -> bool {
        x * x - BigInt::from(self.d) * y * y == BigInt::one()
    }

    /// `(x', y')` with `x' + y'√D = (x₀ + y₀√D)(x + y√D)`.
    pub fn next_solution(&self, x: &BigInt, y: &BigInt) -> Result<(BigInt, BigInt), PellError> {
        if !self.satisfies(x, y) {
            return Err(PellError::InvalidSolution {
                d: self.d,
                x: x.clone(),
                y: y.clone(),
            });
        }
        let d = BigInt::from(self.d);
        let nx = &self.x0 * x + &d * &self.y0 * y;
        let ny = &self.x0 * y + &self.y0 * x;
        Ok((nx, ny))
    }

    /// The positive solutions `(x_k, y_k)`, `k = 1, 2, …`, starting with the
    /// fundamental one.
    pub fn solutions(&self) -> impl Iterator<Item = (BigInt, BigInt)> + '_ {
        std::iter::successors(Some((self.x0.clone(), self.y0.clone())), move |(x, y)| {
            self.next_solution(x, y).ok()
        })
    }
}

pub fn next_solution(f: &PellFundamental, x: &BigInt, y: &BigInt) -> Result<(BigInt, BigInt), PellError> {
    f.next_solution(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn sol(d: u64) -> (BigInt, BigInt) {
        let f = fundamental_solution(d).unwrap();
        (f.x0, f.y0)
    }

    fn pair(x: i64, y: i64) -> (BigInt, BigInt) {
        (BigInt::from(x), BigInt::from(y))
    }

    #[test]
    fn squares() {
        assert!(is_square(&BigInt::from(36)));
        assert!(!is_square(&BigInt::from(120)));
        assert!(is_square(&BigInt::from(0)));
        assert!(!is_square(&BigInt::from(-4)));
        // 6·L² for L² = 6
        assert!(is_square(&BigInt::from(6 * 6)));
    }

    #[test]
    fn known_fundamental_solutions() {
        assert_eq!(sol(12), pair(7, 2));
        assert_eq!(sol(120), pair(11, 1));
        assert_eq!(sol(28), pair(127, 24));
        assert_eq!(sol(24), pair(5, 1));
        assert_eq!(sol(2), pair(3, 2));
        // odd period: x² − 13y² = −1 first
        assert_eq!(sol(13), pair(649, 180));
    }

    #[test]
    fn squares_have_no_solution() {
        assert_eq!(fundamental_solution(4), Err(PellError::NoSolution(4)));
        assert_eq!(fundamental_solution(1), Err(PellError::InvalidD(1)));
    }

    #[test]
    fn brute_force_for_d28() {
        // smallest y in 1..=24 making 1 + 28y² a square
        let y = (1..=24u64).find(|y| is_square(&BigInt::from(1 + 28 * y * y))).unwrap();
        assert_eq!(y, 24);
        assert_eq!(BigInt::from(1 + 28 * y * y).sqrt(), BigInt::from(127));
    }

    #[test]
    fn recurrence_steps() {
        let f12 = fundamental_solution(12).unwrap();
        assert_eq!(f12.next_solution(&BigInt::one(), &BigInt::zero()).unwrap(), pair(7, 2));
        assert_eq!(f12.next_solution(&7.into(), &2.into()).unwrap(), pair(97, 28));
        let f120 = fundamental_solution(120).unwrap();
        assert_eq!(f120.next_solution(&11.into(), &1.into()).unwrap(), pair(241, 22));
        assert!(matches!(
            f12.next_solution(&2.into(), &1.into()),
            Err(PellError::InvalidSolution { .. })
        ));
    }

    #[test]
    fn x0_is_odd_in_the_construction_cases() {
        for t in (1..400u64).filter(|t| t % 3 == 1) {
            assert!(sol(12 * t).0.is_odd(), "D = 12·{t}");
        }
        for k in 1..400u64 {
            if let Ok(f) = fundamental_solution(4 * k) {
                assert!(f.x0.is_odd(), "D = 4·{k}");
            }
        }
    }

    proptest! {
        #[test]
        fn iteration_preserves_the_equation(d in 2u64..5000) {
            prop_assume!(!is_square(&BigInt::from(d)));
            let f = fundamental_solution(d).unwrap();
            for (x, y) in f.solutions().take(10) {
                prop_assert!(f.satisfies(&x, &y));
            }
        }
    }
}
