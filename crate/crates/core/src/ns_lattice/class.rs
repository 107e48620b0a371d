use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

/// Number of coordinates: `L` followed by `A₁, B₁, …, A₉, B₉`.
pub const RANK: usize = 19;

/// Which curve of an A₂ block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Curve {
    A,
    B,
}

/// A class `(1/3)·(n₀L + n₁A₁ + n₂B₁ + … + n₁₇A₉ + n₁₈B₉)`, stored by its
/// numerators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DivisorClass {
    #[serde(serialize_with = "crate::serde_big::ints")]
    num: Vec<BigInt>,
}

/// Numerator index of `A_j` / `B_j` (`j` is 1-based).
pub fn index(j: usize, curve: Curve) -> usize {
    assert!((1..=9).contains(&j), "block index {j} out of range 1..=9");
    match curve {
        Curve::A => 2 * j - 1,
        Curve::B => 2 * j,
    }
}

impl DivisorClass {
    /// # Panics
    /// If `num` does not have 19 entries.
    pub fn from_numerators(num: Vec<BigInt>) -> Self {
        assert_eq!(num.len(), RANK, "a class has {RANK} numerators");
        DivisorClass { num }
    }

    pub fn from_i64(num: &[i64]) -> Self {
        Self::from_numerators(num.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        DivisorClass {
            num: vec![BigInt::zero(); RANK],
        }
    }

    pub fn l() -> Self {
        Self::unit(0)
    }

    pub fn a(j: usize) -> Self {
        Self::unit(index(j, Curve::A))
    }

    pub fn b(j: usize) -> Self {
        Self::unit(index(j, Curve::B))
    }

    pub fn curve(j: usize, c: Curve) -> Self {
        Self::unit(index(j, c))
    }

    fn unit(i: usize) -> Self {
        let mut c = Self::zero();
        c.num[i] = BigInt::from(3);
        c
    }

    /// `x·L − Σ (a_j·A_j + b_j·B_j)` with integer coefficients, the usual way
    /// classes are written down.
    pub fn from_coefficients(x: impl Into<BigInt>, curves: &[(usize, Curve, BigInt)]) -> Self {
        let mut c = Self::l().scale(&x.into());
        for (j, curve, coef) in curves {
            c.num[index(*j, *curve)] -= BigInt::from(3) * coef;
        }
        c
    }

    /// Class with block `j` carrying numerators `(c, −c)` for each `(j, c)`:
    /// `(1/3)·Σ c·(A_j − B_j)`.
    pub fn block_combination(blocks: &[(usize, i64)]) -> Self {
        let mut c = Self::zero();
        for &(j, k) in blocks {
            c.num[index(j, Curve::A)] += k;
            c.num[index(j, Curve::B)] -= k;
        }
        c
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn into_numerators(self) -> Vec<BigInt> {
        self.num
    }

    pub fn numerator(&self, i: usize) -> &BigInt {
        &self.num[i]
    }

    /// Coefficient of `L`.
    pub fn l_coefficient(&self) -> BigRational {
        BigRational::new(self.num[0].clone(), BigInt::from(3))
    }

    /// Coefficient of a curve (as it appears with a plus sign).
    pub fn coefficient(&self, j: usize, c: Curve) -> BigRational {
        BigRational::new(self.num[index(j, c)].clone(), BigInt::from(3))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        DivisorClass {
            num: self.num.iter().map(|x| x * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// True iff every curve coefficient is an integer.
    pub fn integral_on_curves(&self) -> bool {
        self.num[1..].iter().all(|x| x.is_multiple_of(&BigInt::from(3)))
    }

    /// Blocks (1-based) whose two coefficients are not both integers.
    pub fn fractional_blocks(&self) -> Vec<usize> {
        let three = BigInt::from(3);
        (1..=9)
            .filter(|&j| {
                !self.num[index(j, Curve::A)].is_multiple_of(&three)
                    || !self.num[index(j, Curve::B)].is_multiple_of(&three)
            })
            .collect()
    }

    /// `9 · (self · other)` for the form `diag(L², nine A₂ blocks)`.
    pub fn pairing_scaled(&self, other: &DivisorClass, l2: &BigInt) -> BigInt {
        let mut s = &self.num[0] * &other.num[0] * l2;
        for j in 0..9 {
            let (a, b) = (&self.num[2 * j + 1], &self.num[2 * j + 2]);
            let (c, d) = (&other.num[2 * j + 1], &other.num[2 * j + 2]);
            if (a.is_zero() && b.is_zero()) || (c.is_zero() && d.is_zero()) {
                continue;
            }
            s += a * d + b * c - BigInt::from(2) * (a * c + b * d);
        }
        s
    }

    pub fn pairing(&self, other: &DivisorClass, l2: &BigInt) -> BigRational {
        BigRational::new(self.pairing_scaled(other, l2), BigInt::from(9))
    }

    pub fn square(&self, l2: &BigInt) -> BigRational {
        self.pairing(self, l2)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            num: self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            num: self.num.iter().zip(&rhs.num).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            num: self.num.iter().map(|a| -a).collect(),
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

fn fmt_coef(f: &mut fmt::Formatter<'_>, q: &BigRational, name: &str, first: &mut bool) -> fmt::Result {
    if q.is_zero() {
        return Ok(());
    }
    let sign = if q.is_negative() { "-" } else { "+" };
    let abs = q.abs();
    if *first {
        if q.is_negative() {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {sign} ")?;
    }
    *first = false;
    if abs == BigRational::from_integer(1.into()) {
        write!(f, "{name}")
    } else if abs.is_integer() {
        write!(f, "{abs}{name}")
    } else {
        write!(f, "({abs}){name}")
    }
}

/// Human-readable form, e.g. `3L - 6A1 - 11B1`.
impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        fmt_coef(f, &self.l_coefficient(), "L", &mut first)?;
        for j in 1..=9 {
            for (c, n) in [(Curve::A, "A"), (Curve::B, "B")] {
                fmt_coef(f, &self.coefficient(j, c), &format!("{n}{j}"), &mut first)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivisorClass({self})")
    }
}
