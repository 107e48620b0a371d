use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use super::class::{DivisorClass, RANK};
use super::f3;
use super::k3::{gram_of, k3_generators, w1, w2, w3};
use super::NsError;
use crate::exact_linalg::{row_lattice_basis, snf, solve_echelon, IntMatrix};

/// The residue class of `L²` that fixes the shape of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    #[serde(rename = "TWO_MOD6")]
    TwoMod6,
    #[serde(rename = "ZERO_MOD18")]
    ZeroMod18,
    #[serde(rename = "SIX_MOD18")]
    SixMod18,
    #[serde(rename = "TWELVE_MOD18")]
    TwelveMod18,
}

impl Case {
    pub fn of(l2: u64) -> Result<Case, NsError> {
        if l2 < 2 {
            return Err(NsError::InvalidPolarization(l2));
        }
        match (l2 % 6, l2 % 18) {
            (2, _) => Ok(Case::TwoMod6),
            (0, 0) => Ok(Case::ZeroMod18),
            (0, 6) => Ok(Case::SixMod18),
            (0, 12) => Ok(Case::TwelveMod18),
            _ => Err(NsError::InvalidPolarization(l2)),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Case::TwoMod6 => "TWO_MOD6",
            Case::ZeroMod18 => "ZERO_MOD18",
            Case::SixMod18 => "SIX_MOD18",
            Case::TwelveMod18 => "TWELVE_MOD18",
        }
    }

    /// The class `w` with gluing vector `(L + 3w)/3`.
    pub fn gluing_w(self) -> Option<DivisorClass> {
        match self {
            Case::TwoMod6 => None,
            Case::ZeroMod18 => Some(w1()),
            Case::SixMod18 => Some(w2()),
            Case::TwelveMod18 => Some(w3() - w2()),
        }
    }
}

/// A generator of `NS∨/NS`: the class with numerators `scaled / order`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscGenerator {
    #[serde(serialize_with = "crate::serde_big::int")]
    pub order: BigInt,
    #[serde(serialize_with = "crate::serde_big::ints")]
    pub scaled: Vec<BigInt>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscriminantGroup {
    /// Nontrivial invariant factors `d₁ | d₂ | …`.
    #[serde(serialize_with = "crate::serde_big::ints")]
    pub invariant_factors: Vec<BigInt>,
    pub generators: Vec<DiscGenerator>,
}

/// The Néron–Severi lattice for a given `L²`.
#[derive(Debug, Clone, Serialize)]
pub struct NSModel {
    #[serde(rename = "L2")]
    pub l2: u64,
    pub case: Case,
    /// `(L + 3w)/3` in the 0 mod 6 cases.
    pub gluing: Option<DivisorClass>,
    /// Hermite basis, rows in numerator coordinates.
    pub basis: IntMatrix,
    pub gram: IntMatrix,
    pub disc: DiscriminantGroup,
    /// Rows `k` with `k·n ≡ 0 mod 3` for exactly the numerator vectors of NS.
    #[serde(skip)]
    parity: Vec<Vec<u8>>,
}

pub fn build_ns(l2: u64) -> Result<NSModel, NsError> {
    let case = Case::of(l2)?;
    let gluing = case
        .gluing_w()
        .map(|w| &DivisorClass::from_numerators(unit0()) + &w);
    let mut gens = vec![DivisorClass::l()];
    gens.extend(k3_generators());
    gens.extend(gluing.iter().cloned());
    let m = IntMatrix::from_rows(gens.into_iter().map(DivisorClass::into_numerators));
    let basis = row_lattice_basis(&m);
    debug_assert_eq!(basis.rows(), RANK);
    let l2b = BigInt::from(l2);
    let classes: Vec<DivisorClass> = basis
        .row_vecs()
        .into_iter()
        .map(DivisorClass::from_numerators)
        .collect();
    let gram = gram_of(&classes, &l2b);
    let disc = discriminant(&basis, &gram);
    let residues: Vec<Vec<u8>> = (0..RANK).map(|i| f3::reduce_vec(basis.row(i))).collect();
    let parity = f3::orthogonal(residues, RANK);
    Ok(NSModel {
        l2,
        case,
        gluing,
        basis,
        gram,
        disc,
        parity,
    })
}

fn unit0() -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); RANK];
    v[0] = BigInt::from(1);
    v
}

/// Lifts `U_i / d_i` of the SNF `U·G·V = D` generate `NS∨/NS`.
fn discriminant(basis: &IntMatrix, gram: &IntMatrix) -> DiscriminantGroup {
    let s = snf(gram).expect("Gram matrix of NS is nonsingular");
    let mut invariant_factors = Vec::new();
    let mut generators = Vec::new();
    for (i, d) in s.invariant_factors.iter().enumerate() {
        if *d == BigInt::from(1) {
            continue;
        }
        invariant_factors.push(d.clone());
        generators.push(DiscGenerator {
            order: d.clone(),
            scaled: basis.left_apply(s.left.row(i)),
        });
    }
    DiscriminantGroup {
        invariant_factors,
        generators,
    }
}

impl NSModel {
    pub fn l2_big(&self) -> BigInt {
        BigInt::from(self.l2)
    }

    pub fn contains(&self, c: &DivisorClass) -> bool {
        self.contains_numerators(c.numerators())
    }

    pub(crate) fn contains_numerators(&self, n: &[BigInt]) -> bool {
        let r = f3::reduce_vec(n);
        self.parity.iter().all(|k| f3::dot(k, &r) == 0)
    }

    pub(crate) fn parity_check(&self) -> &[Vec<u8>] {
        &self.parity
    }

    /// Coordinates of `c` in the Hermite basis.
    pub fn coordinates(&self, c: &DivisorClass) -> Result<Vec<BigInt>, NsError> {
        solve_echelon(&self.basis, c.numerators()).map_err(|_| NsError::NotInLattice)
    }

    pub fn class_from_coordinates(&self, x: &[BigInt]) -> DivisorClass {
        DivisorClass::from_numerators(self.basis.left_apply(x))
    }

    pub fn pairing(&self, c: &DivisorClass, d: &DivisorClass) -> BigRational {
        c.pairing(d, &self.l2_big())
    }

    /// Integer pairing of two classes known to lie in NS.
    pub fn pairing_int(&self, c: &DivisorClass, d: &DivisorClass) -> BigInt {
        let (q, r) = c.pairing_scaled(d, &self.l2_big()).div_rem(&BigInt::from(9));
        debug_assert_eq!(r, BigInt::from(0));
        q
    }

    pub fn det(&self) -> BigInt {
        self.gram.determinant().expect("square")
    }
}
