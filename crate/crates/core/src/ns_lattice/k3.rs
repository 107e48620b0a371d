//! The lattice 𝒦₃ spanned by the eighteen curves and the three
//! 3-divisible classes `t₁, t₂, t₃`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::class::DivisorClass;
use crate::exact_linalg::{row_lattice_basis, IntMatrix};

/// `t₁ = (1/3)·Σ_{j=1..9} (A_j − B_j)`.
pub fn t1() -> DivisorClass {
    DivisorClass::block_combination(&(1..=9).map(|j| (j, 1)).collect::<Vec<_>>())
}

pub fn t2() -> DivisorClass {
    DivisorClass::block_combination(&[(2, 1), (3, 2), (6, 1), (7, 2), (8, 1), (9, 2)])
}

pub fn t3() -> DivisorClass {
    DivisorClass::block_combination(&[(4, 1), (5, 2), (6, 1), (7, 2), (8, 2), (9, 1)])
}

/// Classes of 𝒦₃∨ generating the discriminant group.
pub fn w1() -> DivisorClass {
    DivisorClass::block_combination(&[(5, 1), (7, 1), (8, 1)])
}

pub fn w2() -> DivisorClass {
    DivisorClass::block_combination(&[(4, 2), (6, 1), (7, 2), (8, 1)])
}

pub fn w3() -> DivisorClass {
    DivisorClass::block_combination(&[(3, 1), (5, 1), (6, 1)])
}

/// The curves `A₁, B₁, …, A₉, B₉` followed by `t₁, t₂, t₃`.
pub fn k3_generators() -> Vec<DivisorClass> {
    let mut g = Vec::with_capacity(21);
    for j in 1..=9 {
        g.push(DivisorClass::a(j));
        g.push(DivisorClass::b(j));
    }
    g.extend([t1(), t2(), t3()]);
    g
}

#[derive(Debug, Clone, Serialize)]
pub struct K3Lattice {
    /// Integral basis, rows in numerator coordinates (`L` coordinate zero).
    pub basis: IntMatrix,
    pub gram: IntMatrix,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub det: BigInt,
}

/// Gram matrix of a list of classes, which must pair integrally.
pub fn gram_of(classes: &[DivisorClass], l2: &BigInt) -> IntMatrix {
    let n = classes.len();
    let mut g = IntMatrix::zeros(n, n);
    let nine = BigInt::from(9);
    for i in 0..n {
        for j in i..n {
            let s = classes[i].pairing_scaled(&classes[j], l2);
            assert!((&s % &nine) == BigInt::from(0), "non-integral pairing");
            let v = s / &nine;
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    g
}

/// Rational Gram matrix (used for the `w` classes of the dual).
pub fn rational_gram(classes: &[DivisorClass], l2: &BigInt) -> Vec<Vec<BigRational>> {
    classes
        .iter()
        .map(|c| classes.iter().map(|d| c.pairing(d, l2)).collect())
        .collect()
}

pub fn build_k3() -> K3Lattice {
    let gens = IntMatrix::from_rows(
        k3_generators()
            .into_iter()
            .map(|c| c.into_numerators()[1..].to_vec()),
    );
    let basis18 = row_lattice_basis(&gens);
    let basis = IntMatrix::from_rows(basis18.row_vecs().into_iter().map(|r| {
        let mut full = vec![BigInt::from(0)];
        full.extend(r);
        full
    }));
    let classes: Vec<DivisorClass> = basis
        .row_vecs()
        .into_iter()
        .map(DivisorClass::from_numerators)
        .collect();
    let gram = gram_of(&classes, &BigInt::from(0));
    let det = gram.determinant().expect("square");
    K3Lattice { basis, gram, det }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_gram_and_det() {
        let g = gram_of(&[t1(), t2(), t3()], &BigInt::from(0));
        assert_eq!(g, IntMatrix::from_i64(&[&[-6, -6, -6], &[-6, -10, -6], &[-6, -6, -10]]));
        let k3 = build_k3();
        assert_eq!(k3.basis.rows(), 18);
        assert_eq!(k3.det, BigInt::from(27));
    }

    #[test]
    fn supports() {
        assert_eq!(t1().fractional_blocks().len(), 9);
        assert_eq!(t2().fractional_blocks(), vec![2, 3, 6, 7, 8, 9]);
        assert_eq!(t3().fractional_blocks(), vec![4, 5, 6, 7, 8, 9]);
    }
}
