use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use super::class::{DivisorClass, RANK};
use super::f3;
use super::model::NSModel;
use super::NsError;

/// A nonzero coset of `L⊥ / ⟨A₁, …, B₉⟩` (or zero), with the blocks on which
/// its coefficients are fractional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeDivisibleClass {
    pub class: DivisorClass,
    pub blocks: Vec<usize>,
}

/// Representatives (coefficients in `{−1/3, 0, 1/3}`) of the 27 cosets.
pub fn three_divisible_classes(ns: &NSModel) -> Vec<ThreeDivisibleClass> {
    let rows: Vec<Vec<u8>> = (0..RANK).map(|i| f3::reduce_vec(ns.basis.row(i))).collect();
    let (red, _) = f3::rref(rows);
    let mut out: Vec<ThreeDivisibleClass> = f3::span(&red, RANK)
        .into_iter()
        .filter(|v| v[0] == 0)
        .map(|v| {
            let class = DivisorClass::from_numerators(
                v.iter()
                    .map(|&x| BigInt::from(if x == 2 { -1 } else { i64::from(x) }))
                    .collect(),
            );
            let blocks = class.fractional_blocks();
            ThreeDivisibleClass { class, blocks }
        })
        .collect();
    out.sort_by(|a, b| (a.blocks.len(), &a.class).cmp(&(b.blocks.len(), &b.class)));
    out
}

/// Number of cosets supported on each number of blocks.
pub fn support_histogram(classes: &[ThreeDivisibleClass]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for c in classes {
        *h.entry(c.blocks.len()).or_insert(0) += 1;
    }
    h
}

/// `Γ = aL − (1/3)·Σ (a_j A_j + b_j B_j)` with `a_j = u_j + 2v_j`,
/// `b_j = 2u_j + v_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UvDecomposition {
    #[serde(serialize_with = "crate::serde_big::rat")]
    pub a: BigRational,
    /// `(u_j, v_j)` for `j = 1..9`.
    #[serde(serialize_with = "crate::serde_big::int_pairs")]
    pub uv: Vec<(BigInt, BigInt)>,
}

/// Solves for `u_j, v_j`. They are the intersection numbers `Γ·B_j` and
/// `Γ·A_j`, so the decomposition exists iff those are integers.
pub fn uv_decompose(c: &DivisorClass) -> Result<UvDecomposition, NsError> {
    let zero = BigInt::from(0);
    let three = BigInt::from(3);
    let mut uv = Vec::with_capacity(9);
    for j in 1..=9 {
        let u = c.pairing_scaled(&DivisorClass::b(j), &zero);
        let v = c.pairing_scaled(&DivisorClass::a(j), &zero);
        // pairing_scaled is 9·pairing; the curve numerator contributes a factor 3
        let (u, ru) = u.div_rem(&(&three * &three));
        let (v, rv) = v.div_rem(&(&three * &three));
        if ru != zero || rv != zero {
            return Err(NsError::NotRepresentable);
        }
        uv.push((u, v));
    }
    Ok(UvDecomposition {
        a: c.l_coefficient(),
        uv,
    })
}
