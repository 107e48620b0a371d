use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::class::DivisorClass;
use super::model::NSModel;

/// Nine disjoint pairs `(C_j, D_j)` of (−2)-classes with `C_j·D_j = 1`,
/// together with the polarization orthogonal to all of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub polarization: DivisorClass,
    pub pairs: Vec<(DivisorClass, DivisorClass)>,
}

impl Configuration {
    /// `(A_j, B_j)` with polarization `L`.
    pub fn standard() -> Self {
        Configuration {
            polarization: DivisorClass::l(),
            pairs: (1..=9).map(|j| (DivisorClass::a(j), DivisorClass::b(j))).collect(),
        }
    }

    /// The eighteen curves in the order `C₁, D₁, …, C₉, D₉`.
    pub fn curves(&self) -> Vec<DivisorClass> {
        self.pairs
            .iter()
            .flat_map(|(c, d)| [c.clone(), d.clone()])
            .collect()
    }

    /// Checks membership, self-intersections, incidences and orthogonality
    /// to the polarization.
    pub fn is_valid(&self, ns: &NSModel) -> bool {
        if self.pairs.len() != 9 {
            return false;
        }
        let curves = self.curves();
        let l2 = ns.l2_big();
        let all = std::iter::once(&self.polarization).chain(&curves);
        if !all.clone().all(|c| ns.contains(c)) {
            return false;
        }
        if ns.pairing_int(&self.polarization, &self.polarization) != l2 {
            return false;
        }
        for (i, c) in curves.iter().enumerate() {
            if !ns.pairing_int(&self.polarization, c).is_zero() {
                return false;
            }
            for (j, d) in curves.iter().enumerate().skip(i) {
                let expected = if i == j {
                    -2
                } else if i / 2 == j / 2 {
                    1
                } else {
                    0
                };
                if ns.pairing_int(c, d) != BigInt::from(expected) {
                    return false;
                }
            }
        }
        true
    }
}
