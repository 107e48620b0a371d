use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::SearchError;
use crate::exact_linalg::{IntMatrix, RatMatrix};
use crate::ns_lattice::f3;
use crate::ns_lattice::{orthogonal_lattice, Configuration, NSModel};

/// The twelve 6-block supports of 3-divisible classes of a configuration,
/// as bitmasks over blocks `0..9`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDivisibilitySet {
    masks: Vec<u16>,
}

impl BlockDivisibilitySet {
    /// # Panics
    /// If a mask uses bits beyond the nine blocks.
    pub fn from_masks(mut masks: Vec<u16>) -> Self {
        assert!(masks.iter().all(|&m| m < 1 << 9));
        masks.sort_unstable();
        masks.dedup();
        BlockDivisibilitySet { masks }
    }

    /// From 1-based block lists.
    pub fn from_sets(sets: &[Vec<usize>]) -> Self {
        Self::from_masks(
            sets.iter()
                .map(|s| s.iter().fold(0u16, |m, &j| m | 1 << (j - 1)))
                .collect(),
        )
    }

    pub fn masks(&self) -> &[u16] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// 1-based block lists.
    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.masks
            .iter()
            .map(|&m| (0..9).filter(|j| m >> j & 1 == 1).map(|j| j + 1).collect())
            .collect()
    }
}

impl Serialize for BlockDivisibilitySet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.sets().serialize(s)
    }
}

/// Supports of the classes of `(NS ∩ pol⊥) / ⟨C₁, …, D₉⟩`, computed in the
/// coordinates of the configuration. Every support is returned once per
/// class, so the multiset has 27 entries (0 for the trivial class).
pub fn coset_supports(ns: &NSModel, config: &Configuration) -> Result<Vec<u16>, SearchError> {
    if !config.is_valid(ns) {
        return Err(SearchError::NotAConfiguration);
    }
    let p = config_matrix(config);
    let pinv = p.to_rational().inverse().map_err(|_| SearchError::NotAConfiguration)?;
    let orth = orthogonal_lattice(ns, &config.polarization)?;
    // numerators · P⁻¹ gives coefficients over (pol, C₁, D₁, …); scale by 3
    let three = BigInt::from(3);
    let mut rows = Vec::with_capacity(orth.basis.rows());
    for i in 0..orth.basis.rows() {
        let v: Vec<_> = orth
            .basis
            .row(i)
            .iter()
            .map(|x| num_rational::BigRational::from_integer(x * &three))
            .collect();
        let c = pinv.left_apply(&v);
        if !c[0].is_zero() || c.iter().any(|x| !x.is_integer()) {
            // coefficients outside (1/3)ℤ: not a 3-elementary gluing
            return Err(SearchError::NotAConfiguration);
        }
        rows.push(f3::reduce_vec(&c[1..].iter().map(|x| x.to_integer()).collect::<Vec<_>>()));
    }
    let (red, _) = f3::rref(rows);
    Ok(f3::span(&red, 18)
        .into_iter()
        .map(|v| (0..9).fold(0u16, |m, j| if v[2 * j] != 0 || v[2 * j + 1] != 0 { m | 1 << j } else { m }))
        .collect())
}

/// `BL₁₂` for a configuration.
pub fn block_sets(ns: &NSModel, config: &Configuration) -> Result<BlockDivisibilitySet, SearchError> {
    let supports = coset_supports(ns, config)?;
    let six: Vec<u16> = supports.into_iter().filter(|m| m.count_ones() == 6).collect();
    let set = BlockDivisibilitySet::from_masks(six);
    if set.len() != 12 {
        return Err(SearchError::NotAConfiguration);
    }
    Ok(set)
}

/// Rows: numerators of `pol, C₁, D₁, …, C₉, D₉`.
pub(crate) fn config_matrix(config: &Configuration) -> IntMatrix {
    let mut rows = vec![config.polarization.numerators().to_vec()];
    rows.extend(config.curves().iter().map(|c| c.numerators().to_vec()));
    IntMatrix::from_rows(rows)
}

pub(crate) fn inverse_config_matrix(config: &Configuration) -> Result<RatMatrix, SearchError> {
    config_matrix(config)
        .to_rational()
        .inverse()
        .map_err(|_| SearchError::NotAConfiguration)
}

/// Every `σ ∈ S₉` (0-based one-line notation) sending each set of `bl` into
/// `bl_prime`, in lexicographic order.
pub fn prune(bl: &BlockDivisibilitySet, bl_prime: &BlockDivisibilitySet) -> Vec<[u8; 9]> {
    let mut target = [false; 512];
    for &m in bl_prime.masks() {
        target[m as usize] = true;
    }
    // sets to check once position d is assigned: those whose top block is d
    let mut by_top: [Vec<u16>; 9] = Default::default();
    for &m in bl.masks() {
        if m != 0 {
            by_top[15 - m.leading_zeros() as usize].push(m);
        }
    }
    let mut out = Vec::new();
    let mut sigma = [0u8; 9];
    extend(0, 0, &mut sigma, &by_top, &target, &mut out);
    out
}

fn extend(
    d: usize,
    used: u16,
    sigma: &mut [u8; 9],
    by_top: &[Vec<u16>; 9],
    target: &[bool; 512],
    out: &mut Vec<[u8; 9]>,
) {
    if d == 9 {
        out.push(*sigma);
        return;
    }
    for v in 0..9u8 {
        if used >> v & 1 == 1 {
            continue;
        }
        sigma[d] = v;
        let ok = by_top[d].iter().all(|&m| {
            let img = (0..=d).filter(|&j| m >> j & 1 == 1).fold(0u16, |a, j| a | 1 << sigma[j]);
            target[img as usize]
        });
        if ok {
            extend(d + 1, used | 1 << v, sigma, by_top, target, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns_lattice::{build_ns, t2};

    #[test]
    fn standard_sets() {
        let ns = build_ns(20).unwrap();
        let bl = block_sets(&ns, &Configuration::standard()).unwrap();
        assert_eq!(bl.len(), 12);
        assert!(bl.sets().contains(&t2().fractional_blocks()));
        let mut sup = coset_supports(&ns, &Configuration::standard()).unwrap();
        sup.sort_unstable();
        assert_eq!(sup.iter().filter(|m| m.count_ones() == 9).count(), 2);
        assert_eq!(sup[0], 0);
    }

    #[test]
    fn prune_identity_and_monotonicity() {
        let ns = build_ns(20).unwrap();
        let bl = block_sets(&ns, &Configuration::standard()).unwrap();
        let perms = prune(&bl, &bl);
        assert_eq!(perms.len(), 432);
        assert_eq!(perms[0], [0, 1, 2, 3, 4, 5, 6, 7, 8]);
        let mut masks = bl.masks().to_vec();
        // a 6-set that is not in BL₁₂
        let foreign = (0..512u16).find(|m| m.count_ones() == 6 && !masks.contains(m)).unwrap();
        masks[0] = foreign;
        let fewer = prune(&bl, &BlockDivisibilitySet::from_masks(masks));
        assert!(fewer.len() < 432);
    }

    #[test]
    fn broken_configuration_is_rejected() {
        let ns = build_ns(20).unwrap();
        let mut c = Configuration::standard();
        c.pairs.swap(0, 1);
        c.pairs[0].1 = crate::ns_lattice::DivisorClass::b(3);
        assert_eq!(block_sets(&ns, &c), Err(SearchError::NotAConfiguration));
    }
}
