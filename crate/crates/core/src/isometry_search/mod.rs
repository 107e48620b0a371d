//! Exhaustive search for isometries of NS carrying one 9A₂ configuration to
//! another.
//!
//! A candidate is a permutation `σ` of the blocks plus a swap bit per block:
//! `L ↦ L′` and `C_k ↦ C′_{σ(k)}` or `D′_{σ(k)}`. Permutations are first
//! pruned by the 6-block supports of 3-divisible classes; the survivors'
//! 512 swap patterns are screened modulo `3D` with a Gray-code walk before
//! any exact arithmetic happens.

mod aut20;
mod blocks;
mod order;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact_linalg::{solve_integral, IntMatrix, RatMatrix};
use crate::ns_lattice::{Configuration, DivisorClass, NSModel, NsError, RANK};

pub use aut20::{compute_aut_d2, d2_configuration, nine_a2_subconfigurations, AutD2, D2Configuration};
pub use blocks::{block_sets, coset_supports, prune, BlockDivisibilitySet};
pub use order::{characteristic_polynomial, cyclotomic_polynomials, matrix_order, Order};

use blocks::{config_matrix, inverse_config_matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("not a 9A2 configuration in this lattice")]
    NotAConfiguration,
    #[error("this computation needs L^2 = 20, got {0}")]
    WrongPolarization(u64),
    #[error(transparent)]
    Lattice(#[from] NsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pruned,
    NonIntegral,
    DiscFail,
    Accepted,
}

/// A block permutation with swap bits and the isometry it induces.
#[derive(Debug, Clone, Serialize)]
pub struct IsometryCandidate {
    /// `σ(k)` for `k = 0..9`.
    #[serde(serialize_with = "one_based")]
    pub sigma: [u8; 9],
    /// Bit `k` set: `C_k ↦ D′_{σ(k)}`.
    #[serde(serialize_with = "bitstring")]
    pub swaps: u16,
    /// The map on numerator row vectors in the ℚ-basis `(L, A₁, …, B₉)`.
    #[serde(skip)]
    pub matrix: RatMatrix,
    /// The same map on coordinates in the Hermite basis of NS.
    #[serde(skip)]
    pub ns_matrix: IntMatrix,
    pub status: Status,
    /// `+1` or `−1`: the action on `NS∨/NS`.
    pub disc_sign: i8,
    pub order: Option<Order>,
}

fn one_based<S: Serializer>(sigma: &[u8; 9], s: S) -> Result<S::Ok, S::Error> {
    sigma.map(|x| x + 1).serialize(s)
}

fn bitstring<S: Serializer>(swaps: &u16, s: S) -> Result<S::Ok, S::Error> {
    let b: String = (0..9).map(|k| if swaps >> k & 1 == 1 { '1' } else { '0' }).collect();
    s.serialize_str(&b)
}

impl IsometryCandidate {
    /// Image of a class, when integral in numerator coordinates.
    pub fn apply(&self, c: &DivisorClass) -> Option<DivisorClass> {
        let v: Vec<BigRational> = c
            .numerators()
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let img = self.matrix.left_apply(&v);
        img.iter()
            .all(BigRational::is_integer)
            .then(|| DivisorClass::from_numerators(img.iter().map(BigRational::to_integer).collect()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StatusCounts {
    pub pruned: u64,
    pub non_integral: u64,
    pub disc_fail: u64,
    pub accepted: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub prune_count: usize,
    pub counts: StatusCounts,
    pub accepted: Vec<IsometryCandidate>,
    /// Ample classes go to ample classes for every candidate (not re-checked).
    pub condition_iv: &'static str,
}

/// All isometries of NS taking `source` to `target` block by block and
/// acting as `±1` on the discriminant group, sorted by `(σ, swaps)`.
pub fn search(ns: &NSModel, source: &Configuration, target: &Configuration) -> Result<SearchOutcome, SearchError> {
    let bl_s = block_sets(ns, source)?;
    let bl_t = block_sets(ns, target)?;
    if ns.pairing(&source.polarization, &source.polarization) != ns.pairing(&target.polarization, &target.polarization)
    {
        return Err(SearchError::NotAConfiguration);
    }
    let perms = prune(&bl_s, &bl_t);
    let ctx = Context::new(ns, source, target)?;
    let per_sigma: Vec<(StatusCounts, Vec<IsometryCandidate>)> =
        perms.par_iter().map(|sigma| ctx.run_sigma(sigma)).collect();
    let mut counts = StatusCounts {
        pruned: (362_880 - perms.len() as u64) * 512,
        ..Default::default()
    };
    let mut accepted = Vec::new();
    for (c, acc) in per_sigma {
        counts.non_integral += c.non_integral;
        counts.disc_fail += c.disc_fail;
        counts.accepted += c.accepted;
        accepted.extend(acc);
    }
    accepted.par_iter_mut().for_each(|c| c.order = Some(classify_order(c)));
    Ok(SearchOutcome {
        prune_count: perms.len(),
        counts,
        accepted,
        condition_iv: "automatic",
    })
}

/// Multiplicative order of an accepted isometry.
pub fn classify_order(c: &IsometryCandidate) -> Order {
    matrix_order(&c.ns_matrix)
}

/// Precomputed data for one `(source, target)` pair.
struct Context<'a> {
    ns: &'a NSModel,
    src_inv: RatMatrix,
    basis_inv: RatMatrix,
    target_rows: Vec<Vec<BigInt>>,
    modulus: u32,
    denom: u32,
    /// one block of 19 residues per generator
    base: Vec<u32>,
    /// `contrib[k][j][s]`, concatenated over generators
    contrib: Vec<Vec<[Vec<u32>; 2]>>,
}

impl<'a> Context<'a> {
    fn new(ns: &'a NSModel, source: &Configuration, target: &Configuration) -> Result<Self, SearchError> {
        let src_inv = inverse_config_matrix(source)?;
        let tgt = config_matrix(target);
        let target_rows = tgt.row_vecs();
        let (denom, gens) = quotient_generators(ns, &src_inv);
        let modulus = 3 * denom;
        let m = BigInt::from(modulus);
        let red = |v: BigInt| v.mod_floor(&m).to_u32().expect("residue");
        let scaled_row = |coef: &BigInt, row: &[BigInt]| -> Vec<BigInt> { row.iter().map(|x| coef * x).collect() };
        let mut base = Vec::with_capacity(gens.len() * RANK);
        for g in &gens {
            base.extend(scaled_row(&g[0], &target_rows[0]).into_iter().map(red));
        }
        let contrib = (0..9)
            .map(|k| {
                (0..9)
                    .map(|j| {
                        let (tc, td) = (&target_rows[2 * j + 1], &target_rows[2 * j + 2]);
                        let mut straight = Vec::with_capacity(gens.len() * RANK);
                        let mut swapped = Vec::with_capacity(gens.len() * RANK);
                        for g in &gens {
                            let (cc, cd) = (&g[2 * k + 1], &g[2 * k + 2]);
                            for i in 0..RANK {
                                straight.push(red(cc * &tc[i] + cd * &td[i]));
                                swapped.push(red(cc * &td[i] + cd * &tc[i]));
                            }
                        }
                        [straight, swapped]
                    })
                    .collect()
            })
            .collect();
        Ok(Context {
            ns,
            src_inv,
            basis_inv: ns.basis.to_rational().inverse().expect("basis is nonsingular"),
            target_rows,
            modulus,
            denom,
            base,
            contrib,
        })
    }

    /// `W = D·ψ(g)` lies in `D·NS` for every generator.
    fn passes(&self, w: &[u32]) -> bool {
        let parity = self.ns.parity_check();
        w.chunks(RANK).all(|blk| {
            if blk.iter().any(|x| x % self.denom != 0) {
                return false;
            }
            parity.iter().all(|k| {
                let s: u32 = k.iter().zip(blk).map(|(&a, &x)| u32::from(a) * ((x / self.denom) % 3)).sum();
                s.is_multiple_of(3)
            })
        })
    }

    fn run_sigma(&self, sigma: &[u8; 9]) -> (StatusCounts, Vec<IsometryCandidate>) {
        let m = self.modulus;
        let mut w = self.base.clone();
        for k in 0..9 {
            add_assign(&mut w, &self.contrib[k][sigma[k] as usize][0], m);
        }
        let mut survivors = Vec::new();
        let mut swaps = 0u16;
        if self.passes(&w) {
            survivors.push(swaps);
        }
        for i in 1u32..512 {
            let k = i.trailing_zeros() as usize;
            let [straight, swapped] = &self.contrib[k][sigma[k] as usize];
            let (from, to) = if swaps >> k & 1 == 0 {
                (straight, swapped)
            } else {
                (swapped, straight)
            };
            sub_assign(&mut w, from, m);
            add_assign(&mut w, to, m);
            swaps ^= 1 << k;
            if self.passes(&w) {
                survivors.push(swaps);
            }
        }
        survivors.sort_unstable();
        let mut counts = StatusCounts {
            non_integral: 512 - survivors.len() as u64,
            ..Default::default()
        };
        let mut accepted = Vec::new();
        for s in survivors {
            let c = self.exact(sigma, s);
            match c.status {
                Status::Accepted => {
                    counts.accepted += 1;
                    accepted.push(c);
                }
                Status::DiscFail => counts.disc_fail += 1,
                _ => counts.non_integral += 1,
            }
        }
        (counts, accepted)
    }

    fn image_matrix(&self, sigma: &[u8; 9], swaps: u16) -> IntMatrix {
        let mut rows = Vec::with_capacity(RANK);
        rows.push(self.target_rows[0].clone());
        for k in 0..9 {
            let j = sigma[k] as usize;
            let (c, d) = (self.target_rows[2 * j + 1].clone(), self.target_rows[2 * j + 2].clone());
            if swaps >> k & 1 == 0 {
                rows.extend([c, d]);
            } else {
                rows.extend([d, c]);
            }
        }
        IntMatrix::from_rows(rows)
    }

    /// Conditions on the full matrix, in exact arithmetic.
    fn exact(&self, sigma: &[u8; 9], swaps: u16) -> IsometryCandidate {
        let img = self.image_matrix(sigma, swaps);
        let psi = self.src_inv.mul(&img.to_rational());
        let h = self.ns.basis.to_rational();
        let mut cand = IsometryCandidate {
            sigma: *sigma,
            swaps,
            matrix: psi.clone(),
            ns_matrix: IntMatrix::zeros(RANK, RANK),
            status: Status::NonIntegral,
            disc_sign: 0,
            order: None,
        };
        let Some(m) = h.mul(&psi).mul(&self.basis_inv).to_integer() else {
            return cand;
        };
        let Ok(psi_inv) = psi.inverse() else {
            return cand;
        };
        if h.mul(&psi_inv).mul(&self.basis_inv).to_integer().is_none() {
            return cand;
        }
        assert_eq!(m.congruence(&self.ns.gram), self.ns.gram, "configuration maps preserve the form");
        cand.ns_matrix = m;
        match disc_sign(self.ns, &psi) {
            Some(e) => {
                cand.status = Status::Accepted;
                cand.disc_sign = e;
            }
            None => cand.status = Status::DiscFail,
        }
        cand
    }
}

fn add_assign(w: &mut [u32], v: &[u32], m: u32) {
    for (a, b) in w.iter_mut().zip(v) {
        *a += b;
        if *a >= m {
            *a -= m;
        }
    }
}

fn sub_assign(w: &mut [u32], v: &[u32], m: u32) {
    for (a, b) in w.iter_mut().zip(v) {
        *a += m - b;
        if *a >= m {
            *a -= m;
        }
    }
}

/// `ε ∈ {+1, −1}` with `ψ(g) − ε·g ∈ NS` for every discriminant generator.
pub(crate) fn disc_sign(ns: &NSModel, psi: &RatMatrix) -> Option<i8> {
    [1i8, -1].into_iter().find(|&e| {
        ns.disc.generators.iter().all(|g| {
            let w: Vec<BigRational> = g.scaled.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            let img = psi.left_apply(&w);
            let d = BigRational::from_integer(g.order.clone());
            let diff: Vec<BigRational> = img
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - BigRational::from_integer(BigInt::from(e)) * b) / &d)
                .collect();
            diff.iter().all(BigRational::is_integer)
                && ns.contains(&DivisorClass::from_numerators(diff.iter().map(BigRational::to_integer).collect()))
        })
    })
}

/// Coefficients (scaled by a common denominator `D`) over the source classes
/// of a generating set of `NS / ⟨source classes⟩`.
fn quotient_generators(ns: &NSModel, src_inv: &RatMatrix) -> (u32, Vec<Vec<BigInt>>) {
    let coords: Vec<Vec<BigRational>> = (0..RANK)
        .map(|i| {
            let h: Vec<BigRational> = ns.basis.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            src_inv.left_apply(&h)
        })
        .collect();
    let denom = coords
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|c| c.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let mut lattice: Vec<Vec<BigInt>> = (0..RANK)
        .map(|i| {
            let mut r = vec![BigInt::zero(); RANK];
            r[i] = denom.clone();
            r
        })
        .collect();
    let mut kept = Vec::new();
    for c in scaled {
        if solve_integral(&IntMatrix::from_rows(lattice.clone()), &c).is_err() {
            lattice.push(c.clone());
            kept.push(c);
        }
    }
    (denom.to_u32().expect("small denominator"), kept)
}
