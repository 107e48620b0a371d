//! The second 9A₂ configuration built from a Pell–Fermat solution, and the
//! modular criterion telling whether it is inequivalent to the first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::isometry_search;
use crate::ns_lattice::{
    build_ns, root_system_of_orthogonal, Case, Configuration, Curve, DivisorClass, NSModel, NsError,
};
use crate::pell::{fundamental_solution, is_square, PellFundamental};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KummerError {
    #[error(transparent)]
    Lattice(#[from] NsError),
    #[error("L^2 = {l2}: x^2 - {d}y^2 = 1 has no nontrivial solution (6L^2 is a perfect square)")]
    NoPellSolution { l2: u64, d: u64 },
}

/// The replacement curve and polarization.
#[derive(Debug, Clone, Serialize)]
pub struct Construction {
    pub pell: PellFundamental,
    /// `2t` when `L² = 2t`, `t ≡ 1 mod 3`; `2k` when `L² = 6k`.
    pub modulus: u64,
    /// The roles of `A₁` and `B₁` are exchanged: the new curve replaces `A₁`.
    pub swapped: bool,
    /// `B₁′`, or `A₁′` when swapped.
    pub new_curve: DivisorClass,
    pub lprime: DivisorClass,
}

impl Construction {
    /// The configuration `𝒞′`: block 1 becomes `(A₁, B₁′)` (or `(A₁′, B₁)`).
    pub fn configuration(&self) -> Configuration {
        let mut c = Configuration::standard();
        c.polarization = self.lprime.clone();
        if self.swapped {
            c.pairs[0].0 = self.new_curve.clone();
        } else {
            c.pairs[0].1 = self.new_curve.clone();
        }
        c
    }

    /// The curve that stays in block 1 (`A₁`, or `B₁` when swapped).
    pub fn kept_curve(&self) -> DivisorClass {
        if self.swapped {
            DivisorClass::b(1)
        } else {
            DivisorClass::a(1)
        }
    }
}

/// Pell discriminant and modulus for a polarization: `(12t, 2t)` or `(4k, 2k)`.
pub fn pell_parameters(case: Case, l2: u64) -> (u64, u64) {
    match case {
        Case::TwoMod6 => (6 * l2, l2),
        _ => (4 * (l2 / 6), l2 / 3),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub six_l2_nonsquare: bool,
    pub irreducibility_ok: bool,
    /// `L² ≡ 0 mod 18` and `3 ∤ y₀`: block 1 may need its curves exchanged.
    pub swapped_a1_b1: bool,
}

impl Hypotheses {
    pub fn hold(&self) -> bool {
        self.six_l2_nonsquare && self.irreducibility_ok
    }
}

/// `sL − (½(x+1)A₁ + xB₁)` for one Pell solution, or `sL − (xA₁ + ½(x+1)B₁)`
/// when swapped.
fn pell_curve(scale_l: &BigInt, x: &BigInt, swapped: bool) -> DivisorClass {
    let half = (x + 1u32) / 2u32;
    let (ca, cb) = if swapped { (x.clone(), half) } else { (half, x.clone()) };
    DivisorClass::from_coefficients(scale_l.clone(), &[(1, Curve::A, ca), (1, Curve::B, cb)])
}

fn l_multiplier(case: Case, y: &BigInt) -> BigInt {
    match case {
        Case::TwoMod6 => BigInt::from(3) * y,
        _ => y.clone(),
    }
}

fn oriented(case: Case, pell: &PellFundamental, modulus: u64, swapped: bool) -> Construction {
    let new_curve = pell_curve(&l_multiplier(case, &pell.y0), &pell.x0, swapped);
    // L′ = x₀L − (modulus·y₀)(K + 2N) where K is the kept curve and N the replaced one
    let m = BigInt::from(modulus) * &pell.y0;
    let (ca, cb) = if swapped {
        (BigInt::from(2) * &m, m)
    } else {
        (m.clone(), BigInt::from(2) * &m)
    };
    let lprime = DivisorClass::from_coefficients(pell.x0.clone(), &[(1, Curve::A, ca), (1, Curve::B, cb)]);
    Construction {
        pell: pell.clone(),
        modulus,
        swapped,
        new_curve,
        lprime,
    }
}

/// Builds `B₁′` and `L′`. When `L² ≡ 0 mod 18` and `3 ∤ y₀`, only one of the
/// two orientations of block 1 leaves `L′⊥` with root system 9A₂; the
/// exchanged one is tried first and kept when it does.
pub fn construct(ns: &NSModel) -> Result<Construction, KummerError> {
    let (d, modulus) = pell_parameters(ns.case, ns.l2);
    let pell = fundamental_solution(d).map_err(|_| KummerError::NoPellSolution { l2: ns.l2, d })?;
    let ambiguous = ns.case == Case::ZeroMod18 && !pell.y0.is_multiple_of(&BigInt::from(3));
    let mut c = oriented(ns.case, &pell, modulus, ambiguous);
    if ambiguous && !root_system_of_orthogonal(ns, &c.lprime)?.is_nine_a2() {
        c = oriented(ns.case, &pell, modulus, false);
    }
    let kept = c.kept_curve();
    let l2 = ns.l2_big();
    assert!(ns.contains(&c.new_curve) && ns.contains(&c.lprime));
    assert_eq!(ns.pairing_int(&c.new_curve, &c.new_curve), BigInt::from(-2));
    assert_eq!(ns.pairing_int(&c.new_curve, &kept), BigInt::one());
    assert_eq!(ns.pairing_int(&c.lprime, &c.lprime), l2);
    assert!(ns.pairing_int(&c.lprime, &kept).is_zero());
    assert!(ns.pairing_int(&c.lprime, &c.new_curve).is_zero());
    Ok(c)
}

pub fn check_hypotheses(ns: &NSModel) -> Hypotheses {
    let six_l2_nonsquare = !is_square(&BigInt::from(6 * ns.l2));
    let y0 = if six_l2_nonsquare {
        let (d, _) = pell_parameters(ns.case, ns.l2);
        fundamental_solution(d).ok().map(|f| f.y0)
    } else {
        None
    };
    let three_divides_y0 = y0.as_ref().is_some_and(|y| y.is_multiple_of(&BigInt::from(3)));
    let zero_mod18 = ns.case == Case::ZeroMod18;
    Hypotheses {
        six_l2_nonsquare,
        irreducibility_ok: !zero_mod18 || three_divides_y0,
        swapped_a1_b1: zero_mod18 && y0.is_some() && !three_divides_y0,
    }
}

/// Whether the geometric hypotheses back the criterion for this polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Hypotheses hold; `two_structures` follows from the criterion.
    Proved,
    /// The criterion was evaluated but the irreducibility hypothesis is not
    /// available, so no conclusion is drawn.
    CriterionOnly,
}

/// Outcome of the isometry search run alongside the criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchCheck {
    pub prune_count: usize,
    pub accepted: usize,
    /// `accepted == 0` iff `two_structures`.
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecisionReport {
    #[serde(rename = "L2")]
    pub l2: u64,
    pub case: Case,
    pub pell: PellFundamental,
    pub b1prime: DivisorClass,
    pub lprime: DivisorClass,
    pub modulus: u64,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub residue: BigInt,
    pub hypotheses: Hypotheses,
    /// `x₀ ≢ ±1` modulo the modulus.
    pub criterion: bool,
    pub verdict: Verdict,
    pub two_structures: bool,
    pub search: Option<SearchCheck>,
}

pub fn decide(ns: &NSModel) -> Result<DecisionReport, KummerError> {
    let c = construct(ns)?;
    let hypotheses = check_hypotheses(ns);
    let modulus = BigInt::from(c.modulus);
    let residue = c.pell.x0.mod_floor(&modulus);
    let criterion = !residue.is_one() && residue != &modulus - 1u32;
    let verdict = if hypotheses.hold() {
        Verdict::Proved
    } else {
        Verdict::CriterionOnly
    };
    Ok(DecisionReport {
        l2: ns.l2,
        case: ns.case,
        b1prime: c.new_curve.clone(),
        lprime: c.lprime.clone(),
        modulus: c.modulus,
        residue,
        hypotheses,
        criterion,
        verdict,
        two_structures: criterion && verdict == Verdict::Proved,
        search: None,
        pell: c.pell,
    })
}

/// Runs the isometry search `𝒞 → 𝒞′` and records whether it agrees with the
/// criterion.
pub fn cross_check(ns: &NSModel, report: &mut DecisionReport) -> Result<(), KummerError> {
    let c = construct(ns)?;
    let out = isometry_search::search(ns, &Configuration::standard(), &c.configuration())
        .expect("both configurations are valid");
    report.search = Some(SearchCheck {
        prune_count: out.prune_count,
        accepted: out.accepted.len(),
        agrees: out.accepted.is_empty() == report.two_structures,
    });
    Ok(())
}

/// True iff `L² ≡ 0, 2 mod 6` and `6L²` is not a square.
pub fn is_admissible(l2: u64) -> bool {
    Case::of(l2).is_ok() && !is_square(&BigInt::from(6 * l2))
}

/// One report per admissible `L²` in the range, in increasing order.
pub fn scan(l2_min: u64, l2_max: u64, with_search: bool) -> Vec<DecisionReport> {
    let values: Vec<u64> = (l2_min..=l2_max).filter(|&l2| is_admissible(l2)).collect();
    values
        .par_iter()
        .map(|&l2| {
            let ns = build_ns(l2).expect("admissible");
            let mut r = decide(&ns).expect("admissible");
            if with_search && ns.case != Case::ZeroMod18 {
                cross_check(&ns, &mut r).expect("admissible");
            }
            r
        })
        .collect()
}

/// For the solutions `(x_k, y_k)`, `k = 2..=n+1`, the class built like `B₁′`
/// meets `B₁′` negatively, so it cannot be an irreducible curve other than
/// `B₁′`.
pub fn verify_uniqueness(ns: &NSModel, n: usize) -> Result<bool, KummerError> {
    let c = construct(ns)?;
    let ok = c.pell.solutions().skip(1).take(n).all(|(x, y)| {
        let other = pell_curve(&l_multiplier(ns.case, &y), &x, c.swapped);
        ns.pairing_int(&other, &c.new_curve).is_negative()
    });
    Ok(ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RamareStatus {
    /// `t ≡ 1 mod 3`: the equation `x² − 12ty² = 1` is the one attached to `L² = 2t`.
    Admissible,
    /// `2t ≡ 4 mod 6` is not a polarization of these surfaces.
    InadmissiblePolarization,
    /// `t ≡ 0 mod 3`: `L² = 2t ≡ 0 mod 6` is governed by `x² − 4(t/3)y² = 1`.
    PellBranchMismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct RamareEntry {
    pub k: u64,
    pub a: u64,
    pub t: u64,
    #[serde(rename = "L2")]
    pub l2: u64,
    pub x: u64,
    pub satisfies: bool,
    pub fundamental: bool,
    pub residue: u64,
    pub criterion: bool,
    pub status: RamareStatus,
    /// The decision for `L² = 2t` when admissible.
    pub two_structures: Option<bool>,
}

/// `a = 8 + 12k`, `t = 6 + 17k + 12k²`: `(2a+1, 2)` solves `x² − 12ty² = 1`.
pub fn ramare_family(k_max: u64) -> Vec<RamareEntry> {
    (0..=k_max)
        .map(|k| {
            let a = 8 + 12 * k;
            let t = 6 + 17 * k + 12 * k * k;
            let x = 2 * a + 1;
            let satisfies = u128::from(x) * u128::from(x) == 48 * u128::from(t) + 1;
            let f = fundamental_solution(12 * t).expect("12t is not a square");
            let fundamental = f.x0 == BigInt::from(x) && f.y0 == BigInt::from(2);
            let residue = x % (2 * t);
            let criterion = residue != 1 && residue != 2 * t - 1;
            let status = match t % 3 {
                1 => RamareStatus::Admissible,
                2 => RamareStatus::InadmissiblePolarization,
                _ => RamareStatus::PellBranchMismatch,
            };
            let two_structures = (status == RamareStatus::Admissible).then(|| {
                let ns = build_ns(2 * t).expect("admissible");
                decide(&ns).expect("admissible").two_structures
            });
            RamareEntry {
                k,
                a,
                t,
                l2: 2 * t,
                x,
                satisfies,
                fundamental,
                residue,
                criterion,
                status,
                two_structures,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(x: i64, a: i64, b: i64) -> DivisorClass {
        DivisorClass::from_coefficients(x, &[(1, Curve::A, a.into()), (1, Curve::B, b.into())])
    }

    #[test]
    fn construction_examples() {
        let c2 = construct(&build_ns(2).unwrap()).unwrap();
        assert_eq!(c2.new_curve, class(6, 4, 7));
        let ns2 = build_ns(2).unwrap();
        assert_eq!(ns2.pairing_int(&DivisorClass::l(), &c2.new_curve), BigInt::from(12));
        let c20 = construct(&build_ns(20).unwrap()).unwrap();
        assert_eq!(c20.new_curve, class(3, 6, 11));
        assert_eq!(c20.lprime, class(11, 20, 40));
        assert!(matches!(
            construct(&build_ns(6).unwrap()),
            Err(KummerError::NoPellSolution { l2: 6, d: 4 })
        ));
    }

    #[test]
    fn hypotheses() {
        let h = check_hypotheses(&build_ns(20).unwrap());
        assert!(h.hold() && !h.swapped_a1_b1);
        assert!(!check_hypotheses(&build_ns(6).unwrap()).six_l2_nonsquare);
        let h36 = check_hypotheses(&build_ns(36).unwrap());
        assert!(h36.swapped_a1_b1 && !h36.irreducibility_ok);
        let h126 = check_hypotheses(&build_ns(126).unwrap());
        assert!(h126.hold() && !h126.swapped_a1_b1);
    }

    #[test]
    fn orientation_of_block_one() {
        for (l2, swapped) in [(18, false), (36, false), (72, true), (90, true), (126, false)] {
            let ns = build_ns(l2).unwrap();
            let c = construct(&ns).unwrap();
            assert_eq!(c.swapped, swapped, "L^2 = {l2}");
            assert!(root_system_of_orthogonal(&ns, &c.lprime).unwrap().is_nine_a2());
        }
    }

    #[test]
    fn decisions() {
        let r20 = decide(&build_ns(20).unwrap()).unwrap();
        assert!(r20.two_structures);
        assert_eq!(r20.residue, BigInt::from(11));
        let r8 = decide(&build_ns(8).unwrap()).unwrap();
        assert_eq!((r8.modulus, r8.residue.clone()), (8, BigInt::from(7)));
        assert!(!r8.two_structures);
        let r42 = decide(&build_ns(42).unwrap()).unwrap();
        assert_eq!((r42.modulus, r42.residue.clone()), (14, BigInt::from(1)));
        assert!(!r42.two_structures);
        let r36 = decide(&build_ns(36).unwrap()).unwrap();
        assert!(r36.criterion && !r36.two_structures);
        assert_eq!(r36.verdict, Verdict::CriterionOnly);
    }

    #[test]
    fn later_solutions_are_reducible() {
        for l2 in [2, 20, 30, 36, 126] {
            assert!(verify_uniqueness(&build_ns(l2).unwrap(), 3).unwrap(), "L^2 = {l2}");
        }
    }

    #[test]
    fn ramare_entries() {
        let fam = ramare_family(2);
        assert_eq!((fam[0].a, fam[0].t, fam[0].x, fam[0].residue), (8, 6, 17, 5));
        assert_eq!(fam[0].status, RamareStatus::PellBranchMismatch);
        assert_eq!(fam[1].status, RamareStatus::InadmissiblePolarization);
        assert_eq!((fam[2].t, fam[2].l2), (88, 176));
        assert_eq!(fam[2].two_structures, Some(true));
        assert!(fam.iter().all(|e| e.satisfies && e.fundamental && e.criterion));
    }
}
