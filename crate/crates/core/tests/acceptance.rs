//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any check fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use km3_core::exact_linalg::{enumerate_norm_vectors, IntMatrix};
use km3_core::fm_lattices::{self, transcendental_index};
use km3_core::isometry_search::{classify_order, compute_aut_d2, prune, search, block_sets, IsometryCandidate, Order};
use km3_core::kummer_structures::{construct, is_admissible, ramare_family, scan, RamareStatus};
use km3_core::ns_lattice::{
    build_k3, build_ns, gram_of, min_ample_u, rational_gram, root_system_of_orthogonal, support_histogram, t1, t2,
    t3, three_divisible_classes, w1, w2, w3, Configuration, DivisorClass, NSModel,
};
use km3_core::pell::{fundamental_solution, PellError};

const PUBLISHED: [u64; 16] = [20, 44, 68, 84, 92, 104, 110, 116, 120, 126, 132, 140, 164, 168, 176, 188];

type Check = Result<String, String>;
type Named = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn crit1() -> Check {
    let rows = scan(8, 198, false);
    let got: BTreeSet<u64> = rows.iter().filter(|r| r.two_structures).map(|r| r.l2).collect();
    let want: BTreeSet<u64> = PUBLISHED.into_iter().collect();
    ensure(got == want, format!("two_structures = {got:?}"))?;
    Ok(format!("{} rows, 16 marked", rows.len()))
}

fn crit2() -> Check {
    let mut checked = 0;
    for l2 in (2..200).filter(|&l| is_admissible(l) && l % 18 != 0) {
        let ns = build_ns(l2).unwrap();
        let c = construct(&ns).unwrap();
        let out = search(&ns, &Configuration::standard(), &c.configuration()).unwrap();
        let equivalent = !out.accepted.is_empty();
        ensure(
            equivalent != PUBLISHED.contains(&l2),
            format!("L2 = {l2}: {} accepted", out.accepted.len()),
        )?;
        checked += 1;
    }
    Ok(format!("{checked} values of L2"))
}

fn crit3() -> Check {
    let ns = build_ns(20).unwrap();
    let c = construct(&ns).unwrap();
    let n = prune(
        &block_sets(&ns, &Configuration::standard()).unwrap(),
        &block_sets(&ns, &c.configuration()).unwrap(),
    )
    .len();
    ensure(n == 432, format!("prune count {n}"))?;
    Ok("432 permutations".into())
}

fn crit4() -> Check {
    let table = [(2, 4), (8, 2), (14, 2), (20, 1), (6, 3), (12, 2), (18, 2), (24, 1), (30, 1), (36, 1)];
    for (l2, u0) in table {
        let u = min_ample_u(&build_ns(l2).unwrap());
        ensure(u == u0, format!("L2 = {l2}: u0 = {u}, expected {u0}"))?;
    }
    Ok("10 entries".into())
}

fn crit5() -> Check {
    let f = fundamental_solution(12).map_err(|e| e.to_string())?;
    ensure((f.x0.clone(), f.y0.clone()) == (7.into(), 2.into()), "D = 12")?;
    let f = fundamental_solution(120).map_err(|e| e.to_string())?;
    ensure((f.x0.clone(), f.y0.clone()) == (11.into(), 1.into()), "D = 120")?;
    ensure(fundamental_solution(4) == Err(PellError::NoSolution(4)), "D = 4")?;
    Ok("D = 12, 120, 4".into())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn crit6() -> Check {
    let zero = BigInt::zero();
    let t = gram_of(&[t1(), t2(), t3()], &zero);
    ensure(
        t == IntMatrix::from_i64(&[&[-6, -6, -6], &[-6, -10, -6], &[-6, -6, -10]]),
        format!("t Gram {t:?}"),
    )?;
    let w = rational_gram(&[w1(), w2(), w3()], &zero);
    let want = vec![
        vec![rat(-2, 1), rat(-2, 1), rat(-2, 3)],
        vec![rat(-2, 1), rat(-20, 3), rat(-2, 3)],
        vec![rat(-2, 3), rat(-2, 3), rat(-2, 1)],
    ];
    ensure(w == want, "w Gram")?;
    let k3 = build_k3();
    ensure(k3.det == BigInt::from(27), format!("det {}", k3.det))?;
    let hist = support_histogram(&three_divisible_classes(&build_ns(20).unwrap()));
    ensure(hist == BTreeMap::from([(0, 1), (6, 24), (9, 2)]), format!("histogram {hist:?}"))?;
    Ok("Gram matrices, det 27, histogram {0:1, 6:24, 9:2}".into())
}

fn crit7() -> Check {
    let mut n = 0;
    for l2 in (1..=200).filter(|&l| is_admissible(l)) {
        let ns = build_ns(l2).unwrap();
        let c = construct(&ns).unwrap();
        let l = ns.l2_big();
        let kept = c.kept_curve();
        let b = &c.new_curve;
        let two = BigRational::from_integer(BigInt::from(-2));
        ensure(b.square(&l) == two, format!("L2 = {l2}: new curve square"))?;
        ensure(kept.pairing(b, &l).is_one(), format!("L2 = {l2}: incidence"))?;
        ensure(c.lprime.square(&l) == BigRational::from_integer(l.clone()), format!("L2 = {l2}: L'^2"))?;
        ensure(
            c.lprime.pairing(&kept, &l).is_zero() && c.lprime.pairing(b, &l).is_zero(),
            format!("L2 = {l2}: L' not orthogonal"),
        )?;
        let rs = root_system_of_orthogonal(&ns, &c.lprime).map_err(|e| e.to_string())?;
        ensure(rs.is_nine_a2(), format!("L2 = {l2}: types {:?}", rs.types()))?;
        let roots: BTreeSet<Vec<BigInt>> = rs.roots.iter().map(|r| r.numerators().to_vec()).collect();
        for curve in c.configuration().curves() {
            ensure(roots.contains(curve.numerators()), format!("L2 = {l2}: {curve} is not a root of L'^perp"))?;
        }
        n += 1;
    }
    Ok(format!("{n} values of L2"))
}

fn crit8() -> Check {
    let mut notes = Vec::new();
    for l2 in [42, 48] {
        let ns = build_ns(l2).unwrap();
        let c = construct(&ns).unwrap();
        let out = search(&ns, &Configuration::standard(), &c.configuration()).unwrap();
        ensure(!out.accepted.is_empty(), format!("L2 = {l2}: no isometry"))?;
        for cand in &out.accepted {
            ensure(classify_order(cand) == Order::Infinite, format!("L2 = {l2}: finite order"))?;
        }
        notes.push(format!("L2 = {l2}: {} infinite", out.accepted.len()));
    }
    let ns = build_ns(8).unwrap();
    let c = construct(&ns).unwrap();
    let out = search(&ns, &Configuration::standard(), &c.configuration()).unwrap();
    let twos = out.accepted.iter().filter(|c| classify_order(c) == Order::Finite(2)).count();
    ensure(twos > 0, "L2 = 8: no involution")?;
    notes.push(format!("L2 = 8: {twos} of order 2"));
    Ok(notes.join(", "))
}

fn crit9() -> Check {
    let g = compute_aut_d2(&build_ns(20).unwrap()).map_err(|e| e.to_string())?;
    ensure(g.order == 36, format!("order {}", g.order))?;
    ensure(g.closed && g.has_inverses, "not a group")?;
    let s = g.sigma.ok_or("no element with A_k -> E_k")?;
    ensure(g.sigma_central && g.elements[s].order == 2, "sigma is not a central involution")?;
    ensure(g.orbit_a1.len() == 18 && g.orbit_b1.len() == 18, "orbit sizes")?;
    ensure(g.structure == "Z2 x (Z3 : S3)", format!("structure {}", g.structure))?;
    Ok(format!("order 36, {}", g.structure))
}

fn crit10() -> Check {
    let m = fm_lattices::build([1, 1, 1, 1]).map_err(|e| e.to_string())?;
    let mut three = IntMatrix::identity(4);
    for i in 0..4 {
        three[(i, i)] = BigInt::from(3);
    }
    ensure(m.push.mul(&m.pull) == three && m.pull.mul(&m.push) == three, "push/pull")?;
    ensure(m.push_index == 3, "push index")?;
    ensure(m.lx_square == 20 && transcendental_index(&m) == 1, "index for L^2 = 20")?;
    let k = fm_lattices::build([1, 1, 0, 0]).map_err(|e| e.to_string())?;
    ensure(transcendental_index(&k) == 3, "index for zeta1 + zeta2")?;
    Ok("indices 3, 1, 3".into())
}

fn crit11() -> Check {
    let fam = ramare_family(20);
    let mut flagged = Vec::new();
    for e in &fam {
        ensure(e.satisfies && e.fundamental, format!("k = {}: not a fundamental solution", e.k))?;
        ensure(e.criterion, format!("k = {}: 2a+1 = ±1 mod 2t", e.k))?;
        if e.status != RamareStatus::Admissible {
            flagged.push(e.k);
        }
    }
    Ok(format!("21 members, flagged k = {flagged:?}"))
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Chakravala: an independent route to the fundamental solution.
fn chakravala(d: u64) -> (BigInt, BigInt) {
    let dd = BigInt::from(d);
    let s = isqrt(d);
    let m0 = if (s + 1) * (s + 1) - d < d - s * s { s + 1 } else { s };
    let (mut a, mut b, mut k) = (BigInt::from(m0), BigInt::one(), BigInt::from(m0 * m0) - &dd);
    while !k.is_one() {
        let ak = k.abs();
        let ku = ak.to_u64().unwrap();
        let r = (0..ku).find(|&r| ((&a + &b * r) % &ak).is_zero()).unwrap();
        let m = {
            let lo = if s >= r { r + (s - r) / ku * ku } else { r };
            let hi = lo + ku;
            let dist = |m: u64| (i128::from(m as i64) * m as i128 - d as i128).abs();
            if lo == 0 || dist(hi) < dist(lo) {
                hi
            } else {
                lo
            }
        };
        let mb = BigInt::from(m);
        let na = (&a * &mb + &dd * &b) / &ak;
        let nb = (&a + &b * &mb) / &ak;
        k = (&mb * &mb - &dd) / &k;
        a = na.abs();
        b = nb.abs();
    }
    (a, b)
}

fn pell_minimality() -> Check {
    const CAP: u64 = 20_000;
    let mut brute = 0;
    for d in 2..=10_000u64 {
        if isqrt(d).pow(2) == d {
            continue;
        }
        let f = fundamental_solution(d).map_err(|e| e.to_string())?;
        ensure(f.x0.pow(2u32) - BigInt::from(d) * f.y0.pow(2u32) == BigInt::one(), format!("D = {d}: not a solution"))?;
        ensure(chakravala(d) == (f.x0.clone(), f.y0.clone()), format!("D = {d}: chakravala disagrees"))?;
        let y0 = f.y0.to_u64();
        let limit = y0.map_or(CAP, |y| y.min(CAP + 1));
        for y in 1..limit {
            let n = d * y * y + 1;
            ensure(isqrt(n).pow(2) != n, format!("D = {d}: smaller solution y = {y}"))?;
        }
        if y0.is_some_and(|y| y <= CAP) {
            brute += 1;
        }
    }
    Ok(format!("all D <= 10000, {brute} fully brute-forced"))
}

/// Exhaustive search over the box given by `|x_i|² ≤ 2·(G⁻¹)_{ii}` for the
/// positive definite `g`.
fn exhaustive_roots(g: &[Vec<i64>]) -> Option<BTreeSet<Vec<i64>>> {
    let n = g.len();
    let m = IntMatrix::from_rows(g.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()));
    let inv = m.to_rational().inverse().ok()?;
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            let v = &inv[(i, i)] * BigRational::from_integer(2.into());
            isqrt(v.floor().to_integer().to_u64().unwrap()) as i64
        })
        .collect();
    if bounds.iter().map(|&b| (2 * b + 1) as u64).product::<u64>() > 2_000_000 {
        return None;
    }
    let mut out = BTreeSet::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let q: i64 = (0..n).map(|i| (0..n).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>()).sum();
        if q == 2 {
            out.insert(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(out);
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

fn root_enumeration() -> Check {
    // Rows of an even lattice (D_m: integer vectors with even coordinate sum).
    let strategy = (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(-2i64..=2, n + 1), n)
    });
    let mut runner = TestRunner::new(Config {
        cases: 200,
        ..Config::default()
    });
    let tested = std::cell::Cell::new(0);
    let result = runner.run(&strategy, |rows| {
        let rows: Vec<Vec<i64>> = rows
            .into_iter()
            .map(|mut r| {
                if r.iter().sum::<i64>() % 2 != 0 {
                    r[0] += 1;
                }
                r
            })
            .collect();
        let n = rows.len();
        let pos: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum()).collect())
            .collect();
        let gm = IntMatrix::from_rows(pos.iter().map(|r| r.iter().map(|&x| BigInt::from(-x)).collect::<Vec<_>>()));
        if gm.determinant().unwrap().is_zero() {
            return Ok(());
        }
        let Some(oracle) = exhaustive_roots(&pos) else {
            return Ok(());
        };
        let found = enumerate_norm_vectors(&gm, &BigInt::from(-2)).unwrap();
        let found_set: BTreeSet<Vec<i64>> =
            found.iter().map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        prop_assert_eq!(found.len(), found_set.len());
        prop_assert_eq!(&found_set, &oracle);
        for r in &found_set {
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            prop_assert!(found_set.contains(&neg));
            // reflections s_r(v) = v + (v·r) r permute the roots
            for v in &found_set {
                let vr: i64 = (0..n).map(|i| (0..n).map(|j| -v[i] * pos[i][j] * r[j]).sum::<i64>()).sum();
                let img: Vec<i64> = v.iter().zip(r).map(|(a, b)| a + vr * b).collect();
                prop_assert!(found_set.contains(&img));
            }
        }
        tested.set(tested.get() + 1);
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    Ok(format!("{} nondegenerate forms checked against exhaustive search", tested.get()))
}

/// Checks an accepted candidate using only its rational matrix.
fn verify_candidate(ns: &NSModel, cand: &IsometryCandidate, source: &Configuration, target: &Configuration) -> Result<(), String> {
    let basis: Vec<DivisorClass> = (0..ns.basis.rows()).map(|i| DivisorClass::from_numerators(ns.basis.row(i).to_vec())).collect();
    let images: Vec<DivisorClass> = basis
        .iter()
        .map(|b| cand.apply(b).filter(|c| ns.contains(c)).ok_or("image leaves NS"))
        .collect::<Result<_, _>>()?;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            ensure(ns.pairing(&basis[i], &basis[j]) == ns.pairing(&images[i], &images[j]), "Gram not preserved")?;
        }
    }
    let coords = IntMatrix::from_rows(images.iter().map(|c| ns.coordinates(c).unwrap()).collect::<Vec<_>>());
    ensure(coords.determinant().unwrap().abs().is_one(), "not invertible over Z")?;
    ensure(coords.congruence(&ns.gram) == ns.gram, "coordinate Gram not preserved")?;
    ensure(cand.apply(&source.polarization).as_ref() == Some(&target.polarization), "polarization")?;
    for (s, t) in source.curves().iter().zip(target.curves()) {
        let img = cand.apply(s).ok_or("curve image")?;
        let tc = target.curves();
        ensure(tc.contains(&img), format!("{s} is not sent to a curve of the target ({t})"))?;
    }
    let sign = BigInt::from(cand.disc_sign);
    ensure(sign.abs().is_one(), "disc sign")?;
    for g in &ns.disc.generators {
        let lift = DivisorClass::from_numerators(g.scaled.clone());
        let img = cand.apply(&lift).ok_or("discriminant image")?;
        let diff = &img - &lift.scale(&sign);
        let ok = diff.numerators().iter().all(|x| (x % &g.order).is_zero())
            && ns.contains(&DivisorClass::from_numerators(diff.numerators().iter().map(|x| x / &g.order).collect()));
        ensure(ok, "discriminant action is not ±Id")?;
        let twice = cand.apply(&img).ok_or("discriminant image")?;
        let back = &twice - &lift;
        let ok = back.numerators().iter().all(|x| (x % &g.order).is_zero())
            && ns.contains(&DivisorClass::from_numerators(back.numerators().iter().map(|x| x / &g.order).collect()));
        ensure(ok, "discriminant action squared is not Id")?;
    }
    Ok(())
}

fn isometry_acceptance() -> Check {
    let mut n = 0;
    for l2 in [8, 14, 20, 42, 48] {
        let ns = build_ns(l2).unwrap();
        let c = construct(&ns).unwrap();
        let std = Configuration::standard();
        let mut std_l = std.clone();
        std_l.polarization = DivisorClass::l();
        for target in [std_l.clone(), c.configuration()] {
            let out = search(&ns, &std, &target).map_err(|e| e.to_string())?;
            for cand in out.accepted.iter().take(64) {
                verify_candidate(&ns, cand, &std, &target).map_err(|e| format!("L2 = {l2}: {e}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} accepted isometries verified"))
}

fn main() {
    let checks: [Named; 14] = [
        ("criterion 1 (list reproduction)", crit1),
        ("criterion 2 (search/criterion equivalence)", crit2),
        ("criterion 3 (prune count)", crit3),
        ("criterion 4 (ample table)", crit4),
        ("criterion 5 (Pell fixtures)", crit5),
        ("criterion 6 (lattice fixtures)", crit6),
        ("criterion 7 (configuration identities)", crit7),
        ("criterion 8 (infinite order)", crit8),
        ("criterion 9 (G36)", crit9),
        ("criterion 10 (Fourier-Mukai lattices)", crit10),
        ("criterion 11 (Ramare family)", crit11),
        ("property: Pell minimality", pell_minimality),
        ("property: root enumeration", root_enumeration),
        ("property: isometry acceptance", isometry_acceptance),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in checks {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS  {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}
