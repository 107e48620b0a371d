//! Isometries fixing the degree-2 class `D₂ = L − Σ(A_k + B_k)` when `L² = 20`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::{search, SearchError};
use crate::ns_lattice::{Configuration, DivisorClass, NSModel};

#[derive(Debug, Clone, Serialize)]
pub struct D2Configuration {
    pub d2: DivisorClass,
    /// `A₁, B₁, …, A₉, B₉, E₁, F₁, …, E₉, F₉`.
    pub curves: Vec<DivisorClass>,
    pub labels: Vec<String>,
}

impl D2Configuration {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// `E_k = D₂ − A_k`, `F_k = D₂ − B_k`, with all incidences checked.
pub fn d2_configuration(ns: &NSModel) -> Result<D2Configuration, SearchError> {
    if ns.l2 != 20 {
        return Err(SearchError::WrongPolarization(ns.l2));
    }
    let mut d2 = DivisorClass::l();
    for j in 1..=9 {
        d2 = &(&d2 - &DivisorClass::a(j)) - &DivisorClass::b(j);
    }
    let mut curves = Vec::with_capacity(36);
    let mut labels = Vec::with_capacity(36);
    for j in 1..=9 {
        curves.extend([DivisorClass::a(j), DivisorClass::b(j)]);
        labels.extend([format!("A{j}"), format!("B{j}")]);
    }
    for j in 1..=9 {
        curves.extend([&d2 - &DivisorClass::a(j), &d2 - &DivisorClass::b(j)]);
        labels.extend([format!("E{j}"), format!("F{j}")]);
    }
    let p = |a: &DivisorClass, b: &DivisorClass| ns.pairing_int(a, b);
    let int = BigInt::from;
    assert_eq!(p(&d2, &d2), int(2));
    for c in &curves {
        assert_eq!(p(&d2, c), int(1));
        assert_eq!(p(c, c), int(-2));
    }
    let ef = &curves[18..];
    for k in 0..9 {
        for l in 0..9 {
            let expected = if k == l { 1 } else { 0 };
            assert_eq!(p(&ef[2 * k], &ef[2 * l + 1]), int(expected));
            if k != l {
                assert_eq!(p(&ef[2 * k], &ef[2 * l]), int(0));
                assert_eq!(p(&ef[2 * k + 1], &ef[2 * l + 1]), int(0));
            }
        }
    }
    Ok(D2Configuration { d2, curves, labels })
}

/// All ways to pick nine pairs `(i, j)` of curves with `c_i·c_j = 1`, any
/// two curves from different pairs orthogonal. Pairs are listed with
/// `i < j`, in increasing order.
pub fn nine_a2_subconfigurations(ns: &NSModel, curves: &[DivisorClass]) -> Vec<Vec<(usize, usize)>> {
    let n = curves.len();
    let gram: Vec<Vec<BigInt>> = curves
        .iter()
        .map(|a| curves.iter().map(|b| ns.pairing_int(a, b)).collect())
        .collect();
    let one = BigInt::from(1);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| gram[i][j] == one)
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    pick(&edges, 0, &gram, &mut chosen, &mut out);
    out
}

fn pick(
    edges: &[(usize, usize)],
    from: usize,
    gram: &[Vec<BigInt>],
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if chosen.len() == 9 {
        out.push(chosen.clone());
        return;
    }
    let zero = BigInt::from(0);
    for (e, &(i, j)) in edges.iter().enumerate().skip(from) {
        let disjoint = chosen
            .iter()
            .all(|&(a, b)| [a, b].iter().all(|&x| gram[x][i] == zero && gram[x][j] == zero));
        if disjoint {
            chosen.push((i, j));
            pick(edges, e + 1, gram, chosen, out);
            chosen.pop();
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AutElement {
    /// Index into the list of 9A₂ sub-configurations.
    pub target: usize,
    pub sigma: [u8; 9],
    pub swaps: u16,
    pub disc_sign: i8,
    pub order: u64,
    /// Image of each of the 36 curves (indices).
    pub permutation: Vec<u8>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AutD2 {
    pub order: usize,
    /// Each sub-configuration as labelled pairs.
    pub configurations: Vec<Vec<(String, String)>>,
    pub elements: Vec<AutElement>,
    pub closed: bool,
    pub has_inverses: bool,
    pub order_histogram: BTreeMap<u64, usize>,
    pub center: Vec<usize>,
    /// The element with `A_k ↦ E_k`, `B_k ↦ F_k`.
    pub sigma: Option<usize>,
    pub sigma_central: bool,
    pub structure: String,
    pub orbit_a1: Vec<String>,
    pub orbit_b1: Vec<String>,
}

/// The group of isometries preserving `D₂` and the 36 curves of degree 1.
pub fn compute_aut_d2(ns: &NSModel) -> Result<AutD2, SearchError> {
    let cfg = d2_configuration(ns)?;
    let lookup: HashMap<&DivisorClass, usize> = cfg.curves.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let subs = nine_a2_subconfigurations(ns, &cfg.curves);
    let source = Configuration::standard();
    let mut elements = Vec::new();
    for (t, pairs) in subs.iter().enumerate() {
        let mut pol = cfg.d2.clone();
        for &(i, j) in pairs {
            pol = &(&pol + &cfg.curves[i]) + &cfg.curves[j];
        }
        let target = Configuration {
            polarization: pol,
            pairs: pairs
                .iter()
                .map(|&(i, j)| (cfg.curves[i].clone(), cfg.curves[j].clone()))
                .collect(),
        };
        if !target.is_valid(ns) {
            continue;
        }
        for cand in search(ns, &source, &target)?.accepted {
            let perm: Option<Vec<u8>> = cfg
                .curves
                .iter()
                .map(|c| cand.apply(c).and_then(|img| lookup.get(&img).map(|&i| i as u8)))
                .collect();
            if let Some(permutation) = perm {
                elements.push(AutElement {
                    target: t,
                    sigma: cand.sigma,
                    swaps: cand.swaps,
                    disc_sign: cand.disc_sign,
                    order: perm_order(&permutation),
                    permutation,
                });
            }
        }
    }
    let perms: Vec<Vec<u8>> = elements.iter().map(|e| e.permutation.clone()).collect();
    let table = Table::new(&perms);
    let mut order_histogram = BTreeMap::new();
    for e in &elements {
        *order_histogram.entry(e.order).or_insert(0) += 1;
    }
    let center: Vec<usize> = (0..perms.len())
        .filter(|&a| (0..perms.len()).all(|b| table.mul(a, b) == table.mul(b, a)))
        .collect();
    let sigma = perms.iter().position(|p| {
        (0..18).all(|i| {
            // A_k (2k) ↦ E_k (18 + 2k), B_k ↦ F_k
            p[i] as usize == i + 18
        })
    });
    let orbit = |start: usize| {
        let mut o: Vec<usize> = perms.iter().map(|p| p[start] as usize).collect();
        o.sort_unstable();
        o.dedup();
        o.into_iter().map(|i| cfg.labels[i].clone()).collect::<Vec<_>>()
    };
    Ok(AutD2 {
        order: perms.len(),
        configurations: subs
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&(i, j)| (cfg.labels[i].clone(), cfg.labels[j].clone()))
                    .collect()
            })
            .collect(),
        closed: table.closed,
        has_inverses: table.has_inverses(),
        structure: table.identify(&center, sigma),
        sigma_central: sigma.is_some_and(|s| center.contains(&s)),
        order_histogram,
        center,
        sigma,
        orbit_a1: orbit(0),
        orbit_b1: orbit(1),
        elements,
    })
}

fn perm_order(p: &[u8]) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut l = 1u64;
    for s in 0..p.len() {
        let mut len = 0u64;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        if len > 0 {
            l = l.lcm(&len);
        }
    }
    l
}

/// Multiplication table of a set of permutations, `mul(a, b) = a ∘ b`.
struct Table {
    prod: Vec<Vec<Option<usize>>>,
    identity: Option<usize>,
    closed: bool,
}

impl Table {
    fn new(perms: &[Vec<u8>]) -> Self {
        let index: HashMap<&Vec<u8>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let prod: Vec<Vec<Option<usize>>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let c: Vec<u8> = b.iter().map(|&x| a[x as usize]).collect();
                        index.get(&c).copied()
                    })
                    .collect()
            })
            .collect();
        let closed = prod.iter().flatten().all(Option::is_some);
        let identity = perms
            .iter()
            .position(|p| p.iter().enumerate().all(|(i, &x)| i == x as usize));
        Table {
            prod,
            identity,
            closed,
        }
    }

    fn mul(&self, a: usize, b: usize) -> Option<usize> {
        self.prod[a][b]
    }

    fn inverse(&self, a: usize) -> Option<usize> {
        let e = self.identity?;
        (0..self.prod.len()).find(|&b| self.mul(a, b) == Some(e))
    }

    fn has_inverses(&self) -> bool {
        (0..self.prod.len()).all(|a| self.inverse(a).is_some())
    }

    fn power(&self, a: usize, k: usize) -> Option<usize> {
        let mut x = self.identity?;
        for _ in 0..k {
            x = self.mul(a, x)?;
        }
        Some(x)
    }

    fn is_subgroup(&self, s: &[usize]) -> bool {
        s.iter().all(|&a| s.iter().all(|&b| self.mul(a, b).is_some_and(|c| s.contains(&c))))
    }

    /// Recognizes `C₂ × ((C₃ × C₃) ⋊ C₂)` with the inverting involution,
    /// i.e. `Z2 x (Z3 : S3)`, with the central `C₂` generated by `σ`.
    fn identify(&self, center: &[usize], sigma: Option<usize>) -> String {
        let n = self.prod.len();
        let fallback = format!("unidentified group of order {n}");
        let (Some(e), Some(sigma), true) = (self.identity, sigma, self.closed) else {
            return fallback;
        };
        if n != 36 || center.len() != 2 || !center.contains(&sigma) {
            return fallback;
        }
        let nsub: Vec<usize> = (0..n).filter(|&a| self.power(a, 3) == Some(e)).collect();
        let abelian = nsub.iter().all(|&a| nsub.iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
        if nsub.len() != 9 || !self.is_subgroup(&nsub) || !abelian {
            return fallback;
        }
        let tau = (0..n).find(|&a| a != e && !center.contains(&a) && self.power(a, 2) == Some(e));
        let Some(tau) = tau else { return fallback };
        let inverts = nsub.iter().all(|&x| {
            let conj = self.mul(tau, x).and_then(|y| self.mul(y, tau));
            conj.is_some() && conj == self.inverse(x)
        });
        let mut h = nsub.clone();
        h.extend(nsub.iter().filter_map(|&x| self.mul(tau, x)));
        h.sort_unstable();
        h.dedup();
        if inverts && h.len() == 18 && self.is_subgroup(&h) && !h.contains(&sigma) {
            "Z2 x (Z3 : S3)".to_string()
        } else {
            fallback
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns_lattice::build_ns;

    #[test]
    fn d2_incidences() {
        let ns = build_ns(20).unwrap();
        let c = d2_configuration(&ns).unwrap();
        let at = |l: &str| &c.curves[c.index_of(l).unwrap()];
        let p = |a: &str, b: &str| ns.pairing_int(at(a), at(b));
        assert_eq!(p("E1", "F1"), BigInt::from(1));
        assert_eq!(p("E1", "B1"), BigInt::from(0));
        assert_eq!(p("E1", "A1"), BigInt::from(3));
        assert_eq!(p("E2", "A1"), BigInt::from(1));
        assert!(matches!(
            d2_configuration(&build_ns(8).unwrap()),
            Err(SearchError::WrongPolarization(8))
        ));
    }

    #[test]
    fn two_sub_configurations() {
        let ns = build_ns(20).unwrap();
        let c = d2_configuration(&ns).unwrap();
        assert_eq!(nine_a2_subconfigurations(&ns, &c.curves).len(), 2);
    }

    #[test]
    fn perm_orders() {
        assert_eq!(perm_order(&[1, 2, 0, 4, 3]), 6);
        assert_eq!(perm_order(&[0, 1]), 1);
    }
}
