use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::class::DivisorClass;
use super::model::NSModel;
use super::NsError;
use crate::exact_linalg::{enumerate_norm_vectors, left_kernel, IntMatrix};

/// `d⊥ ∩ NS` with a basis in numerator coordinates.
#[derive(Debug, Clone)]
pub struct OrthogonalLattice {
    pub basis: IntMatrix,
    pub gram: IntMatrix,
}

pub fn orthogonal_lattice(ns: &NSModel, d: &DivisorClass) -> Result<OrthogonalLattice, NsError> {
    let c = ns.coordinates(d)?;
    let pv = ns.gram.left_apply(&c);
    let col = IntMatrix::from_rows(pv.into_iter().map(|x| vec![x]));
    let k = left_kernel(&col);
    Ok(OrthogonalLattice {
        basis: k.mul(&ns.basis),
        gram: k.congruence(&ns.gram),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdeType {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(n) => write!(f, "A{n}"),
            AdeType::D(n) => write!(f, "D{n}"),
            AdeType::E(n) => write!(f, "E{n}"),
        }
    }
}

impl Serialize for AdeType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootComponent {
    #[serde(rename = "type")]
    pub ade: AdeType,
    /// Indices into [`RootSystem::roots`].
    pub roots: Vec<usize>,
    pub simple_roots: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSystem {
    pub roots: Vec<DivisorClass>,
    pub components: Vec<RootComponent>,
}

impl RootSystem {
    /// Component types, sorted.
    pub fn types(&self) -> Vec<AdeType> {
        let mut t: Vec<AdeType> = self.components.iter().map(|c| c.ade).collect();
        t.sort();
        t
    }

    /// True iff the root system is nine copies of A₂.
    pub fn is_nine_a2(&self) -> bool {
        self.roots.len() == 54 && self.types() == vec![AdeType::A(2); 9]
    }
}

/// All roots of `d⊥ ∩ NS`, split into irreducible components.
pub fn root_system_of_orthogonal(ns: &NSModel, d: &DivisorClass) -> Result<RootSystem, NsError> {
    if !ns.contains(d) {
        return Err(NsError::NotInLattice);
    }
    if !ns.pairing(d, d).is_positive() {
        return Err(NsError::NotPositive);
    }
    let orth = orthogonal_lattice(ns, d)?;
    let vs = enumerate_norm_vectors(&orth.gram, &BigInt::from(-2)).expect("d⊥ is negative definite");
    let mut roots: Vec<DivisorClass> = vs
        .iter()
        .map(|y| DivisorClass::from_numerators(orth.basis.left_apply(y)))
        .collect();
    roots.sort();
    let components = decompose(ns, &roots);
    Ok(RootSystem { roots, components })
}

fn decompose(ns: &NSModel, roots: &[DivisorClass]) -> Vec<RootComponent> {
    let n = roots.len();
    let pair = |i: usize, j: usize| ns.pairing_int(&roots[i], &roots[j]);
    let mut comp = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = groups.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if comp[j] == usize::MAX && !pair(i, j).is_zero() {
                    comp[j] = id;
                    members.push(j);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    groups
        .into_iter()
        .map(|members| {
            let simple = simple_roots(roots, &members);
            let ade = classify(ns, roots, &simple);
            RootComponent {
                ade,
                roots: members,
                simple_roots: simple,
            }
        })
        .collect()
}

fn lex_positive(c: &DivisorClass) -> bool {
    c.numerators()
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_positive())
}

/// With positivity taken lexicographically, the simple roots are the
/// positive roots that are not a sum of two positive roots.
fn simple_roots(roots: &[DivisorClass], members: &[usize]) -> Vec<usize> {
    let pos: Vec<usize> = members.iter().copied().filter(|&i| lex_positive(&roots[i])).collect();
    let mut sums = HashSet::new();
    for (a, &i) in pos.iter().enumerate() {
        for &j in &pos[a + 1..] {
            sums.insert(&roots[i] + &roots[j]);
        }
    }
    pos.into_iter().filter(|&i| !sums.contains(&roots[i])).collect()
}

fn classify(ns: &NSModel, roots: &[DivisorClass], simple: &[usize]) -> AdeType {
    let n = simple.len();
    let mut adj = vec![Vec::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            let p = ns.pairing_int(&roots[simple[a]], &roots[simple[b]]);
            assert!(p == BigInt::from(0) || p == BigInt::from(1), "not a simply laced simple system");
            if p == BigInt::from(1) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    assert_eq!(edges + 1, n, "Dynkin diagram of a definite root system is a tree");
    let Some(center) = (0..n).find(|&i| adj[i].len() >= 3) else {
        return AdeType::A(n);
    };
    assert_eq!(adj[center].len(), 3, "definite diagrams branch at most three ways");
    let mut arms: Vec<usize> = adj[center]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (center, start, 1);
            while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
                assert!(adj[cur].len() <= 2, "a second branch point");
                prev = cur;
                cur = next;
                len += 1;
            }
            len
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, _] => AdeType::D(n),
        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => AdeType::E(n),
        _ => panic!("arms {arms:?} do not give a definite diagram"),
    }
}

/// `uL − Σ (A_k + B_k)`.
pub fn ample_test_class(u: u64) -> DivisorClass {
    let mut c = DivisorClass::l().scale(&BigInt::from(u));
    for j in 1..=9 {
        c = &(&c - &DivisorClass::a(j)) - &DivisorClass::b(j);
    }
    c
}

/// `d² > 0` and no root is orthogonal to `d`.
pub fn is_chamber_ample(ns: &NSModel, d: &DivisorClass) -> Result<bool, NsError> {
    if !ns.contains(d) {
        return Err(NsError::NotInLattice);
    }
    if !ns.pairing(d, d).is_positive() {
        return Ok(false);
    }
    Ok(root_system_of_orthogonal(ns, d)?.roots.is_empty())
}

/// Least `u ≥ 1` with `uL − Σ (A_k + B_k)` chamber-ample.
pub fn min_ample_u(ns: &NSModel) -> u64 {
    (1..)
        .find(|&u| is_chamber_ample(ns, &ample_test_class(u)).expect("test class lies in NS"))
        .expect("large multiples of L are ample")
}
