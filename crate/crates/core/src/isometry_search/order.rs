//! Multiplicative order of an integer matrix through its characteristic
//! polynomial: finite order forces a product of cyclotomic factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::exact_linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u64(*n),
            Order::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Coefficients of `det(xI − M)`, constant term first (Faddeev–LeVerrier).
pub fn characteristic_polynomial(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = M·M_{k−1} + c_{n−k+1}·I, c_{n−k} = −tr(M·M_k)/k
        let mut next = m.mul(&mk);
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        mk = next;
        let amk = m.mul(&mk);
        let tr: BigInt = (0..n).map(|i| amk[(i, i)].clone()).sum();
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = -q;
    }
    coeffs
}

fn euler_phi(mut m: u64) -> u64 {
    let mut phi = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Exact division `a / b` for monic `b`; `None` if `b` does not divide `a`.
fn divide(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if a.len() < b.len() {
        return None;
    }
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(q)
}

/// Cyclotomic polynomials `Φ_m` with `φ(m) ≤ max_degree`, by increasing `m`.
pub fn cyclotomic_polynomials(max_degree: u64) -> Vec<(u64, Vec<BigInt>)> {
    // φ(m) ≥ √(m/2), so nothing beyond 2·max_degree² qualifies
    let bound = 2 * max_degree * max_degree;
    let mut out: Vec<(u64, Vec<BigInt>)> = Vec::new();
    for m in 1..=bound.max(2) {
        if euler_phi(m) > max_degree {
            continue;
        }
        // xᵐ − 1 divided by Φ_d for the proper divisors d (all have smaller φ)
        let mut p = vec![BigInt::zero(); m as usize + 1];
        p[0] = -BigInt::one();
        p[m as usize] = BigInt::one();
        for (d, phi_d) in &out {
            if m % d == 0 && *d != m {
                p = divide(&p, phi_d).expect("Φ_d divides x^m - 1");
            }
        }
        out.push((m, p));
    }
    out
}

/// Order of an invertible integer matrix.
pub fn matrix_order(m: &IntMatrix) -> Order {
    let n = m.rows() as u64;
    let mut chi = characteristic_polynomial(m);
    let mut lcm = 1u64;
    for (k, phi) in cyclotomic_polynomials(n) {
        while let Some(q) = divide(&chi, &phi) {
            chi = q;
            lcm = lcm.lcm(&k);
        }
        if chi.len() == 1 {
            break;
        }
    }
    if chi.len() != 1 {
        return Order::Infinite;
    }
    // a product of cyclotomic factors can still hide a unipotent part
    let p = m.to_rational().pow(lcm);
    if p.is_identity() {
        Order::Finite(smallest_order(m, lcm))
    } else {
        Order::Infinite
    }
}

/// The least divisor `d` of `bound` with `mᵈ = I`.
fn smallest_order(m: &IntMatrix, bound: u64) -> u64 {
    let r = m.to_rational();
    (1..=bound)
        .filter(|d| bound.is_multiple_of(*d))
        .find(|&d| r.pow(d).is_identity())
        .unwrap_or(bound)
}
