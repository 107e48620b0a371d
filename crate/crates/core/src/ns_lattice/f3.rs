//! Small linear algebra over 𝔽₃, for lattices squeezed between 3ℤⁿ and ℤⁿ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub(crate) fn reduce(x: &BigInt) -> u8 {
    x.mod_floor(&BigInt::from(3)).to_u8().expect("residue")
}

pub(crate) fn reduce_vec(v: &[BigInt]) -> Vec<u8> {
    v.iter().map(reduce).collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub(crate) fn rref(mut rows: Vec<Vec<u8>>) -> (Vec<Vec<u8>>, Vec<usize>) {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        // 1 and 2 are their own inverses mod 3
        let inv = rows[r][c];
        for x in rows[r].iter_mut() {
            *x = (*x * inv) % 3;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = 3 - rows[i][c];
                for k in 0..cols {
                    rows[i][k] = (rows[i][k] + f * rows[r][k]) % 3;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{k : k·v = 0 for every row v}`.
pub(crate) fn orthogonal(rows: Vec<Vec<u8>>, cols: usize) -> Vec<Vec<u8>> {
    let (red, pivots) = rref(rows);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut k = vec![0u8; cols];
            k[f] = 1;
            for (row, &p) in red.iter().zip(&pivots) {
                k[p] = (3 - row[f]) % 3;
            }
            k
        })
        .collect()
}

/// All 3^dim elements of the span of an independent family, in a fixed order.
pub(crate) fn span(basis: &[Vec<u8>], cols: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![0u8; cols]];
    for b in basis {
        let prev = out.clone();
        for k in 1..3u8 {
            for v in &prev {
                out.push(v.iter().zip(b).map(|(x, y)| (x + k * y) % 3).collect());
            }
        }
    }
    out
}

pub(crate) fn dot(a: &[u8], b: &[u8]) -> u8 {
    (a.iter().zip(b).map(|(x, y)| u32::from(*x) * u32::from(*y)).sum::<u32>() % 3) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_complement() {
        let rows = vec![vec![1, 1, 1, 0], vec![0, 1, 2, 1]];
        let k = orthogonal(rows.clone(), 4);
        assert_eq!(k.len(), 2);
        for a in &k {
            for r in &rows {
                assert_eq!(dot(a, r), 0);
            }
        }
        assert_eq!(span(&k, 4).len(), 9);
    }
}
