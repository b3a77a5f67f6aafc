//! Exact dense linear algebra over prime fields F_p.
//!
//! Everything in this workspace ultimately reduces to row operations on
//! matrices over F_p, so this crate keeps the representation deliberately
//! simple: a dense row-major `Vec<u64>` of canonical residues. No floats,
//! no rounding, no extension fields.

mod matrix;
#[cfg(test)]
mod tests;

pub use matrix::{Mat, RowEchelon, SpanBuilder};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("characteristic mismatch: {0} vs {1}")]
    CharMismatch(u64, u64),
}

/// Returns true if `p` is prime. Trial division is plenty for the sizes
/// this workspace uses (p is a small prime, typically 2, 3 or 5).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Canonical residue of a signed integer mod p.
pub fn reduce_i64(v: i64, p: u64) -> u64 {
    let m = v.rem_euclid(p as i64);
    m as u64
}

/// Inverse of `a` mod p (p prime, a nonzero mod p).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r): (i64, i64) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "element {} not invertible mod {}", a, p);
    reduce_i64(t, p)
}

/// A sparse vector over F_p: sorted (index, coefficient) pairs, all
/// coefficients nonzero canonical residues.
pub type SparseVec = Vec<(usize, u64)>;

/// Adds `c * src` into the accumulator map representation of a sparse vector.
pub fn sparse_axpy(acc: &mut std::collections::BTreeMap<usize, u64>, c: u64, src: &[(usize, u64)], p: u64) {
    if c == 0 {
        return;
    }
    for &(i, v) in src {
        let e = acc.entry(i).or_insert(0);
        *e = (*e + c * v) % p;
        if *e == 0 {
            acc.remove(&i);
        }
    }
}

pub fn sparse_from_map(m: std::collections::BTreeMap<usize, u64>) -> SparseVec {
    m.into_iter().filter(|&(_, v)| v != 0).collect()
}

pub fn sparse_scale(v: &[(usize, u64)], c: u64, p: u64) -> SparseVec {
    if c == 0 {
        return Vec::new();
    }
    v.iter().map(|&(i, x)| (i, x * c % p)).filter(|&(_, x)| x != 0).collect()
}

pub fn sparse_add(a: &[(usize, u64)], b: &[(usize, u64)], p: u64) -> SparseVec {
    let mut m = std::collections::BTreeMap::new();
    sparse_axpy(&mut m, 1, a, p);
    sparse_axpy(&mut m, 1, b, p);
    sparse_from_map(m)
}
