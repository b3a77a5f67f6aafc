use crate::{is_prime, Mat};

fn xorshift(state: &mut u64) -> u64 {
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x;
    x
}

fn random_mat(rows: usize, cols: usize, p: u64, seed: &mut u64) -> Mat {
    Mat::from_fn(rows, cols, p, |_, _| xorshift(seed) % p)
}

#[test]
fn primality() {
    assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7));
    assert!(!is_prime(1) && !is_prime(4) && !is_prime(9));
}

#[test]
fn rref_identity() {
    let e = Mat::identity(2, 3).row_echelon();
    assert_eq!(e.rank, 2);
    assert_eq!(e.pivots, vec![0, 1]);
    assert_eq!(e.rref, Mat::identity(2, 3));
}

#[test]
fn rref_zero() {
    let e = Mat::zeros(3, 3, 2).row_echelon();
    assert_eq!(e.rank, 0);
    assert!(e.pivots.is_empty());
}

#[test]
fn rref_dependent_rows() {
    // row2 = 2*row1 over F_5, so rank 1 with pivot in column 0
    let m = Mat::from_rows(vec![vec![1, 2], vec![2, 4]], 5);
    let e = m.row_echelon();
    assert_eq!(e.rank, 1);
    assert_eq!(e.pivots, vec![0]);
    assert_eq!(e.rref.row(0), &[1, 2]);
}

#[test]
fn rref_idempotent() {
    let mut seed = 0x9e3779b97f4a7c15;
    for &p in &[2u64, 3, 5] {
        for _ in 0..20 {
            let m = random_mat(4, 6, p, &mut seed);
            let e = m.row_echelon();
            let e2 = e.rref.row_echelon();
            assert_eq!(e.rref, e2.rref);
            assert_eq!(e.rank, e2.rank);
        }
    }
}

#[test]
fn kernel_identity_empty() {
    let k = Mat::identity(4, 3).kernel_basis();
    assert_eq!(k.rows, 0);
}

#[test]
fn kernel_zero_full() {
    let k = Mat::zeros(3, 3, 2).kernel_basis();
    assert_eq!(k.rows, 3);
}

#[test]
fn kernel_by_enumeration() {
    // oracle: enumerate all four vectors of F_2^2
    let m = Mat::from_rows(vec![vec![1, 1]], 2);
    let mut expect = Vec::new();
    for a in 0..2u64 {
        for b in 0..2u64 {
            if (a + b) % 2 == 0 && (a, b) != (0, 0) {
                expect.push(vec![a, b]);
            }
        }
    }
    assert_eq!(expect, vec![vec![1, 1]]);
    let k = m.kernel_basis();
    assert_eq!(k.rows, 1);
    assert_eq!(k.row(0), &[1, 1]);
}

#[test]
fn rank_nullity() {
    let mut seed = 42;
    for &p in &[2u64, 3, 5] {
        for _ in 0..20 {
            let m = random_mat(5, 7, p, &mut seed);
            let k = m.kernel_basis();
            assert_eq!(m.rank() + k.rows, m.cols);
            for r in 0..k.rows {
                assert!(m.apply(k.row(r)).iter().all(|&v| v == 0));
            }
        }
    }
}

#[test]
fn solve_identity() {
    let m = Mat::identity(3, 5);
    let b = vec![2, 0, 4];
    assert_eq!(m.solve(&b).unwrap(), Some(b));
}

#[test]
fn solve_underdetermined_verified_by_enumeration() {
    let m = Mat::from_rows(vec![vec![1, 1]], 2);
    let x = m.solve(&[1]).unwrap().unwrap();
    // oracle: the solution set over F_2^2 is exactly {(1,0),(0,1)}
    assert!(x == vec![1, 0] || x == vec![0, 1]);
    assert_eq!(m.apply(&x), vec![1]);
}

#[test]
fn solve_inconsistent() {
    let m = Mat::zeros(1, 1, 3);
    assert_eq!(m.solve(&[1]).unwrap(), None);
}

#[test]
fn solve_dim_mismatch() {
    let m = Mat::zeros(2, 2, 3);
    assert!(m.solve(&[1]).is_err());
}

#[test]
fn kron_identities() {
    let i2 = Mat::identity(2, 3);
    let i3 = Mat::identity(3, 3);
    assert_eq!(i2.kron(&i3).unwrap(), Mat::identity(6, 3));
    let z = Mat::zeros(2, 2, 3);
    assert!(i2.kron(&z).unwrap().is_zero());
}

#[test]
fn kron_rank_multiplicative() {
    let mut seed = 7;
    for _ in 0..10 {
        let a = random_mat(3, 3, 3, &mut seed);
        let b = random_mat(3, 3, 3, &mut seed);
        assert_eq!(a.kron(&b).unwrap().rank(), a.rank() * b.rank());
    }
}

#[test]
fn kron_char_mismatch() {
    let a = Mat::identity(2, 3);
    let b = Mat::identity(2, 5);
    assert!(a.kron(&b).is_err());
}

#[test]
fn inverse_roundtrip() {
    let mut seed = 99;
    let mut found = 0;
    while found < 10 {
        let m = random_mat(4, 4, 5, &mut seed);
        if let Some(inv) = m.inverse() {
            assert_eq!(m.matmul(&inv), Mat::identity(4, 5));
            assert_eq!(inv.matmul(&m), Mat::identity(4, 5));
            found += 1;
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_mat(p: u64) -> impl Strategy<Value = Mat> {
        (1usize..5, 1usize..5).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0u64..p, r * c)
                .prop_map(move |data| Mat::from_fn(r, c, p, |i, j| data[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_prop(m in arb_mat(3)) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.rows, m.cols);
        }

        #[test]
        fn solve_exact_prop(m in arb_mat(2), b in proptest::collection::vec(0u64..2, 1..5)) {
            if b.len() == m.rows {
                if let Some(x) = m.solve(&b).unwrap() {
                    prop_assert_eq!(m.apply(&x), b);
                }
            }
        }
    }
}
