//! Independent cross-check oracle: SL_2 weight-character arithmetic in
//! characteristic p. Simple characters come from Steinberg's tensor product
//! theorem, Weyl characters are q-integers, and decomposition numbers fall
//! out of greedy expansion of Weyl characters in the simple-character
//! basis. Nothing here touches the quiver or Schur machinery; the test
//! suites use it to confront computed block data with character theory.

use std::collections::BTreeMap;

pub type WeightChar = BTreeMap<i64, i64>;

fn mul_chars(a: &WeightChar, b: &WeightChar) -> WeightChar {
    let mut out = WeightChar::new();
    for (&wa, &ma) in a {
        for (&wb, &mb) in b {
            *out.entry(wa + wb).or_insert(0) += ma * mb;
        }
    }
    out.retain(|_, m| *m != 0);
    out
}

/// Character of the Weyl module of highest weight m: weights m, m-2, ..., -m.
pub fn weyl_char(m: i64) -> WeightChar {
    (0..=m).map(|k| (m - 2 * k, 1)).collect()
}

/// Character of the simple module L(m) via Steinberg: factor m in base p
/// and tensor Frobenius twists of restricted simples (which are Weyl).
pub fn simple_char(p: u64, m: i64) -> WeightChar {
    assert!(m >= 0);
    let mut out: WeightChar = [(0, 1)].into();
    let mut rest = m;
    let mut twist = 1i64;
    while rest > 0 {
        let digit = rest % p as i64;
        let factor: WeightChar =
            weyl_char(digit).into_iter().map(|(w, c)| (w * twist, c)).collect();
        out = mul_chars(&out, &factor);
        rest /= p as i64;
        twist *= p as i64;
    }
    out
}

pub fn simple_dim(p: u64, m: i64) -> i64 {
    simple_char(p, m).values().sum()
}

/// Composition factors of the Weyl module Δ(m): pairs (weight, multiplicity),
/// highest first. Greedy expansion in the simple-character basis.
pub fn weyl_factors(p: u64, m: i64) -> Vec<(i64, i64)> {
    let mut ch = weyl_char(m);
    let mut out = Vec::new();
    while let Some((&w, &c)) = ch.iter().next_back() {
        assert!(c > 0, "negative multiplicity in greedy expansion");
        let lc = simple_char(p, w);
        for (&lw, &lm) in &lc {
            let e = ch.entry(lw).or_insert(0);
            *e -= c * lm;
        }
        ch.retain(|_, mm| *mm != 0);
        out.push((w, c));
    }
    out
}

/// Linkage classes of the SL_2 weights {r, r-2, ..., r mod 2} in S(2,r):
/// two weights are linked when one's Weyl module contains the other's
/// simple. Returns the classes, each sorted ascending.
pub fn blocks(p: u64, r: i64) -> Vec<Vec<i64>> {
    let weights: Vec<i64> = {
        let mut w = r % 2;
        let mut v = Vec::new();
        while w <= r {
            v.push(w);
            w += 2;
        }
        v
    };
    let idx: BTreeMap<i64, usize> = weights.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..weights.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for &m in &weights {
        for (s, _) in weyl_factors(p, m) {
            let (a, b) = (idx[&m], idx[&s]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for (i, &w) in weights.iter().enumerate() {
        classes.entry(find(&mut parent, i)).or_default().push(w);
    }
    let mut out: Vec<Vec<i64>> = classes.into_values().collect();
    for c in &mut out {
        c.sort();
    }
    out.sort();
    out
}

/// Cartan matrix D^T D of a block, rows and columns indexed by the block's
/// weights sorted ascending.
pub fn block_cartan(p: u64, block: &[i64]) -> Vec<Vec<i64>> {
    let n = block.len();
    let idx: BTreeMap<i64, usize> = block.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    // decomposition matrix rows = Weyl modules of the block
    let mut d = vec![vec![0i64; n]; n];
    for (row, &m) in block.iter().enumerate() {
        for (s, c) in weyl_factors(p, m) {
            if let Some(&col) = idx.get(&s) {
                d[row][col] = c;
            }
        }
    }
    let mut cartan = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            cartan[i][j] = (0..n).map(|k| d[k][i] * d[k][j]).sum();
        }
    }
    cartan
}

/// dim of the basic algebra of a block = sum of Cartan entries.
pub fn block_basic_dim(p: u64, block: &[i64]) -> i64 {
    block_cartan(p, block).iter().flatten().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steinberg_dims() {
        assert_eq!(simple_dim(2, 7), 8);
        assert_eq!(simple_dim(2, 5), 4);
        assert_eq!(simple_dim(3, 8), 9);
        assert_eq!(simple_dim(3, 6), 3);
    }

    #[test]
    fn weyl_factors_small() {
        // S^4 V in characteristic 2 has factors L4, L2, L0
        assert_eq!(weyl_factors(2, 4), vec![(4, 1), (2, 1), (0, 1)]);
        assert_eq!(weyl_factors(2, 6), vec![(6, 1), (4, 1), (0, 1)]);
        assert_eq!(weyl_factors(2, 3), vec![(3, 1)]);
        assert_eq!(weyl_factors(3, 6), vec![(6, 1), (4, 1)]);
    }

    #[test]
    fn principal_blocks() {
        // p = 2, r = 6: one block with 4 simples
        let b = blocks(2, 6);
        assert!(b.contains(&vec![0, 2, 4, 6]));
        // p = 3, r = 8: principal block {0, 4, 6}, Steinberg-like singletons
        let b = blocks(3, 8);
        assert!(b.contains(&vec![0, 4, 6]));
        assert!(b.contains(&vec![8]));
        assert!(b.contains(&vec![2]));
        // p = 2, r = 3: semisimple, two singleton blocks
        let b = blocks(2, 3);
        assert_eq!(b, vec![vec![1], vec![3]]);
    }

    #[test]
    fn block_dims() {
        // these are the dims the quiver side must reproduce
        assert_eq!(block_basic_dim(2, &[0, 2]), 5);
        assert_eq!(block_basic_dim(2, &[0, 2, 4, 6]), 23);
        assert_eq!(block_basic_dim(3, &[0, 4, 6]), 9);
    }
}
