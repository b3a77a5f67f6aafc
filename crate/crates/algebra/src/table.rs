//! Basis-level finite-dimensional algebras: sparse structure constants over
//! F_p, a distinguished orthogonal idempotent decomposition of 1 (the
//! "vertices"), and a basis adapted to the resulting Peirce decomposition.

use crate::{AlgError, Result};
use fp::{sparse_axpy, sparse_from_map, Mat, SparseVec};
use std::collections::BTreeMap;

/// A finite-dimensional associative unital algebra given by structure
/// constants on a fixed basis.
///
/// Invariants, checked by [`TableAlgebra::verify`]:
/// * `verts` lists basis elements that are orthogonal idempotents summing
///   to 1;
/// * every basis element `x` satisfies `e_v x e_w = x` for the vertex pair
///   `vpair[x] = (v, w)` (v = target, w = source);
/// * multiplication is associative;
/// * when `degree` is present, multiplication adds degrees.
#[derive(Clone)]
pub struct TableAlgebra {
    p: u64,
    dim: usize,
    /// rows[i] = sorted list of (j, expansion of x_i * x_j)
    rows: Vec<Vec<(u32, SparseVec)>>,
    /// basis indices of the vertex idempotents
    verts: Vec<u32>,
    /// per basis element: (position in verts of target, position of source)
    vpair: Vec<(u32, u32)>,
    /// optional multidegree per basis element
    degree: Option<Vec<Vec<i64>>>,
    grading_rank: usize,
    labels: Vec<String>,
    /// indices of a designated generating set (always includes the vertices)
    gens: Vec<u32>,
}

/// Builder input: the sparse multiplication table as a map.
pub struct TableBuilder {
    pub p: u64,
    pub dim: usize,
    pub products: BTreeMap<(usize, usize), SparseVec>,
    pub verts: Vec<usize>,
    pub vpair: Vec<(usize, usize)>,
    pub degree: Option<Vec<Vec<i64>>>,
    pub grading_rank: usize,
    pub labels: Vec<String>,
    pub gens: Option<Vec<usize>>,
}

impl TableBuilder {
    pub fn build(self) -> TableAlgebra {
        let mut rows: Vec<Vec<(u32, SparseVec)>> = vec![Vec::new(); self.dim];
        for ((i, j), v) in self.products {
            if !v.is_empty() {
                rows[i].push((j as u32, v));
            }
        }
        let labels = if self.labels.is_empty() {
            (0..self.dim).map(|i| format!("b{}", i)).collect()
        } else {
            self.labels
        };
        let gens = match self.gens {
            Some(g) => g.into_iter().map(|x| x as u32).collect(),
            None => (0..self.dim as u32).collect(),
        };
        TableAlgebra {
            p: self.p,
            dim: self.dim,
            rows,
            verts: self.verts.into_iter().map(|x| x as u32).collect(),
            vpair: self.vpair.into_iter().map(|(a, b)| (a as u32, b as u32)).collect(),
            degree: self.degree,
            grading_rank: self.grading_rank,
            labels,
            gens,
        }
    }
}

impl TableAlgebra {
    /// The one-dimensional algebra F_p.
    pub fn field(p: u64) -> Self {
        TableBuilder {
            p,
            dim: 1,
            products: [((0, 0), vec![(0, 1)])].into(),
            verts: vec![0],
            vpair: vec![(0, 0)],
            degree: Some(vec![vec![0]]),
            grading_rank: 1,
            labels: vec!["1".into()],
            gens: Some(vec![0]),
        }
        .build()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn verts(&self) -> &[u32] {
        &self.verts
    }

    pub fn n_verts(&self) -> usize {
        self.verts.len()
    }

    pub fn vpair(&self, i: usize) -> (usize, usize) {
        let (a, b) = self.vpair[i];
        (a as usize, b as usize)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    pub fn set_gens(&mut self, gens: Vec<usize>) {
        self.gens = gens.into_iter().map(|x| x as u32).collect();
    }

    pub fn grading_rank(&self) -> usize {
        self.grading_rank
    }

    pub fn degree(&self, i: usize) -> Option<&[i64]> {
        self.degree.as_ref().map(|d| d[i].as_slice())
    }

    pub fn degrees(&self) -> Option<&Vec<Vec<i64>>> {
        self.degree.as_ref()
    }

    pub fn total_degree(&self, i: usize) -> Option<i64> {
        self.degree(i).map(|d| d.iter().sum())
    }

    pub fn set_degrees(&mut self, deg: Option<Vec<Vec<i64>>>, rank: usize) {
        self.degree = deg;
        self.grading_rank = rank;
    }

    /// The identity element as a sparse vector.
    pub fn one(&self) -> SparseVec {
        self.verts.iter().map(|&v| (v as usize, 1)).collect()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, u64)] {
        match self.rows[i].binary_search_by_key(&(j as u32), |&(k, _)| k) {
            Ok(pos) => &self.rows[i][pos].1,
            Err(_) => &[],
        }
    }

    pub fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = BTreeMap::new();
        for &(i, ca) in a {
            for &(j, cb) in b {
                let c = ca * cb % self.p;
                sparse_axpy(&mut acc, c, self.mul_basis(i, j), self.p);
            }
        }
        sparse_from_map(acc)
    }

    /// x^n by repeated multiplication.
    pub fn pow_vec(&self, a: &SparseVec, n: u64) -> SparseVec {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul_vec(&acc, a);
        }
        acc
    }

    /// Left multiplication matrix of an element in the regular representation.
    pub fn left_regular(&self, a: &SparseVec) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim, self.p);
        for j in 0..self.dim {
            let prod = self.mul_vec(a, &vec![(j, 1)]);
            for (i, c) in prod {
                m[(i, j)] = c;
            }
        }
        m
    }

    /// Cartan matrix: entry (i, j) = dim e_i A e_j (row = target vertex,
    /// column = source vertex). Entries sum to dim A.
    pub fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.verts.len();
        let mut c = vec![vec![0usize; n]; n];
        for i in 0..self.dim {
            let (t, s) = self.vpair(i);
            c[t][s] += 1;
        }
        c
    }

    /// Dimension of the degree-1 component (total degree) per vertex pair.
    pub fn arrow_counts(&self) -> Option<Vec<Vec<usize>>> {
        self.degree.as_ref()?;
        let n = self.verts.len();
        let mut c = vec![vec![0usize; n]; n];
        for i in 0..self.dim {
            if self.total_degree(i) == Some(1) {
                let (t, s) = self.vpair(i);
                c[t][s] += 1;
            }
        }
        Some(c)
    }

    /// True iff the total-degree-0 component is exactly the span of the
    /// vertex idempotents (a tight Z_+-grading).
    pub fn tightness_check(&self) -> bool {
        let Some(deg) = &self.degree else { return false };
        for i in 0..self.dim {
            let d: i64 = deg[i].iter().sum();
            if d < 0 {
                return false;
            }
            if d == 0 && !self.verts.contains(&(i as u32)) {
                return false;
            }
        }
        true
    }

    /// Basis indices of positive total degree; the radical for tightly
    /// graded algebras.
    pub fn positive_part(&self) -> Option<Vec<usize>> {
        if !self.tightness_check() {
            return None;
        }
        Some((0..self.dim).filter(|&i| self.total_degree(i).unwrap() > 0).collect())
    }

    /// Exhaustive structural verification. Cost is O(dim^3) sparse products;
    /// keep to small and mid-sized algebras.
    pub fn verify(&self) -> Result<()> {
        let one = self.one();
        // orthogonal idempotents summing to 1
        for (a, &v) in self.verts.iter().enumerate() {
            for (b, &w) in self.verts.iter().enumerate() {
                let prod = self.mul_vec(&vec![(v as usize, 1)], &vec![(w as usize, 1)]);
                let expect: SparseVec = if a == b { vec![(v as usize, 1)] } else { vec![] };
                if prod != expect {
                    return Err(AlgError::Structure(format!(
                        "vertex idempotents {} and {} do not multiply orthogonally",
                        a, b
                    )));
                }
            }
        }
        // unit and Peirce adaptation
        for i in 0..self.dim {
            let x: SparseVec = vec![(i, 1)];
            if self.mul_vec(&one, &x) != x || self.mul_vec(&x, &one) != x {
                return Err(AlgError::Structure(format!("unit fails on basis element {}", i)));
            }
            let (t, s) = self.vpair(i);
            let et: SparseVec = vec![(self.verts[t] as usize, 1)];
            let es: SparseVec = vec![(self.verts[s] as usize, 1)];
            if self.mul_vec(&et, &x) != x || self.mul_vec(&x, &es) != x {
                return Err(AlgError::Structure(format!(
                    "basis element {} not adapted to its vertex pair",
                    i
                )));
            }
        }
        // associativity on all basis triples
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul_basis(i, j).to_vec();
                for k in 0..self.dim {
                    let jk = self.mul_basis(j, k).to_vec();
                    let l = self.mul_vec(&ij, &vec![(k, 1)]);
                    let r = self.mul_vec(&vec![(i, 1)], &jk);
                    if l != r {
                        return Err(AlgError::Structure(format!(
                            "associativity fails on triple ({}, {}, {})",
                            i, j, k
                        )));
                    }
                }
            }
        }
        // graded multiplication
        if let Some(deg) = &self.degree {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    for &(k, _) in self.mul_basis(i, j) {
                        let sum: Vec<i64> =
                            deg[i].iter().zip(&deg[j]).map(|(a, b)| a + b).collect();
                        if deg[k] != sum {
                            return Err(AlgError::Structure(format!(
                                "grading not additive on ({}, {}) -> {}",
                                i, j, k
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Corner e A e where e is the sum of the vertex idempotents at the
    /// given positions. The basis is the subset of basis elements whose
    /// vertex pair lies in `keep` (valid because the basis is adapted).
    /// Returns the corner and the indices of the surviving basis elements.
    pub fn corner(&self, keep: &[usize]) -> (TableAlgebra, Vec<usize>) {
        let keep_set: Vec<bool> = {
            let mut v = vec![false; self.verts.len()];
            for &k in keep {
                v[k] = true;
            }
            v
        };
        let survivors: Vec<usize> = (0..self.dim)
            .filter(|&i| {
                let (t, s) = self.vpair(i);
                keep_set[t] && keep_set[s]
            })
            .collect();
        let old_to_new: BTreeMap<usize, usize> =
            survivors.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let mut products = BTreeMap::new();
        for (ni, &oi) in survivors.iter().enumerate() {
            for (nj, &oj) in survivors.iter().enumerate() {
                let prod = self.mul_basis(oi, oj);
                if !prod.is_empty() {
                    let v: SparseVec =
                        prod.iter().map(|&(k, c)| (old_to_new[&k], c)).collect();
                    products.insert((ni, nj), v);
                }
            }
        }
        let vert_positions: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let alg = TableBuilder {
            p: self.p,
            dim: survivors.len(),
            products,
            verts: keep
                .iter()
                .map(|&k| old_to_new[&(self.verts[k] as usize)])
                .collect(),
            vpair: survivors
                .iter()
                .map(|&i| {
                    let (t, s) = self.vpair(i);
                    (vert_positions[&t], vert_positions[&s])
                })
                .collect(),
            degree: self
                .degree
                .as_ref()
                .map(|d| survivors.iter().map(|&i| d[i].clone()).collect()),
            grading_rank: self.grading_rank,
            labels: survivors.iter().map(|&i| self.labels[i].clone()).collect(),
            gens: None,
        }
        .build();
        (alg, survivors)
    }

    /// Span closure of the two-sided ideal generated by the given elements,
    /// returned as a row-echelon matrix (rows = basis of the ideal).
    pub fn ideal_span(&self, gens: &[SparseVec]) -> Mat {
        let mut span = fp::SpanBuilder::new(self.dim, self.p);
        let mut work: Vec<SparseVec> = gens.to_vec();
        while let Some(v) = work.pop() {
            if !span.insert_sparse(&v) {
                continue;
            }
            for b in 0..self.dim {
                let bv: SparseVec = vec![(b, 1)];
                let l = self.mul_vec(&bv, &v);
                let r = self.mul_vec(&v, &bv);
                if !l.is_empty() {
                    work.push(l);
                }
                if !r.is_empty() {
                    work.push(r);
                }
            }
        }
        span.into_mat()
    }

    /// Quotient by the two-sided ideal generated by `gens`. The quotient
    /// basis is the set of non-pivot basis elements of the ideal span (the
    /// pivot rule of row reduction), so it stays Peirce-adapted. Returns the
    /// quotient together with the surviving basis indices and the reduction
    /// matrix (dim x dim) sending a vector to its canonical representative.
    pub fn quotient_by_ideal(&self, gens: &[SparseVec]) -> Result<(TableAlgebra, Vec<usize>, Mat)> {
        let span = self.ideal_span(gens);
        let e = span.row_echelon();
        let pivots = &e.pivots;
        let survivors: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        // reduction: subtract pivot rows
        let mut red = Mat::identity(self.dim, self.p);
        for (r, &pc) in pivots.iter().enumerate() {
            // x_pc ≡ -sum_{c non-pivot} rref[r][c] x_c
            for j in 0..self.dim {
                red[(j, pc)] = 0;
            }
            for &c in &survivors {
                let v = e.rref[(r, c)];
                if v != 0 {
                    red[(c, pc)] = (self.p - v) % self.p;
                }
            }
        }
        // red maps old coords (columns) to reduced old coords; survivors give new index
        let old_to_new: BTreeMap<usize, usize> =
            survivors.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let reduce_sparse = |v: &SparseVec| -> SparseVec {
            let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
            for &(i, c) in v {
                for &s in &survivors {
                    let m = red[(s, i)];
                    if m != 0 {
                        let e = acc.entry(old_to_new[&s]).or_insert(0);
                        *e = (*e + c * m) % self.p;
                    }
                }
            }
            sparse_from_map(acc)
        };
        // every vertex idempotent must survive or die entirely
        let mut verts = Vec::new();
        for (pos, &v) in self.verts.iter().enumerate() {
            let r = reduce_sparse(&vec![(v as usize, 1)]);
            if r.is_empty() {
                continue;
            }
            if r != vec![(old_to_new[&(v as usize)], 1)] {
                return Err(AlgError::Structure(format!(
                    "ideal does not respect the idempotent at vertex {}",
                    pos
                )));
            }
            verts.push((pos, old_to_new[&(v as usize)]));
        }
        let vert_positions: BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(n, &(o, _))| (o, n)).collect();
        let mut products = BTreeMap::new();
        for (ni, &oi) in survivors.iter().enumerate() {
            for (nj, &oj) in survivors.iter().enumerate() {
                let prod = reduce_sparse(&self.mul_basis(oi, oj).to_vec());
                if !prod.is_empty() {
                    products.insert((ni, nj), prod);
                }
            }
        }
        let alg = TableBuilder {
            p: self.p,
            dim: survivors.len(),
            products,
            verts: verts.iter().map(|&(_, n)| n).collect(),
            vpair: survivors
                .iter()
                .map(|&i| {
                    let (t, s) = self.vpair(i);
                    (vert_positions[&t], vert_positions[&s])
                })
                .collect(),
            degree: self
                .degree
                .as_ref()
                .map(|d| survivors.iter().map(|&i| d[i].clone()).collect()),
            grading_rank: self.grading_rank,
            labels: survivors.iter().map(|&i| self.labels[i].clone()).collect(),
            gens: None,
        }
        .build();
        Ok((alg, survivors, red))
    }

    /// Basis of the center, as sparse vectors.
    pub fn center(&self) -> Vec<SparseVec> {
        // solve x b - b x = 0 for all basis b
        let mut rows = Vec::new();
        for b in 0..self.dim {
            // constraint rows indexed by output coordinate
            let mut block = vec![vec![0u64; self.dim]; self.dim];
            for x in 0..self.dim {
                for &(k, c) in self.mul_basis(x, b) {
                    block[k][x] = (block[k][x] + c) % self.p;
                }
                for &(k, c) in self.mul_basis(b, x) {
                    block[k][x] = (block[k][x] + self.p - c) % self.p;
                }
            }
            rows.extend(block);
        }
        let m = Mat::from_rows(rows, self.p);
        let k = m.kernel_basis();
        (0..k.rows)
            .map(|r| {
                k.row(r)
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect()
            })
            .collect()
    }

    /// The enveloping algebra A (x) B^op acting on (A,B)-bimodules by
    /// (a (x) b) . m = a m b. Basis: pairs (a, b), lexicographic.
    pub fn enveloping(a: &TableAlgebra, b: &TableAlgebra) -> TableAlgebra {
        assert_eq!(a.p, b.p);
        let dim = a.dim * b.dim;
        let idx = |i: usize, j: usize| i * b.dim + j;
        let mut products = BTreeMap::new();
        for i1 in 0..a.dim {
            for j1 in 0..b.dim {
                for i2 in 0..a.dim {
                    let ai = a.mul_basis(i1, i2).to_vec();
                    if ai.is_empty() {
                        continue;
                    }
                    for j2 in 0..b.dim {
                        let bj = b.mul_basis(j2, j1); // op side
                        if bj.is_empty() {
                            continue;
                        }
                        let mut out: SparseVec = Vec::new();
                        for &(ka, ca) in &ai {
                            for &(kb, cb) in bj {
                                out.push((idx(ka, kb), ca * cb % a.p));
                            }
                        }
                        out.sort();
                        products.insert((idx(i1, j1), idx(i2, j2)), out);
                    }
                }
            }
        }
        let mut verts = Vec::new();
        for &va in &a.verts {
            for &vb in &b.verts {
                verts.push(idx(va as usize, vb as usize));
            }
        }
        let nb = b.verts.len();
        let mut vpair = Vec::with_capacity(dim);
        for i in 0..a.dim {
            let (ta, sa) = a.vpair(i);
            for j in 0..b.dim {
                let (tb, sb) = b.vpair(j);
                // target idem of (a x b) is (target a, source b), source is (source a, target b)
                vpair.push((ta * nb + sb, sa * nb + tb));
            }
        }
        let labels = (0..a.dim)
            .flat_map(|i| (0..b.dim).map(move |j| (i, j)))
            .map(|(i, j)| format!("{}(x){}", a.labels[i], b.labels[j]))
            .collect();
        TableBuilder {
            p: a.p,
            dim,
            products,
            verts,
            vpair,
            degree: None,
            grading_rank: 0,
            labels,
            gens: None,
        }
        .build()
    }
}

impl std::fmt::Debug for TableAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TableAlgebra(dim {}, {} vertices, F_{})",
            self.dim,
            self.verts.len(),
            self.p
        )
    }
}
