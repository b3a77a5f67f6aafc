use crate::{inv_mod, FpError};

/// Dense matrix over F_p, row-major, entries stored as canonical residues.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    data: Vec<u64>,
}

/// Result of row reduction: the reduced row echelon form, its rank and the
/// pivot columns in increasing order.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub rref: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        Mat { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Mat::zeros(n, n, p);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, p: u64) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| v % p));
        }
        Mat { rows: r, cols: c, p, data }
    }

    pub fn from_fn(rows: usize, cols: usize, p: u64, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Mat::zeros(rows, cols, p);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j) % p;
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, self.p, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: u64) -> Mat {
        let c = c % self.p;
        let mut out = self.clone();
        for v in &mut out.data {
            *v = *v * c % self.p;
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v = (*v + *w) % self.p;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v = (*v + self.p - *w) % self.p;
        }
        out
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = Mat::zeros(self.rows, other.cols, p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                let orow = other.row(k).to_vec();
                let dst = out.row_mut(i);
                for (d, &b) in dst.iter_mut().zip(&orow) {
                    *d = (*d + a * b) % p;
                }
            }
        }
        out
    }

    /// Matrix applied to a column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0u64; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row(i).iter().zip(v) {
                acc = (acc + a * b) % self.p;
            }
            out[i] = acc;
        }
        out
    }

    /// Reduced row echelon form with rank and pivot columns.
    pub fn row_echelon(&self) -> RowEchelon {
        let mut m = self.clone();
        let p = m.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m[(i, c)] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m[(r, j)], m[(pr, j)]);
                    m[(r, j)] = b;
                    m[(pr, j)] = a;
                }
            }
            let inv = inv_mod(m[(r, c)], p);
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)] * inv % p;
            }
            for i in 0..m.rows {
                if i != r && m[(i, c)] != 0 {
                    let f = m[(i, c)];
                    let rr: Vec<u64> = m.row(r).to_vec();
                    for j in c..m.cols {
                        m[(i, j)] = (m[(i, j)] + (p - f) * rr[j]) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        RowEchelon { rref: m, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().rank
    }

    /// Basis of the right null space, returned as the rows of a matrix
    /// (so `self * v^T = 0` for every row `v`).
    pub fn kernel_basis(&self) -> Mat {
        let RowEchelon { rref, rank, pivots } = self.row_echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.cols - rank, self.cols, self.p);
        for (k, &fc) in free.iter().enumerate() {
            out[(k, fc)] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let v = rref[(r, fc)];
                if v != 0 {
                    out[(k, pc)] = (self.p - v) % self.p;
                }
            }
        }
        out
    }

    /// Some solution x of `self * x = b`, or None if the system is inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>, FpError> {
        if b.len() != self.rows {
            return Err(FpError::DimMismatch(format!(
                "solve: {} rows vs rhs of length {}",
                self.rows,
                b.len()
            )));
        }
        let mut aug = Mat::zeros(self.rows, self.cols + 1, self.p);
        for i in 0..self.rows {
            aug.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            aug[(i, self.cols)] = b[i] % self.p;
        }
        let RowEchelon { rref, rank: _, pivots } = aug.row_echelon();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rref[(r, self.cols)];
        }
        Ok(Some(x))
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Mat) -> Result<Mat, FpError> {
        if self.p != other.p {
            return Err(FpError::CharMismatch(self.p, other.p));
        }
        let p = self.p;
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols, p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)] % p;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse of a square matrix, or None if singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n, self.p);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug[(i, n + i)] = 1;
        }
        let RowEchelon { rref, rank, .. } = aug.row_echelon();
        if rank < n || (0..n).any(|i| rref[(i, i)] != 1) {
            return None;
        }
        let mut out = Mat::zeros(n, n, self.p);
        for i in 0..n {
            out.row_mut(i).copy_from_slice(&rref.row(i)[n..]);
        }
        Some(out)
    }

    /// Vertical stack.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, p: self.p, data }
    }

    /// Expresses `v` in terms of the row space: returns coefficients c with
    /// c * self = v, or None if v is outside the row span.
    pub fn express_in_rowspace(&self, v: &[u64]) -> Option<Vec<u64>> {
        self.transpose().solve(v).expect("shape checked").map(|x| x)
    }
}

/// Incrementally maintained row space in reduced echelon form. Used for
/// span closures (ideals, submodule generation) where rows arrive one at
/// a time and membership tests must stay cheap.
pub struct SpanBuilder {
    cols: usize,
    p: u64,
    rows: Vec<Vec<u64>>,   // in rref, sorted by pivot column
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(cols: usize, p: u64) -> Self {
        SpanBuilder { cols, p, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the current rows in place.
    pub fn reduce(&self, v: &mut [u64]) {
        for (r, &pc) in self.pivots.iter().enumerate() {
            let f = v[pc];
            if f != 0 {
                let row = &self.rows[r];
                for j in pc..self.cols {
                    if row[j] != 0 {
                        v[j] = (v[j] + (self.p - f) * row[j]) % self.p;
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts `v` if independent; returns true when the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[pc], self.p);
        for x in &mut w {
            *x = *x * inv % self.p;
        }
        // back-reduce existing rows
        for (r, row) in self.rows.iter_mut().enumerate() {
            let f = row[pc];
            if f != 0 {
                for j in 0..self.cols {
                    row[j] = (row[j] + (self.p - f) * w[j]) % self.p;
                }
                debug_assert_eq!(self.pivots[r], self.pivots[r]);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, w);
        true
    }

    pub fn insert_sparse(&mut self, v: &[(usize, u64)]) -> bool {
        let mut w = vec![0u64; self.cols];
        for &(i, c) in v {
            w[i] = c % self.p;
        }
        self.insert(&w)
    }

    pub fn into_mat(self) -> Mat {
        Mat::from_rows(self.rows, self.p)
    }

    pub fn as_mat(&self) -> Mat {
        Mat::from_rows(self.rows.clone(), self.p)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}
