//! Dense matrices over a [`Field`] with exact Gaussian elimination.
//!
//! Vectors are plain `Vec<F>`; a matrix acts on column vectors.

use std::fmt;

use super::field::Field;
use super::rational::{fmt_q, Q};

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type QMatrix = Matrix<Q>;

/// Result selector for [`solve_linear`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Kernel,
    Image,
    QuotientBasis,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), rows, "column length mismatch");
            for (i, x) in v.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| match (a.is_zero(), b.is_zero()) {
                    (_, true) => a.clone(),
                    (true, false) => b.clone(),
                    _ => a.add(b),
                })
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| match (a.is_zero(), b.is_zero()) {
                    (_, true) => a.clone(),
                    (true, false) => b.neg(),
                    _ => a.sub(b),
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| if a.is_zero() { F::zero() } else { a.mul(c) })
                .collect(),
        }
    }

    /// Block matrix `[self | o]`.
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    /// Block matrix with `self` above `o`.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv();
            let support: Vec<usize> = (c..m.cols).filter(|&j| !m.get(r, j).is_zero()).collect();
            for &j in &support {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for &j in &support {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{v : self v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let out: Vec<Vec<F>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(i, f).neg();
                }
                v
            })
            .collect();
        debug_assert_eq!(out.len() + pivots.len(), self.cols, "rank-nullity");
        out
    }

    /// Basis of the column space, taken from the original pivot columns.
    pub fn image(&self) -> Vec<Vec<F>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.col(c)).collect()
    }

    /// Representatives of a basis of `F^rows / image`, chosen among standard basis vectors.
    pub fn cokernel_basis(&self) -> Vec<Vec<F>> {
        let n = self.rows;
        let ext = self.hstack(&Self::identity(n));
        let (_, pivots) = ext.rref();
        pivots
            .iter()
            .filter(|&&c| c >= self.cols)
            .map(|&c| {
                let mut v = vec![F::zero(); n];
                v[c - self.cols] = F::one();
                v
            })
            .collect()
    }

    /// Some `x` with `self x = b`, or `None`.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Self::from_cols(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..2 * n).collect();
        Some(r.submatrix(&idx, &right))
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            for i in c + 1..n {
                let f = m.get(i, c).div(&piv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |a, i| a.add(self.get(i, i)))
    }

    /// Characteristic polynomial `det(t I - self)`, monic, by the
    /// division-free Samuelson–Berkowitz recursion.
    pub fn charpoly(&self) -> super::upoly::UniPoly<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // vect holds coefficients of the char poly of the leading k x k block, highest first.
        let mut vect: Vec<F> = vec![F::one()];
        for k in 0..n {
            // block A_k = self[0..k, 0..k], R = self[k, 0..k], C = self[0..k, k], a = self[k,k]
            let a = self.get(k, k).clone();
            let mut col: Vec<F> = (0..k).map(|i| self.get(i, k).clone()).collect();
            // Toeplitz first column: 1, -a, -R C, -R A C, ...
            let mut t = vec![F::one(), a.neg()];
            for _ in 0..k {
                let rc = (0..k).fold(F::zero(), |s, j| s.add(&self.get(k, j).mul(&col[j])));
                t.push(rc.neg());
                col = (0..k)
                    .map(|i| (0..k).fold(F::zero(), |s, j| s.add(&self.get(i, j).mul(&col[j]))))
                    .collect();
            }
            // new = T * vect where T is (k+2) x (k+1) lower-triangular Toeplitz
            let mut new = vec![F::zero(); k + 2];
            for (i, slot) in new.iter_mut().enumerate() {
                for (j, v) in vect.iter().enumerate() {
                    if i >= j {
                        *slot = slot.add(&t[i - j].mul(v));
                    }
                }
            }
            vect = new;
        }
        vect.reverse();
        super::upoly::UniPoly::new(vect)
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl QMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::rational::q(x)).collect())
                .collect(),
        )
    }

    /// Rows as canonical rational strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(fmt_q).collect())
            .collect()
    }
}

/// Basis data for a linear map: kernel, image, or cokernel representatives.
pub fn solve_linear<F: Field>(m: &Matrix<F>, mode: SolveMode) -> Vec<Vec<F>> {
    let out = match mode {
        SolveMode::Kernel => m.kernel(),
        SolveMode::Image => m.image(),
        SolveMode::QuotientBasis => m.cokernel_basis(),
    };
    #[cfg(debug_assertions)]
    {
        let r = m.rank();
        match mode {
            SolveMode::Kernel => debug_assert_eq!(out.len() + r, m.cols(), "rank-nullity"),
            SolveMode::Image => debug_assert_eq!(out.len(), r),
            SolveMode::QuotientBasis => debug_assert_eq!(out.len() + r, m.rows()),
        }
    }
    out
}

/// Row-reduced basis of the span of `vectors` (each of length `dim`).
pub fn span_basis<F: Field>(dim: usize, vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec());
    debug_assert_eq!(m.cols(), dim);
    let (r, p) = m.rref();
    (0..p.len()).map(|i| r.row(i).to_vec()).collect()
}

pub fn span_dim<F: Field>(dim: usize, vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let _ = dim;
    Matrix::from_rows(vectors.to_vec()).rank()
}

/// Basis of `a ∩ b` for subspaces given by spanning sets.
pub fn intersect<F: Field>(dim: usize, a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // solve sum x_i a_i = sum y_j b_j
    let ma = Matrix::from_cols(dim, a);
    let mb = Matrix::from_cols(dim, b);
    let k = ma.hstack(&mb.scale(&F::one().neg())).kernel();
    let vecs: Vec<Vec<F>> = k.iter().map(|v| ma.apply(&v[..a.len()])).collect();
    span_basis(dim, &vecs)
}

/// True when `v` lies in the span of `basis`.
pub fn in_span<F: Field>(dim: usize, basis: &[Vec<F>], v: &[F]) -> bool {
    if v.iter().all(F::is_zero) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    Matrix::from_cols(dim, basis).solve(v).is_some()
}

/// Vectors from `candidates` extending a basis of `sub` to a basis of `sub + span(candidates)`.
pub fn complement<F: Field>(dim: usize, sub: &[Vec<F>], candidates: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut acc: Vec<Vec<F>> = span_basis(dim, sub);
    let mut out = Vec::new();
    let mut r = acc.len();
    for c in candidates {
        acc.push(c.clone());
        let nr = span_dim(dim, &acc);
        if nr > r {
            out.push(c.clone());
            r = nr;
        } else {
            acc.pop();
        }
    }
    out
}
