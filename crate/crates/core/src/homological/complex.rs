//! Bounded cochain complexes of finite-dimensional ℚ-vector spaces.

use num_traits::Zero;

use crate::algebra::rational::sign_q;
use crate::algebra::{Matrix, QMatrix, Subspace, Q};
use crate::error::{Error, Result};

/// `K^lo -> K^{lo+1} -> ... -> K^{lo+len-1}`; `d[i]` maps degree `lo+i` to `lo+i+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    lo: i64,
    dims: Vec<usize>,
    d: Vec<QMatrix>,
}

impl Complex {
    /// Validates shapes and `d∘d = 0`.
    pub fn new(lo: i64, dims: Vec<usize>, d: Vec<QMatrix>) -> Result<Self> {
        if !dims.is_empty() && d.len() + 1 != dims.len() {
            return Err(Error::Precondition(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                d.len()
            )));
        }
        for (i, m) in d.iter().enumerate() {
            if m.rows() != dims[i + 1] || m.cols() != dims[i] {
                return Err(Error::Precondition(format!(
                    "differential in degree {} has shape {}x{}, expected {}x{}",
                    lo + i as i64,
                    m.rows(),
                    m.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 1..d.len() {
            if !d[i].mul(&d[i - 1]).is_zero() {
                return Err(Error::Precondition(format!(
                    "d∘d != 0 at degree {}",
                    lo + i as i64 - 1
                )));
            }
        }
        Ok(Complex { lo, dims, d })
    }

    pub fn zero() -> Self {
        Complex {
            lo: 0,
            dims: Vec::new(),
            d: Vec::new(),
        }
    }

    /// A single space in degree `n`.
    pub fn concentrated(n: i64, dim: usize) -> Self {
        Complex {
            lo: n,
            dims: vec![dim],
            d: Vec::new(),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    /// `d^n : K^n -> K^{n+1}` (a zero matrix outside the stored range).
    pub fn diff(&self, n: i64) -> QMatrix {
        if n >= self.lo && n < self.hi() {
            self.d[(n - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.dim(n + 1), self.dim(n))
        }
    }

    pub fn cocycles(&self, n: i64) -> Subspace {
        Subspace::full(self.dim(n)).kernel_within(&self.diff(n))
    }

    pub fn coboundaries(&self, n: i64) -> Subspace {
        Subspace::full(self.dim(n - 1)).image(&self.diff(n - 1))
    }

    pub fn cohomology_dim(&self, n: i64) -> usize {
        let z = self.dim(n) - self.diff(n).rank();
        z - self.diff(n - 1).rank()
    }

    /// Representatives of a basis of `H^n`.
    pub fn cohomology_basis(&self, n: i64) -> Vec<Vec<Q>> {
        self.cocycles(n).complement_of(&self.coboundaries(n))
    }

    /// Dimensions of `H^n` for all stored degrees.
    pub fn cohomology_dims(&self) -> Vec<(i64, usize)> {
        self.degrees()
            .map(|n| (n, self.cohomology_dim(n)))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|n| self.cohomology_dim(n) == 0)
    }

    /// `K[s]`: `(K[s])^n = K^{n+s}`, differential multiplied by `(-1)^s`.
    pub fn shift(&self, s: i64) -> Self {
        let sign = sign_q(s);
        Complex {
            lo: self.lo - s,
            dims: self.dims.clone(),
            d: self.d.iter().map(|m| m.scale(&sign)).collect(),
        }
    }

    /// Direct sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        if self.dims.is_empty() {
            return o.clone();
        }
        if o.dims.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        let dims = (lo..=hi).map(|n| self.dim(n) + o.dim(n)).collect();
        let d = (lo..hi)
            .map(|n| self.diff(n).block_diag(&o.diff(n)))
            .collect();
        Complex { lo, dims, d }
    }

    /// Extend the stored degree range with zero spaces.
    pub fn padded(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let dims = (lo..=hi).map(|n| self.dim(n)).collect();
        let d = (lo..hi).map(|n| self.diff(n)).collect();
        Complex { lo, dims, d }
    }
}

/// Degreewise matrices `f^n : K^n -> L^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    maps: Vec<(i64, QMatrix)>,
}

impl ChainMap {
    /// Checks shapes and `d f = f d`.
    pub fn new(source: Complex, target: Complex, maps: Vec<(i64, QMatrix)>) -> Result<Self> {
        let cm = ChainMap {
            source,
            target,
            maps,
        };
        for n in cm.range() {
            let f = cm.at(n);
            if f.rows() != cm.target.dim(n) || f.cols() != cm.source.dim(n) {
                return Err(Error::Precondition(format!(
                    "chain map has wrong shape in degree {n}"
                )));
            }
        }
        for n in cm.range() {
            let lhs = cm.target.diff(n).mul(&cm.at(n));
            let rhs = cm.at(n + 1).mul(&cm.source.diff(n));
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "not a chain map: d f != f d in degree {n}"
                )));
            }
        }
        Ok(cm)
    }

    fn range(&self) -> std::ops::RangeInclusive<i64> {
        let lo = self.source.lo().min(self.target.lo()) - 1;
        let hi = self.source.hi().max(self.target.hi()) + 1;
        lo..=hi
    }

    pub fn at(&self, n: i64) -> QMatrix {
        self.maps
            .iter()
            .find(|(k, _)| *k == n)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(n), self.source.dim(n)))
    }

    pub fn identity(k: &Complex) -> Self {
        ChainMap {
            source: k.clone(),
            target: k.clone(),
            maps: k
                .degrees()
                .map(|n| (n, QMatrix::identity(k.dim(n))))
                .collect(),
        }
    }

    pub fn zero(source: &Complex, target: &Complex) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            maps: Vec::new(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let degs: Vec<i64> = self.range().collect();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: degs
                .into_iter()
                .map(|n| (n, self.at(n).sub(&o.at(n))))
                .collect(),
        }
    }

    /// Induced map on `H^n`, in the bases of [`Complex::cohomology_basis`].
    pub fn on_cohomology(&self, n: i64) -> QMatrix {
        let src = self.source.cohomology_basis(n);
        let tgt = self.target.cohomology_basis(n);
        let b = self.target.coboundaries(n);
        let mut m = Matrix::zeros(tgt.len(), src.len());
        // express f(v) modulo coboundaries in the target representatives
        let mut cols: Vec<Vec<Q>> = tgt.clone();
        cols.extend(b.basis().iter().cloned());
        let basis = Matrix::from_cols(self.target.dim(n), &cols);
        for (j, v) in src.iter().enumerate() {
            let fv = self.at(n).apply(v);
            let c = basis.solve(&fv).expect("image of a cocycle is a cocycle");
            for i in 0..tgt.len() {
                m.set(i, j, c[i].clone());
            }
        }
        m
    }
}

/// Decide whether `f ≃ g`; on success returns `h^n : K^n -> L^{n-1}` with
/// `f - g = d h + h d`.
pub fn homotopy_classes(f: &ChainMap, g: &ChainMap) -> Option<Vec<(i64, QMatrix)>> {
    let k = &f.source;
    let l = &f.target;
    let degs: Vec<i64> = f.range().collect();
    // unknowns: entries of h^n for each n, shape l.dim(n-1) x k.dim(n)
    let mut offsets = Vec::new();
    let mut nvar = 0;
    for &n in &degs {
        offsets.push(nvar);
        nvar += l.dim(n - 1) * k.dim(n);
    }
    let var = |idx: usize, i: usize, j: usize, n: i64| offsets[idx] + i * k.dim(n) + j;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    for (idx, &n) in degs.iter().enumerate() {
        let diff = f.at(n).sub(&g.at(n));
        let dl = l.diff(n - 1); // L^{n-1} -> L^n
        let dk = k.diff(n); // K^n -> K^{n+1}
        for a in 0..l.dim(n) {
            for b in 0..k.dim(n) {
                let mut row = vec![Q::zero(); nvar];
                // (d_L h^n)_{a,b} = sum_c dl[a][c] h^n[c][b]
                for c in 0..l.dim(n - 1) {
                    let x = dl.get(a, c);
                    if !x.is_zero() {
                        row[var(idx, c, b, n)] += x;
                    }
                }
                // (h^{n+1} d_K)_{a,b} = sum_c h^{n+1}[a][c] dk[c][b]
                if idx + 1 < degs.len() {
                    for c in 0..k.dim(n + 1) {
                        let x = dk.get(c, b);
                        if !x.is_zero() {
                            row[var(idx + 1, a, c, n + 1)] += x;
                        }
                    }
                }
                rows.push(row);
                rhs.push(diff.get(a, b).clone());
            }
        }
    }
    if nvar == 0 {
        return rhs.iter().all(Zero::is_zero).then(Vec::new);
    }
    if rows.is_empty() {
        return Some(Vec::new());
    }
    let sol = Matrix::from_rows(rows).solve(&rhs)?;
    Some(
        degs.iter()
            .enumerate()
            .map(|(idx, &n)| {
                let mut h = Matrix::zeros(l.dim(n - 1), k.dim(n));
                for i in 0..l.dim(n - 1) {
                    for j in 0..k.dim(n) {
                        h.set(i, j, sol[var(idx, i, j, n)].clone());
                    }
                }
                (n, h)
            })
            .collect(),
    )
}

/// Columns `K_p` (outer index `p`) with horizontal chain maps `K_p -> K_{p+1}`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub p_lo: i64,
    pub columns: Vec<Complex>,
    /// `horizontal[i] : columns[i] -> columns[i+1]`
    pub horizontal: Vec<ChainMap>,
}

/// Direct-sum layout of `Tot^n`: the `(p, q)` blocks in order with offsets.
pub fn tot_layout(dc: &DoubleComplex, n: i64) -> Vec<(i64, i64, usize, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for (i, col) in dc.columns.iter().enumerate() {
        let p = dc.p_lo + i as i64;
        let q = n - p;
        let d = col.dim(q);
        if d > 0 {
            out.push((p, q, off, d));
            off += d;
        }
    }
    out
}

/// `Tot^n = ⊕_{p+q=n} K_p^q` with `D = d_h + (-1)^p d_v`.
pub fn total_complex(dc: &DoubleComplex) -> Result<Complex> {
    if dc.columns.is_empty() {
        return Ok(Complex::zero());
    }
    if dc.horizontal.len() + 1 != dc.columns.len() {
        return Err(Error::Precondition(
            "need one horizontal map between consecutive columns".into(),
        ));
    }
    for (i, h) in dc.horizontal.iter().enumerate() {
        let comp = if i + 1 < dc.horizontal.len() {
            let next = &dc.horizontal[i + 1];
            let lo = h.source.lo().min(next.target.lo());
            let hi = h.source.hi().max(next.target.hi());
            (lo..=hi).all(|q| next.at(q).mul(&h.at(q)).is_zero())
        } else {
            true
        };
        if !comp {
            return Err(Error::Precondition(
                "horizontal maps do not square to zero".into(),
            ));
        }
    }
    let p_hi = dc.p_lo + dc.columns.len() as i64 - 1;
    let q_lo = dc.columns.iter().map(Complex::lo).min().unwrap();
    let q_hi = dc.columns.iter().map(Complex::hi).max().unwrap();
    let lo = dc.p_lo + q_lo;
    let hi = p_hi + q_hi;
    let dims: Vec<usize> = (lo..=hi)
        .map(|n| tot_layout(dc, n).iter().map(|b| b.3).sum())
        .collect();
    let mut d = Vec::new();
    for n in lo..hi {
        let src = tot_layout(dc, n);
        let tgt = tot_layout(dc, n + 1);
        let mut m = Matrix::zeros(dims[(n + 1 - lo) as usize], dims[(n - lo) as usize]);
        for &(p, q, so, sd) in &src {
            let i = (p - dc.p_lo) as usize;
            let sign = sign_q(p);
            for &(tp, tq, to, _) in &tgt {
                let block = if tp == p && tq == q + 1 {
                    dc.columns[i].diff(q).scale(&sign)
                } else if tp == p + 1 && tq == q {
                    dc.horizontal[i].at(q)
                } else {
                    continue;
                };
                for a in 0..block.rows() {
                    for b in 0..sd {
                        let x = block.get(a, b);
                        if !x.is_zero() {
                            m.set(to + a, so + b, x.clone());
                        }
                    }
                }
            }
        }
        d.push(m);
    }
    Complex::new(lo, dims, d).map_err(|e| Error::InvariantViolation(format!("total complex: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn homotopies() {
        let k = Complex::new(0, vec![1, 1], vec![QMatrix::from_i64(&[&[1]])]).unwrap();
        let id = ChainMap::identity(&k);
        let z = ChainMap::zero(&k, &k);
        let h = homotopy_classes(&id, &z).unwrap();
        let h1 = h.iter().find(|(n, _)| *n == 1).unwrap();
        assert_eq!(h1.1.get(0, 0), &q(1));
        let p = Complex::concentrated(0, 1);
        assert!(homotopy_classes(&ChainMap::identity(&p), &ChainMap::zero(&p, &p)).is_none());
        let hh = homotopy_classes(&id, &id).unwrap();
        assert!(hh.iter().all(|(_, m)| m.is_zero()));
    }

    #[test]
    fn single_column_total() {
        let k = Complex::new(0, vec![2, 1], vec![QMatrix::from_i64(&[&[1, 1]])]).unwrap();
        let dc = DoubleComplex {
            p_lo: 0,
            columns: vec![k.clone()],
            horizontal: vec![],
        };
        assert_eq!(total_complex(&dc).unwrap(), k);
    }
}
