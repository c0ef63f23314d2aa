//! Subspaces of `ℚ^n` stored as row-reduced bases.

use num_traits::Zero;

use super::matrix::{Matrix, QMatrix};
use super::rational::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, 0..ambient)
    }

    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        let vs: Vec<Vec<Q>> = vectors
            .iter()
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        if vs.is_empty() {
            return Self::zero(ambient);
        }
        for v in &vs {
            assert_eq!(
                v.len(),
                ambient,
                "vector length does not match ambient dimension"
            );
        }
        let (r, p) = Matrix::from_rows(vs).rref();
        Subspace {
            ambient,
            basis: (0..p.len()).map(|i| r.row(i).to_vec()).collect(),
        }
    }

    /// Coordinate subspace spanned by standard basis vectors `idx`.
    pub fn coordinate(ambient: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let vs: Vec<Vec<Q>> = idx
            .into_iter()
            .map(|i| {
                let mut v = vec![Q::zero(); ambient];
                v[i] = num_traits::One::one();
                v
            })
            .collect();
        Self::span(ambient, &vs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Subspace::span(self.ambient, &vs).dim() == self.dim()
    }

    pub fn contains_space(&self, o: &Subspace) -> bool {
        self.sum(o).dim() == self.dim()
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        assert_eq!(self.ambient, o.ambient);
        let mut vs = self.basis.clone();
        vs.extend(o.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        assert_eq!(self.ambient, o.ambient);
        Subspace::span(
            self.ambient,
            &super::matrix::intersect(self.ambient, &self.basis, &o.basis),
        )
    }

    /// Image under `m` (an `rows × ambient` matrix).
    pub fn image(&self, m: &QMatrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let vs: Vec<Vec<Q>> = self.basis.iter().map(|v| m.apply(v)).collect();
        Subspace::span(m.rows(), &vs)
    }

    /// `{x in self : m x in target}`.
    pub fn preimage_within(&self, m: &QMatrix, target: &Subspace) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        assert_eq!(m.rows(), target.ambient);
        if self.basis.is_empty() {
            return self.clone();
        }
        // coefficients c with m (sum c_i b_i) in target: solve m B c - T y = 0
        let b = Matrix::from_cols(self.ambient, &self.basis);
        let mb = m.mul(&b);
        let sys = if target.basis.is_empty() {
            mb
        } else {
            let t = Matrix::from_cols(target.ambient, &target.basis);
            mb.hstack(&t.scale(&-<Q as num_traits::One>::one()))
        };
        let k = sys.kernel();
        let vs: Vec<Vec<Q>> = k.iter().map(|c| b.apply(&c[..self.basis.len()])).collect();
        Subspace::span(self.ambient, &vs)
    }

    /// Kernel of `m` restricted to `self`.
    pub fn kernel_within(&self, m: &QMatrix) -> Subspace {
        self.preimage_within(m, &Subspace::zero(m.rows()))
    }

    /// Vectors completing a basis of `sub` (assumed contained in `self`) to one of `self`.
    pub fn complement_of(&self, sub: &Subspace) -> Vec<Vec<Q>> {
        super::matrix::complement(self.ambient, &sub.basis, &self.basis)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.basis.is_empty() {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        Matrix::from_cols(self.ambient, &self.basis).solve(v)
    }
}
