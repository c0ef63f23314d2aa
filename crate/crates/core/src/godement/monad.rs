//! Monads, their laws, and the cosimplicial bar construction `B^•(M, C)`.

use super::presheaf::{Presheaf, PresheafMor};
use super::site::FiniteSite;
use crate::algebra::{q, QMatrix};
use crate::error::{Error, Result};
use crate::homological::Complex;

/// An endofunctor with unit `η : Id -> M` and multiplication `μ : MM -> M`.
pub trait Monad {
    type Obj: Clone;
    type Mor: Clone;

    fn apply(&self, c: &Self::Obj) -> Self::Obj;
    fn apply_mor(&self, f: &Self::Mor) -> Self::Mor;
    /// `η_C : C -> MC`
    fn unit(&self, c: &Self::Obj) -> Self::Mor;
    /// `μ_C : MMC -> MC`
    fn mult(&self, c: &Self::Obj) -> Self::Mor;
    fn identity(&self, c: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn mor_eq(&self, f: &Self::Mor, g: &Self::Mor) -> bool;
}

fn power<M: Monad>(m: &M, c: &M::Obj, k: usize) -> M::Obj {
    (0..k).fold(c.clone(), |x, _| m.apply(&x))
}

fn apply_mor_k<M: Monad>(m: &M, f: &M::Mor, k: usize) -> M::Mor {
    (0..k).fold(f.clone(), |x, _| m.apply_mor(&x))
}

/// `μ∘ηM = id = μ∘Mη` and `μ∘Mμ = μ∘μM` on the object `c`.
pub fn check_monad_laws<M: Monad>(m: &M, c: &M::Obj) -> Result<()> {
    let mc = m.apply(c);
    let mu = m.mult(c);
    let id = m.identity(&mc);
    if !m.mor_eq(&m.compose(&mu, &m.unit(&mc)), &id) {
        return Err(Error::Precondition("left unit law μ∘ηM = id fails".into()));
    }
    if !m.mor_eq(&m.compose(&mu, &m.apply_mor(&m.unit(c))), &id) {
        return Err(Error::Precondition("right unit law μ∘Mη = id fails".into()));
    }
    let lhs = m.compose(&mu, &m.apply_mor(&mu));
    let rhs = m.compose(&mu, &m.mult(&mc));
    if !m.mor_eq(&lhs, &rhs) {
        return Err(Error::Precondition(
            "associativity μ∘Mμ = μ∘μM fails".into(),
        ));
    }
    Ok(())
}

/// `X^n = M^{n+1} C` for `n = 0..=levels`, with
/// `δ^n_i = M^i η M^{n+1-i} : X^n -> X^{n+1}` (`n < levels`, `i ≤ n+1`),
/// `σ^n_i = M^i μ M^{n-i} : X^{n+1} -> X^n` (`n < levels`, `i ≤ n`)
/// and the augmentation `η_C : C -> X^0`.
pub struct Cosimplicial<M: Monad> {
    pub base: M::Obj,
    pub objects: Vec<M::Obj>,
    pub cofaces: Vec<Vec<M::Mor>>,
    pub codegeneracies: Vec<Vec<M::Mor>>,
    pub augmentation: M::Mor,
}

pub fn bar_construction<M: Monad>(m: &M, c: &M::Obj, levels: usize) -> Result<Cosimplicial<M>> {
    check_monad_laws(m, c)?;
    let powers: Vec<M::Obj> = (0..=levels + 1).map(|k| power(m, c, k)).collect();
    let objects = powers[1..=levels + 1].to_vec();
    let mut cofaces = Vec::new();
    let mut codegeneracies = Vec::new();
    for n in 0..levels {
        cofaces.push(
            (0..=n + 1)
                .map(|i| apply_mor_k(m, &m.unit(&powers[n + 1 - i]), i))
                .collect(),
        );
        codegeneracies.push(
            (0..=n)
                .map(|i| apply_mor_k(m, &m.mult(&powers[n - i]), i))
                .collect(),
        );
    }
    Ok(Cosimplicial {
        base: c.clone(),
        objects: objects[..=levels].to_vec(),
        cofaces,
        codegeneracies,
        augmentation: m.unit(c),
    })
}

/// Verify the cosimplicial identities on every level present.
pub fn verify_cosimplicial<M: Monad>(m: &M, x: &Cosimplicial<M>) -> Result<()> {
    let levels = x.cofaces.len();
    let d = |n: usize, i: usize| &x.cofaces[n][i];
    let s = |n: usize, i: usize| &x.codegeneracies[n][i];
    let fail = |what: String| {
        Err(Error::InvariantViolation(format!(
            "cosimplicial identity fails: {what}"
        )))
    };
    // δ_j δ_i = δ_i δ_{j-1} for i < j, on X^n -> X^{n+2}
    for n in 0..levels.saturating_sub(1) {
        for j in 0..=n + 2 {
            for i in 0..j {
                if !m.mor_eq(
                    &m.compose(d(n + 1, j), d(n, i)),
                    &m.compose(d(n + 1, i), d(n, j - 1)),
                ) {
                    return fail(format!("δ{j}δ{i} at level {n}"));
                }
            }
        }
    }
    // σ_j σ_i = σ_i σ_{j+1} for i ≤ j, on X^{n+2} -> X^n
    for n in 0..levels.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                if !m.mor_eq(
                    &m.compose(s(n, j), s(n + 1, i)),
                    &m.compose(s(n, i), s(n + 1, j + 1)),
                ) {
                    return fail(format!("σ{j}σ{i} at level {n}"));
                }
            }
        }
    }
    // σ_j δ_i on X^n -> X^n
    for n in 0..levels {
        let id = m.identity(&x.objects[n]);
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = m.compose(s(n, j), d(n, i));
                let ok = if i == j || i == j + 1 {
                    m.mor_eq(&lhs, &id)
                } else if n == 0 {
                    unreachable!("level 0 only has i ∈ {{j, j+1}}")
                } else if i < j {
                    m.mor_eq(&lhs, &m.compose(d(n - 1, i), s(n - 1, j - 1)))
                } else {
                    m.mor_eq(&lhs, &m.compose(d(n - 1, i - 1), s(n - 1, j)))
                };
                if !ok {
                    return fail(format!("σ{j}δ{i} at level {n}"));
                }
            }
        }
    }
    Ok(())
}

/// Alternating-sum cochain complex of `F(X^•)` for a linear functor `F`,
/// in degrees `0..=levels`, optionally augmented by `F(C)` in degree -1.
pub fn alternating_complex<M: Monad>(
    x: &Cosimplicial<M>,
    dim: impl Fn(&M::Obj) -> usize,
    mat: impl Fn(&M::Mor) -> QMatrix,
    augmented: bool,
) -> Result<Complex> {
    let mut dims: Vec<usize> = x.objects.iter().map(&dim).collect();
    let mut diffs: Vec<QMatrix> = x
        .cofaces
        .iter()
        .enumerate()
        .map(|(n, faces)| {
            let mut acc = QMatrix::zeros(dims[n + 1], dims[n]);
            for (i, f) in faces.iter().enumerate() {
                let m = mat(f);
                acc = if i % 2 == 0 { acc.add(&m) } else { acc.sub(&m) };
            }
            acc
        })
        .collect();
    let lo = if augmented {
        dims.insert(0, dim(&x.base));
        diffs.insert(0, mat(&x.augmentation));
        -1
    } else {
        0
    };
    Complex::new(lo, dims, diffs)
}

/// `M = Id` on finite-dimensional vector spaces.
pub struct IdentityMonad;

impl Monad for IdentityMonad {
    type Obj = usize;
    type Mor = QMatrix;

    fn apply(&self, c: &usize) -> usize {
        *c
    }
    fn apply_mor(&self, f: &QMatrix) -> QMatrix {
        f.clone()
    }
    fn unit(&self, c: &usize) -> QMatrix {
        QMatrix::identity(*c)
    }
    fn mult(&self, c: &usize) -> QMatrix {
        QMatrix::identity(*c)
    }
    fn identity(&self, c: &usize) -> QMatrix {
        QMatrix::identity(*c)
    }
    fn compose(&self, g: &QMatrix, f: &QMatrix) -> QMatrix {
        g.mul(f)
    }
    fn mor_eq(&self, f: &QMatrix, g: &QMatrix) -> bool {
        f == g
    }
}

/// `(GF)(U) = ∏_{x∈U} F_x` with projections as restrictions.
pub struct GodementMonad<'a> {
    site: &'a FiniteSite,
}

pub fn godement_monad(site: &FiniteSite) -> GodementMonad<'_> {
    GodementMonad { site }
}

impl GodementMonad<'_> {
    pub fn site(&self) -> &FiniteSite {
        self.site
    }

    /// Offsets of the `F_x` blocks in `GF(U)`, points of `U` in increasing order.
    fn layout(&self, f: &Presheaf, u: usize) -> Vec<(usize, usize, usize)> {
        let mut off = 0;
        self.site
            .open(u)
            .iter()
            .map(|&x| {
                let d = f.dim(self.site.minimal_open(x));
                let e = (x, off, d);
                off += d;
                e
            })
            .collect()
    }
}

fn paste(m: &mut QMatrix, r0: usize, c0: usize, b: &QMatrix) {
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let v = b.get(i, j);
            if !num_traits::Zero::is_zero(v) {
                m.set(r0 + i, c0 + j, v.clone());
            }
        }
    }
}

impl Monad for GodementMonad<'_> {
    type Obj = Presheaf;
    type Mor = PresheafMor;

    fn apply(&self, f: &Presheaf) -> Presheaf {
        let blocks = (0..self.site.num_opens())
            .map(|u| self.layout(f, u))
            .collect();
        Presheaf::products(self.site, blocks)
    }

    fn apply_mor(&self, phi: &PresheafMor) -> PresheafMor {
        let s = self.site;
        let maps = (0..s.num_opens())
            .map(|u| {
                let blocks: Vec<&QMatrix> = s
                    .open(u)
                    .iter()
                    .map(|&x| &phi.maps[s.minimal_open(x)])
                    .collect();
                let (r, c) = blocks
                    .iter()
                    .fold((0, 0), |(r, c), b| (r + b.rows(), c + b.cols()));
                let mut m = QMatrix::zeros(r, c);
                let (mut r0, mut c0) = (0, 0);
                for b in blocks {
                    paste(&mut m, r0, c0, b);
                    r0 += b.rows();
                    c0 += b.cols();
                }
                m
            })
            .collect();
        PresheafMor { maps }
    }

    /// Germs: `s ↦ (s|_{U_x})_{x∈U}`.
    fn unit(&self, f: &Presheaf) -> PresheafMor {
        let s = self.site;
        let maps = (0..s.num_opens())
            .map(|u| {
                let lay = self.layout(f, u);
                let rows = lay.iter().map(|b| b.2).sum();
                let mut m = QMatrix::zeros(rows, f.dim(u));
                for &(x, off, _) in &lay {
                    paste(&mut m, off, 0, f.restriction(u, s.minimal_open(x)));
                }
                m
            })
            .collect();
        PresheafMor { maps }
    }

    /// Keep the diagonal components `(x, x)` of `∏_{x∈U} ∏_{y∈U_x} F_y`.
    fn mult(&self, f: &Presheaf) -> PresheafMor {
        let s = self.site;
        let gf = self.apply(f);
        let maps = (0..s.num_opens())
            .map(|u| {
                let outer = self.layout(&gf, u);
                let inner = self.layout(f, u);
                let mut m = QMatrix::zeros(gf.dim(u), outer.iter().map(|b| b.2).sum());
                for (&(x, off_out, _), &(_, off_in, d)) in outer.iter().zip(&inner) {
                    let ux = s.minimal_open(x);
                    let diag = self.layout(f, ux).into_iter().find(|b| b.0 == x).unwrap();
                    for t in 0..d {
                        m.set(off_in + t, off_out + diag.1 + t, q(1));
                    }
                }
                m
            })
            .collect();
        PresheafMor { maps }
    }

    fn identity(&self, f: &Presheaf) -> PresheafMor {
        f.identity()
    }

    fn compose(&self, g: &PresheafMor, f: &PresheafMor) -> PresheafMor {
        g.compose(f)
    }

    fn mor_eq(&self, f: &PresheafMor, g: &PresheafMor) -> bool {
        f == g
    }
}
