//! Finitely presented ℚ-linear categories and their Karoubi envelopes.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::algebra::{q, QMatrix, Subspace, Q};
use crate::error::{Error, Result};

/// A ℚ-linear category with finitely many objects and finite-dimensional
/// Hom spaces, presented by basis labels and bilinear composition tables.
#[derive(Clone, Debug)]
pub struct FiniteAdditiveCategory {
    objects: Vec<String>,
    basis: Vec<Vec<Vec<String>>>,
    // (a, b, c) -> table[g][f] = g∘f in Hom(a, c) for basis g of Hom(b, c), f of Hom(a, b)
    comp: HashMap<(usize, usize, usize), Vec<Vec<Vec<Q>>>>,
    ids: Vec<Vec<Q>>,
}

/// A morphism given by its coordinates in the chosen Hom basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mor {
    pub src: usize,
    pub tgt: usize,
    pub coeffs: Vec<Q>,
}

impl FiniteAdditiveCategory {
    /// `basis[a][b]` labels a basis of `Hom(a, b)`; `comp(a, b, c, g, f)` returns
    /// the coordinates of `g∘f`. Identity and associativity laws are verified
    /// on all basis triples.
    pub fn new(
        objects: Vec<String>,
        basis: Vec<Vec<Vec<String>>>,
        ids: Vec<Vec<Q>>,
        comp: impl Fn(usize, usize, usize, usize, usize) -> Vec<Q>,
    ) -> Result<Self> {
        let n = objects.len();
        if basis.len() != n || basis.iter().any(|r| r.len() != n) || ids.len() != n {
            return Err(Error::Precondition(
                "Hom table does not match the object list".into(),
            ));
        }
        let mut table = HashMap::new();
        for a in 0..n {
            if ids[a].len() != basis[a][a].len() {
                return Err(Error::Precondition(format!(
                    "identity of {} has the wrong length",
                    objects[a]
                )));
            }
            for b in 0..n {
                for c in 0..n {
                    let (db, dc) = (basis[a][b].len(), basis[b][c].len());
                    let dac = basis[a][c].len();
                    let mut t = Vec::with_capacity(dc);
                    for g in 0..dc {
                        let mut row = Vec::with_capacity(db);
                        for f in 0..db {
                            let v = comp(a, b, c, g, f);
                            if v.len() != dac {
                                return Err(Error::Precondition(format!(
                                    "composite {}∘{} has the wrong length",
                                    basis[b][c][g], basis[a][b][f]
                                )));
                            }
                            row.push(v);
                        }
                        t.push(row);
                    }
                    table.insert((a, b, c), t);
                }
            }
        }
        let cat = FiniteAdditiveCategory {
            objects,
            basis,
            comp: table,
            ids,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<()> {
        let n = self.objects.len();
        for a in 0..n {
            for b in 0..n {
                for f in 0..self.dim(a, b) {
                    let fm = self.basis_mor(a, b, f);
                    let l = self.compose(&self.identity(b), &fm)?;
                    let r = self.compose(&fm, &self.identity(a))?;
                    if l != fm || r != fm {
                        return Err(Error::Precondition(format!(
                            "identity law fails for {}",
                            self.basis[a][b][f]
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for f in 0..self.dim(a, b) {
                            for g in 0..self.dim(b, c) {
                                for h in 0..self.dim(c, d) {
                                    let (fm, gm, hm) = (
                                        self.basis_mor(a, b, f),
                                        self.basis_mor(b, c, g),
                                        self.basis_mor(c, d, h),
                                    );
                                    let x = self.compose(&hm, &self.compose(&gm, &fm)?)?;
                                    let y = self.compose(&self.compose(&hm, &gm)?, &fm)?;
                                    if x != y {
                                        return Err(Error::Precondition(format!(
                                            "associativity fails for ({}, {}, {})",
                                            self.basis[c][d][h],
                                            self.basis[b][c][g],
                                            self.basis[a][b][f]
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn dim(&self, a: usize, b: usize) -> usize {
        self.basis[a][b].len()
    }

    pub fn basis_labels(&self, a: usize, b: usize) -> &[String] {
        &self.basis[a][b]
    }

    pub fn basis_mor(&self, a: usize, b: usize, i: usize) -> Mor {
        let mut coeffs = vec![Q::zero(); self.dim(a, b)];
        coeffs[i] = Q::one();
        Mor {
            src: a,
            tgt: b,
            coeffs,
        }
    }

    pub fn zero(&self, a: usize, b: usize) -> Mor {
        Mor {
            src: a,
            tgt: b,
            coeffs: vec![Q::zero(); self.dim(a, b)],
        }
    }

    pub fn identity(&self, a: usize) -> Mor {
        Mor {
            src: a,
            tgt: a,
            coeffs: self.ids[a].clone(),
        }
    }

    pub fn mor(&self, a: usize, b: usize, coeffs: Vec<Q>) -> Result<Mor> {
        if coeffs.len() != self.dim(a, b) {
            return Err(Error::Precondition(format!(
                "expected {} coefficients for Hom({}, {})",
                self.dim(a, b),
                self.objects[a],
                self.objects[b]
            )));
        }
        Ok(Mor {
            src: a,
            tgt: b,
            coeffs,
        })
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        if f.tgt != g.src {
            return Err(Error::CompositionMismatch(format!(
                "{} ≠ {}",
                self.objects[f.tgt], self.objects[g.src]
            )));
        }
        let (a, b, c) = (f.src, f.tgt, g.tgt);
        let t = &self.comp[&(a, b, c)];
        let mut out = vec![Q::zero(); self.dim(a, c)];
        for (i, gc) in g.coeffs.iter().enumerate() {
            if gc.is_zero() {
                continue;
            }
            for (j, fc) in f.coeffs.iter().enumerate() {
                if fc.is_zero() {
                    continue;
                }
                let k = gc * fc;
                for (o, v) in out.iter_mut().zip(&t[i][j]) {
                    *o += &k * v;
                }
            }
        }
        Ok(Mor {
            src: a,
            tgt: c,
            coeffs: out,
        })
    }

    pub fn add(&self, f: &Mor, g: &Mor) -> Mor {
        assert_eq!((f.src, f.tgt), (g.src, g.tgt));
        Mor {
            src: f.src,
            tgt: f.tgt,
            coeffs: f.coeffs.iter().zip(&g.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, f: &Mor, g: &Mor) -> Mor {
        assert_eq!((f.src, f.tgt), (g.src, g.tgt));
        Mor {
            src: f.src,
            tgt: f.tgt,
            coeffs: f.coeffs.iter().zip(&g.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn is_idempotent(&self, e: &Mor) -> bool {
        e.src == e.tgt && self.compose(e, e).map(|ee| ee == *e).unwrap_or(false)
    }

    /// Matrix of `φ ↦ post ∘ φ ∘ pre` on `Hom(pre.tgt, post.src)`, columns indexed by basis.
    fn sandwich(&self, post: &Mor, pre: &Mor) -> QMatrix {
        let (a, b) = (pre.tgt, post.src);
        let cols: Vec<Vec<Q>> = (0..self.dim(a, b))
            .map(|i| {
                let phi = self.basis_mor(a, b, i);
                self.compose(post, &self.compose(&phi, pre).expect("types match"))
                    .expect("types match")
                    .coeffs
            })
            .collect();
        QMatrix::from_cols(self.dim(pre.src, post.tgt), &cols)
    }

    /// All idempotents of `End(a)` whose coordinates lie in `[-bound, bound]`.
    pub fn idempotents_in_grid(&self, a: usize, bound: i64) -> Vec<Mor> {
        let d = self.dim(a, a);
        let vals: Vec<Q> = (-bound..=bound).map(q).collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; d];
        loop {
            let m = Mor {
                src: a,
                tgt: a,
                coeffs: idx.iter().map(|&i| vals[i].clone()).collect(),
            };
            if self.is_idempotent(&m) {
                out.push(m);
            }
            let mut k = 0;
            loop {
                if k == d {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < vals.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// Objects `ℚ^r` for the given ranks; `Hom(ℚ^m, ℚ^n)` has the matrix units
/// `E_ij` (an `n × m` matrix) as basis, stored at index `i*m + j`.
pub fn matrix_category(ranks: &[usize]) -> FiniteAdditiveCategory {
    let n = ranks.len();
    let objects = ranks.iter().map(|r| format!("Q^{r}")).collect();
    let basis = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let (m, k) = (ranks[a], ranks[b]);
                    (0..k)
                        .flat_map(|i| (0..m).map(move |j| format!("E{}{}", i + 1, j + 1)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let ids = ranks
        .iter()
        .map(|&r| {
            (0..r * r)
                .map(|k| if k / r == k % r { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    FiniteAdditiveCategory::new(objects, basis, ids, |a, b, c, g, f| {
        let (m, nb) = (ranks[a], ranks[b]);
        let (gi, gj) = (g / nb, g % nb);
        let (fi, fj) = (f / m, f % m);
        let mut v = vec![Q::zero(); ranks[c] * m];
        if gj == fi {
            v[gi * m + fj] = Q::one();
        }
        v
    })
    .expect("matrix units satisfy the category laws")
}

/// Read a morphism of the matrix category as a matrix.
pub fn mor_to_matrix(ranks: &[usize], f: &Mor) -> QMatrix {
    let (m, n) = (ranks[f.src], ranks[f.tgt]);
    let rows = (0..n)
        .map(|i| f.coeffs[i * m..(i + 1) * m].to_vec())
        .collect();
    QMatrix::from_rows(rows)
}

pub fn matrix_to_mor(src: usize, tgt: usize, m: &QMatrix) -> Mor {
    let coeffs = (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect();
    Mor { src, tgt, coeffs }
}

/// Split an idempotent of the matrix category through an existing object:
/// returns `(b, s, r)` with `s: b -> a`, `r: a -> b`, `r∘s = id_b`, `s∘r = e`.
pub fn split_in_matrix_category(
    c: &FiniteAdditiveCategory,
    ranks: &[usize],
    e: &Mor,
) -> Result<(usize, Mor, Mor)> {
    if !c.is_idempotent(e) {
        return Err(Error::Precondition("not an idempotent".into()));
    }
    let em = mor_to_matrix(ranks, e);
    let img = em.image();
    let k = img.len();
    let b = ranks
        .iter()
        .position(|&r| r == k)
        .ok_or_else(|| Error::Precondition(format!("no object of rank {k} to split through")))?;
    let n = ranks[e.src];
    let s = QMatrix::from_cols(n, &img);
    // coordinates of each column of e in the image basis
    let mut rcols = Vec::with_capacity(n);
    for j in 0..n {
        let coords = s
            .solve(&em.col(j))
            .ok_or_else(|| Error::InvariantViolation("column outside the image".into()))?;
        rcols.push(coords);
    }
    let r = QMatrix::from_cols(k, &rcols);
    let sm = matrix_to_mor(b, e.src, &s);
    let rm = matrix_to_mor(e.src, b, &r);
    if c.compose(&rm, &sm)? != c.identity(b) || c.compose(&sm, &rm)? != *e {
        return Err(Error::InvariantViolation(
            "splitting identities fail".into(),
        ));
    }
    Ok((b, sm, rm))
}

/// An object `(A, e)` of the Karoubi envelope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaroubiObject {
    pub base: usize,
    pub idempotent: Vec<Q>,
}

/// The full subcategory of the Karoubi envelope on `(A, id_A)` for every `A`
/// and the requested extra pairs.
#[derive(Clone, Debug)]
pub struct KaroubiEnvelope {
    base: FiniteAdditiveCategory,
    objects: Vec<KaroubiObject>,
    // basis of Hom((A,e),(B,f)) as ambient vectors in Hom(A,B)
    spaces: Vec<Vec<Subspace>>,
    category: FiniteAdditiveCategory,
}

/// Section/retraction pair `s: (A,p) -> X`, `r: X -> (A,p)` with `r∘s = id`
/// and `s∘r = p`, all as ambient morphisms of the base category.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub image: KaroubiObject,
    pub section: Mor,
    pub retraction: Mor,
}

/// `(A,e) ⊕ (A,1-e) ≅ A` with inclusions and projections.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub first: KaroubiObject,
    pub second: KaroubiObject,
    pub inclusions: [Mor; 2],
    pub projections: [Mor; 2],
}

pub fn karoubi_envelope(
    c: &FiniteAdditiveCategory,
    extra: &[(usize, Vec<Q>)],
) -> Result<KaroubiEnvelope> {
    let mut objects: Vec<KaroubiObject> = (0..c.objects.len())
        .map(|a| KaroubiObject {
            base: a,
            idempotent: c.ids[a].clone(),
        })
        .collect();
    for (a, e) in extra {
        let m = c.mor(*a, *a, e.clone())?;
        if !c.is_idempotent(&m) {
            return Err(Error::Precondition(format!(
                "morphism on {} is not idempotent",
                c.objects[*a]
            )));
        }
        let ko = KaroubiObject {
            base: *a,
            idempotent: e.clone(),
        };
        if !objects.contains(&ko) {
            objects.push(ko);
        }
    }
    let n = objects.len();
    let mut spaces = vec![Vec::with_capacity(n); n];
    for (i, x) in objects.iter().enumerate() {
        for y in &objects {
            let pre = Mor {
                src: x.base,
                tgt: x.base,
                coeffs: x.idempotent.clone(),
            };
            let post = Mor {
                src: y.base,
                tgt: y.base,
                coeffs: y.idempotent.clone(),
            };
            let m = c.sandwich(&post, &pre);
            spaces[i].push(Subspace::span(c.dim(x.base, y.base), &m.image()));
        }
    }
    let names: Vec<String> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| {
            if i < c.objects.len() {
                c.objects[o.base].clone()
            } else {
                format!("({},e{})", c.objects[o.base], i)
            }
        })
        .collect();
    let basis = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..spaces[i][j].dim())
                        .map(|k| format!("{}->{}#{}", names[i], names[j], k))
                        .collect()
                })
                .collect()
        })
        .collect();
    let ids = (0..n)
        .map(|i| {
            spaces[i][i]
                .coordinates(&objects[i].idempotent)
                .ok_or_else(|| {
                    Error::InvariantViolation("idempotent outside its own endomorphisms".into())
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let category = FiniteAdditiveCategory::new(names, basis, ids, |a, b, cc, g, f| {
        let gm = Mor {
            src: objects[b].base,
            tgt: objects[cc].base,
            coeffs: spaces[b][cc].basis()[g].clone(),
        };
        let fm = Mor {
            src: objects[a].base,
            tgt: objects[b].base,
            coeffs: spaces[a][b].basis()[f].clone(),
        };
        let h = c.compose(&gm, &fm).expect("types match");
        spaces[a][cc]
            .coordinates(&h.coeffs)
            .expect("composite stays in the sandwiched space")
    })?;
    Ok(KaroubiEnvelope {
        base: c.clone(),
        objects,
        spaces,
        category,
    })
}

impl KaroubiEnvelope {
    pub fn category(&self) -> &FiniteAdditiveCategory {
        &self.category
    }

    pub fn base(&self) -> &FiniteAdditiveCategory {
        &self.base
    }

    pub fn objects(&self) -> &[KaroubiObject] {
        &self.objects
    }

    /// Ambient morphism in the base category for a morphism of the envelope.
    pub fn to_base(&self, f: &Mor) -> Mor {
        let sp = &self.spaces[f.src][f.tgt];
        let mut coeffs = vec![Q::zero(); sp.ambient()];
        for (c, v) in f.coeffs.iter().zip(sp.basis()) {
            for (o, x) in coeffs.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        Mor {
            src: self.objects[f.src].base,
            tgt: self.objects[f.tgt].base,
            coeffs,
        }
    }

    /// Split an idempotent `p` of `End(X)` in the envelope: the image object is
    /// `(A, p)` and both section and retraction are `p` itself.
    pub fn split(&self, x: usize, p: &Mor) -> Result<Splitting> {
        if p.src != x || p.tgt != x || !self.category.is_idempotent(p) {
            return Err(Error::Precondition("not an idempotent endomorphism".into()));
        }
        let amb = self.to_base(p);
        let b = &self.base;
        let image = KaroubiObject {
            base: self.objects[x].base,
            idempotent: amb.coeffs.clone(),
        };
        let section = amb.clone();
        let retraction = amb.clone();
        let e = Mor {
            src: amb.src,
            tgt: amb.tgt,
            coeffs: self.objects[x].idempotent.clone(),
        };
        // r∘s is the identity p of (A,p); s∘r = p as an endomorphism of (A,e);
        // s and r are morphisms: s = e∘s∘p, r = p∘r∘e
        let rs = b.compose(&retraction, &section)?;
        let s_ok = b.compose(&e, &b.compose(&section, &amb)?)? == section;
        let r_ok = b.compose(&amb, &b.compose(&retraction, &e)?)? == retraction;
        if rs != amb || !s_ok || !r_ok {
            return Err(Error::InvariantViolation(
                "splitting identities fail".into(),
            ));
        }
        Ok(Splitting {
            image,
            section,
            retraction,
        })
    }

    /// Certificate that `A ≅ (A,e) ⊕ (A,1-e)` for an idempotent `e` on `A`.
    pub fn biproduct(&self, a: usize, e: &[Q]) -> Result<Biproduct> {
        let b = &self.base;
        let em = b.mor(a, a, e.to_vec())?;
        if !b.is_idempotent(&em) {
            return Err(Error::Precondition("not an idempotent".into()));
        }
        let id = b.identity(a);
        let fm = b.sub(&id, &em);
        let zero = b.zero(a, a);
        let checks = [
            b.compose(&em, &em)? == em,
            b.compose(&fm, &fm)? == fm,
            b.compose(&em, &fm)? == zero,
            b.compose(&fm, &em)? == zero,
            b.add(&b.compose(&em, &em)?, &b.compose(&fm, &fm)?) == id,
        ];
        if checks.iter().any(|c| !c) {
            return Err(Error::InvariantViolation(
                "biproduct identities fail".into(),
            ));
        }
        Ok(Biproduct {
            first: KaroubiObject {
                base: a,
                idempotent: em.coeffs.clone(),
            },
            second: KaroubiObject {
                base: a,
                idempotent: fm.coeffs.clone(),
            },
            inclusions: [em.clone(), fm.clone()],
            projections: [em, fm],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_idempotent_splits_through_rank_one() {
        let ranks = [1, 2];
        let c = matrix_category(&ranks);
        let e = matrix_to_mor(1, 1, &QMatrix::from_i64(&[&[1, 0], &[0, 0]]));
        let (b, s, r) = split_in_matrix_category(&c, &ranks, &e).unwrap();
        assert_eq!(b, 0);
        assert_eq!(mor_to_matrix(&ranks, &s), QMatrix::from_i64(&[&[1], &[0]]));
        assert_eq!(mor_to_matrix(&ranks, &r), QMatrix::from_i64(&[&[1, 0]]));
    }

    #[test]
    fn identity_idempotent_gives_a_copy() {
        let c = matrix_category(&[2]);
        let k = karoubi_envelope(&c, &[(0, c.identity(0).coeffs)]).unwrap();
        assert_eq!(k.objects().len(), 1);
        assert_eq!(k.category().dim(0, 0), 4);
    }

    #[test]
    fn complementary_idempotents() {
        let c = matrix_category(&[2]);
        let e = vec![q(1), q(1), q(0), q(0)];
        let k = karoubi_envelope(&c, &[(0, e.clone())]).unwrap();
        assert_eq!(k.category().dim(1, 1), 1);
        assert_eq!(k.category().dim(0, 1), 2);
        k.biproduct(0, &e).unwrap();
    }
}
