//! Finite categories, right multiplicative systems and localization by roofs.
//!
//! A morphism `X -> Y` of `C[S^{-1}]` is a roof `X --f--> Y' <--s-- Y` with
//! `s ∈ S`; `Hom(X, Y)` is the colimit of `Hom(X, Y')` over the category `S^Y`
//! of arrows `s : Y -> Y'` in `S`.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    comp: HashMap<(usize, usize), usize>,
    ids: Vec<usize>,
}

impl FiniteCategory {
    /// Identities `id_X` are added automatically; `comp` lists `(g, f, g∘f)`
    /// by name for every composable pair of non-identity arrows.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<(String, String, String)>,
        comp: Vec<(String, String, String)>,
    ) -> Result<Self> {
        let obj = |n: &str| {
            objects
                .iter()
                .position(|o| o == n)
                .ok_or_else(|| Error::Precondition(format!("unknown object {n}")))
        };
        let mut all = Vec::new();
        let mut ids = Vec::new();
        for (i, o) in objects.iter().enumerate() {
            ids.push(all.len());
            all.push(Arrow {
                name: format!("id_{o}"),
                src: i,
                tgt: i,
            });
        }
        for (n, s, t) in &arrows {
            if all.iter().any(|a| a.name == *n) {
                return Err(Error::Precondition(format!("duplicate arrow {n}")));
            }
            all.push(Arrow {
                name: n.clone(),
                src: obj(s)?,
                tgt: obj(t)?,
            });
        }
        let idx = |n: &str| {
            all.iter()
                .position(|a| a.name == n)
                .ok_or_else(|| Error::Precondition(format!("unknown arrow {n}")))
        };
        let mut table = HashMap::new();
        for (g, f, h) in &comp {
            let (gi, fi, hi) = (idx(g)?, idx(f)?, idx(h)?);
            if all[fi].tgt != all[gi].src {
                return Err(Error::Precondition(format!("{g}∘{f} is not composable")));
            }
            if all[hi].src != all[fi].src || all[hi].tgt != all[gi].tgt {
                return Err(Error::Precondition(format!(
                    "{g}∘{f} = {h} has the wrong type"
                )));
            }
            table.insert((gi, fi), hi);
        }
        for (i, a) in all.iter().enumerate() {
            table.insert((ids[a.tgt], i), i);
            table.insert((i, ids[a.src]), i);
        }
        let c = FiniteCategory {
            objects,
            arrows: all,
            comp: table,
            ids,
        };
        c.check_laws()?;
        Ok(c)
    }

    fn check_laws(&self) -> Result<()> {
        let n = self.arrows.len();
        for f in 0..n {
            for g in 0..n {
                if self.arrows[f].tgt != self.arrows[g].src {
                    continue;
                }
                if !self.comp.contains_key(&(g, f)) {
                    return Err(Error::Precondition(format!(
                        "missing composite {}∘{}",
                        self.arrows[g].name, self.arrows[f].name
                    )));
                }
            }
        }
        for f in 0..n {
            for g in 0..n {
                if self.arrows[f].tgt != self.arrows[g].src {
                    continue;
                }
                for h in 0..n {
                    if self.arrows[g].tgt != self.arrows[h].src {
                        continue;
                    }
                    let a = self.compose(h, self.compose(g, f));
                    let b = self.compose(self.compose(h, g), f);
                    if a != b {
                        return Err(Error::Precondition(format!(
                            "associativity fails for ({}, {}, {})",
                            self.arrows[h].name, self.arrows[g].name, self.arrows[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn identity(&self, x: usize) -> usize {
        self.ids[x]
    }

    /// `g ∘ f`; panics if not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        *self.comp.get(&(g, f)).unwrap_or_else(|| {
            panic!(
                "{} ∘ {} not composable",
                self.arrows[g].name, self.arrows[f].name
            )
        })
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].src == x && self.arrows[a].tgt == y)
            .collect()
    }

    pub fn from_source(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].src == x)
            .collect()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.arrows[a].name
    }
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub axiom: u8,
    pub holds: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativeReport {
    pub axioms: Vec<AxiomResult>,
}

impl MultiplicativeReport {
    pub fn all_hold(&self) -> bool {
        self.axioms.iter().all(|a| a.holds)
    }
}

/// Exhaustively check the four axioms of a right multiplicative system.
pub fn check_right_multiplicative(c: &FiniteCategory, s: &BTreeSet<usize>) -> MultiplicativeReport {
    let n = c.arrows.len();
    let ar = &c.arrows;
    let mut out = Vec::new();

    // 1: identities
    let cx1 = (0..c.objects.len())
        .find(|&x| !s.contains(&c.ids[x]))
        .map(|x| format!("id_{} is not in S", c.objects[x]));
    out.push(AxiomResult {
        axiom: 1,
        holds: cx1.is_none(),
        counterexample: cx1,
    });

    // 2: closure under composition
    let mut cx2 = None;
    'a2: for &f in s {
        for &g in s {
            if ar[f].tgt == ar[g].src && !s.contains(&c.compose(g, f)) {
                cx2 = Some(format!("{}∘{} is not in S", ar[g].name, ar[f].name));
                break 'a2;
            }
        }
    }
    out.push(AxiomResult {
        axiom: 2,
        holds: cx2.is_none(),
        counterexample: cx2,
    });

    // 3: for f: X->Y, s: X->X' in S there are t: Y->Y' in S, g: X'->Y' with g∘s = t∘f
    let mut cx3 = None;
    'a3: for f in 0..n {
        for &sx in s {
            if ar[sx].src != ar[f].src {
                continue;
            }
            if ore_square(c, s, f, sx).is_none() {
                cx3 = Some(format!(
                    "no square completing f = {} and s = {}",
                    ar[f].name, ar[sx].name
                ));
                break 'a3;
            }
        }
    }
    out.push(AxiomResult {
        axiom: 3,
        holds: cx3.is_none(),
        counterexample: cx3,
    });

    // 4: f∘s = g∘s with s in S implies t∘f = t∘g for some t in S
    let mut cx4 = None;
    'a4: for f in 0..n {
        for g in 0..n {
            if f == g || ar[f].src != ar[g].src || ar[f].tgt != ar[g].tgt {
                continue;
            }
            let x = ar[f].src;
            let y = ar[f].tgt;
            let equalized = s
                .iter()
                .any(|&w| ar[w].tgt == x && c.compose(f, w) == c.compose(g, w));
            if !equalized {
                continue;
            }
            let coequalized = s
                .iter()
                .any(|&t| ar[t].src == y && c.compose(t, f) == c.compose(t, g));
            if !coequalized {
                cx4 = Some(format!(
                    "{} and {} are equalized by S on the right but not on the left",
                    ar[f].name, ar[g].name
                ));
                break 'a4;
            }
        }
    }
    out.push(AxiomResult {
        axiom: 4,
        holds: cx4.is_none(),
        counterexample: cx4,
    });
    MultiplicativeReport { axioms: out }
}

/// For `f: X -> Y` and `s: X -> X'` in `S`, find `(t, g)` with `t: Y -> Y'` in `S`
/// and `g: X' -> Y'` such that `g∘s = t∘f` (smallest indices first).
pub fn ore_square(
    c: &FiniteCategory,
    s: &BTreeSet<usize>,
    f: usize,
    sx: usize,
) -> Option<(usize, usize)> {
    let ar = &c.arrows;
    for &t in s {
        if ar[t].src != ar[f].tgt {
            continue;
        }
        let tf = c.compose(t, f);
        for g in c.hom(ar[sx].tgt, ar[t].tgt) {
            if c.compose(g, sx) == tf {
                return Some((t, g));
            }
        }
    }
    None
}

/// Roof `X --f--> Y' <--s-- Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Roof {
    pub s: usize,
    pub f: usize,
}

/// A localized category `C[S^{-1}]` with hom sets computed on demand.
pub struct Localization<'a> {
    c: &'a FiniteCategory,
    s: BTreeSet<usize>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let nx = parent[y];
        parent[y] = r;
        y = nx;
    }
    r
}

impl<'a> Localization<'a> {
    /// Fails with a precondition error naming the first violated axiom.
    pub fn new(c: &'a FiniteCategory, s: BTreeSet<usize>) -> Result<Self> {
        let rep = check_right_multiplicative(c, &s);
        if let Some(a) = rep.axioms.iter().find(|a| !a.holds) {
            return Err(Error::Precondition(format!(
                "S is not a right multiplicative system (axiom {}): {}",
                a.axiom,
                a.counterexample.clone().unwrap_or_default()
            )));
        }
        Ok(Localization { c, s })
    }

    pub fn category(&self) -> &FiniteCategory {
        self.c
    }

    fn elements(&self, x: usize, y: usize) -> Vec<Roof> {
        let ar = &self.c.arrows;
        let mut out = Vec::new();
        for &s in &self.s {
            if ar[s].src != y {
                continue;
            }
            for f in self.c.hom(x, ar[s].tgt) {
                out.push(Roof { s, f });
            }
        }
        out
    }

    /// Classes of `Hom(X, Y)` as sorted lists of roofs; the first roof of
    /// each class is its canonical representative.
    pub fn hom_classes(&self, x: usize, y: usize) -> Vec<Vec<Roof>> {
        let ar = &self.c.arrows;
        let elems = self.elements(x, y);
        let index: HashMap<Roof, usize> = elems.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let mut parent: Vec<usize> = (0..elems.len()).collect();
        // morphisms of S^Y: u with u∘s = s'
        for (i, r) in elems.iter().enumerate() {
            for &s2 in &self.s {
                if ar[s2].src != y {
                    continue;
                }
                for u in self.c.hom(ar[r.s].tgt, ar[s2].tgt) {
                    if self.c.compose(u, r.s) != s2 {
                        continue;
                    }
                    let other = Roof {
                        s: s2,
                        f: self.c.compose(u, r.f),
                    };
                    let j = index[&other];
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut classes: HashMap<usize, Vec<Roof>> = HashMap::new();
        for i in 0..elems.len() {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().push(elems[i]);
        }
        let mut out: Vec<Vec<Roof>> = classes
            .into_values()
            .map(|mut v| {
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }

    /// Canonical representatives of `Hom_{C[S^{-1}]}(X, Y)`.
    pub fn hom(&self, x: usize, y: usize) -> Vec<Roof> {
        self.hom_classes(x, y).into_iter().map(|v| v[0]).collect()
    }

    /// Canonical representative of the class of `r ∈ Hom(X, Y)`.
    pub fn canonical(&self, x: usize, y: usize, r: Roof) -> Roof {
        self.hom_classes(x, y)
            .into_iter()
            .find(|cl| cl.contains(&r))
            .map(|cl| cl[0])
            .expect("roof belongs to some class")
    }

    /// Image of an arrow `f : X -> Y` of `C`.
    pub fn q(&self, f: usize) -> Roof {
        let a = &self.c.arrows[f];
        self.canonical(
            a.src,
            a.tgt,
            Roof {
                s: self.c.ids[a.tgt],
                f,
            },
        )
    }

    /// Compose `b ∘ a` for `a ∈ Hom(X, Y)`, `b ∈ Hom(Y, Z)`.
    pub fn compose(&self, x: usize, z: usize, b: Roof, a: Roof) -> Roof {
        let ar = &self.c.arrows;
        // a: X --a.f--> Y' <--a.s-- Y ; b: Y --b.f--> Z' <--b.s-- Z
        let (t, g) = ore_square(self.c, &self.s, b.f, a.s).expect("axiom 3 holds");
        debug_assert_eq!(ar[t].src, ar[b.f].tgt);
        let r = Roof {
            s: self.c.compose(t, b.s),
            f: self.c.compose(g, a.f),
        };
        self.canonical(x, z, r)
    }

    /// Two-sided inverse of `Q(s)` for `s ∈ S`.
    pub fn inverse(&self, s: usize) -> Result<Roof> {
        if !self.s.contains(&s) {
            return Err(Error::Precondition(format!(
                "{} is not in S",
                self.c.arrows[s].name
            )));
        }
        let a = &self.c.arrows[s];
        Ok(self.canonical(
            a.tgt,
            a.src,
            Roof {
                s,
                f: self.c.ids[a.tgt],
            },
        ))
    }

    pub fn identity(&self, x: usize) -> Roof {
        self.q(self.c.ids[x])
    }

    pub fn describe(&self, r: Roof) -> String {
        format!("{} then {}^-1", self.c.name(r.f), self.c.name(r.s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_poset() -> FiniteCategory {
        FiniteCategory::new(
            vec!["a".into(), "b".into()],
            vec![("u".into(), "a".into(), "b".into())],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn identity_system_leaves_homs_unchanged() {
        let c = arrow_poset();
        let s: BTreeSet<usize> = (0..2).map(|x| c.identity(x)).collect();
        assert!(check_right_multiplicative(&c, &s).all_hold());
        let l = Localization::new(&c, s).unwrap();
        assert_eq!(l.hom(0, 1).len(), 1);
        assert_eq!(l.hom(1, 0).len(), 0);
    }

    #[test]
    fn inverting_the_arrow() {
        let c = arrow_poset();
        let u = c.arrow_index("u").unwrap();
        let s: BTreeSet<usize> = [c.identity(0), c.identity(1), u].into();
        assert!(check_right_multiplicative(&c, &s).all_hold());
        let l = Localization::new(&c, s).unwrap();
        assert_eq!(l.hom(1, 0).len(), 1);
        let inv = l.inverse(u).unwrap();
        assert_eq!(l.compose(0, 0, inv, l.q(u)), l.identity(0));
        assert_eq!(l.compose(1, 1, l.q(u), inv), l.identity(1));
    }

    #[test]
    fn missing_identities_fail_axiom_one() {
        let c = arrow_poset();
        let s: BTreeSet<usize> = [c.arrow_index("u").unwrap()].into();
        let rep = check_right_multiplicative(&c, &s);
        assert!(!rep.axioms[0].holds);
        assert!(Localization::new(&c, s).is_err());
    }
}
