//! Presheaves of finite-dimensional ℚ-vector spaces on a [`FiniteSite`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde_json::Value;

use super::site::FiniteSite;
use crate::algebra::{QMatrix, Subspace};
use crate::error::{Error, Result};
use crate::json::{matrix_from_value, parse_document};

/// Offsets `(point, offset, dim)` of the factors of `F(U) = ∏ F_x`, one list per open.
pub(crate) type Blocks = Vec<Vec<(usize, usize, usize)>>;

/// `dims[u]` is `dim F(U)`; `res[(u, v)]` is `F(U) -> F(V)` for every `V ⊆ U`.
///
/// For products of stalks the restrictions are coordinate projections and are
/// only materialized when asked for.
#[derive(Clone, Debug)]
pub struct Presheaf {
    dims: Vec<usize>,
    res: BTreeMap<(usize, usize), OnceLock<QMatrix>>,
    blocks: Option<Blocks>,
}

impl PartialEq for Presheaf {
    fn eq(&self, o: &Self) -> bool {
        self.dims == o.dims
            && self.res.len() == o.res.len()
            && self.res.keys().zip(o.res.keys()).all(|(a, b)| a == b)
            && self
                .res
                .keys()
                .all(|&(u, v)| self.restriction(u, v) == o.restriction(u, v))
    }
}

fn eager(res: BTreeMap<(usize, usize), QMatrix>) -> BTreeMap<(usize, usize), OnceLock<QMatrix>> {
    res.into_iter()
        .map(|(k, m)| (k, OnceLock::from(m)))
        .collect()
}

/// A natural transformation, one matrix per open.
#[derive(Clone, Debug, PartialEq)]
pub struct PresheafMor {
    pub maps: Vec<QMatrix>,
}

impl Presheaf {
    /// Restrictions not listed in `given` are obtained by composing through an
    /// intermediate open; functoriality is then verified on all triples.
    pub fn new(
        site: &FiniteSite,
        dims: Vec<usize>,
        given: BTreeMap<(usize, usize), QMatrix>,
    ) -> Result<Self> {
        let n = site.num_opens();
        if dims.len() != n {
            return Err(Error::Precondition(format!(
                "expected {n} open dimensions, got {}",
                dims.len()
            )));
        }
        for (&(u, v), m) in &given {
            if u >= n || v >= n || !site.is_subset(v, u) {
                return Err(Error::Precondition(
                    "restriction between non-nested opens".into(),
                ));
            }
            if m.rows() != dims[v] || m.cols() != dims[u] {
                return Err(Error::Precondition(format!(
                    "restriction {} -> {} has the wrong shape",
                    site.open_name(u),
                    site.open_name(v)
                )));
            }
        }
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| site.is_subset(v, u))
            .collect();
        pairs.sort_by_key(|&(u, v)| site.open(u).len() - site.open(v).len());
        let mut res: BTreeMap<(usize, usize), QMatrix> = BTreeMap::new();
        for (u, v) in pairs {
            let m = if u == v {
                QMatrix::identity(dims[u])
            } else if let Some(m) = given.get(&(u, v)) {
                m.clone()
            } else if dims[u] == 0 || dims[v] == 0 {
                QMatrix::zeros(dims[v], dims[u])
            } else {
                let via = (0..n).find(|&w| {
                    w != u && w != v && res.contains_key(&(u, w)) && res.contains_key(&(w, v))
                });
                match via {
                    Some(w) => res[&(w, v)].mul(&res[&(u, w)]),
                    None => {
                        return Err(Error::Precondition(format!(
                            "missing restriction {} -> {}",
                            site.open_name(u),
                            site.open_name(v)
                        )))
                    }
                }
            };
            res.insert((u, v), m);
        }
        for (&(u, v), ruv) in &res {
            for w in 0..n {
                if site.is_subset(w, v) && res[&(v, w)].mul(ruv) != res[&(u, w)] {
                    return Err(Error::Precondition(format!(
                        "restrictions are not functorial on {} ⊇ {} ⊇ {}",
                        site.open_name(u),
                        site.open_name(v),
                        site.open_name(w)
                    )));
                }
            }
        }
        Ok(Presheaf {
            dims,
            res: eager(res),
            blocks: None,
        })
    }

    /// `F(U) = ∏_{x∈U} F_x` laid out by `blocks`, restrictions being projections.
    pub(crate) fn products(site: &FiniteSite, blocks: Blocks) -> Self {
        let n = site.num_opens();
        let dims = blocks.iter().map(|b| b.iter().map(|e| e.2).sum()).collect();
        let res = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| site.is_subset(v, u))
            .map(|k| (k, OnceLock::new()))
            .collect();
        Presheaf {
            dims,
            res,
            blocks: Some(blocks),
        }
    }

    fn projection(&self, u: usize, v: usize) -> QMatrix {
        let blocks = self
            .blocks
            .as_ref()
            .expect("restrictions are stored unless laid out as products");
        let mut m = QMatrix::zeros(self.dims[v], self.dims[u]);
        for &(x, off_v, d) in &blocks[v] {
            let off_u = blocks[u].iter().find(|b| b.0 == x).expect("V ⊆ U").1;
            for t in 0..d {
                m.set(off_v + t, off_u + t, crate::algebra::q(1));
            }
        }
        m
    }

    /// Locally constant functions with values in `ℚ^k`.
    pub fn constant(site: &FiniteSite, k: usize) -> Self {
        let n = site.num_opens();
        let comps: Vec<Vec<BTreeSet<usize>>> = (0..n).map(|u| site.components(u)).collect();
        let dims: Vec<usize> = comps.iter().map(|c| c.len() * k).collect();
        let mut res = BTreeMap::new();
        for u in 0..n {
            for v in 0..n {
                if !site.is_subset(v, u) {
                    continue;
                }
                let mut m = QMatrix::zeros(dims[v], dims[u]);
                for (j, cv) in comps[v].iter().enumerate() {
                    let p = cv.iter().next().unwrap();
                    let i = comps[u].iter().position(|cu| cu.contains(p)).unwrap();
                    for t in 0..k {
                        m.set(j * k + t, i * k + t, crate::algebra::q(1));
                    }
                }
                res.insert((u, v), m);
            }
        }
        Presheaf {
            dims,
            res: eager(res),
            blocks: None,
        }
    }

    /// Parse `{"opens": {name: [points]}, "dims": {name: n},
    /// "restrictions": {"U->V": rows}}`, or `{"constant": k}`.
    /// Opens not named get dimension 0.
    pub fn from_json(site: &FiniteSite, src: &str) -> Result<Self> {
        let doc = parse_document(src)?;
        if let Some(k) = doc.get("constant") {
            let k = k.as_u64().ok_or_else(|| {
                Error::Precondition("\"constant\" must be a nonnegative integer".into())
            })?;
            return Ok(Self::constant(site, k as usize));
        }
        let obj = |key: &str| -> Result<serde_json::Map<String, Value>> {
            Ok(doc
                .get(key)
                .and_then(Value::as_object)
                .cloned()
                .unwrap_or_default())
        };
        let mut names: BTreeMap<String, usize> = BTreeMap::new();
        for (name, pts) in obj("opens")? {
            let list = pts
                .as_array()
                .ok_or_else(|| Error::Precondition(format!("open {name} must list its points")))?;
            let mut set = BTreeSet::new();
            for p in list {
                let p = p.as_str().unwrap_or_default();
                let i = site.points().iter().position(|x| x == p).ok_or_else(|| {
                    Error::Precondition(format!("unknown point {p} in open {name}"))
                })?;
                set.insert(i);
            }
            let u = site
                .open_index(&set)
                .ok_or_else(|| Error::Precondition(format!("{name} is not open")))?;
            names.insert(name, u);
        }
        let lookup = |name: &str| {
            names
                .get(name)
                .copied()
                .ok_or_else(|| Error::Precondition(format!("unknown open {name}")))
        };
        let mut dims = vec![0usize; site.num_opens()];
        for (name, d) in obj("dims")? {
            dims[lookup(&name)?] = d.as_u64().ok_or_else(|| {
                Error::Precondition(format!("dimension of {name} must be a nonnegative integer"))
            })? as usize;
        }
        let mut given = BTreeMap::new();
        for (key, m) in obj("restrictions")? {
            let (a, b) = key.split_once("->").ok_or_else(|| {
                Error::Precondition(format!("restriction key {key} must look like U->V"))
            })?;
            let (u, v) = (lookup(a.trim())?, lookup(b.trim())?);
            given.insert((u, v), matrix_from_value(&m, dims[v], dims[u])?);
        }
        Self::new(site, dims, given)
    }

    pub fn dim(&self, u: usize) -> usize {
        self.dims[u]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn restriction(&self, u: usize, v: usize) -> &QMatrix {
        self.res[&(u, v)].get_or_init(|| self.projection(u, v))
    }

    /// `F_x = F(U_x)`.
    pub fn stalk_dim(&self, site: &FiniteSite, x: usize) -> usize {
        self.dims[site.minimal_open(x)]
    }

    pub fn identity(&self) -> PresheafMor {
        PresheafMor {
            maps: self.dims.iter().map(|&d| QMatrix::identity(d)).collect(),
        }
    }

    /// Every restriction map is surjective.
    pub fn is_flasque(&self) -> bool {
        self.res
            .keys()
            .all(|&(u, v)| self.restriction(u, v).rank() == self.dims[v])
    }

    /// Equalizer condition for the cover of each open by the minimal opens of its points.
    pub fn check_sheaf(&self, site: &FiniteSite) -> Result<()> {
        for u in 0..site.num_opens() {
            let pts: Vec<usize> = site.open(u).iter().copied().collect();
            if pts.is_empty() {
                if self.dims[u] != 0 {
                    return Err(Error::Precondition(
                        "a sheaf has F(∅) = 0 (empty cover)".into(),
                    ));
                }
                continue;
            }
            let cover: Vec<usize> = pts.iter().map(|&x| site.minimal_open(x)).collect();
            if cover.contains(&u) {
                continue;
            }
            let cover: Vec<usize> = cover
                .into_iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let offs: Vec<usize> = cover
                .iter()
                .scan(0, |acc, &c| {
                    let o = *acc;
                    *acc += self.dims[c];
                    Some(o)
                })
                .collect();
            let total: usize = cover.iter().map(|&c| self.dims[c]).sum();
            let mut a = QMatrix::zeros(total, self.dims[u]);
            for (k, &c) in cover.iter().enumerate() {
                let r = self.restriction(u, c);
                for i in 0..r.rows() {
                    for j in 0..r.cols() {
                        a.set(offs[k] + i, j, r.get(i, j).clone());
                    }
                }
            }
            let mut rows: Vec<Vec<crate::algebra::Q>> = Vec::new();
            for (k1, &c1) in cover.iter().enumerate() {
                for (k2, &c2) in cover.iter().enumerate().skip(k1 + 1) {
                    let inter: BTreeSet<usize> =
                        site.open(c1).intersection(site.open(c2)).copied().collect();
                    let w = site
                        .open_index(&inter)
                        .expect("intersection of opens is open");
                    let (r1, r2) = (self.restriction(c1, w), self.restriction(c2, w));
                    for i in 0..self.dims[w] {
                        let mut row = vec![crate::algebra::q(0); total];
                        for j in 0..self.dims[c1] {
                            row[offs[k1] + j] = r1.get(i, j).clone();
                        }
                        for j in 0..self.dims[c2] {
                            row[offs[k2] + j] = -r2.get(i, j).clone();
                        }
                        rows.push(row);
                    }
                }
            }
            let eq = if rows.is_empty() {
                Subspace::full(total)
            } else {
                Subspace::full(total).kernel_within(&QMatrix::from_rows(rows))
            };
            if a.rank() != self.dims[u] || eq.dim() != self.dims[u] {
                let names: Vec<String> = cover.iter().map(|&c| site.open_name(c)).collect();
                return Err(Error::Precondition(format!(
                    "sheaf condition fails for the cover {} of {}",
                    names.join(" ∪ "),
                    site.open_name(u)
                )));
            }
        }
        Ok(())
    }
}

impl PresheafMor {
    pub fn compose(&self, f: &PresheafMor) -> PresheafMor {
        PresheafMor {
            maps: self
                .maps
                .iter()
                .zip(&f.maps)
                .map(|(g, f)| g.mul(f))
                .collect(),
        }
    }

    pub fn add(&self, o: &PresheafMor) -> PresheafMor {
        PresheafMor {
            maps: self
                .maps
                .iter()
                .zip(&o.maps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// Commutes with all restrictions from `src` to `tgt`.
    pub fn is_natural(&self, src: &Presheaf, tgt: &Presheaf) -> bool {
        src.res.keys().all(|&(u, v)| {
            tgt.restriction(u, v).mul(&self.maps[u]) == self.maps[v].mul(src.restriction(u, v))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sheaf_on_pseudo_circle() {
        let s = FiniteSite::pseudo_circle();
        let f = Presheaf::constant(&s, 1);
        f.check_sheaf(&s).unwrap();
        assert_eq!(f.dim(s.whole()), 1);
        // {c, d} is disconnected
        let cd = s.open_index(&BTreeSet::from([2, 3])).unwrap();
        assert_eq!(f.dim(cd), 2);
    }

    #[test]
    fn non_sheaf_reports_cover() {
        let s = FiniteSite::pseudo_circle();
        let mut dims = vec![1; s.num_opens()];
        dims[0] = 0;
        let cd = s.open_index(&BTreeSet::from([2, 3])).unwrap();
        dims[cd] = 1;
        // constant presheaf ℚ on all nonempty opens is not a sheaf on {c, d}
        let mut given = BTreeMap::new();
        for u in 1..s.num_opens() {
            for v in 1..s.num_opens() {
                if s.is_subset(v, u) {
                    given.insert((u, v), QMatrix::identity(1));
                }
            }
        }
        let f = Presheaf::new(&s, dims, given).unwrap();
        let err = f.check_sheaf(&s).unwrap_err();
        assert!(err.to_string().contains("{c} ∪ {d}"), "{err}");
    }
}
