//! De Rham realization of bounded complexes of curve motives.
//!
//! A term `X_k` in cohomological degree `k` becomes the column `p = -k` of a
//! double complex; a correspondence `γ : X_k → X_{k+1}` becomes the transfer
//! `K(X_{k+1}) → K(X_k)`. The total complex carries the direct sum of the
//! Hodge filtrations and of the décalage of the weight filtrations.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{QMatrix, RationalFunction, Subspace, Q};
use crate::derham::{
    canonical_representatives, class_in, degree_record, describe_vector, form_map, homotopy_reduce,
    kunneth, CohomologyRecord, Elem, Kunneth, Model, Space, DEFAULT_WINDOW, MAX_WINDOW,
};
use crate::error::{Error, Result};
use crate::forms::{transfer, DifferentialForm};
use crate::homological::{
    decalage, tot_layout, total_complex, ChainMap, Complex, Direction, DoubleComplex, Filtration,
};
use crate::varieties::{
    compose, graph, AffineCurveScheme, FiniteCorrespondence, Morphism, SchemeKind,
};

/// Largest window a term may be grown to so that transferred forms fit.
const MAX_TERM_WINDOW: usize = 8 * MAX_WINDOW;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapRef {
    Zero,
    Id,
    /// The structure map `X → pt`.
    Struct,
    /// The projection `X × 𝔸¹ → X`.
    Proj,
    Corr(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub mult: i64,
    pub map: MapRef,
}

impl Entry {
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mult, name) = if let Some((k, rest)) = s.split_once('*') {
            let k: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("bad multiplicity in '{s}'")))?;
            (k, rest.trim())
        } else if let Some(rest) = s.strip_prefix('-') {
            (-1, rest.trim())
        } else {
            (1, s)
        };
        let map = match name {
            "0" => MapRef::Zero,
            "id" => MapRef::Id,
            "struct" => MapRef::Struct,
            "proj" => MapRef::Proj,
            "" => return Err(Error::Precondition("empty correspondence reference".into())),
            other => MapRef::Corr(other.to_string()),
        };
        Ok(Entry {
            mult: if map == MapRef::Zero { 0 } else { mult },
            map,
        })
    }
}

/// A bounded complex of curve motives with correspondence differentials.
#[derive(Clone, Debug)]
pub struct MotiveComplex {
    pub label: String,
    pub spaces: BTreeMap<String, Space>,
    pub correspondences: BTreeMap<String, FiniteCorrespondence>,
    pub terms: BTreeMap<i64, Vec<String>>,
    /// `d[k][j][i]`: from term `i` of degree `k` to term `j` of degree `k+1`.
    pub d: BTreeMap<i64, Vec<Vec<Entry>>>,
    pub twist: i64,
    pub shift: i64,
}

/// A correspondence object, `{"graph": {"source", "target", "images"}}` or
/// `{"transpose": corr}`.
pub fn correspondence_from_json(v: &Value) -> Result<FiniteCorrespondence> {
    if let Some(g) = v.get("graph") {
        let src = AffineCurveScheme::from_json(
            g.get("source")
                .ok_or_else(|| Error::Precondition("graph needs 'source'".into()))?,
        )?;
        let tgt = AffineCurveScheme::from_json(
            g.get("target")
                .ok_or_else(|| Error::Precondition("graph needs 'target'".into()))?,
        )?;
        let imgs: Vec<&str> = g
            .get("images")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Precondition("graph needs 'images'".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| Error::Precondition("images are strings".into()))
            })
            .collect::<Result<_>>()?;
        return graph(&Morphism::parse(&src, &tgt, &imgs)?);
    }
    if let Some(t) = v.get("transpose") {
        return correspondence_from_json(t)?.transpose();
    }
    FiniteCorrespondence::from_json(v)
}

fn degree_key(k: &str) -> Result<i64> {
    k.trim()
        .parse()
        .map_err(|_| Error::Precondition(format!("degree '{k}' is not an integer")))
}

impl MotiveComplex {
    /// The motive of one space in degree 0.
    pub fn single(space: Space) -> Self {
        let label = space.label();
        let mut spaces = BTreeMap::new();
        spaces.insert(label.clone(), space);
        MotiveComplex {
            label: label.clone(),
            spaces,
            correspondences: BTreeMap::new(),
            terms: BTreeMap::from([(0, vec![label])]),
            d: BTreeMap::new(),
            twist: 0,
            shift: 0,
        }
    }

    /// The cone `[X × 𝔸¹ → X]` of the projection, `X × 𝔸¹` in degree 0.
    pub fn homotopy_cone(x: Space) -> Self {
        let xl = x.label();
        let prod = Space::Product(Box::new(x.clone()), Box::new(a1_space()));
        let pl = prod.label();
        MotiveComplex {
            label: format!("[{pl} -> {xl}]"),
            spaces: BTreeMap::from([(xl.clone(), x), (pl.clone(), prod)]),
            correspondences: BTreeMap::new(),
            terms: BTreeMap::from([(0, vec![pl]), (1, vec![xl])]),
            d: BTreeMap::from([(
                0,
                vec![vec![Entry {
                    mult: 1,
                    map: MapRef::Proj,
                }]],
            )]),
            twist: 0,
            shift: 0,
        }
    }

    /// `{"schemes": {name: space}, "correspondences": {name: corr},
    /// "terms": {deg: [names]}, "d": {deg: [[refs]]}, "twist": n, "shift": s}`.
    ///
    /// Term names not listed under `"schemes"` are read as builtin labels or
    /// `"P1"`. A reference is `0`, `id`, `struct`, `proj` or a correspondence
    /// name, optionally prefixed by `-` or `k*`. Correspondences are given as
    /// correspondence objects, `{"graph": {"source", "target", "images"}}`
    /// or `{"transpose": corr}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Precondition("motive must be a JSON object".into()))?;
        let mut spaces = BTreeMap::new();
        if let Some(s) = obj.get("schemes") {
            let s = s
                .as_object()
                .ok_or_else(|| Error::Precondition("'schemes' must be an object".into()))?;
            for (name, sv) in s {
                spaces.insert(name.clone(), Space::from_json(sv)?);
            }
        }
        let mut correspondences = BTreeMap::new();
        if let Some(c) = obj.get("correspondences") {
            let c = c
                .as_object()
                .ok_or_else(|| Error::Precondition("'correspondences' must be an object".into()))?;
            for (name, cv) in c {
                correspondences.insert(name.clone(), correspondence_from_json(cv)?);
            }
        }
        let mut terms = BTreeMap::new();
        let tv = obj
            .get("terms")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Precondition("motive needs an object 'terms'".into()))?;
        for (k, names) in tv {
            let names: Vec<String> = names
                .as_array()
                .ok_or_else(|| Error::Precondition(format!("terms[{k}] must be a list")))?
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Precondition("term names are strings".into()))
                })
                .collect::<Result<_>>()?;
            for n in &names {
                if !spaces.contains_key(n) {
                    let s = Space::from_json(&Value::String(n.clone()))?;
                    spaces.insert(n.clone(), s);
                }
            }
            terms.insert(degree_key(k)?, names);
        }
        let mut d = BTreeMap::new();
        if let Some(dv) = obj.get("d") {
            let dv = dv
                .as_object()
                .ok_or_else(|| Error::Precondition("'d' must be an object".into()))?;
            for (k, rows) in dv {
                let rows: Vec<Vec<Entry>> = rows
                    .as_array()
                    .ok_or_else(|| Error::Precondition(format!("d[{k}] must be a matrix")))?
                    .iter()
                    .map(|r| {
                        r.as_array()
                            .ok_or_else(|| {
                                Error::Precondition(format!("d[{k}] rows must be lists"))
                            })?
                            .iter()
                            .map(|e| match e {
                                Value::String(s) => Entry::parse(s),
                                Value::Number(n) if n.as_i64() == Some(0) => Entry::parse("0"),
                                _ => Err(Error::Precondition(format!("bad entry {e} in d[{k}]"))),
                            })
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                d.insert(degree_key(k)?, rows);
            }
        }
        let int = |key: &str| -> Result<i64> {
            match obj.get(key) {
                None => Ok(0),
                Some(x) => x
                    .as_i64()
                    .ok_or_else(|| Error::Precondition(format!("'{key}' must be an integer"))),
            }
        };
        let m = MotiveComplex {
            label: obj
                .get("label")
                .and_then(Value::as_str)
                .unwrap_or("motive")
                .to_string(),
            spaces,
            correspondences,
            terms,
            d,
            twist: int("twist")?,
            shift: int("shift")?,
        };
        m.validate()?;
        Ok(m)
    }

    fn names(&self, k: i64) -> &[String] {
        self.terms.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    fn entry(&self, k: i64, j: usize, i: usize) -> Entry {
        self.d
            .get(&k)
            .map(|rows| rows[j][i].clone())
            .unwrap_or(Entry {
                mult: 0,
                map: MapRef::Zero,
            })
    }

    /// Shapes, reference names, and `d ∘ d = 0` wherever every entry is an
    /// honest correspondence between curves.
    pub fn validate(&self) -> Result<()> {
        for (k, rows) in &self.d {
            let (src, tgt) = (self.names(*k).len(), self.names(k + 1).len());
            if rows.len() != tgt || rows.iter().any(|r| r.len() != src) {
                return Err(Error::Precondition(format!(
                    "d[{k}] must be a {tgt} x {src} matrix"
                )));
            }
            for e in rows.iter().flatten() {
                if let MapRef::Corr(n) = &e.map {
                    if !self.correspondences.contains_key(n) {
                        return Err(Error::Precondition(format!("unknown correspondence '{n}'")));
                    }
                }
            }
        }
        for &k in self.d.keys() {
            if !self.d.contains_key(&(k + 1)) {
                continue;
            }
            for i in 0..self.names(k).len() {
                for l in 0..self.names(k + 2).len() {
                    let mut total: Option<FiniteCorrespondence> = None;
                    let mut checkable = true;
                    for j in 0..self.names(k + 1).len() {
                        let a = self.as_correspondence(k, j, i);
                        let b = self.as_correspondence(k + 1, l, j);
                        match (a, b) {
                            (Some(a), Some(b)) => {
                                let c = compose(&a?, &b?)?;
                                total = Some(match total {
                                    None => c,
                                    Some(t) => t.add(&c)?,
                                });
                            }
                            _ => checkable = false,
                        }
                    }
                    if checkable && total.is_some_and(|t| !t.is_zero()) {
                        return Err(Error::Precondition(format!(
                            "d[{}] d[{k}] is not zero on term {i} of degree {k}",
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn affine(&self, name: &str) -> Option<&AffineCurveScheme> {
        match self.spaces.get(name) {
            Some(Space::Affine(x)) => Some(x),
            _ => None,
        }
    }

    /// The entry `d[k][j][i]` as a correspondence, if both ends are curves
    /// and the entry is not a projection.
    fn as_correspondence(
        &self,
        k: i64,
        j: usize,
        i: usize,
    ) -> Option<Result<FiniteCorrespondence>> {
        let x = self.affine(&self.names(k)[i])?;
        let y = self.affine(&self.names(k + 1)[j])?;
        let e = self.entry(k, j, i);
        let base = match &e.map {
            MapRef::Zero => Ok(FiniteCorrespondence::zero(x, y)),
            MapRef::Id => FiniteCorrespondence::identity(x),
            MapRef::Struct => Morphism::new(x, y, vec![]).and_then(|f| graph(&f)),
            MapRef::Proj => return None,
            MapRef::Corr(n) => Ok(self.correspondences[n].clone()),
        };
        Some(base.map(|c| c.scale(e.mult)))
    }
}

fn a1_space() -> Space {
    Space::Affine(AffineCurveScheme::builtin("A1").expect("builtin A1"))
}

fn is_point(s: &Space) -> bool {
    matches!(s, Space::Affine(x) if matches!(x.kind(), SchemeKind::Point))
}

fn kind_of(s: &Space) -> &'static str {
    match s {
        Space::Affine(_) => "global sections",
        Space::P1(_) => "two-chart Čech model on P1",
        Space::Closure(_) => "two-chart Čech model on the smooth completion",
        Space::Product(..) => "tensor product of models",
    }
}

/// Sum of the degree-0 basis elements equal to the constant 1, one per chart.
fn unit_vector(m: &Model) -> Result<Vec<Q>> {
    let es = m.elems.first().map(Vec::as_slice).unwrap_or(&[]);
    let mut v = vec![<Q as Zero>::zero(); es.len()];
    let mut found = false;
    for (i, e) in es.iter().enumerate() {
        if e.form.degree() == 0 {
            let one = DifferentialForm::function(
                e.form.presentation(),
                RationalFunction::from_poly(crate::algebra::MultiPoly::one(
                    &e.form.presentation().vars,
                )),
            );
            if e.form.equals(&one) {
                v[i] = <Q as One>::one();
                found = true;
            }
        }
    }
    if !found {
        return Err(Error::InvariantViolation(format!(
            "{}: no unit in the model",
            m.label
        )));
    }
    Ok(v)
}

/// Chain map `K(Y) → K(X)` sending each basis form to `phi(form)`, matched
/// against basis elements of `X` on the same chart, or read in coordinates.
fn matching_map(
    y: &Model,
    x: &Model,
    phi: impl Fn(&DifferentialForm) -> Result<DifferentialForm>,
) -> Result<ChainMap> {
    let mut maps = Vec::new();
    for n in y.complex.degrees() {
        let nu = n as usize;
        let mut m = QMatrix::zeros(x.complex.dim(n), y.complex.dim(n));
        for (j, e) in y.elems[nu].iter().enumerate() {
            let img = phi(&e.form)?;
            if img.is_zero() {
                continue;
            }
            let hit = x.elems.get(nu).and_then(|es| {
                es.iter()
                    .position(|t| t.chart == e.chart && t.form.equals(&img))
            });
            match hit {
                Some(i) => m.set(i, j, <Q as One>::one()),
                None if e.chart.is_none() => {
                    for (i, c) in x.vector_of(&img)?.into_iter().enumerate() {
                        m.set(i, j, c);
                    }
                }
                None => {
                    return Err(Error::WindowExhausted(format!(
                        "{} on chart {} is not in the model of {}",
                        img,
                        e.chart.as_deref().unwrap_or(""),
                        x.label
                    )))
                }
            }
        }
        maps.push((n, m));
    }
    ChainMap::new(y.complex.clone(), x.complex.clone(), maps)
        .map_err(|e| Error::InvariantViolation(format!("map {} -> {}: {e}", y.label, x.label)))
}

fn scaled(f: ChainMap, k: i64) -> Result<ChainMap> {
    if k == 1 {
        return Ok(f);
    }
    let c = Q::from_integer(k.into());
    let maps = f.source.degrees().map(|n| (n, f.at(n).scale(&c))).collect();
    ChainMap::new(f.source, f.target, maps)
}

/// Realization of one correspondence entry, `K(Y) → K(X)` for `X → Y`.
fn entry_map(
    m: &MotiveComplex,
    e: &Entry,
    (xn, mx): (&str, &Model),
    (yn, my): (&str, &Model),
) -> Result<ChainMap> {
    let (xs, ys) = (&m.spaces[xn], &m.spaces[yn]);
    let base = match &e.map {
        MapRef::Zero => return Ok(ChainMap::zero(&my.complex, &mx.complex)),
        MapRef::Id => {
            if xs.label() != ys.label() {
                return Err(Error::Precondition(format!("'id' between {xn} and {yn}")));
            }
            matching_map(my, mx, |f| Ok(f.clone()))?
        }
        MapRef::Struct => {
            if !is_point(ys) {
                return Err(Error::Precondition(format!(
                    "'struct' needs a point target, got {yn}"
                )));
            }
            let u = unit_vector(mx)?;
            let maps = vec![(0, QMatrix::from_cols(u.len(), &[u]))];
            ChainMap::new(my.complex.clone(), mx.complex.clone(), maps)
                .map_err(|e| Error::InvariantViolation(format!("unit of {xn}: {e}")))?
        }
        MapRef::Proj => {
            let ok =
                matches!(xs, Space::Product(a, b) if a.label() == ys.label() && b.label() == "A1");
            if !ok {
                return Err(Error::Precondition(format!(
                    "'proj' needs {xn} = {yn} x A1"
                )));
            }
            let pres = mx.elems[0][0].form.presentation().clone();
            let images: Vec<RationalFunction> = pres.vars[..my.vars.len()]
                .iter()
                .map(|v| RationalFunction::from_poly(crate::algebra::MultiPoly::var(&pres.vars, v)))
                .collect();
            matching_map(my, mx, |f| f.pullback(&pres, &images))?
        }
        MapRef::Corr(name) => {
            let gamma = &m.correspondences[name];
            match (xs, ys) {
                (Space::Affine(x), Space::Affine(y)) => {
                    if gamma.source() != x || gamma.target() != y {
                        return Err(Error::CompositionMismatch(format!(
                            "'{name}' is not a correspondence {xn} -> {yn}"
                        )));
                    }
                    form_map(my, mx, |w| transfer(gamma, w))?
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "transfer along '{name}' between {xn} and {yn}: only identities and \
                         structure maps touch projective terms"
                    )))
                }
            }
        }
    };
    scaled(base, e.mult)
}

/// One term of the motive, placed in its column.
struct Placed {
    name: String,
    model: Model,
}

/// Realization as a bifiltered complex together with its cohomology record.
#[derive(Clone, Debug)]
pub struct RealizationResult {
    pub record: CohomologyRecord,
    pub complex: Complex,
    pub hodge: Filtration,
    /// Décalage of the term-wise weight filtrations.
    pub weight: Filtration,
    pub shift: i64,
    pub twist: i64,
    pub provenance: Vec<String>,
}

impl RealizationResult {
    pub fn to_json(&self) -> Value {
        let mut v = self.record.to_json();
        v["provenance"] = json!(self.provenance);
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = self.record.to_text();
        for p in &self.provenance {
            s.push_str(&format!("# {p}\n"));
        }
        s
    }
}

struct Built {
    complex: Complex,
    hodge: Filtration,
    weight: Filtration,
    elems: BTreeMap<i64, Vec<Elem>>,
    provenance: Vec<String>,
}

fn build(m: &MotiveComplex, window: usize) -> Result<Built> {
    let degrees: Vec<i64> = m.terms.keys().copied().collect();
    let (kmin, kmax) = match (degrees.first(), degrees.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::Precondition("motive has no terms".into())),
    };
    let mut placed: BTreeMap<i64, Vec<Placed>> = BTreeMap::new();
    // maps[k][i][j]: K(X_{k+1,j}) -> K(X_{k,i})
    let mut maps: BTreeMap<i64, Vec<Vec<ChainMap>>> = BTreeMap::new();
    let mut provenance = Vec::new();
    for k in (kmin..=kmax).rev() {
        let mut col = Vec::new();
        let mut col_maps = Vec::new();
        for (i, name) in m.names(k).iter().enumerate() {
            let space = &m.spaces[name];
            let mut w = window;
            let (model, incoming) = loop {
                let model = space.model(w)?;
                let attempt: Result<Vec<ChainMap>> = placed
                    .get(&(k + 1))
                    .map(|above| {
                        above
                            .iter()
                            .enumerate()
                            .map(|(j, t)| {
                                entry_map(m, &m.entry(k, j, i), (name, &model), (&t.name, &t.model))
                            })
                            .collect()
                    })
                    .unwrap_or_else(|| Ok(Vec::new()));
                match attempt {
                    Ok(v) => break (model, v),
                    Err(Error::WindowExhausted(_)) if w < MAX_TERM_WINDOW => {
                        w = (2 * w).min(MAX_TERM_WINDOW)
                    }
                    Err(e) => return Err(e),
                }
            };
            provenance.push(format!(
                "degree {k}: {name} via {}, window {w}",
                kind_of(space)
            ));
            col.push(Placed {
                name: name.clone(),
                model,
            });
            col_maps.push(incoming);
        }
        placed.insert(k, col);
        maps.insert(k, col_maps);
    }

    let top = placed
        .values()
        .flatten()
        .map(|t| t.model.complex.hi())
        .max()
        .unwrap_or(0)
        .max(0);
    let column = |k: i64| -> Complex {
        placed[&k]
            .iter()
            .fold(Complex::zero().padded(0, top), |acc, t| {
                acc.direct_sum(&t.model.complex.padded(0, top))
            })
    };
    // offsets of term i of degree k inside its column at degree q
    let offset = |k: i64, i: usize, q: i64| -> usize {
        placed[&k][..i].iter().map(|t| t.model.complex.dim(q)).sum()
    };
    let columns: Vec<Complex> = (kmin..=kmax).rev().map(column).collect();
    let mut horizontal = Vec::new();
    for k in ((kmin + 1)..=kmax).rev() {
        let (src, tgt) = (column(k), column(k - 1));
        let mut ms = Vec::new();
        for q in 0..=top {
            let mut mat = QMatrix::zeros(tgt.dim(q), src.dim(q));
            for (i, row) in maps[&(k - 1)].iter().enumerate() {
                for (j, f) in row.iter().enumerate() {
                    let block = f.at(q);
                    let (r0, c0) = (offset(k - 1, i, q), offset(k, j, q));
                    for a in 0..block.rows() {
                        for b in 0..block.cols() {
                            mat.set(r0 + a, c0 + b, block.get(a, b).clone());
                        }
                    }
                }
            }
            ms.push((q, mat));
        }
        horizontal.push(ChainMap::new(src, tgt, ms).map_err(|e| {
            Error::InvariantViolation(format!("horizontal map from degree {k}: {e}"))
        })?);
    }
    let dc = DoubleComplex {
        p_lo: -kmax,
        columns,
        horizontal,
    };
    let tot = total_complex(&dc)?;

    let single = placed.values().map(Vec::len).sum::<usize>() == 1;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in placed.values().flatten() {
        *counts.entry(t.name.as_str()).or_default() += 1;
    }
    let term_label = |k: i64, i: usize| -> String {
        let n = &placed[&k][i].name;
        if counts[n.as_str()] > 1 {
            format!("{n}[{k},{i}]")
        } else {
            n.clone()
        }
    };

    let hodges: BTreeMap<(i64, usize), Filtration> = placed
        .iter()
        .flat_map(|(&k, ts)| {
            ts.iter()
                .enumerate()
                .map(move |(i, t)| ((k, i), t.model.hodge()))
        })
        .collect();
    let weights: BTreeMap<(i64, usize), Filtration> = placed
        .iter()
        .flat_map(|(&k, ts)| {
            ts.iter()
                .enumerate()
                .map(move |(i, t)| Ok(((k, i), decalage(&t.model.complex, &t.model.weight())?)))
        })
        .collect::<Result<_>>()?;
    let span = |fs: &BTreeMap<(i64, usize), Filtration>| -> (i64, i64) {
        fs.values()
            .map(Filtration::range)
            .fold((i64::MAX, i64::MIN), |(a, b), (c, d)| (a.min(c), b.max(d)))
    };
    let (flo, fhi) = span(&hodges);
    let (wlo, whi) = span(&weights);

    let mut elems = BTreeMap::new();
    let mut dims = BTreeMap::new();
    let mut fsteps = BTreeMap::new();
    let mut wsteps = BTreeMap::new();
    for n in tot.degrees() {
        let total = tot.dim(n);
        let mut es = Vec::new();
        let mut fvec: Vec<Vec<Vec<Q>>> = vec![Vec::new(); (fhi - flo + 1) as usize];
        let mut wvec: Vec<Vec<Vec<Q>>> = vec![Vec::new(); (whi - wlo + 1) as usize];
        for (p, q, off, _) in tot_layout(&dc, n) {
            let k = -p;
            let mut local = off;
            for (i, t) in placed[&k].iter().enumerate() {
                let d = t.model.complex.dim(q);
                if d == 0 {
                    continue;
                }
                for e in &t.model.elems[q as usize] {
                    let mut e = e.clone();
                    if !single {
                        let tl = term_label(k, i);
                        e.chart = Some(match e.chart {
                            Some(c) => format!("{tl}.{c}"),
                            None => tl,
                        });
                    }
                    es.push(e);
                }
                let embed = |s: Subspace| -> Vec<Vec<Q>> {
                    s.basis()
                        .iter()
                        .map(|b| {
                            let mut v = vec![<Q as Zero>::zero(); total];
                            v[local..local + d].clone_from_slice(b);
                            v
                        })
                        .collect()
                };
                for (x, idx) in (flo..=fhi).enumerate() {
                    fvec[x].extend(embed(hodges[&(k, i)].at(q, idx)));
                }
                for (x, idx) in (wlo..=whi).enumerate() {
                    wvec[x].extend(embed(weights[&(k, i)].at(q, idx)));
                }
                local += d;
            }
        }
        elems.insert(n, es);
        dims.insert(n, total);
        fsteps.insert(n, fvec.iter().map(|b| Subspace::span(total, b)).collect());
        wsteps.insert(n, wvec.iter().map(|b| Subspace::span(total, b)).collect());
    }
    let hodge = Filtration::new(Direction::Decreasing, flo, fhi, dims.clone(), fsteps)?;
    let weight = Filtration::new(Direction::Increasing, wlo, whi, dims, wsteps)?;
    hodge
        .check_compatible(&tot)
        .map_err(|e| Error::InvariantViolation(format!("F on the total complex: {e}")))?;
    weight
        .check_compatible(&tot)
        .map_err(|e| Error::InvariantViolation(format!("Dec W on the total complex: {e}")))?;
    Ok(Built {
        complex: tot,
        hodge,
        weight,
        elems,
        provenance,
    })
}

fn record_of(m: &MotiveComplex, b: &Built, window: usize) -> CohomologyRecord {
    let h = b
        .complex
        .degrees()
        .map(|n| {
            let reps = canonical_representatives(&b.complex, n);
            degree_record(
                n + m.shift,
                reps.iter()
                    .map(|v| describe_vector(&b.elems[&n], v))
                    .collect(),
                b.hodge.range(),
                |p| b.hodge.on_cohomology(&b.complex, n, p),
                b.weight.range(),
                |mm| b.weight.on_cohomology(&b.complex, n, mm),
            )
        })
        .collect();
    CohomologyRecord {
        label: m.label.clone(),
        window,
        h,
    }
}

/// Realize a motive: stable under enlarging the window by 1 and 2, then
/// shifted and Tate-twisted as the motive asks.
pub fn realize(m: &MotiveComplex, window: usize) -> Result<RealizationResult> {
    let mut n = window.max(1);
    let mut prev: Vec<(Built, CohomologyRecord)> = Vec::new();
    while n <= MAX_WINDOW + 2 {
        let b = build(m, n)?;
        let r = record_of(m, &b, n);
        prev.push((b, r));
        let k = prev.len();
        if k >= 3
            && prev[k - 3].1.same_invariants(&prev[k - 2].1)
            && prev[k - 2].1.same_invariants(&prev[k - 1].1)
        {
            let (b, r) = prev.swap_remove(k - 3);
            let mut provenance = b.provenance;
            provenance.push(format!(
                "stable at window {} (checked at +1 and +2)",
                r.window
            ));
            let untwisted = RealizationResult {
                record: r,
                complex: b.complex.shift(-m.shift),
                hodge: reindex_degrees(&b.hodge, m.shift),
                weight: reindex_degrees(&b.weight, m.shift),
                shift: m.shift,
                twist: 0,
                provenance,
            };
            return Ok(tate_twist(&untwisted, m.twist));
        }
        n += 1;
    }
    Err(Error::WindowExhausted(format!(
        "realization of {} did not stabilize for windows {window}..={}",
        m.label,
        MAX_WINDOW + 2
    )))
}

/// Move the degree-`n` steps to degree `n + s`.
fn reindex_degrees(f: &Filtration, s: i64) -> Filtration {
    let (lo, hi) = f.range();
    let degrees: Vec<i64> = (-64..=64).filter(|&n| f.ambient(n) > 0).collect();
    let dims = degrees.iter().map(|&n| (n + s, f.ambient(n))).collect();
    let steps = degrees
        .iter()
        .map(|&n| (n + s, (lo..=hi).map(|i| f.at(n, i)).collect()))
        .collect();
    Filtration::new(f.direction(), lo, hi, dims, steps).expect("reindexing keeps flags monotone")
}

/// `F` indices move by `n`, `W` indices by `2n`.
pub fn tate_twist(r: &RealizationResult, n: i64) -> RealizationResult {
    let mut out = r.clone();
    if n == 0 {
        return out;
    }
    out.record = r.record.twisted(n);
    out.hodge = r.hodge.reindexed(n);
    out.weight = r.weight.reindexed(2 * n);
    out.twist += n;
    out.provenance.push(format!("Tate twist by {n}"));
    out
}

/// Matrices of `γ^* : H^n(Y) → H^n(X)` in canonical representatives, for
/// `n = 0, 1`, the source window grown until the transfer fits.
pub fn transfer_on_cohomology(gamma: &FiniteCorrespondence, window: usize) -> Result<Vec<QMatrix>> {
    let y = Space::Affine(gamma.target().clone()).model(window)?;
    let xs = Space::Affine(gamma.source().clone());
    let mut w = window;
    let (x, f) = loop {
        let x = xs.model(w)?;
        match form_map(&y, &x, |o| transfer(gamma, o)) {
            Ok(f) => break (x, f),
            Err(Error::WindowExhausted(_)) if w < MAX_TERM_WINDOW => {
                w = (2 * w).min(MAX_TERM_WINDOW)
            }
            Err(e) => return Err(e),
        }
    };
    (0..=1)
        .map(|n| {
            let reps = canonical_representatives(&y.complex, n);
            let rows = canonical_representatives(&x.complex, n).len();
            let cols: Vec<Vec<Q>> = reps
                .iter()
                .map(|r| class_in(&x.complex, n, &f.at(n).apply(r)))
                .collect::<Result<_>>()?;
            Ok(if cols.is_empty() {
                QMatrix::zeros(rows, 0)
            } else {
                QMatrix::from_cols(rows, &cols)
            })
        })
        .collect()
}

/// The Künneth comparison for two single-term motives.
#[derive(Clone, Debug)]
pub struct TensorReport {
    pub kunneth: Kunneth,
    pub x: CohomologyRecord,
    pub y: CohomologyRecord,
    pub product: CohomologyRecord,
}

impl TensorReport {
    /// Dimensions convolve, the cross product is bijective and levels add.
    pub fn holds(&self) -> bool {
        let k = &self.kunneth;
        k.product == k.convolution && k.cross_product_iso && k.levels_add
    }
}

pub fn check_tensor(x: &Space, y: &Space, window: usize) -> Result<TensorReport> {
    for s in [x, y] {
        if !matches!(s, Space::Affine(_)) {
            return Err(Error::Unsupported(format!(
                "tensor check on {}: single-term affine motives only",
                s.label()
            )));
        }
    }
    let kunneth = kunneth(x, y, window)?;
    let prod = Space::Product(Box::new(x.clone()), Box::new(y.clone()));
    Ok(TensorReport {
        kunneth,
        x: realize(&MotiveComplex::single(x.clone()), window)?.record,
        y: realize(&MotiveComplex::single(y.clone()), window)?.record,
        product: realize(&MotiveComplex::single(prod), window)?.record,
    })
}

#[derive(Clone, Debug)]
pub struct DescentReport {
    pub cone: CohomologyRecord,
    pub acyclic: bool,
    /// Classes of `X × 𝔸¹` reduced to `pr^*ω₀ + dη` with an exact check.
    pub reductions: usize,
}

/// Realize `[X × 𝔸¹ → X]` and check it is acyclic; every representative
/// class of `X × 𝔸¹` is also reduced along `t` explicitly.
pub fn check_homotopy_descent(x: &Space, window: usize) -> Result<DescentReport> {
    let cone = realize(&MotiveComplex::homotopy_cone(x.clone()), window)?;
    let acyclic = cone.record.dims().iter().all(|&d| d == 0);
    let prod = Space::Product(Box::new(x.clone()), Box::new(a1_space())).model(window)?;
    let t = prod.vars.last().cloned().unwrap_or_default();
    let mut reductions = 0;
    for n in prod.complex.degrees() {
        for r in canonical_representatives(&prod.complex, n) {
            let omega = prod.form_of(n as usize, &r);
            homotopy_reduce(&omega, &t)?;
            reductions += 1;
        }
    }
    Ok(DescentReport {
        cone: cone.record,
        acyclic,
        reductions,
    })
}

/// Realization of a single space at the default window.
pub fn realize_space(space: &Space) -> Result<RealizationResult> {
    realize(&MotiveComplex::single(space.clone()), DEFAULT_WINDOW)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn motive(v: Value) -> MotiveComplex {
        MotiveComplex::from_json(&v).unwrap()
    }

    #[test]
    fn single_gm_matches_derham() {
        let gm = Space::from_json(&json!("Gm")).unwrap();
        let r = realize_space(&gm).unwrap();
        let direct = crate::derham::cohomology(&gm, DEFAULT_WINDOW).unwrap();
        assert!(r.record.same_invariants(&direct));
        assert_eq!(r.record.degree(1).unwrap().basis, vec!["dz/z"]);
    }

    #[test]
    fn tate_object() {
        let m = motive(
            json!({"terms": {"0": ["P1"], "1": ["pt"]}, "d": {"0": [["struct"]]}, "shift": -2}),
        );
        let r = realize(&m, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.record.dims().iter().sum::<usize>(), 1);
        let h0 = r.record.degree(0).unwrap();
        assert_eq!(h0.dim, 1);
        assert_eq!((h0.hodge_step(1), h0.hodge_step(2)), (1, 0));
        assert_eq!((h0.weight_step(1), h0.weight_step(2)), (0, 1));
        let unit = realize_space(&Space::from_json(&json!("pt")).unwrap()).unwrap();
        assert!(tate_twist(&unit, 1).record.same_invariants(&r.record));
    }

    #[test]
    fn mayer_vietoris_motive_of_p1() {
        let m = motive(json!({
            "correspondences": {
                "i": {"graph": {"source": "Gm", "target": "A1", "images": ["z"]}},
                "j": {"graph": {"source": "Gm", "target": "A1", "images": ["1/z"]}}
            },
            "terms": {"-1": ["Gm"], "0": ["A1", "A1"]},
            "d": {"-1": [["i"], ["-j"]]}
        }));
        let r = realize(&m, DEFAULT_WINDOW).unwrap();
        let p1 =
            crate::derham::cohomology(&Space::from_json(&json!("P1")).unwrap(), DEFAULT_WINDOW)
                .unwrap();
        assert!(r.record.same_invariants(&p1.shifted(0)));
    }

    #[test]
    fn twists_invert() {
        let r = realize_space(&Space::from_json(&json!("A1-{0,1}")).unwrap()).unwrap();
        assert_eq!(tate_twist(&tate_twist(&r, 1), -1).record, r.record);
        assert_eq!(tate_twist(&r, 0).record, r.record);
    }

    #[test]
    fn nonzero_square_rejected() {
        let bad = MotiveComplex::from_json(&json!({
            "terms": {"0": ["Gm"], "1": ["Gm"], "2": ["Gm"]},
            "d": {"0": [["id"]], "1": [["id"]]}
        }));
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn transfer_into_projective_term_unsupported() {
        let m = motive(json!({
            "correspondences": {"f": {"graph": {"source": "Gm", "target": "A1", "images": ["z"]}}},
            "terms": {"0": ["P1"], "1": ["A1"]},
            "d": {"0": [["f"]]}
        }));
        assert!(matches!(
            realize(&m, DEFAULT_WINDOW),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn homotopy_descent_gm() {
        let rep = check_homotopy_descent(&Space::from_json(&json!("Gm")).unwrap(), 3).unwrap();
        assert!(rep.acyclic);
        assert_eq!(rep.reductions, 2);
    }

    #[test]
    fn tensor_gm_gm() {
        let gm = Space::from_json(&json!("Gm")).unwrap();
        let rep = check_tensor(&gm, &gm, 3).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.product.dims(), vec![1, 2, 1]);
        assert_eq!(rep.product.degree(2).unwrap().weight_step(3), 0);
        assert_eq!(rep.product.degree(2).unwrap().weight_step(4), 1);
    }

    #[test]
    fn square_map_on_h1() {
        let gm = AffineCurveScheme::builtin("Gm").unwrap();
        let sq = graph(&Morphism::parse(&gm, &gm, &["z^2"]).unwrap()).unwrap();
        let m = transfer_on_cohomology(&sq, DEFAULT_WINDOW).unwrap();
        assert_eq!(m[1], QMatrix::from_i64(&[&[2]]));
        let t = transfer_on_cohomology(&sq.transpose().unwrap(), DEFAULT_WINDOW).unwrap();
        assert_eq!(t[1], QMatrix::from_i64(&[&[1]]));
    }
}
