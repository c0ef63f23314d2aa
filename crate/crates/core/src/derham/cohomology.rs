//! Spaces with de Rham models, window stability, Mayer–Vietoris, Künneth
//! and the homotopy reduction along `𝔸¹`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde_json::Value;

use super::cech::p1_model;
use super::hyperelliptic::{hyperelliptic_closure_model, hyperelliptic_model};
use super::model::{form_map, product_model, tensor_chain_map, tensor_layout, Model};
use super::rational::{etale_model, point_model, rational_model};
use super::record::CohomologyRecord;
use crate::algebra::{MultiPoly, QMatrix, QPoly, RatFun, RationalFunction, Q};
use crate::error::{Error, Result};
use crate::forms::{DifferentialForm, KaehlerPresentation, LogDivisor, P1Point};
use crate::homological::{tot_layout, total_complex, ChainMap, Complex, DoubleComplex};
use crate::varieties::{AffineCurveScheme, SchemeKind};

pub const DEFAULT_WINDOW: usize = 16;
/// Largest window tried before giving up on stability.
pub const MAX_WINDOW: usize = 40;

/// Model of an affine curve of the supported classes.
pub fn affine_model(x: &AffineCurveScheme, window: usize) -> Result<Model> {
    match x.kind() {
        SchemeKind::Point => Ok(point_model()),
        SchemeKind::Etale { f, .. } => etale_model(x.label(), &x.vars()[0], f),
        SchemeKind::Line { .. } => {
            let pts = x.rational_punctures().ok_or_else(|| {
                Error::Unsupported(format!(
                    "{}: only rational points may be removed from 𝔸¹",
                    x.label()
                ))
            })?;
            rational_model(x.label(), &x.vars()[0], &pts, window)
        }
        SchemeKind::Plane { .. } => hyperelliptic_model(x, window),
    }
}

/// Something whose cohomology can be computed.
#[derive(Clone, Debug)]
pub enum Space {
    Affine(AffineCurveScheme),
    /// `P¹` with a logarithmic boundary.
    P1(LogDivisor),
    /// The smooth completion of an odd-degree hyperelliptic curve.
    Closure(AffineCurveScheme),
    Product(Box<Space>, Box<Space>),
}

impl Space {
    /// A scheme (object or builtin label), `"P1"`, a divisor
    /// `{"model": "P1", "points": [...]}`, `{"closure": scheme}` or
    /// `{"product": [a, b]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        if v.as_str() == Some("P1") {
            return Ok(Space::P1(LogDivisor::empty("z")));
        }
        if let Some(obj) = v.as_object() {
            if obj.get("model").is_some() {
                let var = obj.get("var").and_then(Value::as_str).unwrap_or("z");
                return Ok(Space::P1(LogDivisor::from_json(v, var)?));
            }
            if let Some(c) = obj.get("closure") {
                return Ok(Space::Closure(AffineCurveScheme::from_json(c)?));
            }
            if let Some(p) = obj.get("product") {
                let parts = p
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Precondition("'product' lists two spaces".into()))?;
                return Ok(Space::Product(
                    Box::new(Space::from_json(&parts[0])?),
                    Box::new(Space::from_json(&parts[1])?),
                ));
            }
        }
        Ok(Space::Affine(AffineCurveScheme::from_json(v)?))
    }

    pub fn label(&self) -> String {
        match self {
            Space::Affine(x) => x.label().to_string(),
            Space::P1(d) if d.points().is_empty() => "P1".into(),
            Space::P1(d) => {
                let ps: Vec<String> = d.points().iter().map(|p| p.to_string()).collect();
                format!("(P1,{{{}}})", ps.join(","))
            }
            Space::Closure(x) => format!("closure of {}", x.label()),
            Space::Product(a, b) => format!("{}x{}", a.label(), b.label()),
        }
    }

    pub fn model(&self, window: usize) -> Result<Model> {
        match self {
            Space::Affine(x) => affine_model(x, window),
            Space::P1(d) => p1_model(d, window),
            Space::Closure(x) => hyperelliptic_closure_model(x, window),
            Space::Product(a, b) => product_model(&a.model(window)?, &b.model(window)?),
        }
    }
}

/// Compute at windows `N, N+1, N+2` and return the first window whose
/// record agrees with the next two; `WindowExhausted` past [`MAX_WINDOW`].
pub fn stable_model(
    build: impl Fn(usize) -> Result<Model>,
    window: usize,
) -> Result<(Model, CohomologyRecord)> {
    let mut n = window.max(1);
    let mut prev: Vec<(Model, CohomologyRecord)> = Vec::new();
    while n <= MAX_WINDOW + 2 {
        let m = build(n)?;
        let r = m.record();
        prev.push((m, r));
        if prev.len() >= 3 {
            let k = prev.len();
            if prev[k - 3].1.same_invariants(&prev[k - 2].1)
                && prev[k - 2].1.same_invariants(&prev[k - 1].1)
            {
                return Ok(prev.swap_remove(k - 3));
            }
        }
        n += 1;
    }
    Err(Error::WindowExhausted(format!(
        "cohomology did not stabilize for windows {window}..={}",
        MAX_WINDOW + 2
    )))
}

/// Cohomology record of a space at the first stable window `>= window`.
pub fn cohomology(space: &Space, window: usize) -> Result<CohomologyRecord> {
    let mut r = stable_model(|n| space.model(n), window)?.1;
    r.label = space.label();
    Ok(r)
}

pub fn affine_cohomology(x: &AffineCurveScheme, window: usize) -> Result<CohomologyRecord> {
    cohomology(&Space::Affine(x.clone()), window)
}

/// Hypercohomology of `(P¹, D)` or of the completion of a hyperelliptic curve.
pub fn cech_hypercohomology(space: &Space, window: usize) -> Result<CohomologyRecord> {
    match space {
        Space::P1(_) | Space::Closure(_) => cohomology(space, window),
        _ => Err(Error::Precondition(
            "Čech models exist for P1 and hyperelliptic completions".into(),
        )),
    }
}

/// Record the dimension of `H^n` for every stored degree, padded to `len`.
fn dims_padded(c: &Complex, len: usize) -> Vec<usize> {
    (0..len as i64).map(|n| c.cohomology_dim(n)).collect()
}

// ---------------------------------------------------------------- opens of P¹

/// An open subset `P¹ ∖ M` for a finite set `M` of rational points.
#[derive(Clone, Debug, PartialEq)]
pub struct P1Open {
    missing: BTreeSet<P1Point>,
}

impl P1Open {
    pub fn new(missing: impl IntoIterator<Item = P1Point>) -> Self {
        P1Open {
            missing: missing.into_iter().collect(),
        }
    }

    pub fn whole() -> Self {
        Self::new([])
    }

    pub fn missing(&self) -> &BTreeSet<P1Point> {
        &self.missing
    }

    pub fn contains(&self, o: &P1Open) -> bool {
        self.missing.is_subset(&o.missing)
    }

    pub fn intersect(&self, o: &P1Open) -> P1Open {
        P1Open {
            missing: self.missing.union(&o.missing).cloned().collect(),
        }
    }

    pub fn label(&self) -> String {
        if self.missing.is_empty() {
            return "P1".into();
        }
        let ps: Vec<String> = self.missing.iter().map(ToString::to_string).collect();
        format!("P1-{{{}}}", ps.join(","))
    }

    /// The affine coordinate `s` with `z = φ(s)`, and the punctures in `s`.
    fn chart(&self) -> Option<(String, RatFun, Vec<Q>)> {
        let one = <Q as One>::one();
        let inv = |a: &Q| one.clone() / a;
        if self.missing.contains(&P1Point::Infinity) {
            let pts = self
                .missing
                .iter()
                .filter_map(|p| match p {
                    P1Point::Finite(a) => Some(a.clone()),
                    P1Point::Infinity => None,
                })
                .collect();
            return Some(("z".into(), RatFun::var(), pts));
        }
        let P1Point::Finite(a) = self.missing.iter().next()?.clone() else {
            return None;
        };
        // s = 1/(z - a), z = a + 1/s; ∞ ↦ 0
        let phi = RatFun::new(
            QPoly::new(vec![one.clone(), a.clone()]),
            QPoly::new(vec![Q::zero(), one.clone()]),
        );
        let mut pts: Vec<Q> = vec![Q::zero()];
        for p in &self.missing {
            if let P1Point::Finite(b) = p {
                if *b != a {
                    pts.push(inv(&(b - &a)));
                }
            }
        }
        pts.sort();
        let pts = pts.into_iter().filter(|_| true).collect::<Vec<_>>();
        // ∞ is in the open, so s = 0 is not a puncture
        let pts: Vec<Q> = pts.into_iter().filter(|s| !s.is_zero()).collect();
        Some(("w".into(), phi, pts))
    }

    pub fn model(&self, window: usize) -> Result<Model> {
        match self.chart() {
            None => p1_model(&LogDivisor::empty("z"), window),
            Some((var, _, pts)) => rational_model(&self.label(), &var, &pts, window),
        }
    }

    /// `z` in the chart coordinate (or `None` for `P¹`).
    fn z_in_chart(&self) -> Option<(String, RatFun)> {
        self.chart().map(|(v, phi, _)| (v, phi))
    }
}

fn ratfun_in(r: &RatFun, var: &str) -> RationalFunction {
    RationalFunction::from_ratfun(r, var)
}

/// Restriction `K(big) -> K(small)` for opens of `P¹`.
pub fn restriction(big: &P1Open, mb: &Model, small: &P1Open, ms: &Model) -> Result<ChainMap> {
    if !big.contains(small) {
        return Err(Error::Precondition(format!(
            "{} is not contained in {}",
            small.label(),
            big.label()
        )));
    }
    match big.z_in_chart() {
        Some((_, zb)) => {
            let (svar, zs) = small
                .z_in_chart()
                .ok_or_else(|| Error::Precondition("restriction to P1 itself".into()))?;
            let spres = KaehlerPresentation::free(&[svar.clone()]);
            // big coordinate as a function of z, then of s
            let b_of_z = invert_mobius(&zb)?;
            let b_of_s = b_of_z
                .compose(&zs)
                .ok_or_else(|| Error::InvariantViolation("coordinate change has a pole".into()))?;
            let img = ratfun_in(&b_of_s, &svar);
            form_map(mb, ms, |f| f.pullback(&spres, std::slice::from_ref(&img)))
        }
        None => {
            let chart = p1_chart(small).ok_or_else(|| {
                Error::Unsupported(format!(
                    "restricting P1 to {}: the open must miss 0 or ∞",
                    small.label()
                ))
            })?;
            let mut maps = Vec::new();
            for n in mb.complex.degrees() {
                let mut m = QMatrix::zeros(ms.complex.dim(n), mb.complex.dim(n));
                for (j, e) in mb.elems[n as usize].iter().enumerate() {
                    if e.chart.as_deref() != Some(chart) {
                        continue;
                    }
                    for (i, c) in pull_to(&e.form, small, ms)?.into_iter().enumerate() {
                        m.set(i, j, c);
                    }
                }
                maps.push((n, m));
            }
            ChainMap::new(mb.complex.clone(), ms.complex.clone(), maps)
                .map_err(|e| Error::InvariantViolation(format!("restriction: {e}")))
        }
    }
}

/// The Čech chart of `P¹` used to restrict to `o`.
fn p1_chart(o: &P1Open) -> Option<&'static str> {
    if o.missing.contains(&P1Point::Infinity) {
        Some("A")
    } else if o.missing.contains(&P1Point::Finite(Q::zero())) {
        Some("B")
    } else {
        None
    }
}

/// Coordinates in `ms` of a form written in the coordinate `z` of `P¹`.
fn pull_to(f: &DifferentialForm, small: &P1Open, ms: &Model) -> Result<Vec<Q>> {
    let (svar, zs) = small
        .z_in_chart()
        .ok_or_else(|| Error::Precondition("restriction to P1 itself".into()))?;
    let spres = KaehlerPresentation::free(&[svar.clone()]);
    let g = f.pullback(&spres, &[ratfun_in(&zs, &svar)])?;
    if g.is_zero() {
        return Ok(vec![Q::zero(); ms.complex.dim(g.degree() as i64)]);
    }
    ms.vector_of(&g)
}

/// Inverse of `z = (a s + b)/(c s + d)`.
fn invert_mobius(r: &RatFun) -> Result<RatFun> {
    let (n, d) = (r.num(), r.den());
    if n.deg() > 1 || d.deg() > 1 {
        return Err(Error::InvariantViolation(
            "not a Möbius transformation".into(),
        ));
    }
    let (a, b) = (n.coeff(1), n.coeff(0));
    let (c, dd) = (d.coeff(1), d.coeff(0));
    // s = (d z - b)/(-c z + a)
    Ok(RatFun::new(
        QPoly::new(vec![-b, dd]),
        QPoly::new(vec![a, -c]),
    ))
}

/// One slot of a long exact sequence with the ranks of the maps in and out.
#[derive(Clone, Debug, PartialEq)]
pub struct Slot {
    pub name: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composite_zero: bool,
}

impl Slot {
    pub fn exact(&self) -> bool {
        self.composite_zero && self.rank_in + self.rank_out == self.dim
    }
}

#[derive(Clone, Debug)]
pub struct MayerVietoris {
    pub x: Vec<usize>,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub uv: Vec<usize>,
    pub slots: Vec<Slot>,
    /// `K(X) → Cone` is a quasi-isomorphism.
    pub descent: bool,
}

impl MayerVietoris {
    pub fn exact(&self) -> bool {
        self.descent && self.slots.iter().all(Slot::exact)
    }
}

/// The Mayer–Vietoris sequence of a cover `X = U ∪ V` by opens of `P¹`.
///
/// The cone `C` of `K(U) ⊕ K(V) → K(U ∩ V)` carries an exact long sequence;
/// exactness is certified slot by slot from ranks, and `K(X) → C` is checked
/// to be a quasi-isomorphism so that the sequence is the one for `X`.
pub fn mayer_vietoris(x: &P1Open, u: &P1Open, v: &P1Open, window: usize) -> Result<MayerVietoris> {
    if !x.contains(u) || !x.contains(v) {
        return Err(Error::Precondition("U and V must be opens of X".into()));
    }
    let covered: BTreeSet<P1Point> = u.missing.intersection(&v.missing).cloned().collect();
    if covered != x.missing {
        return Err(Error::Precondition(format!(
            "{} and {} do not cover {}",
            u.label(),
            v.label(),
            x.label()
        )));
    }
    let w = u.intersect(v);
    let (mx, mu, mv, mw) = (
        x.model(window)?,
        u.model(window)?,
        v.model(window)?,
        w.model(window)?,
    );
    let r_xu = restriction(x, &mx, u, &mu)?;
    let r_xv = restriction(x, &mx, v, &mv)?;
    let r_uw = restriction(u, &mu, &w, &mw)?;
    let r_vw = restriction(v, &mv, &w, &mw)?;
    let col0 = mu.complex.direct_sum(&mv.complex);
    let col1 = mw.complex.clone();
    let degs: Vec<i64> = (0..=col0.hi().max(col1.hi())).collect();
    let s_maps = degs
        .iter()
        .map(|&n| (n, r_uw.at(n).scale(&-<Q as One>::one()).hstack(&r_vw.at(n))))
        .collect();
    let s = ChainMap::new(col0.clone(), col1.clone(), s_maps)?;
    let dc = DoubleComplex {
        p_lo: 0,
        columns: vec![col0.clone(), col1.clone()],
        horizontal: vec![s.clone()],
    };
    let cone = total_complex(&dc)?;
    let block = |n: i64, p: i64| tot_layout(&dc, n).into_iter().find(|b| b.0 == p);
    let mut phi_maps = Vec::new();
    let mut pi_maps = Vec::new();
    let mut iota_maps = Vec::new();
    let shifted = col1.shift(-1);
    for n in cone.degrees() {
        let mut phi = QMatrix::zeros(cone.dim(n), mx.complex.dim(n));
        let mut pi = QMatrix::zeros(col0.dim(n), cone.dim(n));
        let mut iota = QMatrix::zeros(cone.dim(n), shifted.dim(n));
        if let Some((_, _, off, len)) = block(n, 0) {
            let stacked = r_xu.at(n).vstack(&r_xv.at(n));
            for i in 0..len {
                for j in 0..mx.complex.dim(n) {
                    phi.set(off + i, j, stacked.get(i, j).clone());
                }
                pi.set(i, off + i, <Q as One>::one());
            }
        }
        if let Some((_, _, off, len)) = block(n, 1) {
            for i in 0..len {
                iota.set(off + i, i, <Q as One>::one());
            }
            // on P¹ the overlap component of a Čech cochain restricts to U ∩ V
            if let (None, Some(cu), Some(cv)) = (x.z_in_chart(), p1_chart(u), p1_chart(v)) {
                if cu != cv {
                    let sign = if cu == "A" {
                        <Q as One>::one()
                    } else {
                        -<Q as One>::one()
                    };
                    for (j, e) in mx.elems[n as usize].iter().enumerate() {
                        if e.chart.as_deref() != Some("AB") {
                            continue;
                        }
                        for (i, c) in pull_to(&e.form, &w, &mw)?.into_iter().enumerate() {
                            phi.set(off + i, j, &sign * c);
                        }
                    }
                }
            }
        }
        phi_maps.push((n, phi));
        pi_maps.push((n, pi));
        iota_maps.push((n, iota));
    }
    let phi = ChainMap::new(mx.complex.clone(), cone.clone(), phi_maps)
        .map_err(|e| Error::InvariantViolation(format!("augmentation: {e}")))?;
    let pi = ChainMap::new(cone.clone(), col0.clone(), pi_maps)
        .map_err(|e| Error::InvariantViolation(format!("projection: {e}")))?;
    let iota = ChainMap::new(shifted.clone(), cone.clone(), iota_maps)
        .map_err(|e| Error::InvariantViolation(format!("inclusion: {e}")))?;
    let top = cone.hi().max(col0.hi()) + 1;
    let descent = (0..=top).all(|n| {
        let m = phi.on_cohomology(n);
        m.rows() == m.cols() && m.rank() == m.rows()
    });
    let mut slots = Vec::new();
    let rank = |m: &QMatrix| {
        if m.rows() == 0 || m.cols() == 0 {
            0
        } else {
            m.rank()
        }
    };
    let zero = |a: &QMatrix, b: &QMatrix| {
        a.rows() == 0 || b.cols() == 0 || a.cols() == 0 || a.mul(b).is_zero()
    };
    for n in 0..=top {
        let (io, p, sm, io_next) = (
            iota.on_cohomology(n),
            pi.on_cohomology(n),
            s.on_cohomology(n),
            iota.on_cohomology(n + 1),
        );
        slots.push(Slot {
            name: format!("H^{n}(X)"),
            dim: cone.cohomology_dim(n),
            rank_in: rank(&io),
            rank_out: rank(&p),
            composite_zero: zero(&p, &io),
        });
        slots.push(Slot {
            name: format!("H^{n}(U)+H^{n}(V)"),
            dim: col0.cohomology_dim(n),
            rank_in: rank(&p),
            rank_out: rank(&sm),
            composite_zero: zero(&sm, &p),
        });
        slots.push(Slot {
            name: format!("H^{n}(UV)"),
            dim: col1.cohomology_dim(n),
            rank_in: rank(&sm),
            rank_out: rank(&io_next),
            composite_zero: zero(&io_next, &sm),
        });
    }
    let len = (top + 1) as usize;
    Ok(MayerVietoris {
        x: dims_padded(&mx.complex, len),
        u: dims_padded(&mu.complex, len),
        v: dims_padded(&mv.complex, len),
        uv: dims_padded(&mw.complex, len),
        slots,
        descent,
    })
}

// ---------------------------------------------------------------- Künneth

#[derive(Clone, Debug)]
pub struct Kunneth {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub product: Vec<usize>,
    pub convolution: Vec<usize>,
    /// The cross product `H(A) ⊗ H(B) → H(A × B)` is bijective.
    pub cross_product_iso: bool,
    /// `(F, W)` levels of each `a × b` are the sums of the levels of `a` and `b`.
    pub levels_add: bool,
}

/// Largest `p` with the class of `v` in `F^p H^n`, smallest `m` with it in
/// `W_m H^n` (décalage indexing).
pub fn class_levels(m: &Model, n: i64, v: &[Q]) -> (i64, i64) {
    let z = m.complex.cocycles(n);
    let b = m.complex.coboundaries(n);
    let in_step = |s: crate::algebra::Subspace| z.intersect(&s).sum(&b).contains(v);
    let f = m.hodge();
    let w = m.weight();
    let (flo, fhi) = m.hodge_range();
    let p = (flo..=fhi + 1)
        .rev()
        .find(|&p| in_step(f.at(n, p)))
        .unwrap_or(flo);
    let (wlo, whi) = w.range();
    let mm = (wlo + n..=whi + n)
        .find(|&mm| in_step(w.at(n, mm - n)))
        .unwrap_or(whi + n);
    (p, mm)
}

pub fn kunneth(a: &Space, b: &Space, window: usize) -> Result<Kunneth> {
    let (ma, mb) = (a.model(window)?, b.model(window)?);
    let mp = product_model(&ma, &mb)?;
    let len = (mp.top() + 1) as usize;
    let da = dims_padded(&ma.complex, len);
    let db = dims_padded(&mb.complex, len);
    let conv: Vec<usize> = (0..len)
        .map(|n| (0..=n).map(|i| da[i] * db[n - i]).sum())
        .collect();
    let product = dims_padded(&mp.complex, len);
    let mut iso = true;
    let mut levels_add = true;
    for n in 0..len as i64 {
        let layout = tensor_layout(&ma.complex, &mb.complex, n);
        let mut classes = Vec::new();
        for &(i, off) in &layout {
            let j = n - i;
            let db_len = mb.complex.dim(j);
            for ra in ma.representatives(i) {
                for rb in mb.representatives(j) {
                    let mut v = vec![Q::zero(); mp.complex.dim(n)];
                    for (k, x) in ra.iter().enumerate() {
                        for (l, y) in rb.iter().enumerate() {
                            if !x.is_zero() && !y.is_zero() {
                                v[off + k * db_len + l] = x * y;
                            }
                        }
                    }
                    let (pa, wa) = class_levels(&ma, i, &ra);
                    let (pb, wb) = class_levels(&mb, j, &rb);
                    if class_levels(&mp, n, &v) != (pa + pb, wa + wb) {
                        levels_add = false;
                    }
                    classes.push(mp.class_of(n, &v)?);
                }
            }
        }
        let dim = mp.complex.cohomology_dim(n);
        if classes.len() != dim {
            iso = false;
            continue;
        }
        if dim > 0 && QMatrix::from_cols(dim, &classes).rank() != dim {
            iso = false;
        }
    }
    Ok(Kunneth {
        a: da,
        b: db,
        product,
        convolution: conv,
        cross_product_iso: iso,
        levels_add,
    })
}

/// `pr^* : H(X) → H(X × 𝔸¹)` is an isomorphism.
pub fn homotopy_invariance(x: &Space, window: usize) -> Result<(Vec<usize>, Vec<usize>, bool)> {
    let mx = x.model(window)?;
    let a1 = rational_model("A1", "t", &[], window)?;
    let pt = point_model();
    let prod = product_model(&mx, &a1)?;
    let unit = ChainMap::new(
        pt.complex.clone(),
        a1.complex.clone(),
        vec![(0, QMatrix::from_cols(a1.complex.dim(0), &[a1.unit()?]))],
    )?;
    let pr = tensor_chain_map(&ChainMap::identity(&mx.complex), &unit)?;
    debug_assert_eq!(pr.target, prod.complex);
    let len = (prod.top() + 1) as usize;
    let ok = (0..len as i64).all(|n| {
        let m = pr.on_cohomology(n);
        m.rows() == m.cols() && (m.rows() == 0 || m.rank() == m.rows())
    });
    Ok((
        dims_padded(&mx.complex, len),
        dims_padded(&prod.complex, len),
        ok,
    ))
}

// ---------------------------------------------------------------- homotopy reduction

/// For a closed form `ω` on `X × 𝔸¹_t` (with `t` the last coordinate and
/// polynomial dependence on `t`), return `(ω₀, η)` with `ω = pr^*ω₀ + dη`,
/// where `η = ∫_0^t ι_{∂t} ω dt`. The identity is checked exactly.
pub fn homotopy_reduce(
    omega: &DifferentialForm,
    t: &str,
) -> Result<(DifferentialForm, DifferentialForm)> {
    let pres = omega.presentation().clone();
    if !pres.relations.is_empty() {
        return Err(Error::Unsupported(
            "homotopy reduction on curves with relations".into(),
        ));
    }
    let vars = pres.vars.clone();
    if vars.last().map(String::as_str) != Some(t) {
        return Err(Error::Precondition(format!(
            "'{t}' must be the last coordinate"
        )));
    }
    if !omega.d().is_zero() {
        return Err(Error::Precondition(format!("{omega} is not closed")));
    }
    let ti = vars.len() - 1;
    let deg = omega.degree();
    let mut eta_terms: Vec<(RationalFunction, Vec<String>)> = Vec::new();
    for (key, c) in omega.terms() {
        if key.last() != Some(&ti) {
            continue;
        }
        if c.den().degree_in(t) > 0 {
            return Err(Error::Precondition(format!(
                "coefficient {c} is not polynomial in {t}"
            )));
        }
        let sign = if (key.len() - 1) % 2 == 0 {
            Q::one()
        } else {
            -Q::one()
        };
        let tv = MultiPoly::var(&vars, t);
        let mut integral = MultiPoly::zero(&vars);
        for (k, ck) in c.num().coefficients_in(t).iter().enumerate() {
            let e = tv.pow(k as u32 + 1);
            integral = integral.add(
                &ck.mul(&e)
                    .scale(&(Q::one() / Q::from_integer((k as i64 + 1).into()))),
            );
        }
        let coef = RationalFunction::new(integral.scale(&sign), c.den().clone());
        let wedge: Vec<String> = key[..key.len() - 1]
            .iter()
            .map(|&i| vars[i].clone())
            .collect();
        eta_terms.push((coef, wedge));
    }
    let eta = if deg == 0 {
        DifferentialForm::zero(&pres, 0)
    } else {
        DifferentialForm::new(&pres, deg - 1, eta_terms)?
    };
    // a function has no primitive; its `dη` is taken to be 0
    let d_eta = if deg == 0 { eta.clone() } else { eta.d() };
    let rest = omega.sub(&d_eta)?;
    let base: Vec<String> = vars[..ti].to_vec();
    let base_pres = KaehlerPresentation::free(&base);
    let mut terms = Vec::new();
    for (key, c) in rest.terms() {
        if key.contains(&ti) || c.num().degree_in(t) > 0 || c.den().degree_in(t) > 0 {
            return Err(Error::InvariantViolation(format!(
                "ω - dη = {rest} still depends on {t}"
            )));
        }
        let c0 = RationalFunction::new(c.num().with_vars(&base)?, c.den().with_vars(&base)?);
        terms.push((c0, key.iter().map(|&i| vars[i].clone()).collect()));
    }
    let omega0 = DifferentialForm::new(&base_pres, deg, terms)?;
    // certificate
    let images: Vec<RationalFunction> = base
        .iter()
        .map(|v| RationalFunction::from_poly(MultiPoly::var(&vars, v)))
        .collect();
    let back = omega0.pullback(&pres, &images)?.add(&d_eta)?;
    if !back.equals(omega) {
        return Err(Error::InvariantViolation(format!(
            "pr*ω₀ + dη = {back} differs from {omega}"
        )));
    }
    Ok((omega0, eta))
}
