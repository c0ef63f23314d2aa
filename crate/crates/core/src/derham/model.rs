//! Finite windowed models of de Rham complexes.
//!
//! A model is a complex of ℚ-vector spaces whose basis elements are named
//! differential forms, each carrying a Hodge index (the largest `p` with the
//! element in `F^p`) and a weight index (the smallest `m` with the element in
//! `W_m`). Both filtrations are spanned by basis elements.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::rational::sign_q;
use crate::algebra::{Matrix, QMatrix, Subspace, Q};
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::homological::{ChainMap, Complex, Direction, Filtration};
use crate::varieties::product_vars;

use super::record::{degree_record, CohomologyRecord};

/// A basis element of a model.
#[derive(Clone, Debug)]
pub struct Elem {
    pub form: DifferentialForm,
    /// Open set on which the element lives (Čech models only).
    pub chart: Option<String>,
    pub hodge: i64,
    pub weight: i64,
}

impl Elem {
    pub fn new(form: DifferentialForm, hodge: i64, weight: i64) -> Self {
        Elem {
            form,
            chart: None,
            hodge,
            weight,
        }
    }

    pub fn on_chart(mut self, chart: &str) -> Self {
        self.chart = Some(chart.to_string());
        self
    }
}

/// How coordinates of arbitrary forms are recovered in a model.
#[derive(Clone, Debug)]
pub enum Coordinates {
    /// `𝔸¹` minus finitely many rational points, by partial fractions.
    Rational { var: String, points: Vec<Q> },
    /// `Spec ℚ`.
    Point,
    /// `Spec ℚ[z]/(f)`, by reduction modulo `f`.
    Etale {
        var: String,
        f: crate::algebra::QPoly,
    },
    /// Products of models with coordinates.
    Product(Box<Coordinates>, Box<Coordinates>, usize, usize),
    /// No coordinate map (Čech and hyperelliptic models).
    None,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub label: String,
    pub window: usize,
    pub vars: Vec<String>,
    pub complex: Complex,
    pub elems: Vec<Vec<Elem>>,
    pub coordinates: Coordinates,
}

impl Model {
    /// Assemble a model from its differentials; checks shapes and `d² = 0`.
    pub fn new(
        label: &str,
        window: usize,
        vars: Vec<String>,
        elems: Vec<Vec<Elem>>,
        d: Vec<QMatrix>,
        coordinates: Coordinates,
    ) -> Result<Self> {
        let dims: Vec<usize> = elems.iter().map(Vec::len).collect();
        let complex = Complex::new(0, dims, d)
            .map_err(|e| Error::InvariantViolation(format!("model {label}: {e}")))?;
        let m = Model {
            label: label.to_string(),
            window,
            vars,
            complex,
            elems,
            coordinates,
        };
        m.hodge().check_compatible(&m.complex).map_err(|e| {
            Error::InvariantViolation(format!("model {label}: Hodge filtration: {e}"))
        })?;
        m.weight().check_compatible(&m.complex).map_err(|e| {
            Error::InvariantViolation(format!("model {label}: weight filtration: {e}"))
        })?;
        Ok(m)
    }

    pub fn top(&self) -> i64 {
        self.complex.hi()
    }

    fn index_range(&self, f: impl Fn(&Elem) -> i64) -> (i64, i64) {
        let mut it = self.elems.iter().flatten().map(f);
        match it.next() {
            None => (0, 0),
            Some(x) => it.fold((x, x), |(a, b), y| (a.min(y), b.max(y))),
        }
    }

    fn index_filtration(&self, dir: Direction, f: impl Fn(&Elem) -> i64 + Copy) -> Filtration {
        let (lo, hi) = self.index_range(f);
        let dims: BTreeMap<i64, usize> = self
            .complex
            .degrees()
            .map(|n| (n, self.complex.dim(n)))
            .collect();
        let steps = self
            .complex
            .degrees()
            .map(|n| {
                let es = &self.elems[n as usize];
                let v = (lo..=hi)
                    .map(|i| {
                        let idx = (0..es.len()).filter(|&k| match dir {
                            Direction::Decreasing => f(&es[k]) >= i,
                            Direction::Increasing => f(&es[k]) <= i,
                        });
                        Subspace::coordinate(es.len(), idx)
                    })
                    .collect();
                (n, v)
            })
            .collect();
        Filtration::new(dir, lo, hi, dims, steps).expect("index filtrations are monotone")
    }

    /// The Hodge filtration `F`.
    pub fn hodge(&self) -> Filtration {
        self.index_filtration(Direction::Decreasing, |e| e.hodge)
    }

    /// The weight filtration `W` on the complex (before décalage).
    pub fn weight(&self) -> Filtration {
        self.index_filtration(Direction::Increasing, |e| e.weight)
    }

    pub fn hodge_range(&self) -> (i64, i64) {
        self.index_range(|e| e.hodge)
    }

    /// Canonical representatives of a basis of `H^n`.
    pub fn representatives(&self, n: i64) -> Vec<Vec<Q>> {
        canonical_representatives(&self.complex, n)
    }

    /// Coordinates of the class of the cocycle `v` in the representatives of `H^n`.
    pub fn class_of(&self, n: i64, v: &[Q]) -> Result<Vec<Q>> {
        class_in(&self.complex, n, v)
    }

    /// Print a vector of degree `n` as a form (grouped by chart on Čech models).
    pub fn describe(&self, n: i64, v: &[Q]) -> String {
        describe_vector(&self.elems[n as usize], v)
    }

    /// Dimensions, representatives and Hodge and weight flags on cohomology.
    /// The weight flag is `W_m H^n = im H^n(W_{m-n})`, the filtration
    /// induced by décalage.
    pub fn record(&self) -> CohomologyRecord {
        let f = self.hodge();
        let w = self.weight();
        let (flo, fhi) = self.hodge_range();
        let (wlo, whi) = self.index_range(|e| e.weight);
        let h = self
            .complex
            .degrees()
            .map(|n| {
                let reps = self.representatives(n);
                degree_record(
                    n,
                    reps.iter().map(|v| self.describe(n, v)).collect(),
                    (flo, fhi),
                    |p| f.on_cohomology(&self.complex, n, p),
                    (wlo + n, whi + n),
                    |m| w.on_cohomology(&self.complex, n, m - n),
                )
            })
            .collect();
        CohomologyRecord {
            label: self.label.clone(),
            window: self.window,
            h,
        }
    }

    /// Coordinates of a form of degree `n` in this model.
    pub fn coords(&self, n: usize, form: &DifferentialForm) -> Result<Vec<Q>> {
        if form.degree() != n {
            return Err(Error::Precondition(format!(
                "expected a form of degree {n}, got degree {}",
                form.degree()
            )));
        }
        if form.vars() != self.vars.as_slice() {
            return Err(Error::Precondition(format!(
                "form in [{}] but model {} uses [{}]",
                form.vars().join(", "),
                self.label,
                self.vars.join(", ")
            )));
        }
        let v = super::rational::coordinates_of(self, n, form)?;
        Ok(v)
    }

    /// The vector of `omega`, checked to reproduce the form exactly.
    pub fn vector_of(&self, omega: &DifferentialForm) -> Result<Vec<Q>> {
        let n = omega.degree();
        let v = self.coords(n, omega)?;
        let back = self.form_of(n, &v);
        if !back.equals(omega) {
            return Err(Error::InvariantViolation(format!(
                "coordinates of {omega} reassemble to {back}"
            )));
        }
        Ok(v)
    }

    /// The form `Σ v_i e_i` (non-Čech models).
    pub fn form_of(&self, n: usize, v: &[Q]) -> DifferentialForm {
        let pres = match self.elems[n].first() {
            Some(e) => e.form.presentation().clone(),
            None => crate::forms::KaehlerPresentation::free(&self.vars),
        };
        let mut acc = DifferentialForm::zero(&pres, n);
        for (c, e) in v.iter().zip(&self.elems[n]) {
            if !c.is_zero() {
                acc = acc
                    .add(&e.form.scale_q(c))
                    .expect("model forms share a presentation");
            }
        }
        acc
    }

    /// The element `1` in degree 0, when the first basis element is constant.
    pub fn unit(&self) -> Result<Vec<Q>> {
        let e0 =
            self.elems.first().and_then(|v| v.first()).ok_or_else(|| {
                Error::Precondition(format!("model {} has no functions", self.label))
            })?;
        let one = DifferentialForm::function(
            e0.form.presentation(),
            crate::algebra::RationalFunction::from_poly(crate::algebra::MultiPoly::one(&self.vars)),
        );
        if !e0.form.equals(&one) {
            return Err(Error::Precondition(format!(
                "first basis element of {} is not the constant 1",
                self.label
            )));
        }
        let mut v = vec![<Q as Zero>::zero(); self.elems[0].len()];
        v[0] = <Q as One>::one();
        Ok(v)
    }
}

/// Chain map `K(Y) -> K(X)` sending each basis form of `Y` to `phi(form)`,
/// read back in the coordinates of `X`.
pub fn form_map(
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
            let v = x.vector_of(&img)?;
            for (i, c) in v.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        maps.push((n, m));
    }
    ChainMap::new(y.complex.clone(), x.complex.clone(), maps)
        .map_err(|e| Error::InvariantViolation(format!("form map {} -> {}: {e}", y.label, x.label)))
}

/// Layout of degree `n` of `A ⊗ B`: `(i, offset)` blocks of `A^i ⊗ B^{n-i}`.
pub fn tensor_layout(a: &Complex, b: &Complex, n: i64) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in a.degrees() {
        let (da, db) = (a.dim(i), b.dim(n - i));
        if da * db > 0 {
            out.push((i, off));
            off += da * db;
        }
    }
    out
}

/// `A ⊗ B` with `d(a ⊗ b) = da ⊗ b + (-1)^{|a|} a ⊗ db`; basis `a_k ⊗ b_l`
/// ordered by the degree of `a`, then `k`, then `l`.
pub fn tensor_complex(a: &Complex, b: &Complex) -> Result<Complex> {
    let lo = a.lo() + b.lo();
    let hi = a.hi() + b.hi();
    let dim = |n: i64| -> usize { a.degrees().map(|i| a.dim(i) * b.dim(n - i)).sum() };
    let dims: Vec<usize> = (lo..=hi).map(dim).collect();
    let mut d = Vec::new();
    for n in lo..hi {
        let mut m = QMatrix::zeros(dim(n + 1), dim(n));
        let src = tensor_layout(a, b, n);
        let tgt = tensor_layout(a, b, n + 1);
        for &(i, so) in &src {
            let (da, db) = (a.dim(i), b.dim(n - i));
            let sign = sign_q(i);
            let da_m = a.diff(i);
            let db_m = b.diff(n - i);
            let t_a = tgt.iter().find(|t| t.0 == i + 1).map(|t| t.1);
            let t_b = tgt.iter().find(|t| t.0 == i).map(|t| t.1);
            for k in 0..da {
                for l in 0..db {
                    let col = so + k * db + l;
                    if let Some(to) = t_a {
                        let db2 = b.dim(n - i);
                        for r in 0..a.dim(i + 1) {
                            let c = da_m.get(r, k);
                            if !c.is_zero() {
                                m.set(to + r * db2 + l, col, c.clone());
                            }
                        }
                    }
                    if let Some(to) = t_b {
                        let db2 = b.dim(n - i + 1);
                        for r in 0..db2 {
                            let c = db_m.get(r, l);
                            if !c.is_zero() {
                                m.set(to + k * db2 + r, col, &sign * c);
                            }
                        }
                    }
                }
            }
        }
        d.push(m);
    }
    Complex::new(lo, dims, d)
}

/// `f ⊗ g : A ⊗ B -> A' ⊗ B'` for degree-preserving chain maps.
pub fn tensor_chain_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let src = tensor_complex(&f.source, &g.source)?;
    let tgt = tensor_complex(&f.target, &g.target)?;
    let mut maps = Vec::new();
    for n in src.degrees() {
        let mut m = QMatrix::zeros(tgt.dim(n), src.dim(n));
        let sl = tensor_layout(&f.source, &g.source, n);
        let tl = tensor_layout(&f.target, &g.target, n);
        for &(i, so) in &sl {
            let Some(&(_, to)) = tl.iter().find(|t| t.0 == i) else {
                continue;
            };
            let (fi, gj) = (f.at(i), g.at(n - i));
            let (sb, tb) = (g.source.dim(n - i), g.target.dim(n - i));
            for k in 0..fi.cols() {
                for l in 0..sb {
                    for r in 0..fi.rows() {
                        let a = fi.get(r, k);
                        if a.is_zero() {
                            continue;
                        }
                        for s in 0..tb {
                            let b = gj.get(s, l);
                            if !b.is_zero() {
                                m.set(to + r * tb + s, so + k * sb + l, a * b);
                            }
                        }
                    }
                }
            }
        }
        maps.push((n, m));
    }
    ChainMap::new(src, tgt, maps)
}

/// Model of `X × Y` as the tensor product of models, with indices adding.
pub fn product_model(a: &Model, b: &Model) -> Result<Model> {
    let vars = product_vars(&a.vars, &b.vars);
    let pres = crate::forms::KaehlerPresentation::free(&vars);
    let (na, nb) = (a.vars.len(), b.vars.len());
    let lift = |f: &DifferentialForm, offset: usize, count: usize| -> Result<DifferentialForm> {
        if !f.presentation().relations.is_empty() {
            return Err(Error::Unsupported(
                "products of models with relations among the coordinates".into(),
            ));
        }
        let images: Vec<crate::algebra::RationalFunction> = (0..count)
            .map(|i| {
                crate::algebra::RationalFunction::from_poly(crate::algebra::MultiPoly::var(
                    &vars,
                    &vars[offset + i],
                ))
            })
            .collect();
        f.pullback(&pres, &images)
    };
    let complex = tensor_complex(&a.complex, &b.complex)?;
    let mut elems = Vec::new();
    for n in complex.degrees() {
        let mut es = Vec::new();
        for (i, _) in tensor_layout(&a.complex, &b.complex, n) {
            for ea in &a.elems[i as usize] {
                for eb in &b.elems[(n - i) as usize] {
                    let form = lift(&ea.form, 0, na)?.wedge(&lift(&eb.form, na, nb)?)?;
                    es.push(Elem::new(form, ea.hodge + eb.hodge, ea.weight + eb.weight));
                }
            }
        }
        elems.push(es);
    }
    let d = (complex.lo()..complex.hi())
        .map(|n| complex.diff(n))
        .collect();
    Model::new(
        &format!("{}x{}", a.label, b.label),
        a.window.min(b.window),
        vars,
        elems,
        d,
        Coordinates::Product(
            Box::new(a.coordinates.clone()),
            Box::new(b.coordinates.clone()),
            na,
            nb,
        ),
    )
}

/// Canonical representatives of a basis of `H^n(K)`.
///
/// Basis elements are listed most preferred first. Coboundaries are used to
/// clear the least preferred coordinates, and the remaining cocycles are put
/// in reduced echelon form from the most preferred end.
pub fn canonical_representatives(k: &Complex, n: i64) -> Vec<Vec<Q>> {
    let dim = k.dim(n);
    if dim == 0 {
        return Vec::new();
    }
    let z = k.cocycles(n);
    let b = k.coboundaries(n);
    let rev = |v: &[Q]| -> Vec<Q> { v.iter().rev().cloned().collect() };
    let mut brows: Vec<(usize, Vec<Q>)> = Vec::new();
    if b.dim() > 0 {
        let (r, piv) = Matrix::from_rows(b.basis().iter().map(|v| rev(v)).collect()).rref();
        for (i, &p) in piv.iter().enumerate() {
            brows.push((dim - 1 - p, rev(r.row(i))));
        }
    }
    let reduced: Vec<Vec<Q>> = z
        .basis()
        .iter()
        .map(|v| {
            let mut v = v.clone();
            for (p, row) in &brows {
                let c = v[*p].clone();
                if !c.is_zero() {
                    for (x, y) in v.iter_mut().zip(row) {
                        *x -= &c * y;
                    }
                }
            }
            v
        })
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    if reduced.is_empty() {
        return Vec::new();
    }
    let (r, piv) = Matrix::from_rows(reduced).rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Coordinates of the class of the cocycle `v` in [`canonical_representatives`].
pub fn class_in(k: &Complex, n: i64, v: &[Q]) -> Result<Vec<Q>> {
    let reps = canonical_representatives(k, n);
    let count = reps.len();
    let mut cols = reps;
    cols.extend(k.coboundaries(n).basis().iter().cloned());
    if cols.is_empty() {
        return if v.iter().all(Zero::is_zero) {
            Ok(Vec::new())
        } else {
            Err(Error::Precondition("vector is not a cocycle".into()))
        };
    }
    let m = Matrix::from_cols(k.dim(n), &cols);
    let c = m
        .solve(v)
        .ok_or_else(|| Error::Precondition(format!("vector is not a cocycle in degree {n}")))?;
    Ok(c[..count].to_vec())
}

/// Print `Σ v_i e_i`, summing forms that live on the same chart.
pub fn describe_vector(es: &[Elem], v: &[Q]) -> String {
    let mut groups: Vec<(Option<String>, DifferentialForm)> = Vec::new();
    for (c, e) in v.iter().zip(es) {
        if c.is_zero() {
            continue;
        }
        let term = e.form.scale_q(c);
        match groups.iter_mut().find(|(ch, f)| {
            *ch == e.chart && f.degree() == term.degree() && f.vars() == term.vars()
        }) {
            Some((_, f)) => *f = f.add(&term).expect("same presentation"),
            None => groups.push((e.chart.clone(), term)),
        }
    }
    let groups: Vec<(Option<String>, String)> = groups
        .into_iter()
        .filter(|(_, f)| !f.is_zero())
        .map(|(ch, f)| (ch, f.to_string()))
        .collect();
    if groups.is_empty() {
        return "0".to_string();
    }
    if groups.len() == 1 && groups[0].0.is_none() {
        return groups[0].1.clone();
    }
    if groups.len() > 1 && groups.iter().all(|g| g.0.is_some() && g.1 == groups[0].1) {
        return groups[0].1.clone();
    }
    groups
        .iter()
        .map(|(ch, s)| match ch {
            Some(c) => format!("{c}: {s}"),
            None => s.clone(),
        })
        .collect::<Vec<_>>()
        .join("; ")
}
