//! Differential forms with rational coefficients on presented schemes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{
    normal_form, parse_rational_function, MultiPoly, RationalFunction, TermOrder, Q,
};
use crate::error::{Error, Result};
use crate::varieties::{AffineCurveScheme, SchemeKind};

/// Generators `dx_i` of Ω¹ and the relations `d(F) = 0` for each equation.
#[derive(Clone, Debug, PartialEq)]
pub struct KaehlerPresentation {
    pub vars: Vec<String>,
    pub relations: Vec<MultiPoly>,
}

impl KaehlerPresentation {
    pub fn free(vars: &[String]) -> Self {
        KaehlerPresentation {
            vars: vars.to_vec(),
            relations: vec![],
        }
    }

    pub fn of(x: &AffineCurveScheme) -> Self {
        KaehlerPresentation {
            vars: x.vars().to_vec(),
            relations: x.eqs().to_vec(),
        }
    }

    /// The 1-form relations `Σ ∂F/∂x_i dx_i`, one per equation.
    pub fn form_relations(&self) -> Vec<DifferentialForm> {
        self.relations
            .iter()
            .map(|f| {
                DifferentialForm::function(
                    &KaehlerPresentation::free(&self.vars),
                    RationalFunction::from_poly(f.clone()),
                )
                .d()
            })
            .collect()
    }
}

/// `Σ c_I dx_I` with `I` strictly increasing.
#[derive(Clone, Debug)]
pub struct DifferentialForm {
    pres: KaehlerPresentation,
    degree: usize,
    terms: BTreeMap<Vec<usize>, RationalFunction>,
}

fn rf_const(vars: &[String], c: Q) -> RationalFunction {
    RationalFunction::from_poly(MultiPoly::constant(vars, c))
}

impl DifferentialForm {
    pub fn zero(pres: &KaehlerPresentation, degree: usize) -> Self {
        DifferentialForm {
            pres: pres.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(pres: &KaehlerPresentation, c: RationalFunction) -> Self {
        let mut t = BTreeMap::new();
        t.insert(vec![], c);
        Self::from_terms(pres, 0, t)
    }

    /// `dx_var`.
    pub fn dvar(pres: &KaehlerPresentation, var: &str) -> Result<Self> {
        let i = pres
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::Precondition(format!("no coordinate {var}")))?;
        let mut t = BTreeMap::new();
        t.insert(vec![i], rf_const(&pres.vars, Q::one()));
        Ok(Self::from_terms(pres, 1, t))
    }

    /// Build from `(coefficient, wedge)` pairs with arbitrary wedge order.
    pub fn new(
        pres: &KaehlerPresentation,
        degree: usize,
        terms: Vec<(RationalFunction, Vec<String>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(pres, degree);
        for (c, w) in terms {
            if w.len() != degree {
                return Err(Error::Precondition(format!(
                    "wedge [{}] in a {degree}-form",
                    w.join(", ")
                )));
            }
            let mut idx = Vec::new();
            for g in &w {
                let v = g.strip_prefix('d').unwrap_or(g);
                let i = pres
                    .vars
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| Error::Precondition(format!("unknown generator {g}")))?;
                idx.push(i);
            }
            let c = lift(&c, &pres.vars)?;
            if let Some((sorted, sign)) = sort_wedge(&idx) {
                let c = if sign < 0 { c.neg() } else { c };
                out.add_term(sorted, c);
            }
        }
        Ok(out.normalized())
    }

    fn from_terms(
        pres: &KaehlerPresentation,
        degree: usize,
        terms: BTreeMap<Vec<usize>, RationalFunction>,
    ) -> Self {
        DifferentialForm {
            pres: pres.clone(),
            degree,
            terms,
        }
        .normalized()
    }

    fn add_term(&mut self, k: Vec<usize>, c: RationalFunction) {
        let e = self
            .terms
            .entry(k)
            .or_insert_with(|| rf_const(&self.pres.vars, Q::zero()));
        *e = e.add(&c);
    }

    pub fn presentation(&self) -> &KaehlerPresentation {
        &self.pres
    }

    pub fn vars(&self) -> &[String] {
        &self.pres.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Terms as `(wedge indices, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, wedge: &[usize]) -> RationalFunction {
        self.terms
            .get(wedge)
            .cloned()
            .unwrap_or_else(|| rf_const(&self.pres.vars, Q::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Reduce modulo the equations: eliminate one differential per relation,
    /// reduce coefficients and drop vanishing terms.
    fn normalized(mut self) -> Self {
        if let Some(f) = self.pres.relations.first().cloned() {
            let vars = self.pres.vars.clone();
            let basis = vec![f.clone()];
            let red = |p: &MultiPoly| normal_form(p, &basis, TermOrder::GrLex);
            // choose the differential to eliminate
            let partials: Vec<MultiPoly> = vars.iter().map(|v| red(&f.derivative(v))).collect();
            if let Some(e) = (0..vars.len()).rev().find(|&i| !partials[i].is_zero()) {
                let mut out: BTreeMap<Vec<usize>, RationalFunction> = BTreeMap::new();
                for (k, c) in std::mem::take(&mut self.terms) {
                    match k.iter().position(|&i| i == e) {
                        None => {
                            let slot = out.entry(k).or_insert_with(|| rf_const(&vars, Q::zero()));
                            *slot = slot.add(&c);
                        }
                        Some(pos) => {
                            // dx_e = -Σ_{j≠e} (F_j / F_e) dx_j
                            for j in 0..vars.len() {
                                if j == e || partials[j].is_zero() || k.contains(&j) {
                                    continue;
                                }
                                let mut nk = k.clone();
                                nk[pos] = j;
                                let Some((sorted, sign)) = sort_wedge(&nk) else {
                                    continue;
                                };
                                let coef =
                                    RationalFunction::new(partials[j].neg(), partials[e].clone());
                                let mut t = c.mul(&coef);
                                if sign < 0 {
                                    t = t.neg();
                                }
                                let slot = out
                                    .entry(sorted)
                                    .or_insert_with(|| rf_const(&vars, Q::zero()));
                                *slot = slot.add(&t);
                            }
                        }
                    }
                }
                self.terms = out;
            }
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .filter_map(|(k, c)| {
                    let n = red(c.num());
                    if n.is_zero() {
                        return None;
                    }
                    let d = red(c.den());
                    let d = if d.is_zero() { c.den().clone() } else { d };
                    Some((k, RationalFunction::new(n, d)))
                })
                .collect();
        } else {
            self.terms.retain(|_, c| !c.is_zero());
        }
        self
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out.normalized())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, f: &RationalFunction) -> Self {
        let f = lift(f, &self.pres.vars).expect("scalar in the form's coordinates");
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), c.mul(&f)))
            .collect();
        Self::from_terms(&self.pres, self.degree, terms)
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale(&rf_const(&self.pres.vars, c.clone()))
    }

    pub fn wedge(&self, o: &Self) -> Result<Self> {
        if self.pres != o.pres {
            return Err(Error::Precondition(
                "wedge of forms over different presentations".into(),
            ));
        }
        let mut out = Self::zero(&self.pres, self.degree + o.degree);
        for (a, c) in &self.terms {
            for (b, e) in &o.terms {
                let mut k = a.clone();
                k.extend(b.iter().copied());
                if let Some((sorted, sign)) = sort_wedge(&k) {
                    let t = c.mul(e);
                    out.add_term(sorted, if sign < 0 { t.neg() } else { t });
                }
            }
        }
        Ok(out.normalized())
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let n = self.pres.vars.len();
        let mut out = Self::zero(&self.pres, self.degree + 1);
        for (k, c) in &self.terms {
            for j in 0..n {
                if k.contains(&j) {
                    continue;
                }
                let dc = c.derivative(&self.pres.vars[j]);
                if dc.is_zero() {
                    continue;
                }
                let mut nk = vec![j];
                nk.extend(k.iter().copied());
                let (sorted, sign) = sort_wedge(&nk).unwrap();
                out.add_term(sorted, if sign < 0 { dc.neg() } else { dc });
            }
        }
        out.normalized()
    }

    /// Equality modulo the equations.
    pub fn equals(&self, o: &Self) -> bool {
        if self.check_same(o).is_err() {
            return false;
        }
        match self.sub(o) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.pres != o.pres || self.degree != o.degree {
            return Err(Error::Precondition(format!(
                "forms of degree {} and {} over different presentations",
                self.degree, o.degree
            )));
        }
        Ok(())
    }

    /// Substitute `vars[i] ↦ images[i]` (rational functions in `to.vars`).
    pub fn pullback(&self, to: &KaehlerPresentation, images: &[RationalFunction]) -> Result<Self> {
        if images.len() != self.pres.vars.len() {
            return Err(Error::Precondition("one image per coordinate".into()));
        }
        let images: Vec<RationalFunction> = images
            .iter()
            .map(|r| lift(r, &to.vars))
            .collect::<Result<_>>()?;
        let dimg: Vec<DifferentialForm> = images
            .iter()
            .map(|r| DifferentialForm::function(to, r.clone()).d())
            .collect();
        let mut out = Self::zero(to, self.degree);
        for (k, c) in &self.terms {
            let cc = substitute(c, &self.pres.vars, &images)?;
            let mut t = DifferentialForm::function(to, cc);
            for &i in k {
                t = t.wedge(&dimg[i])?;
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Same form with coordinates renamed positionally.
    pub fn renamed(&self, vars: &[String]) -> Result<Self> {
        let pres = KaehlerPresentation {
            vars: vars.to_vec(),
            relations: self
                .pres
                .relations
                .iter()
                .map(|f| f.renamed(vars))
                .collect::<Result<_>>()?,
        };
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                Ok((
                    k.clone(),
                    RationalFunction::new(
                        c.num().with_vars(&self.pres.vars)?.renamed(vars)?,
                        c.den().with_vars(&self.pres.vars)?.renamed(vars)?,
                    ),
                ))
            })
            .collect::<Result<_>>()?;
        Ok(Self::from_terms(&pres, self.degree, terms))
    }

    /// `{"degree": p, "terms": [{"coeff": "...", "wedge": ["dx"]}]}`.
    pub fn from_json(v: &Value, pres: &KaehlerPresentation) -> Result<Self> {
        let degree = v
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Precondition("form needs an integer 'degree'".into()))?
            as usize;
        if degree > 2 {
            return Err(Error::Precondition(format!(
                "degree {degree} forms are not supported"
            )));
        }
        let names: Vec<&str> = pres.vars.iter().map(String::as_str).collect();
        let mut terms = Vec::new();
        for t in v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Precondition("form needs a 'terms' array".into()))?
        {
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Precondition("term needs a 'coeff' string".into()))?;
            let c = parse_rational_function(c, &names)?;
            let w = match t.get("wedge") {
                None => vec![],
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|g| {
                        g.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| Error::Precondition("wedge entries are strings".into()))
                    })
                    .collect::<Result<Vec<_>>>()?,
                Some(_) => return Err(Error::Precondition("'wedge' must be an array".into())),
            };
            terms.push((c, w));
        }
        Self::new(pres, degree, terms)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "terms": self.terms.iter().map(|(k, c)| json!({
                "coeff": c.to_string(),
                "wedge": k.iter().map(|&i| format!("d{}", self.pres.vars[i])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Sort wedge indices; `None` when an index repeats.
fn sort_wedge(k: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = k.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn lift(c: &RationalFunction, vars: &[String]) -> Result<RationalFunction> {
    Ok(RationalFunction::new(
        c.num().with_vars(vars)?,
        c.den().with_vars(vars)?,
    ))
}

/// `c(images)` where `c` is written in `vars`.
pub fn substitute(
    c: &RationalFunction,
    vars: &[String],
    images: &[RationalFunction],
) -> Result<RationalFunction> {
    let num = eval_poly(&c.num().with_vars(vars)?, images);
    let den = eval_poly(&c.den().with_vars(vars)?, images);
    num.div(&den).ok_or_else(|| {
        Error::InvalidMorphism(format!(
            "denominator {} vanishes after substitution",
            c.den()
        ))
    })
}

fn eval_poly(p: &MultiPoly, images: &[RationalFunction]) -> RationalFunction {
    let vars = images
        .first()
        .map(|r| r.num().vars().to_vec())
        .unwrap_or_default();
    let mut acc = rf_const(&vars, Q::zero());
    for (m, c) in p.terms() {
        let mut t = rf_const(&vars, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&images[i].pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

impl PartialEq for DifferentialForm {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl fmt::Display for DifferentialForm {
    /// `dz/z`, `x*dx/y`, `(3*x^2+1)*dx/(2*y)`, `dx∧dy`; terms joined by `+`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let wedge: Vec<String> = k
                .iter()
                .map(|&i| format!("d{}", self.pres.vars[i]))
                .collect();
            let wedge = wedge.join("∧");
            let (n, d) = c.display_parts();
            let s = if wedge.is_empty() {
                c.to_string()
            } else {
                let head = match n.as_str() {
                    "1" => wedge,
                    "-1" => format!("-{wedge}"),
                    _ => format!("{n}*{wedge}"),
                };
                match d {
                    Some(d) => format!("{head}/{d}"),
                    None => head,
                }
            };
            if !first && !s.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

/// The presentation of a scheme's forms; plane curves carry their equation.
pub fn presentation_of(x: &AffineCurveScheme) -> KaehlerPresentation {
    match x.kind() {
        SchemeKind::Plane { .. } => KaehlerPresentation::of(x),
        _ => KaehlerPresentation::free(x.vars()),
    }
}
