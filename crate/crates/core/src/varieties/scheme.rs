//! Presented affine schemes of dimension at most one.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{
    factor_over_function_field, factor_rational, is_unit_ideal, parse_poly, parse_rational,
    MultiPoly, QPoly, Q,
};
use crate::error::{Error, Result};

/// What a presentation turned out to be.
#[derive(Clone, Debug, PartialEq)]
pub enum SchemeKind {
    /// `Spec ℚ`.
    Point,
    /// `Spec ℚ[z]/(f)` with `f` squarefree; `factors` are its monic irreducible factors.
    Etale { f: QPoly, factors: Vec<QPoly> },
    /// An open subscheme of `𝔸¹`; `removed` lists the monic irreducible factors
    /// of the inverted elements.
    Line { removed: Vec<QPoly> },
    /// `V(f) ⊂ 𝔸²` minus the zeros of the inverted elements.
    Plane { f: MultiPoly },
}

#[derive(Clone, Debug)]
pub struct AffineCurveScheme {
    label: String,
    vars: Vec<String>,
    eqs: Vec<MultiPoly>,
    inverted: Vec<MultiPoly>,
    kind: SchemeKind,
}

/// Parse `src` as a polynomial in exactly the variables `vars`.
pub fn parse_in(src: &str, vars: &[String]) -> Result<MultiPoly> {
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let p = parse_poly(src, &names)?;
    p.with_vars(vars).map_err(|_| {
        let extra: Vec<String> = p
            .used_vars()
            .into_iter()
            .filter(|v| !vars.contains(v))
            .collect();
        Error::Precondition(format!(
            "'{src}' uses {} outside the coordinates [{}]",
            extra.join(", "),
            vars.join(", ")
        ))
    })
}

fn monic_factors(p: &QPoly) -> Result<Vec<QPoly>> {
    Ok(factor_rational(p)?
        .factors
        .into_iter()
        .map(|(f, _)| f)
        .collect())
}

impl AffineCurveScheme {
    pub fn new(
        label: &str,
        vars: Vec<String>,
        eqs: Vec<MultiPoly>,
        inverted: Vec<MultiPoly>,
    ) -> Result<Self> {
        let eqs: Vec<MultiPoly> = eqs
            .into_iter()
            .map(|e| e.with_vars(&vars))
            .collect::<Result<_>>()?;
        let inverted: Vec<MultiPoly> = inverted
            .into_iter()
            .map(|e| e.with_vars(&vars))
            .collect::<Result<_>>()?;
        if inverted.iter().any(MultiPoly::is_zero) {
            return Err(Error::DegenerateInput("cannot invert 0".into()));
        }
        let kind = match (vars.len(), eqs.len()) {
            (0, 0) => SchemeKind::Point,
            (0, _) => {
                if eqs.iter().all(MultiPoly::is_zero) {
                    SchemeKind::Point
                } else {
                    return Err(Error::DegenerateInput(
                        "the point with a nonzero equation is empty".into(),
                    ));
                }
            }
            (1, 0) => {
                let mut removed = Vec::new();
                for g in &inverted {
                    for f in monic_factors(&g.to_upoly(&vars[0])?)? {
                        if !removed.contains(&f) {
                            removed.push(f);
                        }
                    }
                }
                removed.sort_by(|a: &QPoly, b: &QPoly| {
                    a.deg()
                        .cmp(&b.deg())
                        .then_with(|| a.to_string_in("t").cmp(&b.to_string_in("t")))
                });
                SchemeKind::Line { removed }
            }
            (1, 1) => {
                let f = eqs[0].to_upoly(&vars[0])?;
                if f.deg() < 1 {
                    return Err(Error::DegenerateInput(format!(
                        "equation {} does not cut out a finite scheme",
                        eqs[0]
                    )));
                }
                if !f.gcd(&f.derivative()).is_constant() {
                    return Err(Error::NotSmooth(format!("{} is not squarefree", eqs[0])));
                }
                for g in &inverted {
                    if !f.gcd(&g.to_upoly(&vars[0])?).is_constant() {
                        return Err(Error::Unsupported(
                            "inverting an element that vanishes at a point of a finite scheme"
                                .into(),
                        ));
                    }
                }
                let factors = monic_factors(&f)?;
                SchemeKind::Etale {
                    f: f.monic(),
                    factors,
                }
            }
            (2, 1) => {
                let f = eqs[0].clone();
                check_plane_irreducible(&f, &vars)?;
                check_plane_smooth(&f, &inverted, &vars)?;
                SchemeKind::Plane { f }
            }
            (n, 0) if n >= 2 => {
                return Err(Error::Unsupported(format!("{n}-dimensional affine space")))
            }
            (n, m) => {
                return Err(Error::Unsupported(format!(
                    "presentation with {n} variables and {m} equations"
                )))
            }
        };
        Ok(AffineCurveScheme {
            label: label.to_string(),
            vars,
            eqs,
            inverted,
            kind,
        })
    }

    pub fn point() -> Self {
        Self::new("pt", vec![], vec![], vec![]).unwrap()
    }

    pub fn affine_line(var: &str) -> Self {
        Self::new("A1", vec![var.to_string()], vec![], vec![]).unwrap()
    }

    pub fn gm(var: &str) -> Self {
        let v = vec![var.to_string()];
        Self::new("Gm", v.clone(), vec![], vec![MultiPoly::var(&v, var)]).unwrap()
    }

    /// `𝔸¹` with the given rational points removed.
    pub fn line_minus(var: &str, points: &[Q]) -> Self {
        let v = vec![var.to_string()];
        let inv: Vec<MultiPoly> = points
            .iter()
            .map(|a| MultiPoly::var(&v, var).sub(&MultiPoly::constant(&v, a.clone())))
            .collect();
        let label = if points.is_empty() {
            "A1".to_string()
        } else {
            let ps: Vec<String> = points.iter().map(crate::algebra::rational::fmt_q).collect();
            format!("A1-{{{}}}", ps.join(","))
        };
        Self::new(&label, v, vec![], inv).unwrap()
    }

    /// Named schemes: `pt`, `A1`, `Gm`, `A1-{a,b,...}` (coordinate `z`).
    pub fn builtin(label: &str) -> Option<Self> {
        match label {
            "pt" => Some(Self::point()),
            "A1" => Some(Self::affine_line("z")),
            "Gm" => Some(Self::gm("z")),
            _ => {
                let inner = label.strip_prefix("A1-{")?.strip_suffix('}')?;
                let pts: Vec<Q> = inner
                    .split(',')
                    .map(|s| parse_rational(s.trim()))
                    .collect::<Result<_>>()
                    .ok()?;
                let mut sorted = pts.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != pts.len() {
                    return None;
                }
                Some(Self::line_minus("z", &pts))
            }
        }
    }

    /// `{"label", "vars", "eqs", "invert"}`, or a builtin label as a string.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(s) = v.as_str() {
            return Self::builtin(s)
                .ok_or_else(|| Error::Precondition(format!("unknown scheme label '{s}'")));
        }
        let obj = v.as_object().ok_or_else(|| {
            Error::Precondition("a scheme is an object or a builtin label".into())
        })?;
        let label = obj.get("label").and_then(Value::as_str).unwrap_or("X");
        let strings = |key: &str| -> Result<Vec<String>> {
            match obj.get(key) {
                None => Ok(vec![]),
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|x| {
                        x.as_str().map(str::to_string).ok_or_else(|| {
                            Error::Precondition(format!("'{key}' must list strings"))
                        })
                    })
                    .collect(),
                Some(_) => Err(Error::Precondition(format!("'{key}' must be an array"))),
            }
        };
        let vars = strings("vars")?;
        let eqs = strings("eqs")?
            .iter()
            .map(|s| parse_in(s, &vars))
            .collect::<Result<_>>()?;
        let inv = strings("invert")?
            .iter()
            .map(|s| parse_in(s, &vars))
            .collect::<Result<_>>()?;
        Self::new(label, vars, eqs, inv)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "vars": self.vars,
            "eqs": self.eqs.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "invert": self.inverted.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn eqs(&self) -> &[MultiPoly] {
        &self.eqs
    }

    pub fn inverted(&self) -> &[MultiPoly] {
        &self.inverted
    }

    pub fn kind(&self) -> &SchemeKind {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            SchemeKind::Point | SchemeKind::Etale { .. } => 0,
            _ => 1,
        }
    }

    pub fn num_components(&self) -> usize {
        match &self.kind {
            SchemeKind::Etale { factors, .. } => factors.len(),
            _ => 1,
        }
    }

    /// The coordinate of a scheme with one variable.
    pub fn var(&self) -> Option<&str> {
        (self.vars.len() == 1).then(|| self.vars[0].as_str())
    }

    /// For `𝔸¹` minus rational points: those points.
    pub fn rational_punctures(&self) -> Option<Vec<Q>> {
        match &self.kind {
            SchemeKind::Line { removed } => removed
                .iter()
                .map(|f| (f.deg() == 1).then(|| -f.coeff(0)))
                .collect(),
            _ => None,
        }
    }

    /// For a plane curve `y² = h(x)` (coordinates in that order), `h`.
    pub fn hyperelliptic(&self) -> Option<QPoly> {
        let SchemeKind::Plane { f } = &self.kind else {
            return None;
        };
        if !self.inverted.is_empty() {
            return None;
        }
        let (x, y) = (&self.vars[0], &self.vars[1]);
        let cs = f.coefficients_in(y);
        if cs.len() != 3 || !cs[1].is_zero() {
            return None;
        }
        let a = cs[2].constant_value()?;
        if a.is_zero() {
            return None;
        }
        let h = cs[0].scale(&(-Q::one() / a)).to_upoly(x).ok()?;
        Some(h)
    }

    /// True when `p` (a polynomial in the coordinate) is a unit on a line.
    pub fn is_unit(&self, p: &QPoly) -> bool {
        if p.is_zero() {
            return false;
        }
        match &self.kind {
            SchemeKind::Point => true,
            SchemeKind::Line { removed } => match factor_rational(p) {
                Ok(fz) => fz.factors.iter().all(|(f, _)| removed.contains(f)),
                Err(_) => false,
            },
            SchemeKind::Etale { f, .. } => f.gcd(p).is_constant(),
            SchemeKind::Plane { .. } => p.is_constant(),
        }
    }

    /// Same presentation up to renaming the coordinates positionally.
    pub fn same_as(&self, o: &Self) -> bool {
        if self.vars.len() != o.vars.len()
            || self.eqs.len() != o.eqs.len()
            || self.inverted.len() != o.inverted.len()
        {
            return false;
        }
        let ren = |p: &MultiPoly| p.renamed(&self.vars).unwrap();
        match (&self.kind, &o.kind) {
            (SchemeKind::Line { removed: a }, SchemeKind::Line { removed: b }) => a == b,
            _ => {
                self.eqs.iter().zip(&o.eqs).all(|(a, b)| *a == ren(b))
                    && self
                        .inverted
                        .iter()
                        .zip(&o.inverted)
                        .all(|(a, b)| *a == ren(b))
            }
        }
    }

    /// A copy with different coordinate names.
    pub fn with_coordinates(&self, vars: &[String]) -> Result<Self> {
        let eqs = self
            .eqs
            .iter()
            .map(|e| e.renamed(vars))
            .collect::<Result<_>>()?;
        let inv = self
            .inverted
            .iter()
            .map(|e| e.renamed(vars))
            .collect::<Result<_>>()?;
        Self::new(&self.label, vars.to_vec(), eqs, inv)
    }
}

impl PartialEq for AffineCurveScheme {
    fn eq(&self, o: &Self) -> bool {
        self.vars == o.vars && self.same_as(o)
    }
}

impl fmt::Display for AffineCurveScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

fn check_plane_irreducible(f: &MultiPoly, vars: &[String]) -> Result<()> {
    let (x, y) = (&vars[0], &vars[1]);
    let not_integral = || Error::Precondition(format!("{f} is not irreducible over ℚ"));
    if f.is_constant() {
        return Err(Error::DegenerateInput(format!(
            "{f} does not cut out a curve"
        )));
    }
    if f.degree_in(y) == 0 {
        let fz = factor_rational(&f.to_upoly(x)?)?;
        if fz.factors.len() != 1 || fz.factors[0].1 != 1 {
            return Err(not_integral());
        }
        return Ok(());
    }
    let fs = factor_over_function_field(f, x, y)?;
    if fs.len() != 1 || fs[0].multiplicity != 1 {
        return Err(not_integral());
    }
    let content = f
        .coefficients_in(y)
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.to_upoly(x))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .reduce(|a, b| a.gcd(&b))
        .unwrap_or_else(QPoly::one);
    if !content.is_constant() {
        return Err(not_integral());
    }
    Ok(())
}

fn check_plane_smooth(f: &MultiPoly, inverted: &[MultiPoly], vars: &[String]) -> Result<()> {
    let mut ext = vars.to_vec();
    ext.push("w__".to_string());
    let lift = |p: &MultiPoly| p.with_vars(&ext).unwrap();
    let mut gens = vec![
        lift(f),
        lift(&f.derivative(&vars[0])),
        lift(&f.derivative(&vars[1])),
    ];
    if !inverted.is_empty() {
        let prod = inverted
            .iter()
            .fold(MultiPoly::one(&ext), |acc, g| acc.mul(&lift(g)));
        gens.push(MultiPoly::one(&ext).sub(&MultiPoly::var(&ext, "w__").mul(&prod)));
    }
    if is_unit_ideal(&gens)? {
        Ok(())
    } else {
        Err(Error::NotSmooth(format!(
            "({f}, ∂/∂{}, ∂/∂{}) does not generate the unit ideal",
            vars[0], vars[1]
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn sch(v: Value) -> Result<AffineCurveScheme> {
        AffineCurveScheme::from_json(&v)
    }

    #[test]
    fn classification() {
        let e = sch(json!({"label": "E", "vars": ["x", "y"], "eqs": ["y^2-x^3-x"]})).unwrap();
        assert_eq!(e.hyperelliptic().unwrap(), QPoly::from_i64(&[0, 1, 0, 1]));
        let node = sch(json!({"vars": ["x", "y"], "eqs": ["y^2-x^3-x^2"]}));
        assert!(matches!(node, Err(Error::NotSmooth(_))));
        // removing the node makes it smooth
        let ok = sch(json!({"vars": ["x", "y"], "eqs": ["y^2-x^3-x^2"], "invert": ["x"]}));
        assert!(ok.is_ok());
        let red = sch(json!({"vars": ["x", "y"], "eqs": ["x*y"]}));
        assert!(red.is_err());
        let et = sch(json!({"vars": ["t"], "eqs": ["t^3-t"]})).unwrap();
        assert_eq!(et.num_components(), 3);
        assert!(matches!(
            sch(json!({"vars": ["t"], "eqs": ["t^2"]})),
            Err(Error::NotSmooth(_))
        ));
        let gm = AffineCurveScheme::builtin("Gm").unwrap();
        assert_eq!(gm.rational_punctures().unwrap(), vec![q(0)]);
        let u = AffineCurveScheme::builtin("A1-{0,1}").unwrap();
        assert_eq!(u.rational_punctures().unwrap(), vec![q(-0), q(1)]);
        assert!(gm.same_as(&AffineCurveScheme::gm("t")));
        assert!(!gm.same_as(&AffineCurveScheme::affine_line("z")));
    }
}
