//! Laurent expansions, residues and logarithmic forms on `P¹`.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::form::{DifferentialForm, KaehlerPresentation};
use crate::algebra::rational::fmt_q;
use crate::algebra::{factor_rational, parse_poly, QPoly, RatFun, RationalFunction, Q};
use crate::error::{Error, Result};

/// Largest pole order the expansions will handle.
pub const POLE_BOUND: usize = 512;

/// A rational point of `P¹`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum P1Point {
    Finite(Q),
    Infinity,
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(a) => write!(f, "{}", fmt_q(a)),
            P1Point::Infinity => write!(f, "∞"),
        }
    }
}

/// `Σ_{i ≥ 0} coeffs[i] s^{valuation + i}`, truncated.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    pub valuation: i64,
    pub coeffs: Vec<Q>,
}

impl Laurent {
    pub fn coeff(&self, e: i64) -> Q {
        if e < self.valuation {
            return <Q as Zero>::zero();
        }
        self.coeffs
            .get((e - self.valuation) as usize)
            .cloned()
            .unwrap_or_else(<Q as Zero>::zero)
    }
}

fn low_order(p: &QPoly) -> usize {
    p.coeffs()
        .iter()
        .position(|c| !Zero::is_zero(c))
        .unwrap_or(0)
}

/// Expansion of `s^shift · n/d` at `s = 0` through the exponent `upto`.
fn expand(n: &QPoly, d: &QPoly, shift: i64, upto: i64) -> Result<Option<Laurent>> {
    if n.is_zero() {
        return Ok(None);
    }
    let (vn, vd) = (low_order(n), low_order(d));
    let n1: Vec<Q> = n.coeffs()[vn..].to_vec();
    let d1: Vec<Q> = d.coeffs()[vd..].to_vec();
    let valuation = vn as i64 - vd as i64 + shift;
    if -valuation > POLE_BOUND as i64 {
        return Err(Error::Precondition(format!(
            "pole of order {} exceeds the bound {POLE_BOUND}",
            -valuation
        )));
    }
    let count = (upto - valuation + 1).max(0) as usize;
    let inv0 = <Q as One>::one() / d1[0].clone();
    let mut c: Vec<Q> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = n1.get(k).cloned().unwrap_or_else(<Q as Zero>::zero);
        for j in 1..=k.min(d1.len() - 1) {
            acc -= &d1[j] * &c[k - j];
        }
        c.push(acc * &inv0);
    }
    Ok(Some(Laurent {
        valuation,
        coeffs: c,
    }))
}

fn reversed(p: &QPoly) -> QPoly {
    let mut c = p.coeffs().to_vec();
    c.reverse();
    QPoly::new(c)
}

/// Local expansion of `f` (a function) or `f dz` (a form, in the local parameter)
/// at `p`; the parameter is `z - a` at finite points and `w = 1/z` at infinity.
pub fn local_expansion(
    f: &RatFun,
    p: &P1Point,
    is_form: bool,
    upto: i64,
) -> Result<Option<Laurent>> {
    match p {
        P1Point::Finite(a) => {
            let sh = QPoly::new(vec![a.clone(), <Q as One>::one()]);
            expand(&f.num().compose(&sh), &f.den().compose(&sh), 0, upto)
        }
        P1Point::Infinity => {
            if f.num().is_zero() {
                return Ok(None);
            }
            let (dn, dd) = (f.num().deg() as i64, f.den().deg() as i64);
            let (n, shift) = if is_form {
                (reversed(f.num()).neg(), dd - dn - 2)
            } else {
                (reversed(f.num()), dd - dn)
            };
            expand(&n, &reversed(f.den()), shift, upto)
        }
    }
}

/// The coefficient of a one-variable 1-form (or function) as an element of ℚ(z).
fn univariate(omega: &DifferentialForm) -> Result<RatFun> {
    if omega.vars().len() != 1 || omega.degree() > 1 {
        return Err(Error::Precondition(
            "expected a form in one coordinate".into(),
        ));
    }
    let v = &omega.vars()[0];
    let key: Vec<usize> = if omega.degree() == 1 { vec![0] } else { vec![] };
    omega
        .coefficient(&key)
        .to_ratfun(v)
        .ok_or_else(|| Error::Precondition("coefficient is not univariate".into()))
}

/// `res_p ω`, the coefficient of `ds/s` at `p`.
pub fn residue(omega: &DifferentialForm, p: &P1Point) -> Result<Q> {
    if omega.degree() != 1 {
        return Err(Error::Precondition(
            "residues are defined for 1-forms".into(),
        ));
    }
    let f = univariate(omega)?;
    Ok(local_expansion(&f, p, true, -1)?
        .map(|l| l.coeff(-1))
        .unwrap_or_else(<Q as Zero>::zero))
}

/// Order of vanishing at `p` (negative for poles); `None` for the zero form.
pub fn order_at(omega: &DifferentialForm, p: &P1Point) -> Result<Option<i64>> {
    let f = univariate(omega)?;
    Ok(local_expansion(&f, p, omega.degree() == 1, i64::MIN / 2)?.map(|l| l.valuation))
}

/// Pole order at `p` (0 if regular).
pub fn pole_order(omega: &DifferentialForm, p: &P1Point) -> Result<usize> {
    Ok(order_at(omega, p)?
        .map(|v| (-v).max(0) as usize)
        .unwrap_or(0))
}

/// Finite rational poles of a one-variable form, plus whether some pole is not rational.
pub fn finite_poles(omega: &DifferentialForm) -> Result<(Vec<Q>, bool)> {
    let f = univariate(omega)?;
    if f.den().is_constant() {
        return Ok((vec![], false));
    }
    let fz = factor_rational(f.den())?;
    let mut pts = Vec::new();
    let mut irrational = false;
    for (g, _) in fz.factors {
        if g.deg() == 1 {
            pts.push(-g.coeff(0));
        } else {
            irrational = true;
        }
    }
    Ok((pts, irrational))
}

/// A reduced divisor of rational points on `P¹`, each with a local parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDivisor {
    var: String,
    points: Vec<(P1Point, String)>,
}

impl LogDivisor {
    pub fn new(var: &str, mut points: Vec<P1Point>) -> Result<Self> {
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(
                "boundary points must be distinct".into(),
            ));
        }
        let points = points
            .into_iter()
            .map(|p| {
                let param = match &p {
                    P1Point::Finite(a) if Zero::is_zero(a) => var.to_string(),
                    P1Point::Finite(a) => {
                        let s = fmt_q(&-a.clone());
                        if s.starts_with('-') {
                            format!("{var}{s}")
                        } else {
                            format!("{var}+{s}")
                        }
                    }
                    P1Point::Infinity => format!("1/{var}"),
                };
                (p, param)
            })
            .collect();
        Ok(LogDivisor {
            var: var.to_string(),
            points,
        })
    }

    pub fn empty(var: &str) -> Self {
        LogDivisor {
            var: var.to_string(),
            points: vec![],
        }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn points(&self) -> Vec<P1Point> {
        self.points.iter().map(|p| p.0.clone()).collect()
    }

    pub fn contains(&self, p: &P1Point) -> bool {
        self.points.iter().any(|q| q.0 == *p)
    }

    /// `{"model": "P1", "points": [{"ideal": "z-1", "param": "z-1"}, {"ideal": "w"}]}`.
    pub fn from_json(v: &Value, var: &str) -> Result<Self> {
        match v.get("model").and_then(Value::as_str) {
            Some("P1") | None => {}
            Some(m) => {
                return Err(Error::Unsupported(format!(
                    "divisors on the model {m}; only P1 is supported"
                )))
            }
        }
        let mut pts = Vec::new();
        for p in v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Precondition("divisor needs a 'points' array".into()))?
        {
            let ideal = p
                .get("ideal")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Precondition("boundary point needs an 'ideal'".into()))?;
            pts.push(point_from_ideal(ideal, var)?);
        }
        Self::new(var, pts)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": "P1",
            "points": self.points.iter().map(|(p, param)| json!({
                "ideal": match p { P1Point::Infinity => "w".to_string(), _ => param.clone() },
                "param": param,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `"z-a"` names the point `a`; `"w"` or `"1/z"` names infinity.
pub fn point_from_ideal(ideal: &str, var: &str) -> Result<P1Point> {
    let s: String = ideal.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "w" || s == format!("1/{var}") {
        return Ok(P1Point::Infinity);
    }
    let p = parse_poly(&s, &[var])?.to_upoly(var)?;
    if p.deg() != 1 {
        return Err(Error::UnsupportedPoint(format!(
            "({ideal}) is not a rational point of P¹"
        )));
    }
    Ok(P1Point::Finite(-p.coeff(0) / p.coeff(1)))
}

/// A form on `P¹ ∖ D` with at worst logarithmic poles along `D`.
#[derive(Clone, Debug)]
pub struct LogForm {
    form: DifferentialForm,
    divisor: LogDivisor,
}

impl LogForm {
    pub fn new(form: DifferentialForm, divisor: LogDivisor) -> Result<Self> {
        if let Some(why) = log_defect(&form, &divisor)? {
            return Err(Error::Precondition(why));
        }
        Ok(LogForm { form, divisor })
    }

    pub fn form(&self) -> &DifferentialForm {
        &self.form
    }

    pub fn divisor(&self) -> &LogDivisor {
        &self.divisor
    }

    pub fn residues(&self) -> Result<Vec<(P1Point, Q)>> {
        if self.form.degree() != 1 {
            return Ok(vec![]);
        }
        self.divisor
            .points()
            .into_iter()
            .map(|p| residue(&self.form, &p).map(|r| (p, r)))
            .collect()
    }
}

/// Why `form` fails to be a log form along `divisor`, if it does.
pub fn log_defect(form: &DifferentialForm, divisor: &LogDivisor) -> Result<Option<String>> {
    if form.vars() != [divisor.var().to_string()] {
        return Err(Error::Precondition(format!(
            "form in [{}], divisor in {}",
            form.vars().join(", "),
            divisor.var()
        )));
    }
    if form.is_zero() {
        return Ok(None);
    }
    let (finite, irrational) = finite_poles(form)?;
    if irrational {
        return Ok(Some(format!("{form} has a pole at a non-rational point")));
    }
    let allowed = if form.degree() == 1 { 1 } else { 0 };
    let mut pts: Vec<P1Point> = finite.into_iter().map(P1Point::Finite).collect();
    pts.push(P1Point::Infinity);
    for p in pts {
        let k = pole_order(form, &p)?;
        let lim = if divisor.contains(&p) { allowed } else { 0 };
        if k > lim {
            return Ok(Some(format!("{form} has a pole of order {k} at {p}")));
        }
    }
    Ok(None)
}

/// `dz/(z-a)`.
pub fn dlog_at(var: &str, a: &Q) -> DifferentialForm {
    let p = KaehlerPresentation::free(&[var.to_string()]);
    let f = RatFun::new(
        QPoly::one(),
        QPoly::new(vec![-a.clone(), <Q as One>::one()]),
    );
    let c = RationalFunction::from_ratfun(&f, var);
    DifferentialForm::new(&p, 1, vec![(c, vec![format!("d{var}")])]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_rational_function, q, qf};

    fn form(s: &str) -> DifferentialForm {
        let p = KaehlerPresentation::free(&["z".to_string()]);
        DifferentialForm::new(
            &p,
            1,
            vec![(
                parse_rational_function(s, &["z"]).unwrap(),
                vec!["dz".into()],
            )],
        )
        .unwrap()
    }

    #[test]
    fn residues() {
        let w = form("1/z");
        assert_eq!(residue(&w, &P1Point::Finite(q(0))).unwrap(), q(1));
        assert_eq!(residue(&w, &P1Point::Infinity).unwrap(), q(-1));
        assert_eq!(residue(&form("z"), &P1Point::Finite(q(0))).unwrap(), q(0));
        assert_eq!(pole_order(&form("1"), &P1Point::Infinity).unwrap(), 2);
        assert_eq!(
            pole_order(&form("1/z^3"), &P1Point::Finite(q(0))).unwrap(),
            3
        );
        assert!(pole_order(
            &form(&format!("1/z^{}", POLE_BOUND + 1)),
            &P1Point::Finite(q(0))
        )
        .is_err());
        let r = form("(z^2+3)/(z*(z-1)^2*(z+2))");
        let pts = [
            P1Point::Finite(q(0)),
            P1Point::Finite(q(1)),
            P1Point::Finite(q(-2)),
            P1Point::Infinity,
        ];
        let total: Q = pts.iter().map(|p| residue(&r, p).unwrap()).sum();
        assert_eq!(total, q(0));
    }

    #[test]
    fn log_divisors() {
        let d = LogDivisor::from_json(
            &json!({"model": "P1", "points": [{"ideal": "z"}, {"ideal": "w"}]}),
            "z",
        )
        .unwrap();
        assert!(LogForm::new(form("1/z"), d.clone()).is_ok());
        assert!(LogForm::new(form("1/z^2"), d.clone()).is_err());
        assert!(LogForm::new(form("1/(z-1)"), d.clone()).is_err());
        assert!(LogForm::new(form("1"), d.clone()).is_err());
        assert_eq!(
            point_from_ideal("z^2+1", "z").unwrap_err().tag(),
            "unsupported-point"
        );
        assert_eq!(
            point_from_ideal("2*z-1", "z").unwrap(),
            P1Point::Finite(qf(1, 2))
        );
    }
}
