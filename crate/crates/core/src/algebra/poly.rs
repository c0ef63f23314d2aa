//! Sparse multivariate polynomials over ℚ.
//!
//! A [`MultiPoly`] carries its own ordered variable list. Binary operations
//! align variable lists by appending unknown variables of the right operand,
//! so `x + y` over `[x]` and `[y]` lives over `[x, y]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ratfun::QPoly;
use super::rational::{fmt_q, gcd_numers, lcm_denoms, q, qi, Q};
use crate::error::{Error, Result};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `self / o`, assuming `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total_degree()
            .cmp(&o.total_degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Monomial orders supported by the Gröbner engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TermOrder {
    #[default]
    GrLex,
    Lex,
}

impl TermOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::GrLex => a.cmp(b),
            TermOrder::Lex => a.0.cmp(&b.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Q>,
}

pub const MAX_EXPONENT: u32 = 1 << 31;

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: Q) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Q::one())
    }

    /// The polynomial `name` over `vars` (the variable is appended if absent).
    pub fn var(vars: &[String], name: &str) -> Self {
        let mut vs = vars.to_vec();
        let i = match vs.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                vs.push(name.to_string());
                vs.len() - 1
            }
        };
        let mut e = vec![0; vs.len()];
        e[i] = 1;
        let mut p = Self::zero(&vs);
        p.terms.insert(Monomial(e), Q::one());
        p
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Q> {
        self.is_constant()
            .then(|| self.terms.values().next().cloned().unwrap_or_else(Q::zero))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Re-express over `vars`, which must contain every variable actually used.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = k,
                    None => {
                        return Err(Error::Precondition(format!(
                            "variable {} not available in target ring",
                            self.vars[i]
                        )))
                    }
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// The same polynomial with its variables renamed positionally.
    pub fn renamed(&self, to: &[String]) -> Result<Self> {
        if to.len() != self.vars.len() {
            return Err(Error::Precondition(format!(
                "cannot rename {} variables to {}",
                self.vars.len(),
                to.len()
            )));
        }
        Ok(Self::from_terms(
            to,
            self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())),
        ))
    }

    /// Variables that actually occur.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m.0[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    fn merged_vars(&self, o: &Self) -> Vec<String> {
        let mut vs = self.vars.clone();
        for v in &o.vars {
            if !vs.contains(v) {
                vs.push(v.clone());
            }
        }
        vs
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        if self.vars == o.vars {
            return (self.clone(), o.clone());
        }
        let vs = self.merged_vars(o);
        (self.with_vars(&vs).unwrap(), o.with_vars(&vs).unwrap())
    }

    pub fn add(&self, o: &Self) -> Self {
        let (mut a, b) = self.aligned(o);
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        a
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.aligned(o);
        let mut out = Self::zero(&a.vars);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Leading monomial and coefficient under `order`.
    pub fn leading(&self, order: TermOrder) -> Option<(&Monomial, &Q)> {
        match order {
            TermOrder::GrLex => self.terms.iter().next_back(),
            TermOrder::Lex => self.terms.iter().max_by(|a, b| a.0 .0.cmp(&b.0 .0)),
        }
    }

    pub fn leading_coeff(&self) -> Q {
        self.leading(TermOrder::GrLex)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    /// Scale so the grlex-leading coefficient is 1.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.leading_coeff()))
    }

    /// Scale to integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = lcm_denoms(self.terms.values());
        let p = self.scale(&qi(&l));
        let g = gcd_numers(p.terms.values());
        let mut s = Q::one() / qi(&g);
        if p.leading_coeff().is_negative() {
            s = -s;
        }
        p.scale(&s)
    }

    pub fn derivative(&self, var: &str) -> Self {
        let Some(i) = self.var_index(var) else {
            return Self::zero(&self.vars);
        };
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            out.add_term(Monomial(e), c * q(m.0[i] as i64));
        }
        out
    }

    /// Substitute `var := value`; the variable list is kept (plus any new variables of `value`).
    pub fn substitute(&self, var: &str, value: &MultiPoly) -> Self {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        let vs = self.merged_vars(value);
        let value = value.with_vars(&vs).unwrap();
        let base = self.with_vars(&vs).unwrap();
        let maxe = self.degree_in(var) as usize;
        let mut powers = vec![MultiPoly::one(&vs)];
        for k in 1..=maxe {
            powers.push(powers[k - 1].mul(&value));
        }
        let mut out = MultiPoly::zero(&vs);
        for (m, c) in &base.terms {
            let mut e = m.0.clone();
            let k = e[i] as usize;
            e[i] = 0;
            out = out.add(&powers[k].mul_term(&Monomial(e), c));
        }
        out
    }

    pub fn eval_var(&self, var: &str, value: &Q) -> Self {
        self.substitute(var, &MultiPoly::constant(&self.vars, value.clone()))
    }

    /// Coefficients with respect to `var`: `self = sum_k c_k * var^k`.
    pub fn coefficients_in(&self, var: &str) -> Vec<MultiPoly> {
        let Some(i) = self.var_index(var) else {
            return vec![self.clone()];
        };
        let n = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(&self.vars); n + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i] as usize;
            e[i] = 0;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Inverse of [`MultiPoly::coefficients_in`].
    pub fn from_coefficients(var: &str, coeffs: &[MultiPoly], vars: &[String]) -> Self {
        let x = MultiPoly::var(vars, var);
        let mut out = MultiPoly::zero(x.vars());
        let mut pw = MultiPoly::one(x.vars());
        for c in coeffs {
            out = out.add(&c.mul(&pw));
            pw = pw.mul(&x);
        }
        out
    }

    /// Convert to a dense univariate polynomial in `var`; fails when other variables occur.
    pub fn to_upoly(&self, var: &str) -> Result<QPoly> {
        let i = self.var_index(var);
        let mut coeffs: Vec<Q> = Vec::new();
        for (m, c) in &self.terms {
            let k = match i {
                Some(i) => {
                    if m.0.iter().enumerate().any(|(j, &e)| j != i && e > 0) {
                        return Err(Error::Precondition(format!(
                            "polynomial {self} is not univariate in {var}"
                        )));
                    }
                    m.0[i] as usize
                }
                None => {
                    if !m.is_one() {
                        return Err(Error::Precondition(format!(
                            "polynomial {self} does not involve {var} only"
                        )));
                    }
                    0
                }
            };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Q::zero());
            }
            coeffs[k] = c.clone();
        }
        Ok(QPoly::new(coeffs))
    }

    pub fn from_upoly(p: &QPoly, var: &str) -> Self {
        let vars = vec![var.to_string()];
        Self::from_terms(
            &vars,
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], c.clone())),
        )
    }

    pub fn eval(&self, point: &[(String, Q)]) -> Result<Q> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = point
                    .iter()
                    .find(|(n, _)| *n == self.vars[i])
                    .ok_or_else(|| {
                        Error::Precondition(format!("no value for variable {}", self.vars[i]))
                    })?;
                t *= num_traits::pow(v.1.clone(), e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact multivariate division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (mut r, d) = self.aligned(d);
        let (dm, dc) = {
            let (m, c) = d.leading(TermOrder::GrLex).unwrap();
            (m.clone(), c.clone())
        };
        let mut quot = Self::zero(&r.vars);
        while let Some((m, c)) = r
            .leading(TermOrder::GrLex)
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            if !dm.divides(&m) {
                return None;
            }
            let qm = m.div(&dm);
            let qc = &c / &dc;
            r = r.sub(&d.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn check_exponents(&self) -> Result<()> {
        if self
            .terms
            .keys()
            .any(|m| m.0.iter().any(|&e| e >= MAX_EXPONENT))
        {
            return Err(Error::DegenerateInput("exponent >= 2^31".into()));
        }
        Ok(())
    }

    fn fmt_monomial(&self, m: &Monomial) -> String {
        m.0.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.vars[i].clone()
                } else {
                    format!("{}^{}", self.vars[i], e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Multiply by `c` so coefficients are integers: returns the integer content scaling.
    pub fn integer_scale(&self) -> BigInt {
        lcm_denoms(self.terms.values())
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = self.aligned(o);
        a.terms == b.terms
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in descending grlex order; a coefficient of `-1` prints as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{}", self.fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), self.fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// Owned variable list helper.
pub fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}
