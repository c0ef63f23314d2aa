//! Multivariate rational functions `num/den` with polynomial parts over ℚ.
//!
//! Normalization is partial: exact quotients collapse, univariate fractions
//! are reduced by their gcd, common monomial factors cancel, and the
//! denominator is made monic in grlex.

use std::fmt;

use num_traits::{One, Signed};

use super::poly::MultiPoly;
use super::ratfun::QPoly;
use super::rational::{gcd_numers, lcm_denoms, qi, Q};

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars());
        RationalFunction { num: p, den }
    }

    /// Panics when `den` is zero.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RationalFunction { num, den };
        r.normalize();
        r
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<MultiPoly> {
        self.den
            .constant_value()
            .map(|c| self.num.scale(&(Q::one() / c)))
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one(self.den.vars());
            return;
        }
        if let Some(qt) = self.num.exact_div(&self.den) {
            self.num = qt;
            self.den = MultiPoly::one(self.num.vars());
            return;
        }
        let used: Vec<String> = {
            let mut u = self.num.used_vars();
            for v in self.den.used_vars() {
                if !u.contains(&v) {
                    u.push(v);
                }
            }
            u
        };
        if used.len() == 1 {
            let v = &used[0];
            let (a, b) = (self.num.to_upoly(v).unwrap(), self.den.to_upoly(v).unwrap());
            let g = a.gcd(&b);
            let (a, b) = (a.div_rem(&g).0, b.div_rem(&g).0);
            let vars = self.num.vars().to_vec();
            self.num = MultiPoly::from_upoly(&a, v).with_vars(&vars).unwrap();
            self.den = MultiPoly::from_upoly(&b, v).with_vars(&vars).unwrap();
        } else {
            self.cancel_monomial();
        }
        let lc = self.den.leading_coeff();
        let s = Q::one() / lc;
        self.num = self.num.scale(&s);
        self.den = self.den.scale(&s);
    }

    fn cancel_monomial(&mut self) {
        let n = self.num.vars().len().max(self.den.vars().len());
        let vars = {
            let a = MultiPoly::zero(self.num.vars()).add(&MultiPoly::zero(self.den.vars()));
            a.vars().to_vec()
        };
        debug_assert!(vars.len() >= n);
        self.num = self.num.with_vars(&vars).unwrap();
        self.den = self.den.with_vars(&vars).unwrap();
        let gmin = |p: &MultiPoly| -> Vec<u32> {
            let mut m: Option<Vec<u32>> = None;
            for (mono, _) in p.terms() {
                m = Some(match m {
                    None => mono.0.clone(),
                    Some(v) => v.iter().zip(&mono.0).map(|(a, b)| *a.min(b)).collect(),
                });
            }
            m.unwrap_or_else(|| vec![0; vars.len()])
        };
        let (a, b) = (gmin(&self.num), gmin(&self.den));
        let c: Vec<u32> = a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect();
        if c.iter().all(|&e| e == 0) {
            return;
        }
        let m = MultiPoly::from_terms(&vars, [(c, Q::one())]);
        self.num = self.num.exact_div(&m).unwrap();
        self.den = self.den.exact_div(&m).unwrap();
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// `None` on division by zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.num.is_zero() {
            return None;
        }
        Some(Self::new(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(self.num.pow(e), self.den.pow(e))
    }

    pub fn derivative(&self, var: &str) -> Self {
        let n = self
            .num
            .derivative(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(var)));
        Self::new(n, self.den.mul(&self.den))
    }

    /// Univariate view, if only `var` occurs.
    pub fn to_ratfun(&self, var: &str) -> Option<super::ratfun::RatFun> {
        let n = self.num.to_upoly(var).ok()?;
        let d = self.den.to_upoly(var).ok()?;
        Some(super::ratfun::RatFun::new(n, d))
    }

    pub fn from_ratfun(r: &super::ratfun::RatFun, var: &str) -> Self {
        Self::new(
            MultiPoly::from_upoly(r.num(), var),
            MultiPoly::from_upoly(r.den(), var),
        )
    }

    pub fn from_upoly(p: &QPoly, var: &str) -> Self {
        Self::from_poly(MultiPoly::from_upoly(p, var))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

fn needs_parens(p: &MultiPoly, denominator: bool) -> bool {
    if p.num_terms() > 1 {
        return true;
    }
    if !denominator {
        return false;
    }
    match p.terms().next() {
        Some((m, c)) => !m.is_one() && (!c.is_one() || m.0.iter().filter(|&&e| e > 0).count() > 1),
        None => false,
    }
}

impl RationalFunction {
    /// Printed numerator and, unless the function is a polynomial, printed
    /// denominator, both parenthesized where a following `/` or `*` needs it.
    pub fn display_parts(&self) -> (String, Option<String>) {
        if let Some(p) = self.as_poly() {
            let s = p.to_string();
            return (
                if needs_parens(&p, false) {
                    format!("({s})")
                } else {
                    s
                },
                None,
            );
        }
        let l = lcm_denoms(
            self.num
                .terms()
                .map(|t| t.1)
                .chain(self.den.terms().map(|t| t.1)),
        );
        let (n, d) = (self.num.scale(&qi(&l)), self.den.scale(&qi(&l)));
        let g = gcd_numers(n.terms().map(|t| t.1).chain(d.terms().map(|t| t.1)));
        let mut s = Q::one() / qi(&g);
        if d.leading_coeff().is_negative() {
            s = -s;
        }
        let (n, d) = (n.scale(&s), d.scale(&s));
        let ns = n.to_string();
        let ds = d.to_string();
        let ns = if needs_parens(&n, false) {
            format!("({ns})")
        } else {
            ns
        };
        let ds = if needs_parens(&d, true) {
            format!("({ds})")
        } else {
            ds
        };
        (ns, Some(ds))
    }
}

impl fmt::Display for RationalFunction {
    /// Numerator and denominator scaled to coprime integer coefficients with
    /// positive leading denominator coefficient; e.g. `(3*x^2+1)/(2*y)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_poly() {
            return write!(f, "{p}");
        }
        let (n, d) = self.display_parts();
        write!(f, "{n}/{}", d.unwrap())
    }
}
