//! Univariate rational functions: the field ℚ(x).

use num_traits::{One, Zero};

use super::field::Field;
use super::rational::{lcm_denoms, qi, Q};
use super::upoly::UniPoly;

pub type QPoly = UniPoly<Q>;

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFun {
    num: QPoly,
    den: QPoly,
}

impl RatFun {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_poly(QPoly::zero());
        }
        let g = num.gcd(&den);
        let (n, d) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let lc = d.lc();
        let inv = Field::inv(&lc);
        RatFun {
            num: n.scale(&inv),
            den: d.scale(&inv),
        }
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFun {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(QPoly::var())
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn as_constant(&self) -> Option<Q> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn derivative(&self) -> Self {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den))
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if num_traits::Zero::is_zero(&d) {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// Substitute `x -> g`.
    pub fn compose(&self, g: &RatFun) -> Option<RatFun> {
        let ev = |p: &QPoly| {
            p.coeffs().iter().rev().fold(RatFun::zero(), |acc, c| {
                acc.mul(g).add(&RatFun::constant(c.clone()))
            })
        };
        let d = ev(&self.den);
        if Field::is_zero(&d) {
            return None;
        }
        Some(ev(&self.num).div(&d))
    }

    /// Degree of numerator minus degree of denominator (`None` for zero);
    /// equals minus the order at infinity.
    pub fn degree(&self) -> Option<isize> {
        if self.num.is_zero() {
            None
        } else {
            Some(self.num.deg() - self.den.deg())
        }
    }

    /// Content-free integer form of the numerator and denominator scaled together.
    pub fn to_string_in(&self, v: &str) -> String {
        let n = self.num.to_string_in(v);
        if self.is_polynomial() {
            return n;
        }
        let wrap = |s: String, p: &QPoly| {
            let terms = p.coeffs().iter().filter(|c| !Zero::is_zero(*c)).count();
            if terms > 1 || (terms == 1 && !p.is_constant() && !One::is_one(&p.lc())) {
                format!("({s})")
            } else {
                s
            }
        };
        // clear rational coefficients in the denominator
        let l = lcm_denoms(self.den.coeffs());
        let scale = qi(&l);
        let num = self.num.scale(&scale);
        let den = self.den.scale(&scale);
        let num_s = wrap(num.to_string_in(v), &num);
        let den_s = wrap(den.to_string_in(v), &den);
        format!("{num_s}/{den_s}")
    }
}

impl Field for RatFun {
    fn zero() -> Self {
        Self::from_poly(QPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(QPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_polynomial() && o.is_polynomial() {
            let c = self.den.coeff(0).clone() * o.den.coeff(0);
            return Self::new(self.num.mul(&o.num), QPoly::constant(c));
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero rational function");
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
    fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn from_q(c: &Q) -> Self {
        Self::constant(c.clone())
    }
}
