//! Zero-cycles on `𝔸¹` and the map to `Sym^n`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::correspondence::FiniteCorrespondence;
use super::scheme::{AffineCurveScheme, SchemeKind};
use crate::algebra::{factor_rational, QPoly, Q};
use crate::error::{Error, Result};

/// `Σ m_i [P_i]` with each `P_i` a closed point given by its monic minimal polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCycle {
    ambient: AffineCurveScheme,
    points: Vec<(QPoly, i64)>,
}

fn key(p: &QPoly) -> (isize, String) {
    (p.deg(), p.to_string_in("T"))
}

impl ZeroCycle {
    pub fn new(ambient: &AffineCurveScheme, points: Vec<(QPoly, i64)>) -> Result<Self> {
        if !matches!(ambient.kind(), SchemeKind::Line { .. }) {
            return Err(Error::Unsupported(format!(
                "zero-cycles are supported on open subschemes of 𝔸¹, not {}",
                ambient
            )));
        }
        let mut merged: BTreeMap<(isize, String), (QPoly, i64)> = BTreeMap::new();
        for (p, m) in points {
            let fz = factor_rational(&p)?;
            if fz.factors.len() != 1 || fz.factors[0].1 != 1 {
                return Err(Error::Precondition(format!(
                    "({}) is not a maximal ideal",
                    p.to_string_in(ambient.var().unwrap())
                )));
            }
            let p = fz.factors[0].0.clone();
            if matches!(ambient.kind(), SchemeKind::Line { removed } if removed.contains(&p)) {
                return Err(Error::Precondition(format!(
                    "the point ({}) is not on {}",
                    p.to_string_in(ambient.var().unwrap()),
                    ambient
                )));
            }
            merged.entry(key(&p)).or_insert((p, 0)).1 += m;
        }
        Ok(ZeroCycle {
            ambient: ambient.clone(),
            points: merged.into_values().filter(|(_, m)| *m != 0).collect(),
        })
    }

    /// A rational point `a`.
    pub fn rational(ambient: &AffineCurveScheme, a: &Q, m: i64) -> Result<Self> {
        Self::new(ambient, vec![(QPoly::new(vec![-a.clone(), Q::one()]), m)])
    }

    /// The cycle of a correspondence from a point.
    pub fn from_correspondence(c: &FiniteCorrespondence) -> Result<Self> {
        if c.source().var().is_some() || !matches!(c.source().kind(), SchemeKind::Point) {
            return Err(Error::Precondition(
                "zero-cycles come from correspondences out of Spec ℚ".into(),
            ));
        }
        let y = c
            .target()
            .var()
            .ok_or_else(|| Error::Unsupported("zero-cycles on a point".into()))?;
        let pts = c
            .components()
            .iter()
            .map(|(p, m)| Ok((p.generator().unwrap().to_upoly(y)?, *m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(c.target(), pts)
    }

    pub fn ambient(&self) -> &AffineCurveScheme {
        &self.ambient
    }

    pub fn points(&self) -> &[(QPoly, i64)] {
        &self.points
    }

    pub fn degree(&self) -> i64 {
        self.points.iter().map(|(p, m)| m * p.deg() as i64).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.points.iter().all(|(_, m)| *m > 0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if !self.ambient.same_as(&o.ambient) {
            return Err(Error::CompositionMismatch(
                "zero-cycles on different curves".into(),
            ));
        }
        let mut pts = self.points.clone();
        pts.extend(o.points.iter().cloned());
        Self::new(&self.ambient, pts)
    }

    /// `∏ p_i^{m_i}`, the monic polynomial whose roots are the points with multiplicity.
    pub fn characteristic_polynomial(&self) -> Result<QPoly> {
        if !self.is_effective() {
            return Err(Error::Effectivity(format!(
                "{self} has a negative multiplicity"
            )));
        }
        Ok(self
            .points
            .iter()
            .fold(QPoly::one(), |acc, (p, m)| acc.mul(&p.pow(*m as u32))))
    }
}

impl fmt::Display for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return write!(f, "0");
        }
        let v = self.ambient.var().unwrap_or("T");
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|(p, m)| {
                if *m == 1 {
                    format!("[{}]", p.to_string_in(v))
                } else {
                    format!("{m}[{}]", p.to_string_in(v))
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// The elementary symmetric functions `(e_1, …, e_n)` of the roots of an
/// effective cycle of degree `n` on `𝔸¹`.
pub fn sym_point(gamma: &ZeroCycle) -> Result<Vec<Q>> {
    if !matches!(gamma.ambient.kind(), SchemeKind::Line { removed } if removed.is_empty()) {
        return Err(Error::Precondition(format!(
            "Sym^n is taken on 𝔸¹, not {}",
            gamma.ambient
        )));
    }
    let p = gamma.characteristic_polynomial()?;
    let n = gamma.degree() as usize;
    Ok((1..=n)
        .map(|k| {
            let c = p.coeff(n - k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect())
}

/// Inverse of [`sym_point`] on its image: the cycle with the given symmetric functions.
pub fn cycle_from_sym(ambient: &AffineCurveScheme, e: &[Q]) -> Result<ZeroCycle> {
    let n = e.len();
    let mut cs = vec![Q::zero(); n + 1];
    cs[n] = Q::one();
    for (k, ek) in e.iter().enumerate() {
        let k = k + 1;
        cs[n - k] = if k % 2 == 0 { ek.clone() } else { -ek.clone() };
    }
    let f = QPoly::new(cs);
    let fz = factor_rational(&f)?;
    ZeroCycle::new(
        ambient,
        fz.factors.into_iter().map(|(p, m)| (p, m as i64)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn examples() {
        let a1 = AffineCurveScheme::affine_line("T");
        let (a, b) = (q(3), q(-5));
        let g = ZeroCycle::rational(&a1, &a, 2)
            .unwrap()
            .add(&ZeroCycle::rational(&a1, &b, 1).unwrap())
            .unwrap();
        let two = q(2);
        assert_eq!(
            sym_point(&g).unwrap(),
            vec![&two * &a + &b, &a * &a + &two * &a * &b, &a * &a * &b]
        );
        let r2 = ZeroCycle::new(&a1, vec![(QPoly::from_i64(&[-2, 0, 1]), 1)]).unwrap();
        assert_eq!(sym_point(&r2).unwrap(), vec![q(0), q(-2)]);
        let z = ZeroCycle::rational(&a1, &q(0), 3).unwrap();
        assert_eq!(sym_point(&z).unwrap(), vec![q(0); 3]);
        let neg = ZeroCycle::rational(&a1, &q(1), -1).unwrap();
        assert!(matches!(sym_point(&neg), Err(Error::Effectivity(_))));
        assert_eq!(cycle_from_sym(&a1, &sym_point(&g).unwrap()).unwrap(), g);
    }
}
