//! Closures of correspondences in `P¹ × P¹` and transfers of log forms.

use std::fmt;

use super::residue::{log_defect, LogDivisor, LogForm, P1Point};
use super::transfer::transfer;
use crate::algebra::{factor_rational, MultiPoly, QPoly, Q};
use crate::error::{Error, Result};
use crate::varieties::{FiniteCorrespondence, SchemeKind};

/// One bihomogenized component `F̄(x, w; y, v)` of bidegree `(dx, dy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureComponent {
    pub form: MultiPoly,
    pub multiplicity: i64,
    pub bidegree: (u32, u32),
    /// Coefficients of `y^j v^{dy-j}`, as polynomials in `x` (dehomogenized at `w = 1`).
    coeffs: Vec<QPoly>,
}

/// The closure `Γ̄ ⊂ P¹ × P¹` of a correspondence between open subschemes of `𝔸¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureCycle {
    /// `[x, w, y, v]`: affine coordinates and their homogenizing partners.
    pub vars: Vec<String>,
    pub components: Vec<ClosureComponent>,
}

fn fresh(name: &str, taken: &[String]) -> String {
    let mut s = name.to_string();
    while taken.contains(&s) {
        s.push('_');
    }
    s
}

/// Bihomogenize every component and certify finiteness over `P¹` of the source.
pub fn extend_correspondence(gamma: &FiniteCorrespondence) -> Result<ClosureCycle> {
    for (role, s) in [("source", gamma.source()), ("target", gamma.target())] {
        if !matches!(s.kind(), SchemeKind::Line { .. }) {
            return Err(Error::Unsupported(format!(
                "closures in P¹ × P¹ need a line as {role}, got {}",
                s.label()
            )));
        }
    }
    let mut vars: Vec<String> = Vec::new();
    let mut comps = Vec::new();
    for (c, m) in gamma.components() {
        let pv = c.vars().to_vec();
        let (x, y) = (pv[0].clone(), pv[1].clone());
        let w = fresh("w", &pv);
        let v = fresh("v", &[pv.clone(), vec![w.clone()]].concat());
        let hv = vec![x.clone(), w.clone(), y.clone(), v.clone()];
        if vars.is_empty() {
            vars = hv.clone();
        }
        let g = c.generator().unwrap();
        let (dx, dy) = (g.degree_in(&x), g.degree_in(&y));
        let mut terms = Vec::new();
        for (mono, k) in g.terms() {
            let (i, j) = (mono.0[0], mono.0[1]);
            terms.push((vec![i, dx - i, j, dy - j], k.clone()));
        }
        let form = MultiPoly::from_terms(&hv, terms).primitive_integer();
        let coeffs: Vec<QPoly> = g
            .coefficients_in(&y)
            .iter()
            .map(|p| p.to_upoly(&x))
            .collect::<Result<_>>()?;
        // no common zero of the coefficient forms on P¹_x
        let g0 = coeffs.iter().fold(QPoly::zero(), |a, b| a.gcd(b));
        let at_inf = coeffs.iter().any(|p| p.deg() == dx as isize);
        if !g0.is_constant() || !at_inf {
            return Err(Error::Model(format!(
                "closure of V({g}) is not finite over P¹"
            )));
        }
        comps.push(ClosureComponent {
            form,
            multiplicity: *m,
            bidegree: (dx, dy),
            coeffs,
        });
    }
    if vars.is_empty() {
        let pv = crate::varieties::product_vars(gamma.source().vars(), gamma.target().vars());
        let w = fresh("w", &pv);
        let v = fresh("v", &[pv.clone(), vec![w.clone()]].concat());
        vars = vec![pv[0].clone(), w, pv[1].clone(), v];
    }
    Ok(ClosureCycle {
        vars,
        components: comps,
    })
}

impl ClosureCycle {
    /// `Σ m · dy`, the degree over `P¹` of the source.
    pub fn degree(&self) -> i64 {
        self.components
            .iter()
            .map(|c| c.multiplicity * c.bidegree.1 as i64)
            .sum()
    }

    /// Source points whose fiber meets `q`.
    pub fn preimage(&self, q: &P1Point) -> Result<Vec<P1Point>> {
        let mut out = Vec::new();
        for c in &self.components {
            let dx = c.bidegree.0 as isize;
            let p = match q {
                P1Point::Finite(b) => {
                    let mut acc = QPoly::zero();
                    let mut pow = Q::from_integer(1.into());
                    for cj in &c.coeffs {
                        acc = acc.add(&cj.scale(&pow));
                        pow *= b;
                    }
                    acc
                }
                P1Point::Infinity => c.coeffs.last().cloned().unwrap_or_else(QPoly::zero),
            };
            if p.is_zero() {
                return Err(Error::Precondition(format!(
                    "component V({}) lies over {q} entirely",
                    c.form
                )));
            }
            if p.deg() < dx {
                out.push(P1Point::Infinity);
            }
            if p.deg() > 0 {
                for (f, _) in factor_rational(&p)?.factors {
                    if f.deg() != 1 {
                        return Err(Error::UnsupportedPoint(format!(
                            "the preimage of {q} contains a point of degree {}",
                            f.deg()
                        )));
                    }
                    out.push(P1Point::Finite(-f.coeff(0)));
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for ClosureCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.components.iter().enumerate() {
            let m = c.multiplicity;
            if i > 0 && m > 0 {
                write!(f, "+")?;
            }
            match m {
                1 => {}
                -1 => write!(f, "-")?,
                _ => write!(f, "{m}*")?,
            }
            write!(f, "V({})", c.form)?;
        }
        Ok(())
    }
}

/// Transfer a log form on `(P¹, D_Y)` to `(P¹, D_X)`, `D_X` the preimage of `D_Y`.
pub fn log_transfer(gamma: &FiniteCorrespondence, omega: &LogForm) -> Result<LogForm> {
    let closure = extend_correspondence(gamma)?;
    let mut pts = Vec::new();
    for q in omega.divisor().points() {
        pts.extend(closure.preimage(&q)?);
    }
    pts.sort();
    pts.dedup();
    let var = gamma.source().vars()[0].clone();
    let divisor = LogDivisor::new(&var, pts)?;
    let form = transfer(gamma, omega.form())?;
    if let Some(why) = log_defect(&form, &divisor)? {
        return Err(Error::InvariantViolation(format!(
            "transfer is not logarithmic: {why}"
        )));
    }
    LogForm::new(form, divisor)
}
