//! Finite monogenic extensions `A[t]/(f)` of a point or line and the trace on forms.

use num_traits::Zero;

use super::form::{DifferentialForm, KaehlerPresentation};
use crate::algebra::factor::{bivariate_to_qx, from_bivariate, qx_to_primitive, to_bivariate};
use crate::algebra::{resultant, Field, MultiPoly, QPoly, RatFun, RationalFunction, UniPoly, Q};
use crate::error::{Error, Result};
use crate::varieties::{AffineCurveScheme, SchemeKind};

/// An element of `L = K[t]/(f)`, `K` the function field of the base.
pub type LElem = UniPoly<RatFun>;

/// `B = A[t]/(f)` with `f` monic in `t` and separable over `Frac(A)`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebraExtension {
    base: AffineCurveScheme,
    z: Option<String>,
    t: String,
    f: LElem,
    /// `Res_t(f, ∂f/∂t)`, cleared of denominators; nonzero.
    discriminant: MultiPoly,
}

fn rf_in(p: &QPoly, z: &Option<String>) -> RationalFunction {
    match z {
        Some(z) => RationalFunction::from_upoly(p, z),
        None => RationalFunction::from_poly(MultiPoly::constant(&[], p.coeff(0))),
    }
}

fn ratfun_to_rf(r: &RatFun, z: &Option<String>) -> RationalFunction {
    match z {
        Some(z) => RationalFunction::from_ratfun(r, z),
        None => {
            let c = r.as_constant().unwrap_or_else(<Q as Zero>::zero);
            RationalFunction::from_poly(MultiPoly::constant(&[], c))
        }
    }
}

impl FiniteAlgebraExtension {
    /// `f` is a polynomial in the base coordinate (if any) and `t`, with
    /// leading `t`-coefficient a unit on the base.
    pub fn new(base: &AffineCurveScheme, t: &str, f: &MultiPoly) -> Result<Self> {
        let z = Self::base_var(base)?;
        let vars = Self::vars_of(&z, t);
        let f = f.with_vars(&vars)?;
        let zname = z.clone().unwrap_or_else(|| "z__".to_string());
        let cs = if z.is_some() {
            to_bivariate(&f, &zname, t)?
        } else {
            f.coefficients_in(t)
                .iter()
                .map(|c| c.constant_value().map(QPoly::constant))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| {
                    Error::Precondition("coefficients over a point must be constants".into())
                })?
        };
        let lc = cs.last().cloned().unwrap_or_else(QPoly::zero);
        if cs.len() < 2 || lc.is_zero() {
            return Err(Error::DegenerateInput(format!("{f} has degree 0 in {t}")));
        }
        if !base.is_unit(&lc) {
            return Err(Error::Precondition(format!(
                "leading coefficient {} is not a unit on {}; the extension is not finite",
                lc.to_string_in(&zname),
                base.label()
            )));
        }
        let fk = bivariate_to_qx(&cs);
        let inv = fk.lc().inv();
        Self::from_monic(base, t, fk.scale(&inv))
    }

    pub fn from_monic(base: &AffineCurveScheme, t: &str, f: LElem) -> Result<Self> {
        let z = Self::base_var(base)?;
        if f.deg() < 1 || !f.lc().is_one() {
            return Err(Error::Precondition(
                "extension polynomial must be monic of positive degree".into(),
            ));
        }
        let zname = z.clone().unwrap_or_else(|| "z__".to_string());
        let prim = from_bivariate(&qx_to_primitive(&f), &zname, t);
        let disc = resultant(&prim, &prim.derivative(t), t)?;
        if disc.is_zero() {
            return Err(Error::Separability(format!(
                "Res_{t}(f, f_{t}) = 0 for f = {prim}: f_{t} is not invertible in the extension"
            )));
        }
        Ok(FiniteAlgebraExtension {
            base: base.clone(),
            z,
            t: t.to_string(),
            f,
            discriminant: disc,
        })
    }

    fn base_var(base: &AffineCurveScheme) -> Result<Option<String>> {
        match base.kind() {
            SchemeKind::Point => Ok(None),
            SchemeKind::Line { .. } => Ok(Some(base.vars()[0].clone())),
            _ => Err(Error::Unsupported(format!(
                "extensions of {}: the base must be a point or an open subscheme of 𝔸¹",
                base.label()
            ))),
        }
    }

    fn vars_of(z: &Option<String>, t: &str) -> Vec<String> {
        match z {
            Some(z) => vec![z.clone(), t.to_string()],
            None => vec![t.to_string()],
        }
    }

    pub fn base(&self) -> &AffineCurveScheme {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.f.deg() as usize
    }

    pub fn polynomial(&self) -> &LElem {
        &self.f
    }

    pub fn discriminant(&self) -> &MultiPoly {
        &self.discriminant
    }

    /// Coordinates of `B`: the base coordinate (if any), then `t`.
    pub fn vars(&self) -> Vec<String> {
        Self::vars_of(&self.z, &self.t)
    }

    pub fn presentation(&self) -> KaehlerPresentation {
        KaehlerPresentation::free(&self.vars())
    }

    pub fn base_presentation(&self) -> KaehlerPresentation {
        KaehlerPresentation::free(self.base.vars())
    }

    fn poly_to_l(&self, p: &MultiPoly) -> Result<LElem> {
        let p = p.with_vars(&self.vars())?;
        let cs: Vec<RatFun> = match &self.z {
            Some(z) => to_bivariate(&p, z, &self.t)?
                .into_iter()
                .map(RatFun::from_poly)
                .collect(),
            None => p
                .coefficients_in(&self.t)
                .iter()
                .map(|c| RatFun::constant(c.constant_value().unwrap_or_else(<Q as Zero>::zero)))
                .collect(),
        };
        Ok(UniPoly::new(cs).rem(&self.f))
    }

    /// The class of a rational function in `L`.
    pub fn to_l(&self, c: &RationalFunction) -> Result<LElem> {
        let n = self.poly_to_l(c.num())?;
        let d = self.poly_to_l(c.den())?;
        let (g, s, _) = d.ext_gcd(&self.f);
        if g.deg() != 0 {
            return Err(Error::Precondition(format!(
                "{} is not invertible in the extension",
                c.den()
            )));
        }
        Ok(n.mul(&s).rem(&self.f))
    }

    /// `c` as a rational function on the base, if it lies in `K`.
    pub fn from_k(&self, c: &RatFun) -> RationalFunction {
        ratfun_to_rf(c, &self.z)
    }

    /// Matrix of multiplication by `c` in the basis `1, t, …, t^{n-1}`; column `j` is `c·t^j`.
    pub fn multiplication_matrix(&self, c: &LElem) -> Vec<Vec<RatFun>> {
        let n = self.degree();
        let mut m = vec![vec![RatFun::zero(); n]; n];
        for j in 0..n {
            let p = c.mul(&UniPoly::monomial(RatFun::one(), j)).rem(&self.f);
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = p.coeff(i);
            }
        }
        m
    }

    /// Trace of multiplication by `c` on `L` as a `K`-vector space.
    pub fn field_trace(&self, c: &LElem) -> RatFun {
        let m = self.multiplication_matrix(c);
        (0..self.degree()).fold(RatFun::zero(), |acc, i| acc.add(&m[i][i]))
    }

    /// `∂f/∂z` with `t` held fixed, as an element of `L`.
    fn f_z(&self) -> LElem {
        UniPoly::new(self.f.coeffs().iter().map(RatFun::derivative).collect())
    }

    /// `Tr_{B/A}` on forms over `B ⊗ L`, landing in `Ω_A ⊗ K`.
    pub fn trace_forms(&self, omega: &DifferentialForm) -> Result<DifferentialForm> {
        let vars = self.vars();
        if omega.vars() != vars.as_slice() {
            return Err(Error::Precondition(format!(
                "form in [{}], extension in [{}]",
                omega.vars().join(", "),
                vars.join(", ")
            )));
        }
        let out = self.base_presentation();
        match omega.degree() {
            0 => {
                let c = self.to_l(&omega.coefficient(&[]))?;
                Ok(DifferentialForm::function(
                    &out,
                    self.from_k(&self.field_trace(&c)),
                ))
            }
            1 => {
                let Some(z) = self.z.clone() else {
                    // dt = 0 over a point
                    return Ok(DifferentialForm::zero(&out, 1));
                };
                let it = vars.len() - 1;
                let a = self.to_l(&omega.coefficient(&[0]))?;
                let b = self.to_l(&omega.coefficient(&[it]))?;
                // dt = -(f_z / f_t) dz in Ω ⊗ L
                let ft = self.f.derivative();
                let (g, inv_ft, _) = ft.ext_gcd(&self.f);
                if g.deg() != 0 {
                    return Err(Error::Separability(
                        "f_t is not invertible in the extension".into(),
                    ));
                }
                let dt = self.f_z().mul(&inv_ft).rem(&self.f).neg();
                let c = a.add(&b.mul(&dt)).rem(&self.f);
                let tr = self.from_k(&self.field_trace(&c));
                DifferentialForm::new(&out, 1, vec![(tr, vec![format!("d{z}")])])
            }
            _ => Ok(DifferentialForm::zero(&out, omega.degree())),
        }
    }
}

/// Free-function form of [`FiniteAlgebraExtension::trace_forms`].
pub fn trace_forms(
    ext: &FiniteAlgebraExtension,
    omega: &DifferentialForm,
) -> Result<DifferentialForm> {
    ext.trace_forms(omega)
}

/// Trace of a form with coefficients in `B`, certified to have coefficients in `A`.
pub fn check_trace_integrality(
    ext: &FiniteAlgebraExtension,
    omega: &DifferentialForm,
) -> Result<DifferentialForm> {
    let unit = |p: &MultiPoly| -> bool {
        let vars = ext.base.vars();
        match p.with_vars(vars) {
            Ok(q) if vars.is_empty() => !q.is_zero(),
            Ok(q) => q
                .to_upoly(&vars[0])
                .map(|u| ext.base.is_unit(&u))
                .unwrap_or(false),
            Err(_) => false,
        }
    };
    for (_, c) in omega.terms() {
        if !unit(c.den()) {
            return Err(Error::Precondition(format!(
                "coefficient {c} does not lie in the coordinate ring of the extension"
            )));
        }
    }
    let tr = ext.trace_forms(omega)?;
    for (_, c) in tr.terms() {
        if !unit(c.den()) {
            return Err(Error::InvariantViolation(format!(
                "trace coefficient {c} has a pole on {}",
                ext.base.label()
            )));
        }
    }
    Ok(tr)
}

/// Wrap a univariate polynomial of the base as a function.
pub fn base_function(ext: &FiniteAlgebraExtension, p: &QPoly) -> RationalFunction {
    rf_in(p, &ext.z)
}
