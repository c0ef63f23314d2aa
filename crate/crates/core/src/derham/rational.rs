//! Models of the point, finite étale schemes and `𝔸¹` minus rational points.
//!
//! On `U = 𝔸¹ ∖ S` the window `N` bounds pole orders at each point of
//! `S ∪ {∞}`: functions by `N`, 1-forms by `N + 1`. Functions are spanned by
//! `z^k` and `(z-a)^{-j}`, 1-forms by `z^k dz` and `(z-a)^{-j} dz`. Since
//! `D = S ∪ {∞}`, the logarithmic forms are spanned by the `dz/(z-a)`; they
//! make up `F¹` and carry weight 1.

use num_traits::{One, Zero};

use super::model::{Coordinates, Elem, Model};
use crate::algebra::{q, Field, MultiPoly, QMatrix, QPoly, RatFun, RationalFunction, Q};
use crate::error::{Error, Result};
use crate::forms::{local_expansion, DifferentialForm, KaehlerPresentation, P1Point};

fn z_minus(a: &Q) -> QPoly {
    QPoly::new(vec![-a.clone(), <Q as One>::one()])
}

fn upow(p: &QPoly, e: usize) -> QPoly {
    let mut acc = QPoly::new(vec![<Q as One>::one()]);
    for _ in 0..e {
        acc = acc.mul(p);
    }
    acc
}

/// `(z-a)^{-j}` (or `z^k` for `a = None`) as a rational function.
fn basis_fn(var: &str, a: Option<&Q>, e: usize) -> RationalFunction {
    let one = QPoly::new(vec![<Q as One>::one()]);
    let r = match a {
        None => RatFun::new(
            upow(&QPoly::new(vec![<Q as Zero>::zero(), <Q as One>::one()]), e),
            one,
        ),
        Some(a) => RatFun::new(one, upow(&z_minus(a), e)),
    };
    RationalFunction::from_ratfun(&r, var)
}

pub fn point_model() -> Model {
    let pres = KaehlerPresentation::free(&[]);
    let one = DifferentialForm::function(&pres, RationalFunction::from_poly(MultiPoly::one(&[])));
    Model::new(
        "pt",
        0,
        vec![],
        vec![vec![Elem::new(one, 0, 0)]],
        vec![],
        Coordinates::Point,
    )
    .expect("point model")
}

/// `Spec ℚ[z]/(f)`: functions `1, z, ..., z^{deg f - 1}` and no forms.
pub fn etale_model(label: &str, var: &str, f: &QPoly) -> Result<Model> {
    let vars = vec![var.to_string()];
    let pres = KaehlerPresentation::free(&vars);
    let d = f.deg().max(0) as usize;
    let elems: Vec<Elem> = (0..d)
        .map(|k| {
            Elem::new(
                DifferentialForm::function(&pres, basis_fn(var, None, k)),
                0,
                0,
            )
        })
        .collect();
    Model::new(
        label,
        0,
        vars,
        vec![elems],
        vec![],
        Coordinates::Etale {
            var: var.to_string(),
            f: f.clone(),
        },
    )
}

/// Window model of `𝔸¹_var ∖ points`.
pub fn rational_model(label: &str, var: &str, points: &[Q], window: usize) -> Result<Model> {
    if window == 0 {
        return Err(Error::Precondition("window must be positive".into()));
    }
    let n = window;
    let vars = vec![var.to_string()];
    let pres = KaehlerPresentation::free(&vars);
    let dz = DifferentialForm::dvar(&pres, var)?;
    let fun = |r: RationalFunction| DifferentialForm::function(&pres, r);
    let form = |r: RationalFunction| dz.scale(&r);
    let s = points.len();

    let mut k0 = vec![Elem::new(fun(basis_fn(var, None, 0)), 0, 0)];
    for k in 1..=n {
        k0.push(Elem::new(fun(basis_fn(var, None, k)), 0, 0));
    }
    for a in points {
        for j in 1..=n {
            k0.push(Elem::new(fun(basis_fn(var, Some(a), j)), 0, 0));
        }
    }
    let mut k1 = Vec::new();
    for a in points {
        k1.push(Elem::new(form(basis_fn(var, Some(a), 1)), 1, 1));
    }
    for k in 0..n {
        k1.push(Elem::new(form(basis_fn(var, None, k)), 0, 0));
    }
    for a in points {
        for j in 2..=n + 1 {
            k1.push(Elem::new(form(basis_fn(var, Some(a), j)), 0, 0));
        }
    }
    // indices: K⁰ = [1, z..z^N, (a_i, j)], K¹ = [log_i, z^k dz, (a_i, j ≥ 2)]
    let mut d = QMatrix::zeros(k1.len(), k0.len());
    for k in 1..=n {
        d.set(s + k - 1, k, q(k as i64));
    }
    for i in 0..s {
        for j in 1..=n {
            let col = 1 + n + i * n + (j - 1);
            let row = s + n + i * n + (j + 1 - 2);
            d.set(row, col, q(-(j as i64)));
        }
    }
    Model::new(
        label,
        window,
        vars,
        vec![k0, k1],
        vec![d],
        Coordinates::Rational {
            var: var.to_string(),
            points: points.to_vec(),
        },
    )
}

fn univariate(form: &DifferentialForm, n: usize, var: &str) -> Result<RatFun> {
    let key: Vec<usize> = if n == 1 { vec![0] } else { vec![] };
    form.coefficient(&key).to_ratfun(var).ok_or_else(|| {
        Error::Precondition("coefficient is not a function of the coordinate".into())
    })
}

fn window_error(label: &str, what: String) -> Error {
    Error::WindowExhausted(format!("{what} lies outside the window of {label}"))
}

fn rational_coords(
    m: &Model,
    n: usize,
    form: &DifferentialForm,
    var: &str,
    points: &[Q],
) -> Result<Vec<Q>> {
    let len = m.complex.dim(n as i64);
    let mut v = vec![<Q as Zero>::zero(); len];
    if n > 1 {
        return if form.is_zero() {
            Ok(v)
        } else {
            Err(Error::Precondition(
                "curves carry no forms of degree 2".into(),
            ))
        };
    }
    let w = m.window;
    let s = points.len();
    let is_form = n == 1;
    let f = univariate(form, n, var)?;
    let mut rest = f.clone();
    for (i, a) in points.iter().enumerate() {
        let Some(l) = local_expansion(&f, &P1Point::Finite(a.clone()), false, -1)? else {
            continue;
        };
        for e in l.valuation..0 {
            let c = l.coeff(e);
            if Zero::is_zero(&c) {
                continue;
            }
            let j = (-e) as usize;
            let bound = if is_form { w + 1 } else { w };
            if j > bound {
                return Err(window_error(
                    &m.label,
                    format!("a pole of order {j} at {a}"),
                ));
            }
            let idx = if is_form {
                if j == 1 {
                    i
                } else {
                    s + w + i * w + (j - 2)
                }
            } else {
                1 + w + i * w + (j - 1)
            };
            v[idx] = c.clone();
            let pp = RatFun::new(QPoly::new(vec![c]), upow(&z_minus(a), j));
            rest = Field::sub(&rest, &pp);
        }
    }
    if rest.den().deg() > 0 {
        return Err(Error::Precondition(format!(
            "{form} has poles outside the removed points of {}",
            m.label
        )));
    }
    let lc = rest.den().coeff(0);
    let p = rest.num().scale(&(<Q as One>::one() / lc));
    let deg = p.deg();
    if deg >= 0 {
        let bound = if is_form { w as isize - 1 } else { w as isize };
        if deg > bound {
            return Err(window_error(
                &m.label,
                format!("a pole of order {} at ∞", deg + if is_form { 2 } else { 0 }),
            ));
        }
        for k in 0..=deg as usize {
            let c = p.coeff(k);
            let idx = if is_form { s + k } else { k };
            v[idx] = c;
        }
    }
    Ok(v)
}

/// Coordinates of `form` (of degree `n`) in the basis of `m`.
pub(crate) fn coordinates_of(m: &Model, n: usize, form: &DifferentialForm) -> Result<Vec<Q>> {
    match &m.coordinates {
        Coordinates::Point => {
            if n > 0 {
                return Ok(Vec::new());
            }
            let c = form.coefficient(&[]);
            let c = c
                .as_poly()
                .and_then(|p| p.constant_value())
                .ok_or_else(|| Error::Precondition(format!("{form} is not a constant")))?;
            Ok(vec![c])
        }
        Coordinates::Rational { var, points } => rational_coords(m, n, form, var, points),
        Coordinates::Etale { var, f } => {
            if n > 0 {
                return Ok(Vec::new());
            }
            let r = univariate(form, 0, var)?;
            let (g, s, _) = r.den().ext_gcd(f);
            if g.deg() != 0 {
                return Err(Error::Precondition(format!(
                    "{form} has a pole on {}",
                    m.label
                )));
            }
            let red = r.num().mul(&s).rem(f);
            let red = red.scale(&(<Q as One>::one() / g.coeff(0)));
            let mut v = vec![<Q as Zero>::zero(); m.complex.dim(0)];
            for (k, c) in red.coeffs().iter().enumerate() {
                v[k] = c.clone();
            }
            Ok(v)
        }
        Coordinates::Product(..) | Coordinates::None => Err(Error::Unsupported(format!(
            "reading arbitrary forms in the coordinates of {}",
            m.label
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational_function;

    fn f1(s: &str) -> DifferentialForm {
        let vars = vec!["z".to_string()];
        let pres = KaehlerPresentation::free(&vars);
        let c = parse_rational_function(s, &["z"]).unwrap();
        DifferentialForm::dvar(&pres, "z").unwrap().scale(&c)
    }

    #[test]
    fn gm_and_a1() {
        let a1 = rational_model("A1", "z", &[], 6).unwrap();
        let r = a1.record();
        assert_eq!(r.dims(), vec![1, 0]);
        let gm = rational_model("Gm", "z", &[q(0)], 6).unwrap();
        let r = gm.record();
        assert_eq!(r.dims(), vec![1, 1]);
        assert_eq!(r.h[1].basis, vec!["dz/z"]);
        assert_eq!(r.h[1].f, vec![1, 1]);
        assert_eq!(r.h[1].w, vec![0, 0, 1]);
        let two = rational_model("A1-{0,1}", "z", &[q(0), q(1)], 5).unwrap();
        let r = two.record();
        assert_eq!(r.dims(), vec![1, 2]);
        assert_eq!(r.h[1].basis, vec!["dz/z", "dz/(z-1)"]);
    }

    #[test]
    fn coordinates_roundtrip() {
        let m = rational_model("A1-{0,1}", "z", &[q(0), q(1)], 4).unwrap();
        for s in ["1/z", "(3*z^2+1)/(z^2*(z-1))", "z^3", "1/(z-1)^5"] {
            let w = f1(s);
            let v = m.vector_of(&w).unwrap();
            assert!(m.form_of(1, &v).equals(&w), "{s}");
        }
        assert!(matches!(
            m.vector_of(&f1("1/z^6")),
            Err(Error::WindowExhausted(_))
        ));
        assert!(matches!(
            m.vector_of(&f1("1/(z+1)")),
            Err(Error::Precondition(_))
        ));
        let class = m
            .class_of(1, &m.vector_of(&f1("1/(z^2-z)")).unwrap())
            .unwrap();
        assert_eq!(class, vec![q(-1), q(1)]);
    }
}
