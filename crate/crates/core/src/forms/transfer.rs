//! The map on forms attached to a finite correspondence.

use super::form::{DifferentialForm, KaehlerPresentation};
use super::trace::FiniteAlgebraExtension;
use crate::algebra::{MultiPoly, RationalFunction, Q};
use crate::error::{Error, Result};
use crate::varieties::{FiniteCorrespondence, PrimeCorrespondence, SchemeKind};

/// `[Γ]ω = Σ m_i · Tr_{Γ_i/X}(pr_Y^* ω)` for `Γ = Σ m_i Γ_i`.
pub fn transfer(
    gamma: &FiniteCorrespondence,
    omega: &DifferentialForm,
) -> Result<DifferentialForm> {
    let x = gamma.source();
    let y = gamma.target();
    if omega.vars() != y.vars() {
        return Err(Error::Precondition(format!(
            "form in [{}] but the target {} has coordinates [{}]",
            omega.vars().join(", "),
            y.label(),
            y.vars().join(", ")
        )));
    }
    let out = KaehlerPresentation::free(x.vars());
    let mut acc = DifferentialForm::zero(&out, omega.degree());
    for (c, m) in gamma.components() {
        let t = transfer_prime(c, omega)?;
        acc = acc.add(&t.scale_q(&Q::from_integer((*m).into())))?;
    }
    Ok(acc)
}

/// Transfer along one elementary correspondence.
pub fn transfer_prime(
    c: &PrimeCorrespondence,
    omega: &DifferentialForm,
) -> Result<DifferentialForm> {
    let x = c.source();
    let y = c.target();
    let out = KaehlerPresentation::free(x.vars());
    match y.kind() {
        SchemeKind::Point => {
            // X × pt ≅ X: pull back constants
            if omega.degree() > 0 {
                return Ok(DifferentialForm::zero(&out, omega.degree()));
            }
            let v = omega.coefficient(&[]);
            let k = v
                .as_poly()
                .and_then(|p| p.constant_value())
                .ok_or_else(|| {
                    Error::InvariantViolation(format!("function {v} on a point is not constant"))
                })?;
            return Ok(DifferentialForm::function(
                &out,
                RationalFunction::from_poly(MultiPoly::constant(x.vars(), k)),
            ));
        }
        SchemeKind::Etale { .. } if omega.degree() > 0 => {
            return Ok(DifferentialForm::zero(&out, omega.degree()));
        }
        SchemeKind::Plane { .. } => {
            return Err(Error::Unsupported(format!(
                "transfers into the plane curve {}",
                y.label()
            )));
        }
        _ => {}
    }
    let g = c
        .generator()
        .ok_or_else(|| Error::InvariantViolation(format!("{c} has no generator")))?;
    let vars = c.vars().to_vec();
    let t = vars.last().unwrap().clone();
    let ext = FiniteAlgebraExtension::new(x, &t, g).map_err(|e| match e {
        Error::Separability(m) => Error::UnsupportedPresentation(format!("component {c}: {m}")),
        other => other,
    })?;
    let pres = ext.presentation();
    let image = RationalFunction::from_poly(MultiPoly::var(&vars, &t));
    let pulled = omega.pullback(&pres, &[image])?;
    ext.trace_forms(&pulled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational_function;
    use crate::varieties::{graph, AffineCurveScheme, Morphism};
    use serde_json::json;

    #[test]
    fn square_root_transfer() {
        let g = FiniteCorrespondence::from_json(&json!({
            "source": {"vars": ["x"]}, "target": {"vars": ["y"]},
            "components": [{"ideal": ["y^2-x"], "mult": 1}]
        }))
        .unwrap();
        let p = KaehlerPresentation::free(&["y".to_string()]);
        let dy = DifferentialForm::dvar(&p, "y").unwrap();
        assert!(transfer(&g, &dy).unwrap().is_zero());
        let ydy = dy.scale(&parse_rational_function("y", &["y"]).unwrap());
        assert_eq!(transfer(&g, &ydy).unwrap().to_string(), "dx");
        assert_eq!(transfer(&g.scale(2), &ydy).unwrap().to_string(), "2*dx");
    }

    #[test]
    fn graph_is_pullback() {
        let a = AffineCurveScheme::affine_line("z");
        let gm = AffineCurveScheme::gm("t");
        let f = Morphism::parse(&gm, &a, &["t^2+1"]).unwrap();
        let w = DifferentialForm::function(
            &KaehlerPresentation::free(&["z".to_string()]),
            parse_rational_function("z^2", &["z"]).unwrap(),
        )
        .d();
        assert_eq!(
            transfer(&graph(&f).unwrap(), &w).unwrap().to_string(),
            "(4*t^3+4*t)*dt"
        );
    }
}
