use mdr_core::algebra::{parse_poly, parse_rational_function, q, MultiPoly, RationalFunction, Q};
use mdr_core::forms::{
    residue, transfer, DifferentialForm, FiniteAlgebraExtension, KaehlerPresentation, P1Point,
};
use mdr_core::varieties::{compose, AffineCurveScheme, FiniteCorrespondence};
use num_traits::Zero;
use proptest::prelude::*;
use serde_json::json;

fn vars(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// A polynomial from integer coefficients on the monomials `z^i t^j`, `i, j < 3`.
fn poly_zt(c: &[i64], names: &[&str]) -> MultiPoly {
    let terms = c
        .iter()
        .enumerate()
        .map(|(k, &a)| (vec![(k / 3) as u32, (k % 3) as u32], q(a)));
    MultiPoly::from_terms(&vars(names), terms)
}

fn rf(p: MultiPoly) -> RationalFunction {
    RationalFunction::from_poly(p)
}

fn extension(which: usize) -> (FiniteAlgebraExtension, [&'static str; 2]) {
    let (f, names) = match which {
        0 => ("t^2-z", ["z", "t"]),
        1 => ("t^3-z", ["z", "t"]),
        _ => ("y^2-x^3-x", ["x", "y"]),
    };
    let base = AffineCurveScheme::affine_line(names[0]);
    let e = FiniteAlgebraExtension::new(&base, names[1], &parse_poly(f, &names).unwrap()).unwrap();
    (e, names)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 9)
}

/// Power sums of the roots of a monic polynomial via Newton's identities.
fn power_sums(a: &[Q], count: usize) -> Vec<Q> {
    // a = [a_0, ..., a_{n-1}], f = t^n + Σ a_i t^i
    let n = a.len();
    let mut p = vec![Q::from_integer(n.into())];
    for k in 1..count {
        let mut s = Q::zero();
        for i in 1..=n.min(k) {
            let c = &a[n - i];
            if i < k {
                s += c * &p[k - i];
            } else {
                s += c * Q::from_integer((k as i64).into());
            }
        }
        p.push(-s);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(c in coeffs(), e in coeffs()) {
        let p = KaehlerPresentation::free(&vars(&["x", "y"]));
        let den = poly_zt(&e, &["x", "y"]).add(&MultiPoly::constant(&vars(&["x", "y"]), q(7)));
        prop_assume!(!den.is_zero());
        let f = DifferentialForm::function(&p, RationalFunction::new(poly_zt(&c, &["x", "y"]), den));
        prop_assert!(f.d().d().is_zero());
        let w = DifferentialForm::new(&p, 1, vec![(rf(poly_zt(&c, &["x", "y"])), vec!["dy".into()])]).unwrap();
        prop_assert!(w.d().d().is_zero());
    }

    #[test]
    fn trace_commutes_with_d(which in 0usize..3, c in coeffs()) {
        let (e, names) = extension(which);
        let f = DifferentialForm::function(&e.presentation(), rf(poly_zt(&c, &names)));
        let lhs = e.trace_forms(&f.d()).unwrap();
        let rhs = e.trace_forms(&f).unwrap().d();
        prop_assert!(lhs.equals(&rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn projection_formula(which in 0usize..3, c in coeffs(), a in prop::collection::vec(-3i64..=3, 3)) {
        let (e, names) = extension(which);
        let base = e.base_presentation();
        let z = names[0];
        let apoly = MultiPoly::from_terms(&vars(&[z]), a.iter().enumerate().map(|(i, &k)| (vec![i as u32], q(k))));
        let alpha0 = DifferentialForm::function(&base, rf(apoly.clone()));
        let alpha1 = DifferentialForm::new(&base, 1, vec![(rf(apoly), vec![format!("d{z}")])]).unwrap();
        let up = [rf(MultiPoly::var(&vars(&names), z))];
        let omega0 = DifferentialForm::function(&e.presentation(), rf(poly_zt(&c, &names)));
        let omega1 = DifferentialForm::new(&e.presentation(), 1, vec![(rf(poly_zt(&c, &names)), vec![format!("d{}", names[1])])]).unwrap();
        for (alpha, omega) in [(&alpha0, &omega0), (&alpha0, &omega1), (&alpha1, &omega0)] {
            let pulled = alpha.pullback(&e.presentation(), &up).unwrap();
            let lhs = e.trace_forms(&pulled.wedge(omega).unwrap()).unwrap();
            let rhs = alpha.wedge(&e.trace_forms(omega).unwrap()).unwrap();
            prop_assert!(lhs.equals(&rhs), "{} vs {}", lhs, rhs);
        }
    }

    #[test]
    fn degree_zero_trace_is_a_power_sum(a in prop::collection::vec(-4i64..=4, 1..4), c in prop::collection::vec(-3i64..=3, 1..6)) {
        // f = t^n + Σ a_i t^i over a point; Tr(Σ c_k t^k) = Σ c_k p_k
        let n = a.len();
        let mut s = format!("t^{n}");
        for (i, k) in a.iter().enumerate() {
            s.push_str(&format!("+({k})*t^{i}"));
        }
        let f = parse_poly(&s, &["t"]).unwrap();
        let pt = AffineCurveScheme::point();
        let Ok(e) = FiniteAlgebraExtension::new(&pt, "t", &f) else {
            // repeated roots
            return Ok(());
        };
        let aq: Vec<Q> = a.iter().map(|&k| q(k)).collect();
        let p = power_sums(&aq, c.len());
        let expect: Q = c.iter().zip(&p).map(|(&k, pk)| q(k) * pk).sum();
        let cpoly = MultiPoly::from_terms(&vars(&["t"]), c.iter().enumerate().map(|(i, &k)| (vec![i as u32], q(k))));
        let tr = e.trace_forms(&DifferentialForm::function(&e.presentation(), rf(cpoly))).unwrap();
        let got = tr.coefficient(&[]).as_poly().and_then(|p| p.constant_value()).unwrap_or_else(Q::zero);
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn residue_theorem(poles in prop::collection::btree_set(-5i64..=5, 1..4), e in prop::collection::vec(1u32..3, 3), num in prop::collection::vec(-3i64..=3, 1..5)) {
        let pts: Vec<i64> = poles.into_iter().collect();
        let mut den = "1".to_string();
        for (i, a) in pts.iter().enumerate() {
            den.push_str(&format!("*(z-({a}))^{}", e[i]));
        }
        let numer: Vec<String> = num.iter().enumerate().map(|(i, k)| format!("({k})*z^{i}")).collect();
        let c = parse_rational_function(&format!("({})/({den})", numer.join("+")), &["z"]).unwrap();
        let p = KaehlerPresentation::free(&vars(&["z"]));
        let w = DifferentialForm::new(&p, 1, vec![(c, vec!["dz".into()])]).unwrap();
        let mut total = residue(&w, &P1Point::Infinity).unwrap();
        for a in pts {
            total += residue(&w, &P1Point::Finite(q(a))).unwrap();
        }
        prop_assert_eq!(total, Q::zero());
    }
}

fn line_corr(src: &str, tgt: &str, gens: &[(String, i64)]) -> FiniteCorrespondence {
    FiniteCorrespondence::from_json(&json!({
        "source": {"vars": [src]}, "target": {"vars": [tgt]},
        "components": gens.iter().map(|(g, m)| json!({"ideal": [g], "mult": m})).collect::<Vec<_>>(),
    }))
    .unwrap()
}

/// `t^n - (a s + b)` or the graph `t = a s^2 + b`.
fn component() -> impl Strategy<Value = (u32, i64, i64, bool)> {
    (
        1u32..=3,
        prop::sample::select(vec![-2i64, -1, 1, 2]),
        -2i64..=2,
        any::<bool>(),
    )
}

fn gen_string(c: &(u32, i64, i64, bool), s: &str, t: &str) -> String {
    let (n, a, b, graph) = *c;
    if graph {
        format!("{t}-({a})*{s}^2-({b})")
    } else {
        format!("{t}^{n}-({a})*{s}-({b})")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transfer_is_contravariant(c1 in component(), c2 in component(), m in 1i64..=2, k in 0u32..3, fn_or_form in any::<bool>()) {
        let alpha = line_corr("x", "y", &[(gen_string(&c1, "x", "y"), m)]);
        let beta = line_corr("y", "z", &[(gen_string(&c2, "y", "z"), 1)]);
        let composite = compose(&alpha, &beta).unwrap();
        let p = KaehlerPresentation::free(&vars(&["z"]));
        let coeff = rf(parse_poly(&format!("z^{k}+1"), &["z"]).unwrap());
        let w = if fn_or_form {
            DifferentialForm::function(&p, coeff)
        } else {
            DifferentialForm::new(&p, 1, vec![(coeff, vec!["dz".into()])]).unwrap()
        };
        let lhs = transfer(&composite, &w).unwrap();
        let rhs = transfer(&alpha, &transfer(&beta, &w).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs), "{} vs {}", lhs, rhs);
    }
}
