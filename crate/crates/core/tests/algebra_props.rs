use mdr_core::algebra::{
    factor_over_function_field, factor_rational, groebner_basis, normal_form, parse_poly, q,
    resultant, solve_linear, MultiPoly, QMatrix, QPoly, SolveMode, TermOrder,
};
use proptest::prelude::*;

fn small_upoly(max_deg: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_map(|c| QPoly::from_i64(&c))
}

fn to_multi(p: &QPoly, v: &str) -> MultiPoly {
    MultiPoly::from_upoly(p, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_vanishes_iff_common_factor(
        a in small_upoly(3), b in small_upoly(3), c in small_upoly(2), share in any::<bool>()
    ) {
        prop_assume!(a.deg() >= 0 && b.deg() >= 0 && c.deg() >= 1);
        let (f, g) = if share { (a.mul(&c), b.mul(&c)) } else { (a, b) };
        prop_assume!(f.deg() >= 1 || g.deg() >= 1);
        let r = resultant(&to_multi(&f, "t"), &to_multi(&g, "t"), "t").unwrap();
        let gcd_positive = f.gcd(&g).deg() > 0;
        prop_assert_eq!(r.is_zero(), gcd_positive);
    }

    #[test]
    fn factorization_reproduces_input(f in small_upoly(6), g in small_upoly(3)) {
        let h = f.mul(&g);
        prop_assume!(!h.is_zero());
        let fac = factor_rational(&h).unwrap();
        prop_assert_eq!(fac.expand(), h);
        for (p, _) in &fac.factors {
            prop_assert_eq!(p.lc(), q(1));
        }
    }

    #[test]
    fn function_field_factors_reproduce_input(
        a in prop::collection::vec(-2i64..=2, 4), b in prop::collection::vec(-2i64..=2, 4)
    ) {
        let s = |c: &[i64]| format!("({})*u^2+({})*s*u+({})*s+({})", c[0], c[1], c[2], c[3]);
        let f = parse_poly(&s(&a), &["s", "u"]).unwrap();
        let g = parse_poly(&s(&b), &["s", "u"]).unwrap();
        let h = f.mul(&g);
        prop_assume!(h.degree_in("u") >= 1);
        let fs = factor_over_function_field(&h, "s", "u").unwrap();
        let prod = fs.iter().fold(MultiPoly::one(h.vars()), |acc, x| {
            acc.mul(&x.primitive.pow(x.multiplicity))
        });
        // equal up to a factor in ℚ[s]
        let ratio = h.coefficients_in("u");
        let pc = prod.coefficients_in("u");
        prop_assert_eq!(ratio.len(), pc.len());
        let lead_h = ratio.last().unwrap().clone();
        let lead_p = pc.last().unwrap().clone();
        for (x, y) in ratio.iter().zip(&pc) {
            prop_assert_eq!(x.mul(&lead_p), y.mul(&lead_h));
        }
    }

    #[test]
    fn normal_form_is_idempotent(
        cs in prop::collection::vec(-3i64..=3, 6), p in prop::collection::vec(-3i64..=3, 6)
    ) {
        let mk = |c: &[i64]| parse_poly(
            &format!("({})*x^2+({})*x*y+({})*y^2+({})*x+({})*y+({})", c[0], c[1], c[2], c[3], c[4], c[5]),
            &["x", "y"],
        ).unwrap();
        let g1 = mk(&cs);
        let g2 = mk(&[cs[3], cs[0], cs[5], cs[1], cs[2], cs[4]]);
        prop_assume!(!g1.is_zero() && !g2.is_zero());
        let basis = groebner_basis(&[g1, g2], TermOrder::GrLex).unwrap();
        let f = mk(&p).mul(&parse_poly("x+2*y", &["x", "y"]).unwrap());
        let n1 = normal_form(&f, &basis, TermOrder::GrLex);
        let n2 = normal_form(&n1, &basis, TermOrder::GrLex);
        prop_assert_eq!(n1, n2);
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 5), 1..6)) {
        let r: Vec<&[i64]> = rows.iter().map(|v| v.as_slice()).collect();
        let m = QMatrix::from_i64(&r);
        let k = solve_linear(&m, SolveMode::Kernel);
        let im = solve_linear(&m, SolveMode::Image);
        prop_assert_eq!(k.len() + im.len(), m.cols());
        for v in &k {
            prop_assert!(m.apply(v).iter().all(|x| *x == q(0)));
        }
    }
}
