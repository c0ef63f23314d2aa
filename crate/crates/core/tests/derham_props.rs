use mdr_core::algebra::{q, MultiPoly, RationalFunction};
use mdr_core::derham::{cohomology, homotopy_reduce, Space};
use mdr_core::forms::{DifferentialForm, KaehlerPresentation};
use proptest::prelude::*;
use serde_json::json;

fn punctured_line(points: &[i64]) -> Space {
    if points.is_empty() {
        return Space::from_json(&json!("A1")).unwrap();
    }
    let list: Vec<String> = points.iter().map(i64::to_string).collect();
    Space::from_json(&json!(format!("A1-{{{}}}", list.join(",")))).unwrap()
}

fn poly(vars: &[String], coeffs: &[(u32, u32, i64)]) -> MultiPoly {
    MultiPoly::from_terms(vars, coeffs.iter().map(|&(a, b, c)| (vec![a, b], q(c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn punctured_lines_have_pure_weight_two_h1(
        points in prop::collection::btree_set(-3i64..=3, 0..=3),
        window in 2usize..=5,
    ) {
        let pts: Vec<i64> = points.into_iter().collect();
        let r = cohomology(&punctured_line(&pts), window).unwrap();
        let k = pts.len();
        let dims: Vec<usize> = (0..2).map(|n| r.degree(n).map_or(0, |d| d.dim)).collect();
        prop_assert_eq!(dims, vec![1, k]);
        if let Some(h1) = r.degree(1) {
            // every class is a combination of dlog forms: F^1 = H^1 and W_1 = 0
            prop_assert_eq!(h1.hodge_step(1), k);
            prop_assert_eq!(h1.weight_step(1), 0);
            prop_assert_eq!(h1.weight_step(2), k);
        }
        let bigger = cohomology(&punctured_line(&pts), r.window + 1).unwrap();
        prop_assert!(r.same_invariants(&bigger));
    }

    #[test]
    fn exact_forms_on_the_plane_reduce_along_t(
        terms in prop::collection::vec((0u32..=3, 0u32..=3, -3i64..=3), 1..=5),
    ) {
        let vars = vec!["z".to_string(), "t".to_string()];
        let pres = KaehlerPresentation::free(&vars);
        let f = DifferentialForm::function(&pres, RationalFunction::from_poly(poly(&vars, &terms)));
        let omega = f.d();
        let (omega0, eta) = homotopy_reduce(&omega, "t").unwrap();
        let base = KaehlerPresentation::free(&vars[..1]);
        let z = RationalFunction::from_poly(MultiPoly::var(&vars, "z"));
        let back = omega0.pullback(&pres, &[z]).unwrap().add(&eta.d()).unwrap();
        prop_assert!(back.equals(&omega));
        // η = f - f(z, 0), so ω₀ = d f(z, 0)
        let f0 = poly(&vars, &terms).eval_var("t", &q(0)).with_vars(&vars[..1]).unwrap();
        let expected = DifferentialForm::function(&base, RationalFunction::from_poly(f0)).d();
        prop_assert!(omega0.equals(&expected), "{} vs {}", omega0, expected);
    }
}
