use mdr_core::algebra::{groebner_basis, q, MultiPoly, TermOrder, Q};
use mdr_core::varieties::{
    compose, cycle_from_sym, graph, parse_in, product_vars, sym_point, AffineCurveScheme,
    FiniteCorrespondence, Morphism, PrimeCorrespondence, ZeroCycle,
};
use proptest::prelude::*;

fn scheme(gm: bool, v: &str) -> AffineCurveScheme {
    if gm {
        AffineCurveScheme::gm(v)
    } else {
        AffineCurveScheme::affine_line(v)
    }
}

type Spec = (u8, u32, i64, i64, i64);

fn spec() -> impl Strategy<Value = Spec> {
    (
        0u8..2,
        1u32..=2,
        prop::sample::select(vec![-2i64, -1, 1, 2]),
        -2i64..=2,
        prop::sample::select(vec![1i64, 2, -1]),
    )
}

/// A generator for an elementary correspondence between lines, or `None`.
fn generator(src_gm: bool, tgt_gm: bool, s: &str, t: &str, sp: &Spec) -> String {
    let (choice, n, a, b, _) = *sp;
    match (src_gm, tgt_gm, choice) {
        (_, false, 0) => format!("{t}^{n}-({a})*{s}-({b})"),
        (_, false, _) => format!("{t}-({a})*{s}^{n}-({b})"),
        (false, true, 0) => format!("{t}^{n}-({a})"),
        (false, true, _) => format!("{t}-({a})"),
        (true, true, 0) => format!("{t}^{n}-({a})*{s}"),
        (true, true, _) => format!("{t}-({a})*{s}^{n}"),
    }
}

fn corr(
    x: &AffineCurveScheme,
    y: &AffineCurveScheme,
    specs: &[Spec],
) -> Option<FiniteCorrespondence> {
    let pv = product_vars(x.vars(), y.vars());
    let mut comps = Vec::new();
    for sp in specs {
        let g = generator(
            x.rational_punctures().is_some_and(|p| !p.is_empty()),
            y.rational_punctures().is_some_and(|p| !p.is_empty()),
            &pv[0],
            &pv[1],
            sp,
        );
        let p = PrimeCorrespondence::new(x, y, vec![parse_in(&g, &pv).ok()?]).ok()?;
        comps.push((p, sp.4));
    }
    FiniteCorrespondence::new(x, y, comps).ok()
}

/// `dim_ℚ ℚ[y, z]/(F(x0, y), G(y, z))` by counting standard monomials.
fn fiber_dimension(f: &MultiPoly, g: &MultiPoly, x0: i64) -> usize {
    let v = vec!["y".to_string(), "z".to_string()];
    let f0 = f.eval_var("x", &q(x0)).with_vars(&v).unwrap();
    let g = g.with_vars(&v).unwrap();
    let gb = groebner_basis(&[f0, g], TermOrder::GrLex).unwrap();
    let lead: Vec<Vec<u32>> = gb
        .iter()
        .map(|p| p.leading(TermOrder::GrLex).unwrap().0 .0.clone())
        .collect();
    let mut count = 0;
    for i in 0..40u32 {
        for j in 0..40u32 {
            if !lead.iter().any(|m| m[0] <= i && m[1] <= j) {
                count += 1;
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 4096, ..ProptestConfig::default() })]

    #[test]
    fn composition_is_associative(
        kinds in prop::collection::vec(any::<bool>(), 4),
        s1 in spec(), s2 in spec(), s3 in spec(),
    ) {
        let xs: Vec<AffineCurveScheme> = kinds.iter().zip(["x", "y", "z", "u"]).map(|(&k, v)| scheme(k, v)).collect();
        let a = corr(&xs[0], &xs[1], &[s1]);
        let b = corr(&xs[1], &xs[2], &[s2]);
        let c = corr(&xs[2], &xs[3], &[s3]);
        prop_assume!(a.is_some() && b.is_some() && c.is_some());
        let (a, b, c) = (a.unwrap(), b.unwrap(), c.unwrap());
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.to_string(), right.to_string());
        prop_assert!(left == right);
    }

    #[test]
    fn composition_is_bilinear(kinds in prop::collection::vec(any::<bool>(), 3), s1 in spec(), s2 in spec(), s3 in spec()) {
        let xs: Vec<AffineCurveScheme> = kinds.iter().zip(["x", "y", "z"]).map(|(&k, v)| scheme(k, v)).collect();
        let a1 = corr(&xs[0], &xs[1], &[s1]);
        let a2 = corr(&xs[0], &xs[1], &[s2]);
        let b = corr(&xs[1], &xs[2], &[s3]);
        prop_assume!(a1.is_some() && a2.is_some() && b.is_some());
        let (a1, a2, b) = (a1.unwrap(), a2.unwrap(), b.unwrap());
        let sum = compose(&a1.add(&a2).unwrap(), &b).unwrap();
        let parts = compose(&a1, &b).unwrap().add(&compose(&a2, &b).unwrap()).unwrap();
        prop_assert!(sum == parts);
        let b2 = b.scale(3);
        prop_assert!(compose(&a1, &b2).unwrap() == compose(&a1, &b).unwrap().scale(3));
    }

    #[test]
    fn degree_matches_fiber_algebra(s1 in spec(), s2 in spec()) {
        let (x, y, z) = (scheme(false, "x"), scheme(false, "y"), scheme(false, "z"));
        let s1 = (s1.0, s1.1, s1.2, s1.3, 1);
        let s2 = (s2.0, s2.1, s2.2, s2.3, 1);
        let a = corr(&x, &y, &[s1]);
        let b = corr(&y, &z, &[s2]);
        prop_assume!(a.is_some() && b.is_some());
        let (a, b) = (a.unwrap(), b.unwrap());
        let ba = compose(&a, &b).unwrap();
        let f = a.components()[0].0.generator().unwrap().clone();
        let g = b.components()[0].0.generator().unwrap().clone();
        let oracle = fiber_dimension(&f, &g, 7);
        prop_assert_eq!(ba.degree_over_source().unwrap(), oracle as i64);
        prop_assert_eq!(oracle as i64, a.degree_over_source().unwrap() * b.degree_over_source().unwrap());
    }

    #[test]
    fn graph_is_functorial(p in prop::collection::vec(-2i64..=2, 1..4), r in prop::collection::vec(-2i64..=2, 1..4), n in 1u32..4, m in 1u32..4, sign in any::<bool>()) {
        // polynomial maps on 𝔸¹
        let (x, y, z) = (scheme(false, "x"), scheme(false, "y"), scheme(false, "z"));
        let poly = |c: &[i64], v: &str| c.iter().enumerate().map(|(i, k)| format!("({k})*{v}^{}", i + 1)).collect::<Vec<_>>().join("+");
        let g = Morphism::parse(&x, &y, &[&poly(&p, "x")]).unwrap();
        let f = Morphism::parse(&y, &z, &[&poly(&r, "y")]).unwrap();
        prop_assert!(graph(&f.after(&g).unwrap()).unwrap() == compose(&graph(&g).unwrap(), &graph(&f).unwrap()).unwrap());
        // monomial maps on 𝔾_m, including negative powers
        let (gx, gy, gz) = (scheme(true, "x"), scheme(true, "y"), scheme(true, "z"));
        let e = if sign { format!("x^{n}") } else { format!("1/x^{n}") };
        let g = Morphism::parse(&gx, &gy, &[&e]).unwrap();
        let f = Morphism::parse(&gy, &gz, &[&format!("2*y^{m}")]).unwrap();
        prop_assert!(graph(&f.after(&g).unwrap()).unwrap() == compose(&graph(&g).unwrap(), &graph(&f).unwrap()).unwrap());
    }

    #[test]
    fn sym_is_an_injective_monoid_map(
        r1 in prop::collection::vec((-3i64..=3, 1i64..=2), 1..3),
        r2 in prop::collection::vec((-3i64..=3, 1i64..=2), 1..3),
    ) {
        let a1 = AffineCurveScheme::affine_line("T");
        let cyc = |r: &[(i64, i64)]| {
            r.iter().fold(None::<ZeroCycle>, |acc, (a, m)| {
                let p = ZeroCycle::rational(&a1, &q(*a), *m).unwrap();
                Some(match acc { None => p, Some(c) => c.add(&p).unwrap() })
            }).unwrap()
        };
        let (g1, g2) = (cyc(&r1), cyc(&r2));
        prop_assume!(g1.degree() + g2.degree() <= 4);
        // elementary symmetric oracle on the root multiset
        let roots = |r: &[(i64, i64)]| r.iter().flat_map(|(a, m)| std::iter::repeat_n(*a, *m as usize)).collect::<Vec<i64>>();
        let esym = |rs: &[i64]| -> Vec<Q> {
            let n = rs.len();
            (1..=n).map(|k| {
                let mut total = q(0);
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize == k {
                        total += q((0..n).filter(|i| mask >> i & 1 == 1).map(|i| rs[i]).product());
                    }
                }
                total
            }).collect()
        };
        let all: Vec<i64> = roots(&r1).into_iter().chain(roots(&r2)).collect();
        let sum = g1.add(&g2).unwrap();
        prop_assert_eq!(sym_point(&sum).unwrap(), esym(&all));
        prop_assert_eq!(sym_point(&g1).unwrap(), esym(&roots(&r1)));
        prop_assert!(cycle_from_sym(&a1, &sym_point(&sum).unwrap()).unwrap() == sum);
    }
}

#[test]
fn sym_is_injective_on_small_cycles() {
    // all effective cycles of degree ≤ 3 supported on {-1, 0, 1}
    let a1 = AffineCurveScheme::affine_line("T");
    let mut seen = std::collections::BTreeMap::new();
    for m in 0..64u32 {
        let mult: Vec<i64> = (0..3).map(|i| ((m >> (2 * i)) & 3) as i64).collect();
        let deg: i64 = mult.iter().sum();
        if deg == 0 || deg > 3 {
            continue;
        }
        let mut c: Option<ZeroCycle> = None;
        for (i, &k) in mult.iter().enumerate() {
            if k > 0 {
                let p = ZeroCycle::rational(&a1, &q(i as i64 - 1), k).unwrap();
                c = Some(match c {
                    None => p,
                    Some(c) => c.add(&p).unwrap(),
                });
            }
        }
        let e: Vec<String> = sym_point(&c.unwrap())
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert!(seen.insert(e, m).is_none());
    }
}
