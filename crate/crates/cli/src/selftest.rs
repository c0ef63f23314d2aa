//! Quick end-to-end checks of the main invariants, one line per check.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use mdr_core::algebra::{parse_poly, parse_rational_function, q, QMatrix};
use mdr_core::derham::{cohomology, homotopy_invariance, kunneth, mayer_vietoris, P1Open, Space};
use mdr_core::error::{Error, Result};
use mdr_core::forms::{trace_forms, DifferentialForm, FiniteAlgebraExtension, P1Point};
use mdr_core::godement::{cohomology_via_godement, FiniteSite, Presheaf};
use mdr_core::homological::{
    compare_decalage_pages, matrix_category, matrix_to_mor, split_in_matrix_category, Complex,
    Direction, Filtration, FiniteCategory, Localization,
};
use mdr_core::realization::{realize, transfer_on_cohomology, MotiveComplex};
use mdr_core::varieties::{
    compose, cycle_from_sym, graph, sym_point, AffineCurveScheme, Morphism, ZeroCycle,
};

use crate::Format;

type Check = fn() -> Result<bool>;

fn builtin(label: &str) -> AffineCurveScheme {
    AffineCurveScheme::builtin(label).expect("builtin scheme")
}

fn trace_table() -> Result<bool> {
    let a1 = builtin("A1");
    let ext = FiniteAlgebraExtension::new(&a1, "t", &parse_poly("t^3-z", &["z", "t"])?)?;
    let pres = ext.presentation();
    let names = ["z", "t"];
    let omega = DifferentialForm::new(
        &pres,
        1,
        vec![(parse_rational_function("t^2", &names)?, vec!["dt".into()])],
    )?;
    let dz = DifferentialForm::new(
        &ext.base_presentation(),
        1,
        vec![(parse_rational_function("1", &["z"])?, vec!["dz".into()])],
    )?;
    let zero_case = DifferentialForm::new(
        &pres,
        1,
        vec![(parse_rational_function("t", &names)?, vec!["dt".into()])],
    )?;
    Ok(trace_forms(&ext, &omega)?.equals(&dz) && trace_forms(&ext, &zero_case)?.is_zero())
}

fn p1_signature() -> Result<bool> {
    let r = cohomology(&Space::from_json(&json!("P1"))?, 4)?;
    let h2 = r
        .degree(2)
        .ok_or_else(|| Error::InvariantViolation("no H^2".into()))?;
    Ok(r.dims() == vec![1, 0, 1] && h2.hodge_step(1) == 1)
}

fn tate() -> Result<bool> {
    let m = MotiveComplex::from_json(&json!({
        "terms": {"0": ["P1"], "1": ["pt"]}, "d": {"0": [["struct"]]}, "shift": -2
    }))?;
    let r = realize(&m, 4)?;
    let Some(h0) = r.record.degree(0) else {
        return Ok(false);
    };
    Ok(r.record.dims().iter().sum::<usize>() == 1
        && h0.hodge_step(1) == 1
        && h0.hodge_step(2) == 0
        && h0.weight_step(1) == 0
        && h0.weight_step(2) == 1)
}

fn homotopy() -> Result<bool> {
    let (x, xa, iso) = homotopy_invariance(&Space::from_json(&json!("Gm"))?, 3)?;
    Ok(iso && x == xa)
}

fn mv() -> Result<bool> {
    let a = P1Open::new([P1Point::Infinity]);
    let b = P1Open::new([P1Point::Finite(q(0))]);
    Ok(mayer_vietoris(&P1Open::whole(), &a, &b, 4)?.exact())
}

fn transfer_functoriality() -> Result<bool> {
    let gm = builtin("Gm");
    let f = graph(&Morphism::parse(&gm, &gm, &["z^2"])?)?;
    let g = graph(&Morphism::parse(&gm, &gm, &["z^3"])?)?.transpose()?;
    let fg = compose(&f, &g)?;
    let (mf, mg, mfg) = (
        transfer_on_cohomology(&f, 4)?,
        transfer_on_cohomology(&g, 4)?,
        transfer_on_cohomology(&fg, 4)?,
    );
    Ok((0..2).all(|n| mfg[n] == mf[n].mul(&mg[n])))
}

fn graph_functoriality() -> Result<bool> {
    let a1 = builtin("A1");
    let f = Morphism::parse(&a1, &a1, &["z^2+1"])?;
    let g = Morphism::parse(&a1, &a1, &["z^3-z"])?;
    Ok(graph(&g.after(&f)?)? == compose(&graph(&f)?, &graph(&g)?)?)
}

fn sym() -> Result<bool> {
    let a1 = builtin("A1");
    let c = ZeroCycle::rational(&a1, &q(2), 2)?.add(&ZeroCycle::rational(&a1, &q(-1), 1)?)?;
    let e = sym_point(&c)?;
    Ok(e == vec![q(3), q(0), q(-4)] && cycle_from_sym(&a1, &e)? == c)
}

fn localization() -> Result<bool> {
    let c = FiniteCategory::new(
        vec!["a".into(), "b".into()],
        vec![("u".into(), "a".into(), "b".into())],
        vec![],
    )?;
    let s: BTreeSet<usize> = [
        c.identity(0),
        c.identity(1),
        c.arrow_index("u").unwrap_or(0),
    ]
    .into();
    let loc = Localization::new(&c, s)?;
    Ok(loc.hom(1, 0).len() == 1 && loc.hom(0, 1).len() == 1)
}

fn karoubi() -> Result<bool> {
    let ranks = [0, 1, 2];
    let c = matrix_category(&ranks);
    let e = matrix_to_mor(2, 2, &QMatrix::from_i64(&[&[1, 1], &[0, 0]]));
    let (b, _, _) = split_in_matrix_category(&c, &ranks, &e)?;
    Ok(b == 1)
}

fn godement() -> Result<bool> {
    let x = FiniteSite::pseudo_circle();
    let h = cohomology_via_godement(&x, &Presheaf::constant(&x, 1))?;
    Ok(h.first() == Some(&1) && h.get(1) == Some(&1) && h.iter().skip(2).all(|&d| d == 0))
}

fn decalage() -> Result<bool> {
    let k = Complex::new(
        0,
        vec![1, 2, 1],
        vec![
            QMatrix::from_i64(&[&[1], &[0]]),
            QMatrix::from_i64(&[&[0, 1]]),
        ],
    )?;
    let w = Filtration::trivial(Direction::Increasing, 0, &k);
    Ok(compare_decalage_pages(&k, &w)?.is_empty())
}

fn kunneth_gm() -> Result<bool> {
    let gm = Space::from_json(&json!("Gm"))?;
    let k = kunneth(&gm, &gm, 3)?;
    Ok(k.product == vec![1, 2, 1] && k.cross_product_iso && k.levels_add)
}

fn window() -> Result<bool> {
    let x = Space::from_json(&json!("A1-{0,1}"))?;
    let a = cohomology(&x, 4)?;
    let b = cohomology(&x, 6)?;
    Ok(a.same_invariants(&b))
}

const CHECKS: &[(&str, Check)] = &[
    ("trace", trace_table),
    ("p1-signature", p1_signature),
    ("tate", tate),
    ("homotopy", homotopy),
    ("mayer-vietoris", mv),
    ("transfer-functoriality", transfer_functoriality),
    ("graph-functoriality", graph_functoriality),
    ("sym", sym),
    ("localization", localization),
    ("karoubi", karoubi),
    ("godement", godement),
    ("decalage", decalage),
    ("kunneth", kunneth_gm),
    ("window", window),
];

/// Run the checks whose name contains `filter`; returns the report and
/// whether everything passed.
pub fn run(filter: Option<&str>, format: Format) -> (String, bool) {
    let mut rows: Vec<(&str, std::result::Result<bool, Error>)> = Vec::new();
    for (name, check) in CHECKS {
        if filter.is_some_and(|f| !name.contains(f)) {
            continue;
        }
        rows.push((name, check()));
    }
    let ok = rows.iter().all(|(_, r)| matches!(r, Ok(true)));
    let out = match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(n, r)| match r {
                    Ok(b) => json!({"check": n, "pass": b}),
                    Err(e) => json!({"check": n, "pass": false, "error": e.to_string()}),
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({"checks": v, "pass": ok}))
                    .expect("serializable")
            )
        }
        Format::Text => {
            let mut s = String::new();
            for (n, r) in &rows {
                let status = match r {
                    Ok(true) => "pass".to_string(),
                    Ok(false) => "FAIL".to_string(),
                    Err(e) => format!("FAIL ({e})"),
                };
                s.push_str(&format!("{n:<24} {status}\n"));
            }
            s.push_str(&format!(
                "{} of {} passed\n",
                rows.iter().filter(|r| matches!(r.1, Ok(true))).count(),
                rows.len()
            ));
            s
        }
    };
    (out, ok)
}
