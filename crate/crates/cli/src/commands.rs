use std::collections::BTreeSet;
use std::path::Path;

use serde_json::{json, Value};

use mdr_core::derham::{cohomology as derham_cohomology, Space, MAX_WINDOW};
use mdr_core::error::{Error, Result};
use mdr_core::forms::{presentation_of, transfer as transfer_form, DifferentialForm};
use mdr_core::godement::{
    check_monad_laws, cohomology_via_godement, godement_monad, stalkwise_exactness, FiniteSite,
    Presheaf,
};
use mdr_core::homological::{FiniteCategory, Localization};
use mdr_core::json::parse_document;
use mdr_core::realization::{correspondence_from_json, realize as realize_motive, MotiveComplex};
use mdr_core::varieties::compose as compose_corr;

use crate::Format;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value> {
    parse_document(&read(path)?)
}

fn check_window(window: usize) -> Result<()> {
    if window == 0 || window > MAX_WINDOW {
        return Err(Error::Precondition(format!(
            "--window must lie in 1..={MAX_WINDOW}"
        )));
    }
    Ok(())
}

fn emit(v: &Value, text: impl FnOnce() -> String, format: Format) -> String {
    match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(v).expect("JSON values serialize")
        ),
        Format::Text => text(),
    }
}

pub fn cohomology(file: &Path, window: usize, format: Format) -> Result<String> {
    check_window(window)?;
    let space = Space::from_json(&read_json(file)?)?;
    let r = derham_cohomology(&space, window)?;
    Ok(emit(&r.to_json(), || r.to_text(), format))
}

pub fn transfer(corr: &Path, form: &Path, format: Format) -> Result<String> {
    let gamma = correspondence_from_json(&read_json(corr)?)?;
    let pres = presentation_of(gamma.target());
    let omega = DifferentialForm::from_json(&read_json(form)?, &pres)?;
    let out = transfer_form(&gamma, &omega)?;
    let v = json!({
        "source": gamma.source().label(),
        "target": gamma.target().label(),
        "input": omega.to_string(),
        "form": out.to_json(),
        "printed": out.to_string(),
    });
    Ok(emit(&v, || format!("{out}\n"), format))
}

pub fn compose(a: &Path, b: &Path, format: Format) -> Result<String> {
    let alpha = correspondence_from_json(&read_json(a)?)?;
    let beta = correspondence_from_json(&read_json(b)?)?;
    let c = compose_corr(&alpha, &beta)?;
    let v = json!({
        "composite": c.to_json(),
        "printed": c.to_string(),
    });
    Ok(emit(&v, || format!("{c}\n"), format))
}

pub fn realize(motive: &Path, window: usize, format: Format) -> Result<String> {
    check_window(window)?;
    let m = MotiveComplex::from_json(&read_json(motive)?)?;
    let r = realize_motive(&m, window)?;
    Ok(emit(&r.to_json(), || r.to_text(), format))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| Error::Precondition(format!("{what} must be a list")))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Precondition(format!("{what} entries must be strings")))
        })
        .collect()
}

fn triples(v: Option<&Value>, what: &str) -> Result<Vec<(String, String, String)>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    v.as_array()
        .ok_or_else(|| Error::Precondition(format!("'{what}' must be a list")))?
        .iter()
        .map(|t| match strings(t, what)?.as_slice() {
            [a, b, c] => Ok((a.clone(), b.clone(), c.clone())),
            _ => Err(Error::Precondition(format!("'{what}' entries are triples"))),
        })
        .collect()
}

/// `{"objects": [...], "arrows": [[name, src, tgt]], "comp": [[g, f, g∘f]]}`.
fn category_from_json(v: &Value) -> Result<FiniteCategory> {
    let objects = strings(
        v.get("objects")
            .ok_or_else(|| Error::Precondition("category needs 'objects'".into()))?,
        "objects",
    )?;
    FiniteCategory::new(
        objects,
        triples(v.get("arrows"), "arrows")?,
        triples(v.get("comp"), "comp")?,
    )
}

pub fn localize(cat: &Path, s: &str, x: &str, y: &str, format: Format) -> Result<String> {
    let c = category_from_json(&read_json(cat)?)?;
    let names: Vec<String> = if Path::new(s).is_file() {
        strings(&read_json(Path::new(s))?, "S")?
    } else {
        s.split(',')
            .map(|n| n.trim().to_string())
            .filter(|n| !n.is_empty())
            .collect()
    };
    let mut set = BTreeSet::new();
    for n in &names {
        let a = c
            .arrow_index(n)
            .or_else(|| {
                n.strip_prefix("id_")
                    .and_then(|o| c.object_index(o))
                    .map(|o| c.identity(o))
            })
            .ok_or_else(|| Error::Precondition(format!("unknown arrow {n}")))?;
        set.insert(a);
    }
    for o in 0..c.objects().len() {
        set.insert(c.identity(o));
    }
    let obj = |n: &str| {
        c.object_index(n)
            .ok_or_else(|| Error::Precondition(format!("unknown object {n}")))
    };
    let (xi, yi) = (obj(x)?, obj(y)?);
    let loc = Localization::new(&c, set)?;
    let classes = loc.hom_classes(xi, yi);
    let hom: Vec<Value> = classes
        .iter()
        .map(|cl| json!({"roof": loc.describe(cl[0]), "representatives": cl.len()}))
        .collect();
    let v = json!({"source": x, "target": y, "count": classes.len(), "hom": hom});
    Ok(emit(
        &v,
        || {
            let mut s = format!("Hom({x}, {y}) has {} element(s)\n", classes.len());
            for cl in &classes {
                s.push_str(&format!("  {}\n", loc.describe(cl[0])));
            }
            s
        },
        format,
    ))
}

pub fn godement(site: &Path, sheaf: &Path, levels: usize, format: Format) -> Result<String> {
    if levels == 0 || levels > 8 {
        return Err(Error::Precondition("--levels must lie in 1..=8".into()));
    }
    let x = FiniteSite::from_json(&read(site)?)?;
    let f = Presheaf::from_json(&x, &read(sheaf)?)?;
    let h = cohomology_via_godement(&x, &f)?;
    let bad = stalkwise_exactness(&x, &f, levels)?;
    check_monad_laws(&godement_monad(&x), &f)?;
    let v = json!({
        "cohomology": h,
        "stalkwise_exact": bad.is_none(),
        "monad_laws": true,
        "levels": levels,
    });
    Ok(emit(
        &v,
        || {
            let dims: Vec<String> = h.iter().map(usize::to_string).collect();
            format!(
                "H = ({})\nstalkwise exact: {}\nmonad laws: ok\n",
                dims.join(", "),
                if bad.is_none() { "yes" } else { "no" }
            )
        },
        format,
    ))
}
