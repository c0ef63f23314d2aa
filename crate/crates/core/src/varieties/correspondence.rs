//! Finite correspondences between curves presented by one coordinate.
//!
//! Sources are `Spec ℚ` or open subschemes of `𝔸¹`; targets may also be finite
//! étale. An elementary correspondence is then cut out by one irreducible
//! polynomial in the product coordinates (none when the target is a point).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use super::scheme::{parse_in, AffineCurveScheme, SchemeKind};
use crate::algebra::{
    factor_over_function_field, factor_rational, resultant, Field, MultiPoly, QPoly, RatFun,
    RationalFunction, Q,
};
use crate::error::{Error, Result};

/// Coordinates of `X × Y`: those of `X`, then those of `Y` with `_` appended on clashes.
pub fn product_vars(x: &[String], y: &[String]) -> Vec<String> {
    let mut out = x.to_vec();
    for v in y {
        let mut name = v.clone();
        while out.contains(&name) {
            name.push('_');
        }
        out.push(name);
    }
    out
}

fn check_curve_class(x: &AffineCurveScheme, role: &str) -> Result<()> {
    let ok = match x.kind() {
        SchemeKind::Point | SchemeKind::Line { .. } => true,
        SchemeKind::Etale { .. } => role == "target",
        SchemeKind::Plane { .. } => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "correspondences with {role} {} ({}): only points and open subschemes of 𝔸¹ are supported{}",
            x.label(),
            match x.kind() {
                SchemeKind::Plane { .. } => "a plane curve",
                _ => "a finite étale scheme",
            },
            if role == "source" { "" } else { ", plus finite étale targets" }
        )))
    }
}

/// An integral closed subscheme of `X × Y`, finite and surjective over `X`.
#[derive(Clone, Debug)]
pub struct PrimeCorrespondence {
    source: AffineCurveScheme,
    target: AffineCurveScheme,
    vars: Vec<String>,
    ideal: Vec<MultiPoly>,
    degree: usize,
}

impl PrimeCorrespondence {
    /// Validate `V(ideal) ⊂ X × Y`. The ideal is over [`product_vars`].
    pub fn new(
        source: &AffineCurveScheme,
        target: &AffineCurveScheme,
        ideal: Vec<MultiPoly>,
    ) -> Result<Self> {
        check_curve_class(source, "source")?;
        check_curve_class(target, "target")?;
        let vars = product_vars(source.vars(), target.vars());
        let gens: Vec<MultiPoly> = ideal
            .into_iter()
            .map(|g| g.with_vars(&vars))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|g| !g.is_zero())
            .collect();
        let mk = |ideal: Vec<MultiPoly>, degree: usize| PrimeCorrespondence {
            source: source.clone(),
            target: target.clone(),
            vars: vars.clone(),
            ideal,
            degree,
        };
        if matches!(target.kind(), SchemeKind::Point) {
            if !gens.is_empty() {
                return Err(Error::Precondition(format!(
                    "the only correspondence to a point is X × pt, got ideal ({})",
                    join(&gens)
                )));
            }
            return Ok(mk(vec![], 1));
        }
        if gens.len() != 1 {
            return Err(if gens.is_empty() {
                Error::Precondition("V(0) is not finite over the source".into())
            } else {
                Error::Unsupported(format!(
                    "ideal ({}) with several generators; give one irreducible generator",
                    join(&gens)
                ))
            });
        }
        let g = gens[0].primitive_integer();
        let y = vars.last().unwrap().clone();
        let dy = g.degree_in(&y) as usize;
        if dy == 0 {
            return Err(Error::Precondition(format!(
                "V({g}) is not surjective over the source"
            )));
        }
        // integrality
        match source.var() {
            None => {
                let fz = factor_rational(&g.to_upoly(&y)?)?;
                if fz.factors.len() != 1 || fz.factors[0].1 != 1 {
                    return Err(Error::Precondition(format!("V({g}) is not integral")));
                }
            }
            Some(x) => {
                let fs = factor_over_function_field(&g, x, &y)?;
                let content = g
                    .coefficients_in(&y)
                    .iter()
                    .filter(|c| !c.is_zero())
                    .map(|c| c.to_upoly(x))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .reduce(|a, b| a.gcd(&b))
                    .unwrap_or_else(QPoly::one);
                if fs.len() != 1 || fs[0].multiplicity != 1 || !content.is_constant() {
                    return Err(Error::Precondition(format!("V({g}) is not integral")));
                }
            }
        }
        // finiteness: the leading coefficient in the target coordinate is a unit on X
        let lc = g.coefficients_in(&y).last().cloned().unwrap();
        if !source.is_unit(&in_source(&lc, source)?) {
            return Err(Error::Precondition(format!(
                "V({g}) is not finite over {}: leading coefficient {lc} vanishes somewhere",
                source.label()
            )));
        }
        // V(g) must avoid the complement of Y in 𝔸¹
        match target.kind() {
            SchemeKind::Line { removed } => {
                for r in removed {
                    let rp = MultiPoly::from_upoly(r, &y).with_vars(&vars)?;
                    let res = resultant(&g, &rp, &y)?;
                    if !source.is_unit(&in_source(&res, source)?) {
                        return Err(Error::Precondition(format!(
                            "V({g}) meets the locus {} = 0 removed from {}",
                            r.to_string_in(&y),
                            target.label()
                        )));
                    }
                }
            }
            SchemeKind::Etale { f, .. } => {
                let gy = if g.used_vars().iter().all(|v| *v == y) {
                    Some(g.to_upoly(&y)?)
                } else {
                    None
                };
                if !gy.is_some_and(|gy| f.rem(&gy).is_zero()) {
                    return Err(Error::Precondition(format!(
                        "V({g}) does not lie in {}",
                        target.label()
                    )));
                }
            }
            _ => {}
        }
        Ok(mk(vec![g], dy))
    }

    pub fn source(&self) -> &AffineCurveScheme {
        &self.source
    }

    pub fn target(&self) -> &AffineCurveScheme {
        &self.target
    }

    /// Product coordinates the ideal is written in.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn ideal(&self) -> &[MultiPoly] {
        &self.ideal
    }

    /// The generator, if the target is not a point.
    pub fn generator(&self) -> Option<&MultiPoly> {
        self.ideal.first()
    }

    pub fn degree_over_source(&self) -> usize {
        self.degree
    }

    pub fn printed_ideal(&self) -> String {
        if self.ideal.is_empty() {
            "0".into()
        } else {
            join(&self.ideal)
        }
    }

    /// The generator with source coordinate renamed `x` and target coordinate `y`
    /// (absent coordinates are dropped).
    pub fn generator_in(&self, x: &str, y: &str) -> Option<MultiPoly> {
        let g = self.generator()?;
        let mut names = Vec::new();
        if self.source.var().is_some() {
            names.push(x.to_string());
        }
        names.push(y.to_string());
        Some(g.renamed(&names).unwrap())
    }

    /// `V(ideal)` read in `Y × X`; fails unless finite and surjective over `Y`.
    pub fn transpose(&self) -> Result<PrimeCorrespondence> {
        let g = match self.generator() {
            Some(g) => g,
            None => return Err(Error::Unsupported("transpose of X × pt".into())),
        };
        let tv = product_vars(self.target.vars(), self.source.vars());
        // our coordinates are [x?, y], theirs [y, x?]
        let names: Vec<String> = if self.source.var().is_some() {
            vec![tv[1].clone(), tv[0].clone()]
        } else {
            vec![tv[0].clone()]
        };
        let flipped = g.renamed(&names)?.with_vars(&tv)?;
        PrimeCorrespondence::new(&self.target, &self.source, vec![flipped])
    }
}

fn join(gens: &[MultiPoly]) -> String {
    gens.iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Read a polynomial in the source coordinate (only).
fn in_source(p: &MultiPoly, source: &AffineCurveScheme) -> Result<QPoly> {
    match source.var() {
        Some(x) => p.to_upoly(x),
        None => p
            .constant_value()
            .map(QPoly::constant)
            .ok_or_else(|| Error::InvariantViolation(format!("{p} should be constant"))),
    }
}

impl PartialEq for PrimeCorrespondence {
    fn eq(&self, o: &Self) -> bool {
        self.source.same_as(&o.source)
            && self.target.same_as(&o.target)
            && self.printed_ideal() == o.printed_ideal()
    }
}

impl fmt::Display for PrimeCorrespondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V({})", self.printed_ideal())
    }
}

/// A ℤ-linear combination of elementary correspondences `X → Y`.
#[derive(Clone, Debug)]
pub struct FiniteCorrespondence {
    source: AffineCurveScheme,
    target: AffineCurveScheme,
    components: Vec<(PrimeCorrespondence, i64)>,
}

impl FiniteCorrespondence {
    pub fn new(
        source: &AffineCurveScheme,
        target: &AffineCurveScheme,
        components: Vec<(PrimeCorrespondence, i64)>,
    ) -> Result<Self> {
        for (c, _) in &components {
            if !c.source.same_as(source) || !c.target.same_as(target) {
                return Err(Error::CompositionMismatch(format!(
                    "component {c} lives in {} × {}, expected {} × {}",
                    c.source, c.target, source, target
                )));
            }
        }
        let mut merged: BTreeMap<String, (PrimeCorrespondence, i64)> = BTreeMap::new();
        for (c, m) in components {
            // re-home the component onto the given coordinates
            let c = if c.source == *source && c.target == *target {
                c
            } else {
                let vars = product_vars(source.vars(), target.vars());
                let ideal = c
                    .ideal
                    .iter()
                    .map(|g| g.renamed(&vars))
                    .collect::<Result<Vec<_>>>()?;
                PrimeCorrespondence::new(source, target, ideal)?
            };
            let e = merged.entry(c.printed_ideal()).or_insert((c, 0));
            e.1 += m;
        }
        Ok(FiniteCorrespondence {
            source: source.clone(),
            target: target.clone(),
            components: merged.into_values().filter(|(_, m)| *m != 0).collect(),
        })
    }

    pub fn zero(source: &AffineCurveScheme, target: &AffineCurveScheme) -> Self {
        FiniteCorrespondence {
            source: source.clone(),
            target: target.clone(),
            components: vec![],
        }
    }

    pub fn prime(c: PrimeCorrespondence) -> Self {
        let (s, t) = (c.source.clone(), c.target.clone());
        FiniteCorrespondence {
            source: s,
            target: t,
            components: vec![(c, 1)],
        }
    }

    pub fn identity(x: &AffineCurveScheme) -> Result<Self> {
        let images = x
            .vars()
            .iter()
            .map(|v| RationalFunction::from_poly(MultiPoly::var(x.vars(), v)))
            .collect();
        graph(&Morphism::new(x, x, images)?)
    }

    pub fn source(&self) -> &AffineCurveScheme {
        &self.source
    }

    pub fn target(&self) -> &AffineCurveScheme {
        &self.target
    }

    /// Components sorted by printed ideal.
    pub fn components(&self) -> &[(PrimeCorrespondence, i64)] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.components.iter().all(|(_, m)| *m > 0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut comps = self.components.clone();
        comps.extend(o.components.iter().cloned());
        Self::new(&self.source, &self.target, comps)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(&self.source, &self.target);
        }
        FiniteCorrespondence {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|(c, m)| (c.clone(), m * k))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// `Σ multiplicity · degree` over the components.
    pub fn degree_over_source(&self) -> Result<i64> {
        if self.source.num_components() != 1 {
            return Err(Error::Precondition(format!(
                "{} is disconnected; degrees are per component",
                self.source
            )));
        }
        Ok(self
            .components
            .iter()
            .map(|(c, m)| m * c.degree as i64)
            .sum())
    }

    /// `self` followed by `beta`, i.e. `beta ∘ self`.
    pub fn then(&self, beta: &Self) -> Result<Self> {
        compose(self, beta)
    }

    pub fn transpose(&self) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|(c, m)| Ok((c.transpose()?, *m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.target, &self.source, comps)
    }

    /// `{"source", "target", "components": [{"ideal": [...], "mult": n}]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Precondition("a correspondence is a JSON object".into()))?;
        let get = |k: &str| {
            obj.get(k)
                .ok_or_else(|| Error::Precondition(format!("correspondence is missing '{k}'")))
        };
        let source = AffineCurveScheme::from_json(get("source")?)?;
        let target = AffineCurveScheme::from_json(get("target")?)?;
        let vars = product_vars(source.vars(), target.vars());
        let mut comps = Vec::new();
        for c in get("components")?
            .as_array()
            .ok_or_else(|| Error::Precondition("'components' must be an array".into()))?
        {
            let ideal = c
                .get("ideal")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Precondition("component without 'ideal' list".into()))?
                .iter()
                .map(|g| {
                    g.as_str()
                        .ok_or_else(|| Error::Precondition("ideal generators are strings".into()))
                        .and_then(|s| parse_in(s, &vars))
                })
                .collect::<Result<Vec<_>>>()?;
            let mult = match c.get("mult") {
                None => 1,
                Some(m) => m
                    .as_i64()
                    .ok_or_else(|| Error::Precondition("'mult' must be an integer".into()))?,
            };
            if mult == 0 {
                return Err(Error::Precondition("zero multiplicity".into()));
            }
            comps.push((PrimeCorrespondence::new(&source, &target, ideal)?, mult));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (c, _) in &comps {
            if !seen.insert(c.printed_ideal()) {
                return Err(Error::Precondition(format!(
                    "component {c} is listed twice"
                )));
            }
        }
        Self::new(&source, &target, comps)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "components": self.components.iter().map(|(c, m)| json!({
                "ideal": c.ideal.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "mult": m,
            })).collect::<Vec<_>>(),
        })
    }
}

impl PartialEq for FiniteCorrespondence {
    fn eq(&self, o: &Self) -> bool {
        self.source.same_as(&o.source)
            && self.target.same_as(&o.target)
            && self.components.len() == o.components.len()
            && self
                .components
                .iter()
                .zip(&o.components)
                .all(|((a, m), (b, n))| m == n && a.printed_ideal() == b.printed_ideal())
    }
}

impl fmt::Display for FiniteCorrespondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, m)) in self.components.iter().enumerate() {
            let sign = if *m < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            write!(f, "{sign}")?;
            if m.abs() != 1 {
                write!(f, "{}*", m.abs())?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A morphism given by the images of the target coordinates.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: AffineCurveScheme,
    target: AffineCurveScheme,
    images: Vec<RationalFunction>,
}

impl Morphism {
    pub fn new(
        source: &AffineCurveScheme,
        target: &AffineCurveScheme,
        images: Vec<RationalFunction>,
    ) -> Result<Self> {
        if images.len() != target.vars().len() {
            return Err(Error::InvalidMorphism(format!(
                "{} images for {} target coordinates",
                images.len(),
                target.vars().len()
            )));
        }
        let images = images
            .into_iter()
            .map(|r| {
                Ok(RationalFunction::new(
                    r.num().with_vars(source.vars())?,
                    r.den().with_vars(source.vars())?,
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e: Error| Error::InvalidMorphism(e.to_string()))?;
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Parse images such as `["z^2"]` in the source coordinates.
    pub fn parse(
        source: &AffineCurveScheme,
        target: &AffineCurveScheme,
        images: &[&str],
    ) -> Result<Self> {
        let names: Vec<&str> = source.vars().iter().map(String::as_str).collect();
        let rs = images
            .iter()
            .map(|s| crate::algebra::parse_rational_function(s, &names))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, rs)
    }

    pub fn source(&self) -> &AffineCurveScheme {
        &self.source
    }

    pub fn target(&self) -> &AffineCurveScheme {
        &self.target
    }

    pub fn images(&self) -> &[RationalFunction] {
        &self.images
    }

    /// The single image as a univariate rational function in the source coordinate.
    fn image_ratfun(&self) -> Result<RatFun> {
        let r = &self.images[0];
        match self.source.var() {
            Some(x) => r
                .to_ratfun(x)
                .ok_or_else(|| Error::InvalidMorphism(format!("{r} is not a function of {x}"))),
            None => {
                let c = r
                    .as_poly()
                    .and_then(|p| p.constant_value())
                    .ok_or_else(|| Error::InvalidMorphism(format!("{r} is not a constant")))?;
                Ok(RatFun::constant(c))
            }
        }
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &Morphism) -> Result<Morphism> {
        if !g.target.same_as(&self.source) {
            return Err(Error::CompositionMismatch(format!(
                "{} → {} then {} → {}",
                g.source, g.target, self.source, self.target
            )));
        }
        let images = match (self.source.var(), self.target.var()) {
            (_, None) => vec![],
            (None, Some(_)) => self.images.clone(),
            (Some(_), Some(_)) => {
                let inner = g.image_ratfun()?;
                let outer = self.image_ratfun()?;
                let c = outer
                    .compose(&inner)
                    .ok_or_else(|| Error::InvalidMorphism("composite is not defined".into()))?;
                vec![match g.source.var() {
                    Some(x) => RationalFunction::from_ratfun(&c, x),
                    None => RationalFunction::from_poly(MultiPoly::constant(
                        &[],
                        c.as_constant().unwrap_or_else(<Q as Zero>::zero),
                    )),
                }]
            }
        };
        Morphism::new(&g.source, &self.target, images)
    }
}

fn eval_upoly_at(p: &QPoly, r: &RatFun) -> RatFun {
    p.coeffs().iter().rev().fold(RatFun::zero(), |acc, c| {
        acc.mul(r).add(&RatFun::constant(c.clone()))
    })
}

/// The graph `Γ_f ⊂ X × Y`.
pub fn graph(f: &Morphism) -> Result<FiniteCorrespondence> {
    let (x, y) = (&f.source, &f.target);
    check_curve_class(x, "source")?;
    check_curve_class(y, "target")?;
    if y.var().is_none() {
        return Ok(FiniteCorrespondence::prime(PrimeCorrespondence::new(
            x,
            y,
            vec![],
        )?));
    }
    let r = f.image_ratfun()?;
    let irregular = |what: String| Error::InvalidMorphism(what);
    if !x.is_unit(r.den()) {
        return Err(irregular(format!(
            "{} is not regular on {}",
            f.images[0], x
        )));
    }
    match y.kind() {
        SchemeKind::Line { removed } => {
            for p in removed {
                let v = eval_upoly_at(p, &r);
                if !x.is_unit(v.num()) {
                    return Err(irregular(format!(
                        "{} does not map {} into {}",
                        f.images[0], x, y
                    )));
                }
            }
        }
        SchemeKind::Etale { f: eq, .. } => {
            let c = r.as_constant().filter(|c| Zero::is_zero(&eq.eval(c)));
            if c.is_none() {
                return Err(irregular(format!(
                    "{} is not a rational point of {}",
                    f.images[0], y
                )));
            }
        }
        _ => {}
    }
    let vars = product_vars(x.vars(), y.vars());
    let yv = MultiPoly::var(&vars, vars.last().unwrap());
    let lift = |p: &QPoly| match x.var() {
        Some(xv) => MultiPoly::from_upoly(p, xv).with_vars(&vars).unwrap(),
        None => MultiPoly::constant(&vars, p.coeff(0)),
    };
    let gen = yv.mul(&lift(r.den())).sub(&lift(r.num()));
    let c = PrimeCorrespondence::new(x, y, vec![gen]).map_err(|e| {
        Error::InvalidMorphism(format!(
            "graph of {} is not a correspondence: {e}",
            f.images[0]
        ))
    })?;
    Ok(FiniteCorrespondence::prime(c))
}

/// `beta ∘ alpha` for `alpha: X → Y`, `beta: Y → Z`.
pub fn compose(
    alpha: &FiniteCorrespondence,
    beta: &FiniteCorrespondence,
) -> Result<FiniteCorrespondence> {
    if !alpha.target.same_as(&beta.source) {
        return Err(Error::CompositionMismatch(format!(
            "target {} of the first correspondence is not the source {} of the second",
            alpha.target, beta.source
        )));
    }
    let mut comps = Vec::new();
    for (a, m) in &alpha.components {
        for (b, n) in &beta.components {
            for (c, e) in compose_prime(a, b)? {
                comps.push((c, m * n * e));
            }
        }
    }
    FiniteCorrespondence::new(&alpha.source, &beta.target, comps)
}

/// Composition of elementary correspondences via the eliminant over `k(X)`.
///
/// The generic fiber algebra `K[y, z]/(F, G)` splits over the irreducible
/// factors `P` of `Res_y(F, G)`; since `F` is squarefree in `y` the local
/// factor at `P` has length `e · deg P` where `e` is the exponent of `P`, so
/// the pushed-forward multiplicity is `e`.
pub fn compose_prime(
    a: &PrimeCorrespondence,
    b: &PrimeCorrespondence,
) -> Result<Vec<(PrimeCorrespondence, i64)>> {
    let (x, z) = (&a.source, &b.target);
    let out_vars = product_vars(x.vars(), z.vars());
    let build = |p: MultiPoly| -> Result<PrimeCorrespondence> {
        PrimeCorrespondence::new(x, z, vec![p]).map_err(|e| {
            Error::InvariantViolation(format!("composite component is not a correspondence: {e}"))
        })
    };
    if z.var().is_none() {
        return Ok(vec![(
            PrimeCorrespondence::new(x, z, vec![])?,
            a.degree as i64,
        )]);
    }
    let internal: Vec<String> = x
        .var()
        .map(|_| "x__".to_string())
        .into_iter()
        .chain(std::iter::once("z__".to_string()))
        .collect();
    let to_out =
        |p: &MultiPoly| -> Result<MultiPoly> { p.with_vars(&internal)?.renamed(&out_vars) };
    let Some(f) = a.generator_in("x__", "y__") else {
        // Y is a point: the composite is X × (closed point of Z)
        let gz = b.generator_in("y__", "z__").unwrap();
        return Ok(vec![(build(to_out(&gz)?)?, 1)]);
    };
    let g = b.generator_in("y__", "z__").unwrap();
    let disc = resultant(&f, &f.derivative("y__"), "y__")?;
    if disc.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "{f} is not generically étale over the source"
        )));
    }
    let r = resultant(&f, &g, "y__")?;
    if r.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "eliminant of ({f}, {g}) vanishes identically"
        )));
    }
    let mut out = Vec::new();
    match x.var() {
        None => {
            let fz = factor_rational(&r.to_upoly("z__")?)?;
            for (p, e) in fz.factors {
                let gen = MultiPoly::from_upoly(&p, "z__");
                out.push((build(to_out(&gen)?)?, e as i64));
            }
        }
        Some(_) => {
            for fac in factor_over_function_field(&r, "x__", "z__")? {
                out.push((build(to_out(&fac.primitive)?)?, fac.multiplicity as i64));
            }
        }
    }
    Ok(out)
}

/// `Cor(X, X') ⊗ Cor(Y, Y') → Cor(X×Y, X'×Y')`, with ideals in the product coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductCorrespondence {
    pub vars: Vec<String>,
    pub source_labels: (String, String),
    pub target_labels: (String, String),
    /// Generators and multiplicity, sorted by the printed ideal.
    pub components: Vec<(Vec<MultiPoly>, i64)>,
}

impl ProductCorrespondence {
    pub fn printed(&self) -> Vec<(String, i64)> {
        self.components
            .iter()
            .map(|(g, m)| (if g.is_empty() { "0".into() } else { join(g) }, *m))
            .collect()
    }
}

pub fn external_tensor(
    alpha: &FiniteCorrespondence,
    beta: &FiniteCorrespondence,
) -> Result<ProductCorrespondence> {
    let sx = product_vars(alpha.source.vars(), beta.source.vars());
    if sx.len() > 2 {
        return Err(Error::Unsupported(
            "product source of dimension above 2".into(),
        ));
    }
    let tx = product_vars(alpha.target.vars(), beta.target.vars());
    let all = product_vars(&sx, &tx);
    let (na, nb) = (alpha.source.vars().len(), beta.source.vars().len());
    let (ma, _) = (alpha.target.vars().len(), beta.target.vars().len());
    // positions of each factor's coordinates inside `all`
    let a_names: Vec<String> = all[..na]
        .iter()
        .chain(all[na + nb..na + nb + ma].iter())
        .cloned()
        .collect();
    let b_names: Vec<String> = all[na..na + nb]
        .iter()
        .chain(all[na + nb + ma..].iter())
        .cloned()
        .collect();
    let mut merged: BTreeMap<String, (Vec<MultiPoly>, i64)> = BTreeMap::new();
    for (a, m) in &alpha.components {
        for (b, n) in &beta.components {
            let mut gens = Vec::new();
            for g in &a.ideal {
                gens.push(g.renamed(&a_names)?.with_vars(&all)?);
            }
            for g in &b.ideal {
                gens.push(g.renamed(&b_names)?.with_vars(&all)?);
            }
            let key = join(&gens);
            merged.entry(key).or_insert((gens, 0)).1 += m * n;
        }
    }
    Ok(ProductCorrespondence {
        vars: all,
        source_labels: (alpha.source.label().into(), beta.source.label().into()),
        target_labels: (alpha.target.label().into(), beta.target.label().into()),
        components: merged.into_values().filter(|(_, m)| *m != 0).collect(),
    })
}
