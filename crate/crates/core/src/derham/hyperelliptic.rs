//! Odd-degree hyperelliptic curves `y² = h(x)`, `deg h = 2g + 1`.
//!
//! In the basis `x^i`, `x^i y` of functions and `α_i = x^i dx/y`,
//! `β_i = x^i dx` of 1-forms,
//! `d(x^i) = i β_{i-1}` and `d(x^i y) = Σ_k h_k (i + k/2) α_{i+k-1}`.
//! There is one point at infinity, where the pole orders are `2i`,
//! `2i + 2g + 1`, `2i + 2 - 2g` and `2i + 3` respectively.

use num_traits::{One, Zero};

use super::cech::{cech_model, Ambient, Chart};
use super::model::{Coordinates, Elem, Model};
use crate::algebra::{q, qf, MultiPoly, QMatrix, QPoly, RationalFunction, Q};
use crate::error::{Error, Result};
use crate::forms::{presentation_of, DifferentialForm, KaehlerPresentation};
use crate::varieties::AffineCurveScheme;

/// `h` and the genus, checking that `h` is squarefree of odd degree.
pub fn hyperelliptic_data(x: &AffineCurveScheme) -> Result<(QPoly, usize)> {
    let h = x.hyperelliptic().ok_or_else(|| {
        Error::Unsupported(format!(
            "{}: plane curves other than y^2 = h(x) with nothing inverted",
            x.label()
        ))
    })?;
    let deg = h.deg();
    if deg < 1 || deg % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "{}: y^2 = h(x) with deg h = {deg}; only odd degrees (one point at infinity) are modeled",
            x.label()
        )));
    }
    if h.gcd(&h.derivative()).deg() > 0 {
        return Err(Error::NotSmooth(format!(
            "{}: h is not squarefree",
            x.label()
        )));
    }
    Ok((h, (deg as usize - 1) / 2))
}

struct Basis<'a> {
    pres: &'a KaehlerPresentation,
    vars: Vec<String>,
}

impl Basis<'_> {
    fn mono(&self, i: i64, with_y: bool, over_y: bool) -> RationalFunction {
        let e = |k: i64, l: u32| vec![k.max(0) as u32, l];
        let num = MultiPoly::from_terms(&self.vars, [(e(i, u32::from(with_y)), <Q as One>::one())]);
        let den =
            MultiPoly::from_terms(&self.vars, [(e(-i, u32::from(over_y)), <Q as One>::one())]);
        RationalFunction::new(num, den)
    }

    /// `x^i` or `x^i y`.
    fn function(&self, i: i64, with_y: bool) -> DifferentialForm {
        DifferentialForm::function(self.pres, self.mono(i, with_y, false))
    }

    /// `α_i` or `β_i`.
    fn form(&self, i: i64, alpha: bool) -> DifferentialForm {
        let dx = DifferentialForm::dvar(self.pres, &self.vars[0]).expect("x is a coordinate");
        dx.scale(&self.mono(i, false, alpha))
    }
}

/// Coefficients of `d(x^i)` (on `β`) and `d(x^i y)` (on `α`).
fn d_function(h: &QPoly, i: i64, with_y: bool) -> Vec<(i64, bool, Q)> {
    if with_y {
        (0..=h.deg() as usize)
            .filter_map(|k| {
                let c = h.coeff(k) * (q(i) + qf(k as i64, 2));
                (!c.is_zero()).then(|| (i + k as i64 - 1, true, c))
            })
            .collect()
    } else if i != 0 {
        vec![(i - 1, false, q(i))]
    } else {
        vec![]
    }
}

/// Window model of the affine curve: pole order at infinity at most `N` for
/// functions and `N + 1` for forms, each list sorted by pole order.
pub fn hyperelliptic_model(x: &AffineCurveScheme, window: usize) -> Result<Model> {
    let (h, g) = hyperelliptic_data(x)?;
    let pres = presentation_of(x);
    let vars = x.vars().to_vec();
    let bs = Basis {
        pres: &pres,
        vars: vars.clone(),
    };
    let (n, g) = (window as i64, g as i64);
    let mut fs: Vec<(i64, i64, bool)> = Vec::new();
    for i in 0.. {
        let mut any = false;
        if 2 * i <= n {
            fs.push((2 * i, i, false));
            any = true;
        }
        if 2 * i + 2 * g + 1 <= n {
            fs.push((2 * i + 2 * g + 1, i, true));
            any = true;
        }
        if !any {
            break;
        }
    }
    let mut ws: Vec<(i64, i64, bool)> = Vec::new();
    for i in 0.. {
        let mut any = false;
        if 2 * i + 2 - 2 * g <= n + 1 {
            ws.push((2 * i + 2 - 2 * g, i, true));
            any = true;
        }
        if 2 * i + 3 <= n + 1 {
            ws.push((2 * i + 3, i, false));
            any = true;
        }
        if !any {
            break;
        }
    }
    fs.sort();
    ws.sort();
    let k0: Vec<Elem> = fs
        .iter()
        .map(|&(_, i, y)| Elem::new(bs.function(i, y), 0, 0))
        .collect();
    let k1: Vec<Elem> = ws
        .iter()
        .map(|&(_, i, a)| Elem::new(bs.form(i, a), i64::from(a && i < g), 0))
        .collect();
    let mut d = QMatrix::zeros(ws.len(), fs.len());
    for (j, &(_, i, y)) in fs.iter().enumerate() {
        for (k, a, c) in d_function(&h, i, y) {
            let row = ws
                .iter()
                .position(|&(_, kk, aa)| kk == k && aa == a)
                .ok_or_else(|| Error::InvariantViolation("window not closed under d".into()))?;
            d.set(row, j, c);
        }
    }
    Model::new(
        x.label(),
        window,
        vars,
        vec![k0, k1],
        vec![d],
        Coordinates::None,
    )
}

/// Čech model of the smooth completion, with charts `A` (the affine curve) and
/// `B` (coordinates `u = 1/x`, `v = y/x^{g+1}`, covering the point at infinity).
pub fn hyperelliptic_closure_model(x: &AffineCurveScheme, window: usize) -> Result<Model> {
    let (h, g) = hyperelliptic_data(x)?;
    let pres = presentation_of(x);
    let vars = x.vars().to_vec();
    let bs = Basis {
        pres: &pres,
        vars: vars.clone(),
    };
    let (m, g) = (window as i64, g as i64);
    let f_lo = -m - g - 1;
    let f_hi = m;
    let a_lo = f_lo - 1;
    let a_hi = m + 2 * g;
    let b_lo = f_lo - 1;
    let b_hi = m - 1;
    let mut funcs_idx: Vec<(i64, bool)> = Vec::new();
    for i in f_lo..=f_hi {
        funcs_idx.push((i, false));
        funcs_idx.push((i, true));
    }
    let mut forms_idx: Vec<(i64, bool)> = (a_lo..=a_hi).map(|i| (i, true)).collect();
    forms_idx.extend((b_lo..=b_hi).map(|i| (i, false)));
    let nf = funcs_idx.len();
    let nw = forms_idx.len();
    let mut d = QMatrix::zeros(nw, nf);
    for (j, &(i, y)) in funcs_idx.iter().enumerate() {
        for (k, a, c) in d_function(&h, i, y) {
            let row = forms_idx
                .iter()
                .position(|&t| t == (k, a))
                .ok_or_else(|| Error::InvariantViolation("window not closed under d".into()))?;
            d.set(row, j, c);
        }
    }
    let unit = |len: usize, i: usize| {
        let mut v = vec![<Q as Zero>::zero(); len];
        v[i] = <Q as One>::one();
        v
    };
    let amb = Ambient {
        funcs: funcs_idx.iter().map(|&(i, y)| bs.function(i, y)).collect(),
        forms: forms_idx.iter().map(|&(i, a)| (bs.form(i, a), 0)).collect(),
        d,
    };
    let pick_f = |pred: &dyn Fn(i64, bool) -> bool| -> Vec<Vec<Q>> {
        funcs_idx
            .iter()
            .enumerate()
            .filter(|(_, &(i, y))| pred(i, y))
            .map(|(k, _)| unit(nf, k))
            .collect()
    };
    let pick_w = |pred: &dyn Fn(i64, bool) -> bool| -> Vec<(Vec<Q>, i64)> {
        forms_idx
            .iter()
            .enumerate()
            .filter(|(_, &(i, a))| pred(i, a))
            .map(|(k, _)| (unit(nw, k), 0))
            .collect()
    };
    let a = Chart {
        name: "A",
        funcs: pick_f(&|i, _| i >= 0),
        forms: pick_w(&|i, _| i >= 0),
    };
    let b = Chart {
        name: "B",
        funcs: pick_f(&|i, y| if y { i <= -g - 1 } else { i <= 0 }),
        forms: pick_w(&|i, a| if a { i <= g - 1 } else { i <= -2 }),
    };
    cech_model(
        &format!("closure of {}", x.label()),
        window,
        vars,
        &pres,
        amb,
        a,
        b,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(h: &str) -> AffineCurveScheme {
        let v = vec!["x".to_string(), "y".to_string()];
        let f = crate::varieties::parse_in(&format!("y^2-({h})"), &v).unwrap();
        AffineCurveScheme::new("E", v, vec![f], vec![]).unwrap()
    }

    #[test]
    fn elliptic_affine() {
        let e = curve("x^3+x+1");
        let r = hyperelliptic_model(&e, 8).unwrap().record();
        assert_eq!(r.dims(), vec![1, 2]);
        assert_eq!(r.h[1].basis, vec!["dx/y", "x*dx/y"]);
        assert_eq!(r.h[1].f, vec![2, 1]);
        assert_eq!(r.h[1].w, vec![0, 2, 2]);
    }

    #[test]
    fn genus_two_and_closures() {
        let c = curve("x^5-x");
        let r = hyperelliptic_model(&c, 10).unwrap().record();
        assert_eq!(r.dims(), vec![1, 4]);
        assert_eq!(r.h[1].hodge_step(1), 2);
        let r = hyperelliptic_closure_model(&curve("x^3-x"), 3)
            .unwrap()
            .record();
        assert_eq!(r.dims(), vec![1, 2, 1]);
        assert_eq!(r.h[1].hodge_step(1), 1);
        assert_eq!(r.h[1].w, vec![0, 2, 2]);
        assert_eq!(r.h[2].w, vec![0, 0, 1]);
        let r = hyperelliptic_closure_model(&c, 3).unwrap().record();
        assert_eq!(r.dims(), vec![1, 4, 1]);
        assert_eq!(r.h[1].hodge_step(1), 2);
    }

    #[test]
    fn rejected_curves() {
        assert!(matches!(
            hyperelliptic_model(&curve("x^4+1"), 4),
            Err(Error::Unsupported(_))
        ));
        let v = vec!["x".to_string(), "y".to_string()];
        let f = crate::varieties::parse_in("y^2-x^2*(x-1)", &v).unwrap();
        if let Ok(c) = AffineCurveScheme::new("C", v, vec![f], vec![]) {
            assert!(matches!(
                hyperelliptic_model(&c, 4),
                Err(Error::NotSmooth(_))
            ));
        }
    }
}
