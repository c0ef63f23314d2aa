//! Two-chart Čech models of complete curves.
//!
//! A curve `X̄ = U_A ∪ U_B` is modeled by an ambient window of the
//! logarithmic de Rham complex on `U_A ∩ U_B` and the subcomplexes of
//! sections extending over each chart. The total complex of
//! `C(U_A) ⊕ C(U_B) → C(U_A ∩ U_B)`, `(s_A, s_B) ↦ s_B - s_A`, computes the
//! hypercohomology. `F` is the stupid filtration; `W_0` consists of the
//! forms without logarithmic poles.

use num_traits::{One, Zero};

use super::model::{Coordinates, Elem, Model};
use crate::algebra::{q, MultiPoly, QMatrix, RationalFunction, Q};
use crate::error::{Error, Result};
use crate::forms::{DifferentialForm, KaehlerPresentation, LogDivisor, P1Point};
use crate::homological::{tot_layout, total_complex, ChainMap, Complex, DoubleComplex};

/// Sections over one chart, as vectors in the ambient coordinates with weights.
pub(crate) struct Chart {
    pub name: &'static str,
    pub funcs: Vec<Vec<Q>>,
    pub forms: Vec<(Vec<Q>, i64)>,
}

pub(crate) struct Ambient {
    pub funcs: Vec<DifferentialForm>,
    pub forms: Vec<(DifferentialForm, i64)>,
    pub d: QMatrix,
}

fn unit(len: usize, i: usize) -> Vec<Q> {
    let mut v = vec![<Q as Zero>::zero(); len];
    v[i] = <Q as One>::one();
    v
}

fn chart_complex(amb: &Ambient, c: &Chart) -> Result<Complex> {
    let nf = amb.forms.len();
    let cols: Vec<Vec<Q>> = c.forms.iter().map(|f| f.0.clone()).collect();
    let basis = QMatrix::from_cols(nf, &cols);
    let mut d = QMatrix::zeros(c.forms.len(), c.funcs.len());
    for (j, v) in c.funcs.iter().enumerate() {
        let img = amb.d.apply(v);
        let x = if img.iter().all(Zero::is_zero) {
            vec![<Q as Zero>::zero(); c.forms.len()]
        } else {
            basis.solve(&img).ok_or_else(|| {
                Error::InvariantViolation(format!("chart {} is not closed under d", c.name))
            })?
        };
        for (i, e) in x.into_iter().enumerate() {
            d.set(i, j, e);
        }
    }
    Complex::new(0, vec![c.funcs.len(), c.forms.len()], vec![d])
}

fn combine(
    forms: &[DifferentialForm],
    v: &[Q],
    pres: &KaehlerPresentation,
    degree: usize,
) -> DifferentialForm {
    let mut acc = DifferentialForm::zero(pres, degree);
    for (c, f) in v.iter().zip(forms) {
        if !c.is_zero() {
            acc = acc
                .add(&f.scale_q(c))
                .expect("ambient forms share a presentation");
        }
    }
    acc
}

pub(crate) fn cech_model(
    label: &str,
    window: usize,
    vars: Vec<String>,
    pres: &KaehlerPresentation,
    amb: Ambient,
    a: Chart,
    b: Chart,
) -> Result<Model> {
    let ca = chart_complex(&amb, &a)?;
    let cb = chart_complex(&amb, &b)?;
    let col0 = ca.direct_sum(&cb);
    let col1 = Complex::new(
        0,
        vec![amb.funcs.len(), amb.forms.len()],
        vec![amb.d.clone()],
    )?;
    let restriction = |n: usize| -> QMatrix {
        let amb_len = if n == 0 {
            amb.funcs.len()
        } else {
            amb.forms.len()
        };
        let mut cols: Vec<Vec<Q>> = Vec::new();
        for (chart, sign) in [(&a, -q(1)), (&b, q(1))] {
            let vs: Vec<Vec<Q>> = if n == 0 {
                chart.funcs.clone()
            } else {
                chart.forms.iter().map(|f| f.0.clone()).collect()
            };
            cols.extend(
                vs.into_iter()
                    .map(|v| v.iter().map(|x| x * &sign).collect()),
            );
        }
        QMatrix::from_cols(amb_len, &cols)
    };
    let delta = ChainMap::new(
        col0.clone(),
        col1.clone(),
        vec![(0, restriction(0)), (1, restriction(1))],
    )
    .map_err(|e| Error::InvariantViolation(format!("Čech restriction: {e}")))?;
    let dc = DoubleComplex {
        p_lo: 0,
        columns: vec![col0, col1],
        horizontal: vec![delta],
    };
    let tot = total_complex(&dc)?;
    let amb_funcs = amb.funcs.clone();
    let amb_forms: Vec<DifferentialForm> = amb.forms.iter().map(|f| f.0.clone()).collect();
    let mut elems = Vec::new();
    for n in tot.degrees() {
        let mut es = Vec::new();
        for (p, qd, _, _) in tot_layout(&dc, n) {
            let (fs, deg) = if qd == 0 {
                (&amb_funcs, 0)
            } else {
                (&amb_forms, 1)
            };
            if p == 0 {
                for chart in [&a, &b] {
                    if qd == 0 {
                        for v in &chart.funcs {
                            es.push(
                                Elem::new(combine(fs, v, pres, deg), 0, 0).on_chart(chart.name),
                            );
                        }
                    } else {
                        for (v, w) in &chart.forms {
                            es.push(
                                Elem::new(combine(fs, v, pres, deg), 1, *w).on_chart(chart.name),
                            );
                        }
                    }
                }
            } else {
                let len = fs.len();
                for i in 0..len {
                    let w = if qd == 0 { 0 } else { amb.forms[i].1 };
                    es.push(Elem::new(combine(fs, &unit(len, i), pres, deg), qd, w).on_chart("AB"));
                }
            }
        }
        elems.push(es);
    }
    let d = (tot.lo()..tot.hi()).map(|n| tot.diff(n)).collect();
    Model::new(label, window, vars, elems, d, Coordinates::None)
}

fn laurent(var: &str, k: i64) -> RationalFunction {
    let vars = vec![var.to_string()];
    let m = MultiPoly::from_terms(&vars, [(vec![k.unsigned_abs() as u32], <Q as One>::one())]);
    if k >= 0 {
        RationalFunction::from_poly(m)
    } else {
        RationalFunction::new(MultiPoly::one(&vars), m)
    }
}

/// Čech model of `(P¹, D)` in the coordinate of `divisor`, with charts
/// `A = P¹ ∖ ∞` and `B = P¹ ∖ 0`.
pub fn p1_model(divisor: &LogDivisor, window: usize) -> Result<Model> {
    if window == 0 {
        return Err(Error::Precondition("window must be positive".into()));
    }
    let var = divisor.var().to_string();
    let vars = vec![var.clone()];
    let pres = KaehlerPresentation::free(&vars);
    let n = window as i64;
    let dz = DifferentialForm::dvar(&pres, &var)?;
    let fun = |r: RationalFunction| DifferentialForm::function(&pres, r);
    let zero = q(0);
    let has0 = divisor.contains(&P1Point::Finite(zero.clone()));
    let has_inf = divisor.contains(&P1Point::Infinity);
    let others: Vec<Q> = divisor
        .points()
        .into_iter()
        .filter_map(|p| match p {
            P1Point::Finite(a) if a != zero => Some(a),
            _ => None,
        })
        .collect();

    let funcs: Vec<DifferentialForm> = (-n..=n).map(|k| fun(laurent(&var, k))).collect();
    let fidx = |k: i64| (k + n) as usize;
    // forms: z^k dz for k in [-n-1, n-1], then dz/(z-a)
    let mut forms: Vec<(DifferentialForm, i64)> = (-n - 1..n)
        .map(|k| (dz.scale(&laurent(&var, k)), 0))
        .collect();
    let widx = |k: i64| (k + n + 1) as usize;
    let vz = vec![var.clone()];
    for a in &others {
        let den = MultiPoly::var(&vz, &var).sub(&MultiPoly::constant(&vz, a.clone()));
        forms.push((
            dz.scale(&RationalFunction::new(MultiPoly::one(&vz), den)),
            1,
        ));
    }
    let nfun = funcs.len();
    let nform = forms.len();
    let mut d = QMatrix::zeros(nform, nfun);
    for k in -n..=n {
        if k != 0 {
            d.set(widx(k - 1), fidx(k), q(k));
        }
    }
    let amb = Ambient { funcs, forms, d };

    let a = Chart {
        name: "A",
        funcs: (0..=n).map(|k| unit(nfun, fidx(k))).collect(),
        forms: {
            let mut v: Vec<(Vec<Q>, i64)> = (0..n).map(|k| (unit(nform, widx(k)), 0)).collect();
            if has0 {
                v.push((unit(nform, widx(-1)), 1));
            }
            for i in 0..others.len() {
                v.push((unit(nform, widx(n - 1) + 1 + i), 1));
            }
            v
        },
    };
    let b = Chart {
        name: "B",
        funcs: (-n..=0).rev().map(|k| unit(nfun, fidx(k))).collect(),
        forms: {
            let mut v: Vec<(Vec<Q>, i64)> = (-n - 1..=-2)
                .rev()
                .map(|k| (unit(nform, widx(k)), 0))
                .collect();
            if has_inf {
                v.push((unit(nform, widx(-1)), 1));
            }
            for i in 0..others.len() {
                let mut e = unit(nform, widx(n - 1) + 1 + i);
                if !has_inf {
                    e[widx(-1)] = -q(1);
                }
                v.push((e, 1));
            }
            v
        },
    };
    let label = if divisor.points().is_empty() {
        "P1".to_string()
    } else {
        let ps: Vec<String> = divisor.points().iter().map(|p| p.to_string()).collect();
        format!("(P1,{{{}}})", ps.join(","))
    };
    cech_model(&label, window, vars, &pres, amb, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line() {
        let m = p1_model(&LogDivisor::empty("z"), 4).unwrap();
        let r = m.record();
        assert_eq!(r.dims(), vec![1, 0, 1]);
        let h2 = r.degree(2).unwrap();
        assert_eq!(h2.hodge_step(1), 1);
        assert_eq!(h2.hodge_step(2), 0);
        assert_eq!(h2.w, vec![0, 0, 1]);
        assert_eq!(h2.basis, vec!["AB: dz/z"]);
    }

    #[test]
    fn logarithmic_poles() {
        let d = LogDivisor::new("z", vec![P1Point::Finite(q(0)), P1Point::Infinity]).unwrap();
        let r = p1_model(&d, 3).unwrap().record();
        assert_eq!(r.dims(), vec![1, 1, 0]);
        assert_eq!(r.h[1].basis, vec!["dz/z"]);
        assert_eq!(r.h[1].w, vec![0, 0, 1]);
        assert_eq!(r.h[1].hodge_step(1), 1);
        let d = LogDivisor::new(
            "z",
            vec![
                P1Point::Finite(q(0)),
                P1Point::Finite(q(1)),
                P1Point::Infinity,
            ],
        )
        .unwrap();
        let r = p1_model(&d, 3).unwrap().record();
        assert_eq!(r.dims(), vec![1, 2, 0]);
        let d = LogDivisor::new("z", vec![P1Point::Finite(q(1))]).unwrap();
        let r = p1_model(&d, 3).unwrap().record();
        assert_eq!(r.dims(), vec![1, 0, 0]);
    }
}
