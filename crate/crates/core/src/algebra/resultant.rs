//! Sylvester resultants via fraction-free (Bareiss) elimination.

use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// Determinant of a square matrix with polynomial entries.
pub fn bareiss_det(mut m: Vec<Vec<MultiPoly>>, vars: &[String]) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(vars);
    }
    let mut sign = false;
    let mut prev = MultiPoly::one(vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = !sign;
                }
                None => return MultiPoly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v
                    .exact_div(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            m[i][k] = MultiPoly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// `Res_var(f, g)`, the Sylvester resultant eliminating `var`.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: &str) -> Result<MultiPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DegenerateInput(
            "resultant of a zero polynomial".into(),
        ));
    }
    let (m, n) = (f.degree_in(var) as usize, g.degree_in(var) as usize);
    if m == 0 && n == 0 {
        return Err(Error::DegenerateInput(format!(
            "both inputs are constant in {var}"
        )));
    }
    let vars = f.add(g).vars().to_vec();
    let vars = if vars.iter().any(|v| v == var) {
        vars
    } else {
        let mut v = vars;
        v.push(var.to_string());
        v
    };
    let fc: Vec<MultiPoly> = f
        .with_vars(&vars)?
        .coefficients_in(var)
        .into_iter()
        .rev()
        .collect();
    let gc: Vec<MultiPoly> = g
        .with_vars(&vars)?
        .coefficients_in(var)
        .into_iter()
        .rev()
        .collect();
    if m == 0 {
        return Ok(fc[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(gc[0].pow(m as u32));
    }
    let size = m + n;
    let zero = MultiPoly::zero(&vars);
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![zero.clone(); size];
        for (j, c) in fc.iter().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![zero.clone(); size];
        for (j, c) in gc.iter().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    let det = bareiss_det(rows, &vars);
    let rest: Vec<String> = vars.iter().filter(|v| *v != var).cloned().collect();
    det.with_vars(&rest)
}
