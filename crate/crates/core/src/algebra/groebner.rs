//! Buchberger's algorithm with the product and chain criteria.

use std::collections::BTreeSet;

use num_traits::One;

use super::poly::{Monomial, MultiPoly, TermOrder};
use super::rational::Q;
use crate::error::Result;

fn common_vars(gens: &[MultiPoly]) -> Vec<String> {
    let mut vs: Vec<String> = Vec::new();
    for g in gens {
        for v in g.vars() {
            if !vs.contains(v) {
                vs.push(v.clone());
            }
        }
    }
    vs
}

fn lead(p: &MultiPoly, order: TermOrder) -> (Monomial, Q) {
    let (m, c) = p.leading(order).expect("leading term of zero polynomial");
    (m.clone(), c.clone())
}

/// Fully reduced normal form of `p` modulo `basis`.
pub fn normal_form(p: &MultiPoly, basis: &[MultiPoly], order: TermOrder) -> MultiPoly {
    let leads: Vec<(Monomial, Q)> = basis.iter().map(|g| lead(g, order)).collect();
    let vars = p.vars().to_vec();
    let mut r = p.clone();
    let mut out = MultiPoly::zero(&vars);
    while !r.is_zero() {
        let (m, c) = lead(&r, order);
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let (lm, lc) = &leads[i];
                r = r.sub(&basis[i].mul_term(&m.div(lm), &(&c / lc)));
            }
            None => {
                let t = MultiPoly::from_terms(&vars, [(m.0.clone(), c)]);
                r = r.sub(&t);
                out = out.add(&t);
            }
        }
    }
    out
}

fn s_poly(f: &MultiPoly, g: &MultiPoly, order: TermOrder) -> MultiPoly {
    let (mf, cf) = lead(f, order);
    let (mg, cg) = lead(g, order);
    let l = mf.lcm(&mg);
    f.mul_term(&l.div(&mf), &(Q::one() / cf))
        .sub(&g.mul_term(&l.div(&mg), &(Q::one() / cg)))
}

/// Reduced Gröbner basis, monic, sorted by increasing leading monomial.
pub fn groebner_basis(gens: &[MultiPoly], order: TermOrder) -> Result<Vec<MultiPoly>> {
    for g in gens {
        g.check_exponents()?;
    }
    let vars = common_vars(gens);
    let mut basis: Vec<MultiPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            g.with_vars(&vars)
                .map(|p| p.scale(&(Q::one() / lead(&p, order).1)))
        })
        .collect::<Result<_>>()?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    while let Some(&(i, j)) = pairs.iter().next() {
        pairs.remove(&(i, j));
        done.insert((i, j));
        let (mi, _) = lead(&basis[i], order);
        let (mj, _) = lead(&basis[j], order);
        let l = mi.lcm(&mj);
        // product criterion
        if mi.mul(&mj) == l {
            continue;
        }
        // chain criterion
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lead(&basis[k], order).0.divides(&l)
                && !pairs.contains(&key(i, k))
                && !pairs.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], order);
        let r = normal_form(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        r.check_exponents()?;
        let r = r.scale(&(Q::one() / lead(&r, order).1));
        let n = basis.len();
        basis.push(r);
        for k in 0..n {
            pairs.insert((k, n));
        }
    }
    Ok(reduce(basis, order))
}

fn reduce(basis: Vec<MultiPoly>, order: TermOrder) -> Vec<MultiPoly> {
    // drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let m = lead(g, order).0;
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            let mk = lead(h, order).0;
            k != i && mk.divides(&m) && (mk != m || k < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<MultiPoly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<MultiPoly> = minimal
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, g)| g.clone())
                .collect();
            let r = normal_form(&minimal[i], &others, order);
            r.scale(&(Q::one() / lead(&r, order).1))
        })
        .collect();
    out.sort_by(|a, b| order.cmp(&lead(a, order).0, &lead(b, order).0));
    out
}

/// Whether `p` lies in the ideal with Gröbner basis `basis`.
pub fn ideal_membership(p: &MultiPoly, basis: &[MultiPoly], order: TermOrder) -> bool {
    let vars = common_vars(&[basis, std::slice::from_ref(p)].concat());
    let p = p.with_vars(&vars).unwrap();
    let b: Vec<MultiPoly> = basis.iter().map(|g| g.with_vars(&vars).unwrap()).collect();
    normal_form(&p, &b, order).is_zero()
}

/// True when `gens` generate the unit ideal.
pub fn is_unit_ideal(gens: &[MultiPoly]) -> Result<bool> {
    let b = groebner_basis(gens, TermOrder::GrLex)?;
    Ok(b.len() == 1 && b[0].is_constant() && !b[0].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn examples() {
        let b = groebner_basis(&[p("x")], TermOrder::GrLex).unwrap();
        assert_eq!(b, vec![p("x")]);
        let b =
            groebner_basis(&[p("y^2-x^3-x"), p("-3*x^2-1"), p("2*y")], TermOrder::GrLex).unwrap();
        assert_eq!(b, vec![p("1")]);
        let b = groebner_basis(&[p("x*y"), p("x^2")], TermOrder::Lex).unwrap();
        assert_eq!(b, vec![p("x*y"), p("x^2")]);
    }

    #[test]
    fn normal_form_membership() {
        let b = groebner_basis(&[p("x^2-y"), p("x*y-1")], TermOrder::GrLex).unwrap();
        assert!(ideal_membership(&p("x^3-1"), &b, TermOrder::GrLex));
        assert!(!ideal_membership(&p("x-1"), &b, TermOrder::GrLex));
    }
}
