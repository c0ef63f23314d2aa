//! Univariate factorization over ℚ and over the rational function field ℚ(x).
//!
//! Over ℚ(x) a polynomial in `z` is treated as a bivariate polynomial: it is
//! specialized at a good rational point `x = x0`, factored over ℚ, and the
//! factors are lifted x-adically and recombined by trial division.

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::ratfun::{QPoly, RatFun};
use super::rational::{q, Q};
use super::upoly::UniPoly;
use super::zassenhaus::factor_squarefree;
use crate::error::{Error, Result};

/// `unit * prod factor^mult` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: Q,
    pub factors: Vec<(QPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> QPoly {
        self.factors
            .iter()
            .fold(QPoly::constant(self.unit.clone()), |acc, (f, m)| {
                acc.mul(&f.pow(*m))
            })
    }
}

/// Factor a nonzero polynomial over ℚ. Factors are sorted by (degree, printed form).
pub fn factor_rational(f: &QPoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::DegenerateInput(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let unit = f.lc();
    let mut factors = Vec::new();
    for (a, m) in f.squarefree_decomposition() {
        for g in factor_squarefree(&a) {
            factors.push((g, m));
        }
    }
    factors.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.to_string_in("t").cmp(&b.0.to_string_in("t")))
    });
    Ok(Factorization { unit, factors })
}

/// An irreducible factor over ℚ(x) of a polynomial in `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionFieldFactor {
    /// Monic in `z` with coefficients in ℚ(x).
    pub monic: UniPoly<RatFun>,
    /// Associate in ℚ[x][z] with coprime integer coefficients and positive leading grlex coefficient.
    pub primitive: MultiPoly,
    pub multiplicity: u32,
}

/// Coefficients of `f` in `z`, each a polynomial in `x`. Fails if other variables occur.
pub fn to_bivariate(f: &MultiPoly, x: &str, z: &str) -> Result<Vec<QPoly>> {
    f.coefficients_in(z)
        .iter()
        .map(|c| c.to_upoly(x))
        .collect::<Result<_>>()
}

pub fn from_bivariate(cs: &[QPoly], x: &str, z: &str) -> MultiPoly {
    let vars = vec![x.to_string(), z.to_string()];
    let mut terms = Vec::new();
    for (j, c) in cs.iter().enumerate() {
        for (i, a) in c.coeffs().iter().enumerate() {
            terms.push((vec![i as u32, j as u32], a.clone()));
        }
    }
    MultiPoly::from_terms(&vars, terms)
}

pub fn bivariate_to_qx(cs: &[QPoly]) -> UniPoly<RatFun> {
    UniPoly::new(cs.iter().map(|c| RatFun::from_poly(c.clone())).collect())
}

/// Clear denominators and remove the ℚ[x]-content.
pub fn qx_to_primitive(f: &UniPoly<RatFun>) -> Vec<QPoly> {
    let l = f.coeffs().iter().fold(QPoly::one(), |acc, c| {
        let g = acc.gcd(c.den());
        acc.mul(c.den()).div_rem(&g).0
    });
    let cs: Vec<QPoly> = f
        .coeffs()
        .iter()
        .map(|c| c.num().mul(&l).div_rem(c.den()).0)
        .collect();
    primitive_part(&cs)
}

fn primitive_part(cs: &[QPoly]) -> Vec<QPoly> {
    let g = cs.iter().fold(QPoly::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return cs.to_vec();
    }
    cs.iter().map(|c| c.div_rem(&g).0).collect()
}

fn shift_x(cs: &[QPoly], x0: &Q) -> Vec<QPoly> {
    let s = QPoly::new(vec![x0.clone(), Q::one()]);
    cs.iter().map(|c| c.compose(&s)).collect()
}

fn eval_x(cs: &[QPoly], x0: &Q) -> QPoly {
    QPoly::new(cs.iter().map(|c| c.eval(x0)).collect())
}

/// Series in `x` with coefficients in ℚ[z]: `sum_k x^k s[k]`.
type XSeries = Vec<QPoly>;

fn xs_coeff(a: &XSeries, k: usize) -> QPoly {
    a.get(k).cloned().unwrap_or_else(QPoly::zero)
}

fn xs_mul(a: &XSeries, b: &XSeries, prec: usize) -> XSeries {
    let mut out = vec![QPoly::zero(); prec];
    for (i, ai) in a.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= prec {
                break;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Re-index a z-coefficient list of x-polynomials as an x-expansion.
fn to_xseries(cs: &[QPoly], prec: usize) -> XSeries {
    (0..prec)
        .map(|k| QPoly::new(cs.iter().map(|c| c.coeff(k)).collect()))
        .collect()
}

fn from_xseries(s: &XSeries) -> Vec<QPoly> {
    let d = s.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    (0..d)
        .map(|j| QPoly::new(s.iter().map(|p| p.coeff(j)).collect()))
        .collect()
}

/// Power series inverse of `c(x)` modulo `x^prec`; needs `c(0) != 0`.
fn series_inverse(c: &QPoly, prec: usize) -> QPoly {
    let c0 = c.coeff(0);
    let mut inv = vec![Q::one() / &c0];
    for k in 1..prec {
        let mut s = Q::zero();
        for i in 1..=k {
            s += c.coeff(i) * &inv[k - i];
        }
        inv.push(-s / &c0);
    }
    QPoly::new(inv)
}

/// Lift `t ≡ g h (mod x)` with monic coprime `g, h ∈ ℚ[z]` to `mod x^prec`.
fn xadic_pair(t: &XSeries, g: &QPoly, h: &QPoly, prec: usize) -> (XSeries, XSeries) {
    let (one, s, tt) = g.ext_gcd(h);
    debug_assert_eq!(one, QPoly::one());
    let mut gs: XSeries = vec![g.clone()];
    let mut hs: XSeries = vec![h.clone()];
    for k in 1..prec {
        let mut e = xs_coeff(t, k);
        for i in 0..=k {
            let (gi, hj) = (xs_coeff(&gs, i), xs_coeff(&hs, k - i));
            if !gi.is_zero() && !hj.is_zero() {
                e = e.sub(&gi.mul(&hj));
            }
        }
        let te = tt.mul(&e);
        let (qq, tau) = te.div_rem(g);
        let sigma = s.mul(&e).add(&qq.mul(h)).rem(h);
        gs.push(tau);
        hs.push(sigma);
    }
    (gs, hs)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn is_squarefree(p: &QPoly) -> bool {
    p.gcd(&p.derivative()).deg() == 0
}

fn candidate_points() -> impl Iterator<Item = Q> {
    (0i64..).flat_map(|k| {
        if k == 0 {
            vec![q(0)]
        } else {
            vec![q(k), q(-k)]
        }
    })
}

/// Irreducible factors over ℚ(x) of a primitive, squarefree (in `z`) polynomial.
fn factor_bivariate_squarefree(cs: &[QPoly]) -> Vec<Vec<QPoly>> {
    let d = cs.len() - 1;
    if d <= 1 {
        return vec![cs.to_vec()];
    }
    let lc = cs[d].clone();
    let x0 = candidate_points()
        .take(10_000)
        .find(|c| !lc.eval(c).is_zero() && is_squarefree(&eval_x(cs, c)))
        .expect("squarefree polynomial has a good specialization");
    let b = shift_x(cs, &x0);
    let lcb = b[d].clone();
    let base = factor_squarefree(&eval_x(&b, &Q::zero()).monic());
    if base.len() == 1 {
        return vec![cs.to_vec()];
    }
    let degx = b.iter().map(|c| c.deg().max(0) as usize).max().unwrap_or(0);
    let prec = degx + lcb.deg() as usize + 1;
    let lcinv = series_inverse(&lcb, prec);
    let target_cs: Vec<QPoly> = b.iter().map(|c| c.mul(&lcinv).truncate(prec)).collect();
    let mut target = to_xseries(&target_cs, prec);
    let mut lifted: Vec<XSeries> = Vec::new();
    for i in 0..base.len() {
        if i + 1 == base.len() {
            lifted.push(target.clone());
            break;
        }
        let rest = base[i + 1..].iter().fold(QPoly::one(), |a, f| a.mul(f));
        let (g, h) = xadic_pair(&target, &base[i], &rest, prec);
        lifted.push(g);
        target = h;
    }

    let to_qx = |p: &[QPoly]| bivariate_to_qx(p);
    let mut result = Vec::new();
    let mut cur = b.clone();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for sub in subsets(lifted.len(), s) {
            let lcc: XSeries = vec![QPoly::zero(); 0]
                .into_iter()
                .chain((0..prec).map(|k| QPoly::constant(cur.last().unwrap().coeff(k))))
                .collect();
            let prod = sub
                .iter()
                .fold(lcc, |acc, &i| xs_mul(&acc, &lifted[i], prec));
            let cand = primitive_part(&from_xseries(&prod));
            if cand.len() < 2 {
                continue;
            }
            let (qq, r) = to_qx(&cur).div_rem(&to_qx(&cand));
            if r.is_zero() {
                cur = qx_to_primitive(&qq);
                result.push(cand);
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !sub.contains(i))
                    .map(|(_, g)| g)
                    .collect();
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if cur.len() > 1 {
        result.push(cur);
    }
    result.iter().map(|f| shift_x(f, &-x0.clone())).collect()
}

/// Factor `f ∈ ℚ[x][z]` as a polynomial in `z` over ℚ(x).
///
/// Factors of degree zero in `z` are units of ℚ(x)[z] and are dropped.
/// Output is sorted by the printed primitive form.
pub fn factor_over_function_field(
    f: &MultiPoly,
    x: &str,
    z: &str,
) -> Result<Vec<FunctionFieldFactor>> {
    if f.is_zero() {
        return Err(Error::DegenerateInput(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let cs = to_bivariate(f, x, z)?;
    let qx = bivariate_to_qx(&cs);
    let mut out = Vec::new();
    for (a, m) in qx.squarefree_decomposition() {
        let prim = qx_to_primitive(&a);
        for g in factor_bivariate_squarefree(&prim) {
            let poly = from_bivariate(&g, x, z).primitive_integer();
            out.push(FunctionFieldFactor {
                monic: bivariate_to_qx(&g).monic(),
                primitive: poly,
                multiplicity: m,
            });
        }
    }
    out.sort_by_key(|a| a.primitive.to_string());
    Ok(out)
}
