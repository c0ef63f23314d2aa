//! Factorization of squarefree integer polynomials: Berlekamp modulo a small
//! prime, linear Hensel lifting, and subset recombination with trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ratfun::QPoly;
use super::rational::{lcm_denoms, qi};

/// Dense polynomial over `Z/p`, ascending coefficients, trimmed.
type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, p as i64, (a % p) as i64);
    while nr != 0 {
        let qq = r / nr;
        (t, nt) = (nt, t - qq * nt);
        (r, nr) = (nr, r - qq * nr);
    }
    assert_eq!(r, 1, "not invertible mod p");
    t.rem_euclid(p as i64) as u64
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn fp_divrem(a: &Fp, d: &Fp, p: u64) -> (Fp, Fp) {
    let dd = d.len() - 1;
    let inv = inv_mod(*d.last().unwrap(), p);
    let mut r = a.clone();
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut qv = vec![0u64; r.len() - dd];
    for k in (dd..r.len()).rev() {
        let c = r[k] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            r[k - dd + j] = (r[k - dd + j] + p * p - c * dc % p) % p;
        }
        qv[k - dd] = c;
    }
    r.truncate(dd);
    (trim(qv), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn fp_ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (qq, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&qq, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&qq, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &Fp| trim(v.iter().map(|c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

fn fp_powmod(base: &Fp, mut e: u64, m: &Fp, p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let mut b = fp_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_divrem(&fp_mul(&acc, &b, p), m, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    acc
}

/// Kernel of a square matrix over `Z/p` (rows given), as row vectors.
fn fp_kernel(m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let cols = if n == 0 { 0 } else { m[0].len() };
    let mut a = m;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for j in 0..cols {
            a[r][j] = a[r][j] * inv % p;
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p * p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == n {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Monic irreducible factors of a monic squarefree polynomial modulo `p`.
fn berlekamp(f: &Fp, p: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let xp = fp_powmod(&vec![0, 1], p, f, p);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur: Fp = vec![1];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    // (Q^T - I) v = 0
    let mut mt = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            mt[j][i] = rows[i][j];
        }
    }
    for (i, row) in mt.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    let kernel = fp_kernel(mt, p);
    let r = kernel.len();
    let mut factors = vec![f.clone()];
    for v in kernel.iter().map(|v| trim(v.clone())) {
        if factors.len() == r {
            break;
        }
        if v.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for g in factors {
            if g.len() <= 2 {
                next.push(g);
                continue;
            }
            let mut rest = g;
            for s in 0..p {
                if rest.len() <= 2 {
                    break;
                }
                let vs = fp_sub(&v, &vec![s], p);
                let h = fp_gcd(&rest, &vs, p);
                if h.len() > 1 && h.len() < rest.len() {
                    rest = fp_divrem(&rest, &h, p).0;
                    next.push(h);
                }
            }
            next.push(fp_monic(&rest, p));
        }
        factors = next;
    }
    debug_assert_eq!(factors.len(), r);
    factors
}

/// Integer polynomial, ascending.
type Zp = Vec<BigInt>;

fn ztrim(mut a: Zp) -> Zp {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn zmod(a: &Zp, m: &BigInt) -> Zp {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsym(a: &Zp, m: &BigInt) -> Zp {
    let half: BigInt = m >> 1;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn zmul(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zmod(&out, m)
}

fn zsub(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zmod(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
        m,
    )
}

fn zadd(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zmod(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
        m,
    )
}

fn to_fp(a: &Zp, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(
        a.iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn from_fp(a: &Fp) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Lift `t ≡ g h (mod p)` (all monic) to `mod p^k`, `t` given modulo `p^k`.
fn hensel_pair(t: &Zp, g: &Fp, h: &Fp, p: u64, k: u32) -> (Zp, Zp) {
    let (one, s, tt) = fp_ext_gcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut gz = from_fp(g);
    let mut hz = from_fp(h);
    let mut pk = pb.clone();
    for _ in 1..k {
        let pk1 = &pk * &pb;
        let diff = zsub(&zmod(t, &pk1), &zmul(&gz, &hz, &pk1), &pk1);
        let e: Fp = trim(
            diff.iter()
                .map(|c| (c / &pk).mod_floor(&pb).to_u64().unwrap())
                .collect(),
        );
        if !e.is_empty() {
            let te = fp_mul(&tt, &e, p);
            let (qq, tau) = fp_divrem(&te, g, p);
            let sigma = fp_add(&fp_mul(&s, &e, p), &fp_mul(&qq, h, p), p);
            let sigma = fp_divrem(&sigma, h, p).1;
            let sc = |v: &Fp| -> Zp { v.iter().map(|&c| BigInt::from(c) * &pk).collect() };
            gz = zadd(&gz, &sc(&tau), &pk1);
            hz = zadd(&hz, &sc(&sigma), &pk1);
        }
        pk = pk1;
    }
    (gz, hz)
}

/// Lift a full monic factorization `t ≡ prod fs (mod p)` to `mod p^k`.
fn hensel_multi(t: &Zp, fs: &[Fp], p: u64, k: u32) -> Vec<Zp> {
    let pk = BigInt::from(p).pow(k);
    let mut out = Vec::new();
    let mut target = zmod(t, &pk);
    for i in 0..fs.len() {
        if i + 1 == fs.len() {
            out.push(target.clone());
            break;
        }
        let rest = fs[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, f| fp_mul(&acc, f, p));
        let (g, h) = hensel_pair(&target, &fs[i], &rest, p, k);
        out.push(g);
        target = h;
    }
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn to_q(a: &Zp) -> QPoly {
    QPoly::new(a.iter().map(qi).collect())
}

fn primitive(a: &Zp) -> Zp {
    let g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut v: Zp = a.iter().map(|c| c / &g).collect();
    if v.last().is_some_and(|c| c.is_negative()) {
        v = v.iter().map(|c| -c).collect();
    }
    v
}

/// Primitive integer form of a rational polynomial.
pub(crate) fn integer_primitive(f: &QPoly) -> Zp {
    let l = lcm_denoms(f.coeffs());
    let v: Zp = f
        .coeffs()
        .iter()
        .map(|c| (c * qi(&l)).to_integer())
        .collect();
    primitive(&v)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Monic irreducible factors over ℚ of a squarefree polynomial of positive degree.
pub(crate) fn factor_squarefree(f: &QPoly) -> Vec<QPoly> {
    let fz = integer_primitive(f);
    let n = fz.len() - 1;
    if n <= 1 {
        return vec![f.monic()];
    }
    let lc = fz[n].clone();
    // pick the good prime with the fewest modular factors among the first few
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in (3u64..).filter(|&p| is_prime(p)) {
        if tried >= 5 || p > 5000 {
            break;
        }
        let pb = BigInt::from(p);
        if lc.mod_floor(&pb).is_zero() {
            continue;
        }
        let fp = to_fp(&fz, p);
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        tried += 1;
        let fs = berlekamp(&fp_monic(&fp, p), p);
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        if best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (p, fs) = best.expect("no good prime found");
    if fs.len() == 1 {
        return vec![f.monic()];
    }
    // coefficient bound for factors scaled by lc
    let maxc = fz.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * maxc * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lc_inv = mod_inverse(&lc, &pk);
    let monic_t: Zp = zmod(&fz.iter().map(|c| c * &lc_inv).collect(), &pk);
    let mut lifted = hensel_multi(&monic_t, &fs, p, k);

    let mut result = Vec::new();
    let mut cur = fz.clone();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for sub in subsets(lifted.len(), s) {
            let lcc = cur.last().unwrap().clone();
            let prod = sub
                .iter()
                .fold(vec![lcc.clone()], |acc, &i| zmul(&acc, &lifted[i], &pk));
            let cand = primitive(&zsym(&prod, &pk));
            let cq = to_q(&cand);
            let (qq, r) = to_q(&cur).div_rem(&cq);
            if r.is_zero() {
                result.push(cq.monic());
                cur = integer_primitive(&qq);
                let mut keep = Vec::new();
                for (i, g) in lifted.into_iter().enumerate() {
                    if !sub.contains(&i) {
                        keep.push(g);
                    }
                }
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if cur.len() > 1 {
        result.push(to_q(&cur).monic());
    }
    result
}
