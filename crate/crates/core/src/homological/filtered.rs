//! Filtered and bifiltered complexes, spectral sequences and décalage.
//!
//! Filtrations are explicit flags of subspaces per degree. A decreasing
//! filtration `F` is indexed so that `F^p = K` below its range and `0` above;
//! an increasing `W` has `W_m = 0` below its range and `W_m = K` above.

use std::collections::BTreeMap;

use super::complex::Complex;
use crate::algebra::Subspace;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Increasing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    dir: Direction,
    lo: i64,
    hi: i64,
    /// degree -> subspaces for indices `lo..=hi`
    steps: BTreeMap<i64, Vec<Subspace>>,
    dims: BTreeMap<i64, usize>,
}

impl Filtration {
    /// `steps[n][k]` is the step with index `lo + k` in degree `n`.
    pub fn new(
        dir: Direction,
        lo: i64,
        hi: i64,
        dims: BTreeMap<i64, usize>,
        steps: BTreeMap<i64, Vec<Subspace>>,
    ) -> Result<Self> {
        let len = (hi - lo + 1).max(0) as usize;
        for (n, v) in &steps {
            if v.len() != len {
                return Err(Error::Precondition(format!(
                    "degree {n}: expected {len} filtration steps, got {}",
                    v.len()
                )));
            }
            for w in v.windows(2) {
                let ok = match dir {
                    Direction::Decreasing => w[0].contains_space(&w[1]),
                    Direction::Increasing => w[1].contains_space(&w[0]),
                };
                if !ok {
                    return Err(Error::Precondition(format!(
                        "degree {n}: flag is not monotone"
                    )));
                }
            }
        }
        Ok(Filtration {
            dir,
            lo,
            hi,
            steps,
            dims,
        })
    }

    /// The filtration with a single jump: everything sits in index `at`.
    pub fn trivial(dir: Direction, at: i64, k: &Complex) -> Self {
        let dims: BTreeMap<i64, usize> = k.degrees().map(|n| (n, k.dim(n))).collect();
        let steps = dims
            .iter()
            .map(|(&n, &d)| (n, vec![Subspace::full(d)]))
            .collect();
        Filtration {
            dir,
            lo: at,
            hi: at,
            steps,
            dims,
        }
    }

    /// Stupid filtration `σ_{≥p}`: `F^p K^n = K^n` for `n >= p`, else 0.
    pub fn stupid(k: &Complex) -> Self {
        let (lo, hi) = (k.lo(), k.hi());
        let dims: BTreeMap<i64, usize> = k.degrees().map(|n| (n, k.dim(n))).collect();
        let steps = dims
            .iter()
            .map(|(&n, &d)| {
                (
                    n,
                    (lo..=hi)
                        .map(|p| {
                            if n >= p {
                                Subspace::full(d)
                            } else {
                                Subspace::zero(d)
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        Filtration {
            dir: Direction::Decreasing,
            lo,
            hi,
            steps,
            dims,
        }
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn ambient(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn at(&self, n: i64, idx: i64) -> Subspace {
        let d = self.ambient(n);
        let below = match self.dir {
            Direction::Decreasing => Subspace::full(d),
            Direction::Increasing => Subspace::zero(d),
        };
        let above = match self.dir {
            Direction::Decreasing => Subspace::zero(d),
            Direction::Increasing => Subspace::full(d),
        };
        if idx < self.lo {
            return below;
        }
        if idx > self.hi {
            return above;
        }
        match self.steps.get(&n) {
            Some(v) => v[(idx - self.lo) as usize].clone(),
            None => Subspace::zero(d),
        }
    }

    /// Decreasing reindexing `F^p = W_{-p}` of an increasing filtration (identity otherwise).
    pub fn as_decreasing(&self) -> Filtration {
        match self.dir {
            Direction::Decreasing => self.clone(),
            Direction::Increasing => {
                let steps = self
                    .steps
                    .iter()
                    .map(|(n, v)| (*n, v.iter().rev().cloned().collect()))
                    .collect();
                Filtration {
                    dir: Direction::Decreasing,
                    lo: -self.hi,
                    hi: -self.lo,
                    steps,
                    dims: self.dims.clone(),
                }
            }
        }
    }

    /// Shift indices: the step formerly at `i` now sits at `i + s`.
    pub fn reindexed(&self, s: i64) -> Filtration {
        Filtration {
            lo: self.lo + s,
            hi: self.hi + s,
            ..self.clone()
        }
    }

    /// Check `d(Fil K^n) ⊆ Fil K^{n+1}` for all indices.
    pub fn check_compatible(&self, k: &Complex) -> Result<()> {
        for n in k.degrees() {
            if self.ambient(n) != k.dim(n) {
                return Err(Error::Precondition(format!(
                    "filtration ambient dimension mismatch in degree {n}"
                )));
            }
            for i in self.lo - 1..=self.hi + 1 {
                let img = self.at(n, i).image(&k.diff(n));
                if !self.at(n + 1, i).contains_space(&img) {
                    return Err(Error::Precondition(format!(
                        "differential does not respect the filtration at degree {n}, index {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dimension of the induced filtration step on `H^n(K)`.
    pub fn on_cohomology(&self, k: &Complex, n: i64, idx: i64) -> usize {
        let z = k.cocycles(n);
        let b = k.coboundaries(n);
        let zi = z.intersect(&self.at(n, idx));
        zi.sum(&b).dim() - b.dim()
    }

    /// `[dim Fil_idx H^n for idx in lo..=hi]`.
    pub fn cohomology_flag(&self, k: &Complex, n: i64, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|i| self.on_cohomology(k, n, i)).collect()
    }
}

/// A complex with a (decreasing or increasing) filtration.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub complex: Complex,
    pub filtration: Filtration,
}

impl FilteredComplex {
    pub fn new(complex: Complex, filtration: Filtration) -> Result<Self> {
        filtration.check_compatible(&complex)?;
        Ok(FilteredComplex {
            complex,
            filtration,
        })
    }
}

/// Complex with a decreasing `F` and an increasing `W`, both respected by `d`.
#[derive(Clone, Debug)]
pub struct BifilteredComplex {
    pub complex: Complex,
    pub f: Filtration,
    pub w: Filtration,
}

impl BifilteredComplex {
    pub fn new(complex: Complex, f: Filtration, w: Filtration) -> Result<Self> {
        if f.direction() != Direction::Decreasing || w.direction() != Direction::Increasing {
            return Err(Error::Precondition(
                "F must be decreasing and W increasing".into(),
            ));
        }
        f.check_compatible(&complex)?;
        w.check_compatible(&complex)?;
        Ok(BifilteredComplex { complex, f, w })
    }
}

/// Pages `E_r^{p,q}` keyed by `(p, n)` with `n = p + q`.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub pages: Vec<BTreeMap<(i64, i64), usize>>,
    pub e_infinity: BTreeMap<(i64, i64), usize>,
    pub cohomology: BTreeMap<i64, usize>,
    /// `(r, p, n, rank d_r : E_r^{p,n} -> E_r^{p+r,n+1})` for nonzero ranks.
    pub differential_ranks: Vec<(usize, i64, i64, usize)>,
}

impl SpectralSequence {
    pub fn dim(&self, r: usize, p: i64, n: i64) -> usize {
        self.pages
            .get(r)
            .and_then(|pg| pg.get(&(p, n)).copied())
            .unwrap_or(0)
    }

    /// `sum_p dim E_inf^{p, n-p} == dim H^n` for every `n`.
    pub fn converges(&self) -> bool {
        self.cohomology.iter().all(|(&n, &h)| {
            let s: usize = self
                .e_infinity
                .iter()
                .filter(|((_, m), _)| *m == n)
                .map(|(_, d)| *d)
                .sum();
            s == h
        })
    }
}

struct SsData<'a> {
    k: &'a Complex,
    f: Filtration,
}

impl SsData<'_> {
    /// `Z_r^{p} K^n = F^p K^n ∩ d^{-1}(F^{p+r} K^{n+1})`; for `r < 0` this is `F^p`.
    fn z(&self, r: i64, p: i64, n: i64) -> Subspace {
        let fp = self.f.at(n, p);
        if r <= 0 {
            return fp;
        }
        fp.preimage_within(&self.k.diff(n), &self.f.at(n + 1, p + r))
    }

    fn denom(&self, r: i64, p: i64, n: i64) -> Subspace {
        let a = self.z(r - 1, p + 1, n);
        let b = self.z(r - 1, p - r + 1, n - 1).image(&self.k.diff(n - 1));
        a.sum(&b)
    }

    fn e(&self, r: i64, p: i64, n: i64) -> usize {
        self.z(r, p, n).dim() - self.denom(r, p, n).dim()
    }

    fn d_rank(&self, r: i64, p: i64, n: i64) -> usize {
        let den = self.denom(r, p + r, n + 1);
        let img = self.z(r, p, n).image(&self.k.diff(n));
        img.sum(&den).dim() - den.dim()
    }
}

/// Pages `E_0 ..= E_{r_max}` of the spectral sequence of a filtered complex
/// (increasing filtrations are converted by `F^p = W_{-p}`).
pub fn spectral_sequence(fc: &FilteredComplex, r_max: usize) -> SpectralSequence {
    let k = &fc.complex;
    let f = fc.filtration.as_decreasing();
    let (plo, phi) = f.range();
    let data = SsData { k, f };
    let ps: Vec<i64> = (plo - 1..=phi + 1).collect();
    let page = |r: i64| -> BTreeMap<(i64, i64), usize> {
        let mut m = BTreeMap::new();
        for n in k.degrees() {
            for &p in &ps {
                let d = data.e(r, p, n);
                if d > 0 {
                    m.insert((p, n), d);
                }
            }
        }
        m
    };
    let pages: Vec<_> = (0..=r_max as i64).map(page).collect();
    let mut ranks = Vec::new();
    for r in 0..=r_max as i64 {
        for n in k.degrees() {
            for &p in &ps {
                let rk = data.d_rank(r, p, n);
                if rk > 0 {
                    ranks.push((r as usize, p, n, rk));
                }
            }
        }
    }
    let r_inf = (phi - plo + 2).max(1);
    let e_infinity = page(r_inf);
    let cohomology = k.degrees().map(|n| (n, k.cohomology_dim(n))).collect();
    SpectralSequence {
        pages,
        e_infinity,
        cohomology,
        differential_ranks: ranks,
    }
}

/// `(Dec W)_m K^n = { x ∈ W_{m-n} K^n : dx ∈ W_{m-n-1} K^{n+1} }`.
pub fn decalage(k: &Complex, w: &Filtration) -> Result<Filtration> {
    if w.direction() != Direction::Increasing {
        return Err(Error::Precondition(
            "décalage expects an increasing filtration".into(),
        ));
    }
    let (wlo, whi) = w.range();
    let lo = wlo + k.lo() - 1;
    let hi = whi + k.hi() + 1;
    let dims: BTreeMap<i64, usize> = k.degrees().map(|n| (n, k.dim(n))).collect();
    let mut steps = BTreeMap::new();
    for n in k.degrees() {
        let v: Vec<Subspace> = (lo..=hi)
            .map(|m| {
                w.at(n, m - n)
                    .preimage_within(&k.diff(n), &w.at(n + 1, m - n - 1))
            })
            .collect();
        steps.insert(n, v);
    }
    let out = Filtration::new(Direction::Increasing, lo, hi, dims, steps)?;
    out.check_compatible(k).map_err(|e| {
        Error::InvariantViolation(format!("Dec W is not a filtration by subcomplexes: {e}"))
    })?;
    Ok(out)
}

/// Compare `E_1^{p,n}(Dec W)` with `E_2^{p+n,n}(W)` (decreasing indices); returns mismatches.
pub fn compare_decalage_pages(
    k: &Complex,
    w: &Filtration,
) -> Result<Vec<(i64, i64, usize, usize)>> {
    let dec = decalage(k, w)?;
    let ss_dec = spectral_sequence(&FilteredComplex::new(k.clone(), dec.clone())?, 1);
    let ss_w = spectral_sequence(&FilteredComplex::new(k.clone(), w.clone())?, 2);
    let (dlo, dhi) = dec.as_decreasing().range();
    let mut bad = Vec::new();
    for n in k.degrees() {
        for p in dlo - 1..=dhi + 1 {
            let a = ss_dec.dim(1, p, n);
            let b = ss_w.dim(2, p + n, n);
            if a != b {
                bad.push((p, n, a, b));
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QMatrix;

    fn two_term() -> Complex {
        Complex::new(0, vec![1, 1], vec![QMatrix::from_i64(&[&[1]])]).unwrap()
    }

    #[test]
    fn trivial_filtration_degenerates_at_e1() {
        let k = Complex::new(0, vec![2, 1], vec![QMatrix::from_i64(&[&[1, 0]])]).unwrap();
        let fc = FilteredComplex::new(k.clone(), Filtration::trivial(Direction::Decreasing, 0, &k))
            .unwrap();
        let ss = spectral_sequence(&fc, 3);
        assert_eq!(ss.dim(1, 0, 0), 1);
        assert_eq!(ss.dim(1, 0, 1), 0);
        assert_eq!(ss.pages[1], ss.e_infinity);
        assert!(ss.converges());
    }

    #[test]
    fn nontrivial_d1_shrinks_e2() {
        // K^0 = <a>, K^1 = <b>, d a = b, F^1 = <b>: E_1 has two classes killed by d_1
        let k = two_term();
        let dims = BTreeMap::from([(0, 1), (1, 1)]);
        let steps = BTreeMap::from([(0, vec![Subspace::zero(1)]), (1, vec![Subspace::full(1)])]);
        let f = Filtration::new(Direction::Decreasing, 1, 1, dims, steps).unwrap();
        let ss = spectral_sequence(&FilteredComplex::new(k, f).unwrap(), 2);
        let e1: usize = ss.pages[1].values().sum();
        let e2: usize = ss.pages[2].values().sum();
        assert_eq!((e1, e2), (2, 0));
        assert!(ss.converges());
        assert_eq!(ss.differential_ranks, vec![(1, 0, 0, 1)]);
    }

    #[test]
    fn decalage_with_zero_differential() {
        let k = Complex::new(0, vec![1, 1], vec![QMatrix::zeros(1, 1)]).unwrap();
        let w = Filtration::trivial(Direction::Increasing, 0, &k);
        let dec = decalage(&k, &w).unwrap();
        for n in 0..=1 {
            for m in -2..=3 {
                assert_eq!(dec.at(n, m).dim(), w.at(n, m - n).dim());
            }
        }
        assert!(compare_decalage_pages(&k, &w).unwrap().is_empty());
    }
}
