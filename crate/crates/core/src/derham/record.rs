//! Cohomology records: dimensions, representatives and flags.

use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeRecord {
    pub deg: i64,
    pub dim: usize,
    pub basis: Vec<String>,
    /// `dim F^p H^n` for `p = f_from, f_from + 1, ...`
    pub f_from: i64,
    pub f: Vec<usize>,
    /// `dim W_m H^n` for `m = w_from, w_from + 1, ...`
    pub w_from: i64,
    pub w: Vec<usize>,
}

impl DegreeRecord {
    /// `dim F^p H^n`.
    pub fn hodge_step(&self, p: i64) -> usize {
        if p < self.f_from {
            return self.dim;
        }
        self.f.get((p - self.f_from) as usize).copied().unwrap_or(0)
    }

    /// `dim W_m H^n`.
    pub fn weight_step(&self, m: i64) -> usize {
        if m < self.w_from {
            return 0;
        }
        self.w
            .get((m - self.w_from) as usize)
            .copied()
            .unwrap_or(self.dim)
    }

    /// `dim Gr_W^m H^n`.
    pub fn weight_graded(&self, m: i64) -> usize {
        self.weight_step(m) - self.weight_step(m - 1)
    }

    /// `dim Gr_F^p H^n`.
    pub fn hodge_graded(&self, p: i64) -> usize {
        self.hodge_step(p) - self.hodge_step(p + 1)
    }
}

/// Assemble a degree record from step functions on `H^n`.
///
/// `F` is listed for `p` from `min(0, lo)` to `max(0, hi)` of its index range;
/// `W` from the first nonzero step (or 0) to the first full step, and at
/// least to `2·max(0, hi_F)`.
pub fn degree_record(
    deg: i64,
    basis: Vec<String>,
    f_range: (i64, i64),
    f_step: impl Fn(i64) -> usize,
    w_range: (i64, i64),
    w_step: impl Fn(i64) -> usize,
) -> DegreeRecord {
    let dim = basis.len();
    let p_lo = f_range.0.min(0);
    let p_hi = f_range.1.max(0);
    let f: Vec<usize> = (p_lo..=p_hi).map(&f_step).collect();
    let (wlo, whi) = (w_range.0 - 1, w_range.1 + 1);
    let first_nonzero = (wlo..=whi).find(|&m| w_step(m) > 0).unwrap_or(0);
    let first_full = (wlo..=whi).find(|&m| w_step(m) == dim).unwrap_or(whi);
    let m_lo = first_nonzero.min(0);
    let m_hi = first_full.max(2 * p_hi).max(m_lo);
    let w: Vec<usize> = (m_lo..=m_hi).map(&w_step).collect();
    DegreeRecord {
        deg,
        dim,
        basis,
        f_from: p_lo,
        f,
        w_from: m_lo,
        w,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyRecord {
    pub label: String,
    pub window: usize,
    pub h: Vec<DegreeRecord>,
}

impl CohomologyRecord {
    pub fn dims(&self) -> Vec<usize> {
        self.h.iter().map(|d| d.dim).collect()
    }

    pub fn degree(&self, n: i64) -> Option<&DegreeRecord> {
        self.h.iter().find(|d| d.deg == n)
    }

    /// Same dimensions and flags (representatives and window are ignored).
    pub fn same_invariants(&self, o: &Self) -> bool {
        let key = |r: &Self| -> Vec<(i64, usize, Vec<usize>, Vec<usize>)> {
            r.h.iter()
                .filter(|d| d.dim > 0)
                .map(|d| {
                    let f = (-2..=4).map(|p| d.hodge_step(p)).collect();
                    let w = (-4..=8).map(|m| d.weight_step(m)).collect();
                    (d.deg, d.dim, f, w)
                })
                .collect()
        };
        key(self) == key(o)
    }

    /// Shift Hodge indices by `n` and weights by `2n`.
    pub fn twisted(&self, n: i64) -> Self {
        let mut r = self.clone();
        for d in &mut r.h {
            d.f_from += n;
            d.w_from += 2 * n;
        }
        r
    }

    /// Renumber cohomological degrees by `deg + s`.
    pub fn shifted(&self, s: i64) -> Self {
        let mut r = self.clone();
        for d in &mut r.h {
            d.deg += s;
        }
        r
    }

    pub fn to_json(&self) -> Value {
        let h: Vec<Value> = self
            .h
            .iter()
            .map(|d| {
                let mut v = json!({
                    "deg": d.deg,
                    "dim": d.dim,
                    "basis": d.basis,
                    "F": d.f,
                    "W": d.w,
                });
                if d.f_from != 0 {
                    v["F_from"] = json!(d.f_from);
                }
                if d.w_from != 0 {
                    v["W_from"] = json!(d.w_from);
                }
                v
            })
            .collect();
        json!({ "h": h })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (window {})\n", self.label, self.window);
        for d in &self.h {
            out.push_str(&format!("H^{} = {}", d.deg, d.dim));
            if d.dim > 0 {
                out.push_str(&format!("  basis [{}]", d.basis.join(", ")));
            }
            out.push_str(&format!("  F {:?}  W {:?}\n", d.f, d.w));
        }
        out
    }
}
