//! Finite topological spaces presented by a partial order.
//!
//! Opens are the up-sets; `U_x = {y : x ≤ y}` is the smallest open containing `x`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 12;

#[derive(Clone, Debug)]
pub struct FiniteSite {
    points: Vec<String>,
    leq: Vec<Vec<bool>>,
    opens: Vec<BTreeSet<usize>>,
    index: BTreeMap<BTreeSet<usize>, usize>,
    minimal: Vec<usize>,
}

#[derive(Deserialize)]
struct SiteJson {
    points: Vec<String>,
    #[serde(default)]
    leq: Vec<(String, String)>,
}

impl FiniteSite {
    /// `relations` lists pairs `(a, b)` with `a ≤ b`; the reflexive-transitive
    /// closure is taken and must be antisymmetric.
    pub fn new(points: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = points.len();
        if n > MAX_POINTS {
            return Err(Error::Unsupported(format!(
                "sites are limited to {MAX_POINTS} points"
            )));
        }
        let uniq: BTreeSet<&String> = points.iter().collect();
        if uniq.len() != n {
            return Err(Error::Precondition("duplicate point names".into()));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::Precondition(
                    "relation refers to an unknown point".into(),
                ));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Precondition(format!(
                        "order is not antisymmetric: {} and {}",
                        points[i], points[j]
                    )));
                }
            }
        }
        let mut opens: Vec<BTreeSet<usize>> = (0u32..1 << n)
            .map(|mask| {
                (0..n)
                    .filter(|&i| mask >> i & 1 == 1)
                    .collect::<BTreeSet<usize>>()
            })
            .filter(|s| {
                s.iter()
                    .all(|&x| (0..n).all(|y| !leq[x][y] || s.contains(&y)))
            })
            .collect();
        opens.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: BTreeMap<BTreeSet<usize>, usize> = opens
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let minimal = (0..n)
            .map(|x| {
                let u: BTreeSet<usize> = (0..n).filter(|&y| leq[x][y]).collect();
                index[&u]
            })
            .collect();
        Ok(FiniteSite {
            points,
            leq,
            opens,
            index,
            minimal,
        })
    }

    pub fn from_names(points: &[&str], leq: &[(&str, &str)]) -> Result<Self> {
        let pts: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            pts.iter()
                .position(|p| p == s)
                .ok_or_else(|| Error::Precondition(format!("unknown point {s}")))
        };
        let rel = leq
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts, &rel)
    }

    /// Parse `{"points": [...], "leq": [[a, b], ...]}`.
    pub fn from_json(src: &str) -> Result<Self> {
        let j: SiteJson = serde_json::from_str(src).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let pts: Vec<&str> = j.points.iter().map(String::as_str).collect();
        let rel: Vec<(&str, &str)> = j
            .leq
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        Self::from_names(&pts, &rel)
    }

    pub fn point() -> Self {
        Self::from_names(&["p"], &[]).unwrap()
    }

    /// Generic point `g` and closed point `c`; opens `∅ ⊂ {g} ⊂ {g, c}`.
    pub fn sierpinski() -> Self {
        Self::from_names(&["g", "c"], &[("c", "g")]).unwrap()
    }

    /// Two closed points below two open points; its order complex is a circle.
    pub fn pseudo_circle() -> Self {
        Self::from_names(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
        )
        .unwrap()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Number of strict steps in the longest chain `x_0 < x_1 < … < x_h`.
    pub fn height(&self) -> usize {
        let n = self.num_points();
        // longest chain ending at each point, points visited by number of predecessors
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&b| (0..n).filter(|&a| self.leq[a][b]).count());
        let mut best = vec![0usize; n];
        for (i, &b) in order.iter().enumerate() {
            for &a in &order[..i] {
                if a != b && self.leq[a][b] {
                    best[b] = best[b].max(best[a] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    pub fn opens(&self) -> &[BTreeSet<usize>] {
        &self.opens
    }

    pub fn num_opens(&self) -> usize {
        self.opens.len()
    }

    pub fn open(&self, u: usize) -> &BTreeSet<usize> {
        &self.opens[u]
    }

    pub fn open_index(&self, s: &BTreeSet<usize>) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Index of the open containing every point.
    pub fn whole(&self) -> usize {
        self.opens.len() - 1
    }

    /// Index of `U_x`.
    pub fn minimal_open(&self, x: usize) -> usize {
        self.minimal[x]
    }

    pub fn is_subset(&self, v: usize, u: usize) -> bool {
        self.opens[v].is_subset(&self.opens[u])
    }

    pub fn open_name(&self, u: usize) -> String {
        let names: Vec<&str> = self.opens[u]
            .iter()
            .map(|&i| self.points[i].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// Connected components of the subspace `U` (comparability graph).
    pub fn components(&self, u: usize) -> Vec<BTreeSet<usize>> {
        let pts: Vec<usize> = self.opens[u].iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &p in &pts {
            if seen.contains(&p) {
                continue;
            }
            let mut comp = BTreeSet::from([p]);
            let mut stack = vec![p];
            seen.insert(p);
            while let Some(a) = stack.pop() {
                for &b in &pts {
                    if !seen.contains(&b) && (self.leq[a][b] || self.leq[b][a]) {
                        seen.insert(b);
                        comp.insert(b);
                        stack.push(b);
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}

/// All partial orders on `n` points up to isomorphism, as relation lists
/// `(a, b)` meaning `a ≤ b` with `a < b` as labels.
pub fn posets_up_to_iso(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut rel = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rel[i][j] = true;
            }
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| !rel[i][j] || (0..n).all(|k| !rel[j][k] || rel[i][k])));
        if !transitive {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut v = vec![false; n * n];
                for i in 0..n {
                    for j in 0..n {
                        if rel[i][j] {
                            v[p[i] * n + p[j]] = true;
                        }
                    }
                }
                v
            })
            .max()
            .unwrap_or_default();
        if seen.insert(canon) {
            out.push(pairs.iter().copied().filter(|&(i, j)| rel[i][j]).collect());
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
