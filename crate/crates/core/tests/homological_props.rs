use std::collections::{BTreeMap, BTreeSet, HashMap};

use mdr_core::algebra::{q, QMatrix, Subspace, Q};
use mdr_core::homological::{
    check_right_multiplicative, compare_decalage_pages, karoubi_envelope, matrix_category,
    spectral_sequence, total_complex, ChainMap, Complex, Direction, DoubleComplex, FilteredComplex,
    Filtration, FiniteCategory, Localization, Roof,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> QMatrix {
    let mut m = QMatrix::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            m.set(i, j, q(rng.gen_range(-2..=2)));
        }
    }
    m
}

/// A random three-term complex `K^0 -> K^1 -> K^2`.
fn rand_complex(rng: &mut ChaCha8Rng) -> Complex {
    let dims: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=3)).collect();
    let d0 = rand_matrix(rng, dims[1], dims[0]);
    let left = d0.transpose().kernel();
    let d1 = if left.is_empty() || dims[2] == 0 {
        QMatrix::zeros(dims[2], dims[1])
    } else {
        rand_matrix(rng, dims[2], left.len()).mul(&QMatrix::from_rows(left))
    };
    Complex::new(0, dims, vec![d0, d1]).unwrap()
}

fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(-1..=1))).collect()
}

/// Filtration by subcomplexes on indices `0..=2`, generated by random vectors
/// closed under `d`.
fn rand_filtration(rng: &mut ChaCha8Rng, k: &Complex, dir: Direction) -> Filtration {
    let gens: Vec<BTreeMap<i64, Vec<Vec<Q>>>> = (0..3)
        .map(|_| {
            k.degrees()
                .map(|n| {
                    let c = rng.gen_range(0..=2);
                    (n, (0..c).map(|_| rand_vec(rng, k.dim(n))).collect())
                })
                .collect()
        })
        .collect();
    let mut steps: BTreeMap<i64, Vec<Subspace>> = k.degrees().map(|n| (n, Vec::new())).collect();
    for idx in 0..3usize {
        let included: Vec<usize> = match dir {
            Direction::Decreasing => (idx..3).collect(),
            Direction::Increasing => (0..=idx).collect(),
        };
        let mut prev: Option<Subspace> = None;
        for n in k.degrees() {
            let mut vs: Vec<Vec<Q>> = included.iter().flat_map(|&i| gens[i][&n].clone()).collect();
            if let Some(p) = &prev {
                let img = p.image(&k.diff(n - 1));
                vs.extend(img.basis().iter().cloned());
            }
            let s = Subspace::span(k.dim(n), &vs);
            steps.get_mut(&n).unwrap().push(s.clone());
            prev = Some(s);
        }
    }
    let dims = k.degrees().map(|n| (n, k.dim(n))).collect();
    Filtration::new(dir, 0, 2, dims, steps).unwrap()
}

/// Random category of functions between small finite sets, closed under composition.
fn rand_function_category(
    rng: &mut ChaCha8Rng,
) -> Option<(FiniteCategory, Vec<(usize, usize, Vec<usize>)>)> {
    let nobj = rng.gen_range(1..=4);
    let sizes: Vec<usize> = (0..nobj).map(|_| rng.gen_range(1..=2)).collect();
    let mut arrows: Vec<(usize, usize, Vec<usize>)> =
        (0..nobj).map(|o| (o, o, (0..sizes[o]).collect())).collect();
    for _ in 0..rng.gen_range(1..=4) {
        let a = rng.gen_range(0..nobj);
        let b = rng.gen_range(0..nobj);
        let f: Vec<usize> = (0..sizes[a]).map(|_| rng.gen_range(0..sizes[b])).collect();
        if !arrows.contains(&(a, b, f.clone())) {
            arrows.push((a, b, f));
        }
    }
    loop {
        let mut new = Vec::new();
        for f in &arrows {
            for g in &arrows {
                if f.1 == g.0 {
                    let h = (f.0, g.1, f.2.iter().map(|&x| g.2[x]).collect::<Vec<_>>());
                    if !arrows.contains(&h) && !new.contains(&h) {
                        new.push(h);
                    }
                }
            }
        }
        if new.is_empty() {
            break;
        }
        arrows.extend(new);
        if arrows.len() > 12 + nobj {
            return None;
        }
    }
    let names: Vec<String> = (0..nobj).map(|i| format!("X{i}")).collect();
    let label = |i: usize| {
        if i < nobj {
            format!("id_X{i}")
        } else {
            format!("a{i}")
        }
    };
    let decl = arrows[nobj..]
        .iter()
        .enumerate()
        .map(|(i, (a, b, _))| (label(i + nobj), names[*a].clone(), names[*b].clone()))
        .collect();
    let mut comp = Vec::new();
    for (i, f) in arrows.iter().enumerate().skip(nobj) {
        for (j, g) in arrows.iter().enumerate().skip(nobj) {
            if f.1 == g.0 {
                let h = (f.0, g.1, f.2.iter().map(|&x| g.2[x]).collect::<Vec<_>>());
                let k = arrows.iter().position(|a| *a == h).unwrap();
                comp.push((label(j), label(i), label(k)));
            }
        }
    }
    let c = FiniteCategory::new(names, decl, comp).unwrap();
    // FiniteCategory puts identities first, then declared arrows in order
    Some((c, arrows))
}

fn closed_system(rng: &mut ChaCha8Rng, c: &FiniteCategory) -> BTreeSet<usize> {
    let n = c.arrows().len();
    let mut s: BTreeSet<usize> = (0..c.objects().len()).map(|x| c.identity(x)).collect();
    for a in 0..n {
        if rng.gen_bool(0.4) {
            s.insert(a);
        }
    }
    loop {
        let mut add = Vec::new();
        for &f in &s {
            for &g in &s {
                if c.arrows()[f].tgt == c.arrows()[g].src {
                    let h = c.compose(g, f);
                    if !s.contains(&h) {
                        add.push(h);
                    }
                }
            }
        }
        if add.is_empty() {
            return s;
        }
        s.extend(add);
    }
}

/// Zigzag closure of the common-refinement relation on roofs `X -> Y`.
fn oracle_classes(c: &FiniteCategory, s: &BTreeSet<usize>, x: usize, y: usize) -> Vec<Vec<Roof>> {
    let ar = c.arrows();
    let mut roofs = Vec::new();
    for &sa in s {
        if ar[sa].src == y {
            for f in c.hom(x, ar[sa].tgt) {
                roofs.push(Roof { s: sa, f });
            }
        }
    }
    let related = |r1: &Roof, r2: &Roof| {
        for u1 in c.from_source(ar[r1.s].tgt) {
            for u2 in c.from_source(ar[r2.s].tgt) {
                if ar[u1].tgt != ar[u2].tgt {
                    continue;
                }
                let t = c.compose(u1, r1.s);
                if t == c.compose(u2, r2.s)
                    && s.contains(&t)
                    && c.compose(u1, r1.f) == c.compose(u2, r2.f)
                {
                    return true;
                }
            }
        }
        false
    };
    let mut label: Vec<usize> = (0..roofs.len()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..roofs.len() {
            for j in 0..roofs.len() {
                if label[i] != label[j] && related(&roofs[i], &roofs[j]) {
                    let (a, b) = (label[i].min(label[j]), label[i].max(label[j]));
                    for l in label.iter_mut() {
                        if *l == b {
                            *l = a;
                        }
                    }
                    changed = true;
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Roof>> = HashMap::new();
    for (i, r) in roofs.iter().enumerate() {
        groups.entry(label[i]).or_default().push(*r);
    }
    let mut out: Vec<Vec<Roof>> = groups
        .into_values()
        .map(|mut v| {
            v.sort();
            v
        })
        .collect();
    out.sort();
    out
}

/// `S^Y` is filtered: any two objects are dominated, parallel arrows are coequalized.
fn s_over_is_filtered(c: &FiniteCategory, s: &BTreeSet<usize>, y: usize) -> bool {
    let ar = c.arrows();
    let objs: Vec<usize> = s.iter().copied().filter(|&a| ar[a].src == y).collect();
    let arrows_between = |a: usize, b: usize| -> Vec<usize> {
        c.hom(ar[a].tgt, ar[b].tgt)
            .into_iter()
            .filter(|&u| c.compose(u, a) == b)
            .collect()
    };
    for &a in &objs {
        for &b in &objs {
            let dominated = objs
                .iter()
                .any(|&t| !arrows_between(a, t).is_empty() && !arrows_between(b, t).is_empty());
            if !dominated {
                return false;
            }
            let par = arrows_between(a, b);
            for &u in &par {
                for &v in &par {
                    let coeq = objs.iter().any(|&t| {
                        arrows_between(b, t)
                            .iter()
                            .any(|&w| c.compose(w, u) == c.compose(w, v))
                    });
                    if !coeq {
                        return false;
                    }
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn localization_matches_zigzag_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((c, _)) = rand_function_category(&mut rng) else { return Ok(()); };
        let s = closed_system(&mut rng, &c);
        prop_assume!(check_right_multiplicative(&c, &s).all_hold());
        let l = Localization::new(&c, s.clone()).unwrap();
        let n = c.objects().len();
        for x in 0..n {
            prop_assert!(s_over_is_filtered(&c, &s, x));
            for y in 0..n {
                prop_assert_eq!(l.hom_classes(x, y), oracle_classes(&c, &s, x, y));
            }
        }
    }

    #[test]
    fn localized_composition_is_associative_with_inverses(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some((c, _)) = rand_function_category(&mut rng) else { return Ok(()); };
        let s = closed_system(&mut rng, &c);
        prop_assume!(check_right_multiplicative(&c, &s).all_hold());
        let l = Localization::new(&c, s.clone()).unwrap();
        let n = c.objects().len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        for a in l.hom(x, y) {
                            for b in l.hom(y, z) {
                                for cc in l.hom(z, w) {
                                    let lhs = l.compose(x, w, cc, l.compose(x, z, b, a));
                                    let rhs = l.compose(x, w, l.compose(y, w, cc, b), a);
                                    prop_assert_eq!(lhs, rhs);
                                }
                            }
                        }
                    }
                }
            }
        }
        for &sa in &s {
            let (src, tgt) = (c.arrows()[sa].src, c.arrows()[sa].tgt);
            let inv = l.inverse(sa).unwrap();
            prop_assert_eq!(l.compose(src, src, inv, l.q(sa)), l.identity(src));
            prop_assert_eq!(l.compose(tgt, tgt, l.q(sa), inv), l.identity(tgt));
        }
    }

    #[test]
    fn e_infinity_sums_to_cohomology(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rand_complex(&mut rng);
        let f = rand_filtration(&mut rng, &k, Direction::Decreasing);
        let ss = spectral_sequence(&FilteredComplex::new(k.clone(), f).unwrap(), 4);
        prop_assert!(ss.converges());
        for n in k.degrees() {
            let total: usize = ss.e_infinity.iter().filter(|((_, m), _)| *m == n).map(|(_, d)| *d).sum();
            prop_assert_eq!(total, k.cohomology_dim(n));
        }
    }

    #[test]
    fn decalage_e1_matches_e2(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rand_complex(&mut rng);
        let w = rand_filtration(&mut rng, &k, Direction::Increasing);
        prop_assert_eq!(compare_decalage_pages(&k, &w).unwrap(), vec![]);
    }

    #[test]
    fn tot_of_exact_rows_is_acyclic(seed in any::<u64>()) {
        // rows 0 -> C -> M -> D -> 0 with M = C ⊕ D twisted by dC∘g - g∘dD
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cc = rand_complex(&mut rng);
        let dd = rand_complex(&mut rng);
        let g: Vec<QMatrix> = (0..3).map(|n| rand_matrix(&mut rng, cc.dim(n), dd.dim(n))).collect();
        let mut md = Vec::new();
        for n in 0..2i64 {
            let h = cc.diff(n).mul(&g[n as usize]).sub(&g[n as usize + 1].mul(&dd.diff(n)));
            let top = cc.diff(n).hstack(&h);
            let bottom = QMatrix::zeros(dd.dim(n + 1), cc.dim(n)).hstack(&dd.diff(n));
            md.push(top.vstack(&bottom));
        }
        let m = Complex::new(0, (0..3).map(|n| cc.dim(n) + dd.dim(n)).collect(), md).unwrap();
        let incl = (0..3)
            .map(|n| (n, QMatrix::identity(cc.dim(n)).vstack(&QMatrix::zeros(dd.dim(n), cc.dim(n)))))
            .collect();
        let proj = (0..3)
            .map(|n| (n, QMatrix::zeros(dd.dim(n), cc.dim(n)).hstack(&QMatrix::identity(dd.dim(n)))))
            .collect();
        let dc = DoubleComplex {
            p_lo: 0,
            columns: vec![cc.clone(), m.clone(), dd.clone()],
            horizontal: vec![
                ChainMap::new(cc, m.clone(), incl).unwrap(),
                ChainMap::new(m, dd, proj).unwrap(),
            ],
        };
        let tot = total_complex(&dc).unwrap();
        prop_assert!(tot.is_acyclic());
    }

    #[test]
    fn karoubi_idempotents_split(ranks in prop::collection::vec(1usize..=2, 1..=2)) {
        let c = matrix_category(&ranks);
        let mut extra = Vec::new();
        for a in 0..ranks.len() {
            for e in c.idempotents_in_grid(a, 1) {
                extra.push((a, e.coeffs));
            }
        }
        let k = karoubi_envelope(&c, &extra).unwrap();
        let kc = k.category();
        for x in 0..kc.objects().len() {
            let found = kc.idempotents_in_grid(x, 1);
            prop_assert!(!found.is_empty());
            for p in found {
                let sp = k.split(x, &p).unwrap();
                let b = k.base();
                let rs = b.compose(&sp.retraction, &sp.section).unwrap();
                prop_assert_eq!(rs.coeffs, sp.image.idempotent.clone());
            }
        }
    }
}
