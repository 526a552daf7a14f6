//! Brute-force oracles shared by the integration tests. None of these call
//! into the library beyond reading face tables.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use semisimp::SSet;

/// The face of `s` spanned by the sorted vertex positions `keep`, removing
/// the other vertices from the top down so lower positions never shift.
pub fn restrict(x: &SSet, n: usize, s: usize, keep: &[usize]) -> usize {
    let mut cur = s;
    let mut dim = n;
    for i in (0..=n).rev() {
        if !keep.contains(&i) {
            cur = x.face(dim, cur, i);
            dim -= 1;
        }
    }
    cur
}

pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Simplices of `Sd X` per dimension: composable chains of proper monos in
/// the category of elements, counted by walking the morphism multigraph.
pub fn sd_f_vector(x: &SSet) -> Vec<usize> {
    let objects: Vec<(usize, usize)> =
        (0..x.num_levels()).flat_map(|d| (0..x.count(d)).map(move |i| (d, i))).collect();
    let pos: HashMap<(usize, usize), usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    // out[o] lists targets of proper monos out of o, with multiplicity.
    let mut out = vec![Vec::new(); objects.len()];
    for &(e, y) in &objects {
        for d in 0..e {
            for keep in subsets(e + 1, d + 1) {
                let x0 = restrict(x, e, y, &keep);
                out[pos[&(d, x0)]].push(pos[&(e, y)]);
            }
        }
    }
    let mut paths = vec![1usize; objects.len()];
    let mut fv = Vec::new();
    while paths.iter().any(|&p| p > 0) {
        fv.push(paths.iter().sum());
        let mut next = vec![0; objects.len()];
        for (o, &p) in paths.iter().enumerate() {
            for &t in &out[o] {
                next[t] += p;
            }
        }
        paths = next;
    }
    fv
}

/// Chains `T₀ ⊊ … ⊊ T_b` of nonempty subsets of `{0..n}`, by first element.
pub fn subset_chains(n: usize) -> Vec<Vec<Vec<usize>>> {
    let all: Vec<BTreeSet<usize>> =
        (1..=n + 1).flat_map(|s| subsets(n + 1, s)).map(|v| v.into_iter().collect()).collect();
    let mut chains: Vec<Vec<Vec<BTreeSet<usize>>>> = vec![all.iter().map(|s| vec![s.clone()]).collect()];
    loop {
        let mut next = Vec::new();
        for c in chains.last().unwrap() {
            for s in &all {
                let last = c.last().unwrap();
                if last.is_subset(s) && last != s {
                    let mut d = c.clone();
                    d.push(s.clone());
                    next.push(d);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        chains.push(next);
    }
    chains
        .into_iter()
        .map(|level| level.into_iter().map(|c| c.into_iter().map(|s| s.len()).collect()).collect())
        .collect()
}

/// `A ⋆_F Sd A` for `A = Δⁿ`, block by block: the simplices of `A`, the
/// flags, and for each flag with first simplex `T₀` one cross simplex per
/// nonempty face of `T₀`.
pub fn summit_f_vector(n: usize) -> Vec<usize> {
    let chains = subset_chains(n);
    let top = (n + 1) + chains.len();
    let mut fv = vec![0usize; top];
    for (d, slot) in fv.iter_mut().enumerate().take(n + 1) {
        *slot += binom(n + 1, d + 1);
    }
    for (b, level) in chains.iter().enumerate() {
        fv[b] += level.len();
        for c in level {
            let t0 = c[0];
            for a in 0..t0 {
                fv[a + b + 1] += binom(t0, a + 1);
            }
        }
    }
    while fv.last() == Some(&0) {
        fv.pop();
    }
    fv
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Monotone sequences of length `len` in `0..=top`.
pub fn monotone(len: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                let lo = v.last().copied().unwrap_or(0);
                (lo..=top).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// `|(Δᵃ ⊗ Δᵇ)_n|`: pairs of monotone maps `[n] → [a]`, `[n] → [b]` that are
/// jointly injective.
pub fn tensor_count(a: usize, b: usize, n: usize) -> usize {
    let ps = monotone(n + 1, a);
    let qs = monotone(n + 1, b);
    let mut count = 0;
    for p in &ps {
        for q in &qs {
            let pts: BTreeSet<(usize, usize)> = p.iter().copied().zip(q.iter().copied()).collect();
            if pts.len() == n + 1 {
                count += 1;
            }
        }
    }
    count
}

/// Component label of each vertex by repeated relaxation along edges.
pub fn components(x: &SSet) -> Vec<usize> {
    let mut label: Vec<usize> = (0..x.count(0)).collect();
    loop {
        let mut changed = false;
        for e in 0..x.count(1) {
            let (s, t) = (x.face(1, e, 1), x.face(1, e, 0));
            let m = label[s].min(label[t]);
            for v in [s, t] {
                if label[v] != m {
                    label[v] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

pub fn component_count(x: &SSet) -> usize {
    components(x).into_iter().collect::<BTreeSet<_>>().len()
}

/// A random complex of dimension at most 2 with at most `max` simplices and
/// a random marking.
pub fn random_complex(rng: &mut ChaCha8Rng, max: usize) -> SSet {
    let v = rng.gen_range(1..=3.min(max));
    let mut x = SSet::empty();
    for _ in 0..v {
        x.add_vertex();
    }
    let e = rng.gen_range(0..=4.min(max - v));
    for _ in 0..e {
        x.add_simplex(vec![rng.gen_range(0..v), rng.gen_range(0..v)]).unwrap();
    }
    let mut triangles = Vec::new();
    for f0 in 0..e {
        for f1 in 0..e {
            for f2 in 0..e {
                let ok = x.face(1, f2, 0) == x.face(1, f0, 1)
                    && x.face(1, f1, 0) == x.face(1, f0, 0)
                    && x.face(1, f1, 1) == x.face(1, f2, 1);
                if ok {
                    triangles.push(vec![f0, f1, f2]);
                }
            }
        }
    }
    let room = max - v - e;
    for _ in 0..rng.gen_range(0..=2.min(room)) {
        if triangles.is_empty() {
            break;
        }
        let t = triangles.swap_remove(rng.gen_range(0..triangles.len()));
        x.add_simplex(t).unwrap();
    }
    for edge in 0..e {
        if rng.gen_bool(0.3) {
            x.mark(edge).unwrap();
        }
    }
    x
}
