//! Backtracking search for maps of complexes and for isomorphisms.
//!
//! Assignments propagate downwards: fixing the image of a simplex fixes the
//! images of all its faces. The search therefore branches on the
//! highest-dimensional unassigned simplex, preferring those with the most
//! faces already fixed, and draws candidates from the cofaces of an assigned
//! face when one exists.

use std::collections::BTreeMap;

use crate::sset::{SSet, SSetMap};

const FREE: usize = usize::MAX;

type Filter<'a> = Box<dyn Fn(usize, usize, usize) -> bool + 'a>;

pub(crate) enum Preassign<'a> {
    /// Restrict along `i: A → J` to `p: A → X`.
    Along(&'a SSetMap, &'a SSetMap),
}

pub(crate) struct HomSearch<'a> {
    src: &'a SSet,
    tgt: &'a SSet,
    respect_marking: bool,
    exact_marking: bool,
    injective: bool,
    filter: Option<Filter<'a>>,
    assign: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    /// `tgt_cofaces[n][y][i]`: `(n+1)`-simplices with `d_i = y`.
    tgt_cofaces: Vec<Vec<Vec<Vec<usize>>>>,
}

impl<'a> HomSearch<'a> {
    pub(crate) fn new(src: &'a SSet, tgt: &'a SSet, respect_marking: bool) -> Self {
        let mut tgt_cofaces: Vec<Vec<Vec<Vec<usize>>>> = (0..tgt.num_levels())
            .map(|n| vec![vec![Vec::new(); n + 2]; tgt.count(n)])
            .collect();
        for n in 1..tgt.num_levels() {
            for y in 0..tgt.count(n) {
                for (i, &f) in tgt.faces(n, y).iter().enumerate() {
                    tgt_cofaces[n - 1][f][i].push(y);
                }
            }
        }
        HomSearch {
            src,
            tgt,
            respect_marking,
            exact_marking: false,
            injective: false,
            filter: None,
            assign: (0..src.num_levels()).map(|n| vec![FREE; src.count(n)]).collect(),
            used: (0..tgt.num_levels()).map(|n| vec![false; tgt.count(n)]).collect(),
            trail: Vec::new(),
            tgt_cofaces,
        }
    }

    pub(crate) fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub(crate) fn exact_marking(mut self) -> Self {
        self.exact_marking = true;
        self
    }

    pub(crate) fn filter(mut self, f: impl Fn(usize, usize, usize) -> bool + 'a) -> Self {
        self.filter = Some(Box::new(f));
        self
    }

    /// Fixes part of the map; false if the data is inconsistent.
    pub(crate) fn preassign(&mut self, pre: Preassign<'_>) -> bool {
        match pre {
            Preassign::Along(i, p) => {
                for n in 0..i.source().num_levels() {
                    for a in 0..i.source().count(n) {
                        if !self.set(n, i.apply(n, a), p.apply(n, a)) {
                            return false;
                        }
                    }
                }
            }
        }
        self.trail.clear();
        true
    }

    pub(crate) fn fix(&mut self, n: usize, x: usize, y: usize) -> bool {
        let ok = self.set(n, x, y);
        self.trail.clear();
        ok
    }

    fn ok_pair(&self, n: usize, x: usize, y: usize) -> bool {
        if n >= self.tgt.num_levels() || y >= self.tgt.count(n) {
            return false;
        }
        if self.injective && self.used[n][y] {
            return false;
        }
        if n == 1 {
            let xm = self.src.is_marked(x);
            let ym = self.tgt.is_marked(y);
            if self.respect_marking && xm && !ym {
                return false;
            }
            if self.exact_marking && xm != ym {
                return false;
            }
        }
        self.filter.as_ref().is_none_or(|f| f(n, x, y))
    }

    /// Assigns `x ↦ y` and propagates to faces, recording on the trail.
    fn set(&mut self, n: usize, x: usize, y: usize) -> bool {
        let cur = self.assign[n][x];
        if cur != FREE {
            return cur == y;
        }
        if !self.ok_pair(n, x, y) {
            return false;
        }
        self.assign[n][x] = y;
        if self.injective {
            self.used[n][y] = true;
        }
        self.trail.push((n, x));
        if n > 0 {
            for i in 0..=n {
                let fx = self.src.face(n, x, i);
                let fy = self.tgt.face(n, y, i);
                if !self.set(n - 1, fx, fy) {
                    return false;
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (n, x) = self.trail.pop().unwrap();
            if self.injective {
                self.used[n][self.assign[n][x]] = false;
            }
            self.assign[n][x] = FREE;
        }
    }

    fn pick(&self) -> Option<(usize, usize)> {
        for n in (0..self.src.num_levels()).rev() {
            let mut best: Option<(usize, usize)> = None;
            for x in 0..self.src.count(n) {
                if self.assign[n][x] != FREE {
                    continue;
                }
                let fixed = if n == 0 {
                    0
                } else {
                    self.src.faces(n, x).iter().filter(|&&f| self.assign[n - 1][f] != FREE).count()
                };
                if best.is_none_or(|(_, b)| fixed > b) {
                    best = Some((x, fixed));
                    if fixed == n + 1 {
                        break;
                    }
                }
            }
            if let Some((x, _)) = best {
                return Some((n, x));
            }
        }
        None
    }

    fn candidates(&self, n: usize, x: usize) -> Vec<usize> {
        if n > 0 {
            let mut best: Option<&Vec<usize>> = None;
            for (i, &f) in self.src.faces(n, x).iter().enumerate() {
                let y = self.assign[n - 1][f];
                if y != FREE {
                    let list = &self.tgt_cofaces[n - 1][y][i];
                    if best.is_none_or(|b| list.len() < b.len()) {
                        best = Some(list);
                    }
                }
            }
            if let Some(list) = best {
                return list.clone();
            }
        }
        (0..self.tgt.count(n)).collect()
    }

    fn solve(&mut self, visit: &mut dyn FnMut(&Vec<Vec<usize>>) -> bool) -> bool {
        let Some((n, x)) = self.pick() else {
            return visit(&self.assign);
        };
        for y in self.candidates(n, x) {
            let mark = self.trail.len();
            if self.set(n, x, y) && self.solve(visit) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }

    fn to_map(&self, levels: &[Vec<usize>]) -> SSetMap {
        SSetMap::new_unchecked(self.src.clone(), self.tgt.clone(), levels.to_vec())
    }

    pub(crate) fn first(mut self) -> Option<SSetMap> {
        let mut found = None;
        self.solve(&mut |a| {
            found = Some(a.clone());
            true
        });
        found.map(|l| self.to_map(&l))
    }

    pub(crate) fn all(mut self) -> Vec<SSetMap> {
        let mut found = Vec::new();
        self.solve(&mut |a| {
            found.push(a.clone());
            false
        });
        found.iter().map(|l| self.to_map(l)).collect()
    }

    pub(crate) fn count(mut self) -> usize {
        let mut c = 0;
        self.solve(&mut |_| {
            c += 1;
            false
        });
        c
    }
}

/// Colour refinement on several complexes at once, so that colours are
/// comparable across them. `initial[k][n][x]` seeds the colours.
fn refine(xs: &[&SSet], initial: Vec<Vec<Vec<usize>>>) -> Vec<Vec<Vec<usize>>> {
    let cofaces: Vec<_> = xs.iter().map(|x| x.cofaces()).collect();
    let mut colours = initial;
    let mut classes = usize::MAX;
    loop {
        let mut table: BTreeMap<(usize, Vec<usize>, Vec<(usize, usize)>), usize> = BTreeMap::new();
        let mut sigs = Vec::new();
        for (k, x) in xs.iter().enumerate() {
            let mut per = Vec::new();
            for n in 0..x.num_levels() {
                let mut lv = Vec::new();
                for s in 0..x.count(n) {
                    let faces = if n == 0 {
                        Vec::new()
                    } else {
                        x.faces(n, s).iter().map(|&f| colours[k][n - 1][f]).collect()
                    };
                    let mut co: Vec<(usize, usize)> =
                        cofaces[k][n][s].iter().map(|&(i, y)| (i, colours[k][n + 1][y])).collect();
                    co.sort_unstable();
                    lv.push((colours[k][n][s], faces, co));
                }
                per.push(lv);
            }
            sigs.push(per);
        }
        for per in &sigs {
            for lv in per {
                for sig in lv {
                    let next = table.len();
                    table.entry(sig.clone()).or_insert(next);
                }
            }
        }
        colours = sigs
            .into_iter()
            .map(|per| per.into_iter().map(|lv| lv.into_iter().map(|s| table[&s]).collect()).collect())
            .collect();
        if table.len() == classes {
            return colours;
        }
        classes = table.len();
    }
}

fn seed(x: &SSet, extra: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    (0..x.num_levels())
        .map(|n| {
            (0..x.count(n))
                .map(|s| {
                    let m = usize::from(n == 1 && x.is_marked(s));
                    // Dimension, marking and caller data packed into one key.
                    (extra(n, s) * 2 + m) * 64 + n
                })
                .collect()
        })
        .collect()
}

fn iso_search(
    x: &SSet,
    y: &SSet,
    extra_x: impl Fn(usize, usize) -> usize,
    extra_y: impl Fn(usize, usize) -> usize,
    pre: Option<(&SSetMap, &SSetMap)>,
) -> Option<SSetMap> {
    if x.f_vector() != y.f_vector() || x.marked().len() != y.marked().len() {
        return None;
    }
    let colours = refine(&[x, y], vec![seed(x, extra_x), seed(y, extra_y)]);
    let mut hist_x = BTreeMap::new();
    let mut hist_y = BTreeMap::new();
    for (k, h) in [(0, &mut hist_x), (1, &mut hist_y)] {
        for lv in &colours[k] {
            for &c in lv {
                *h.entry(c).or_insert(0usize) += 1;
            }
        }
    }
    if hist_x != hist_y {
        return None;
    }
    let (cx, cy) = (&colours[0], &colours[1]);
    let mut search = HomSearch::new(x, y, true)
        .injective()
        .exact_marking()
        .filter(move |n, a, b| cx[n][a] == cy[n][b]);
    if let Some((f, g)) = pre {
        for n in 0..f.source().num_levels() {
            for a in 0..f.source().count(n) {
                if !search.fix(n, f.apply(n, a), g.apply(n, a)) {
                    return None;
                }
            }
        }
    }
    search.first()
}

/// An isomorphism `X → Y` respecting markings exactly.
pub fn find_isomorphism(x: &SSet, y: &SSet) -> Option<SSetMap> {
    iso_search(x, y, |_, _| 0, |_, _| 0, None)
}

/// An isomorphism `ψ: X → Y` with `ψ ∘ f = g`, for `f: A → X`, `g: A → Y`.
pub fn find_isomorphism_under(f: &SSetMap, g: &SSetMap) -> Option<SSetMap> {
    if f.source() != g.source() {
        return None;
    }
    let x = f.target();
    let y = g.target();
    // Seed with the set of source simplices landing on each simplex.
    let mut key_x: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut pre_x: Vec<Vec<Vec<usize>>> = (0..x.num_levels()).map(|n| vec![Vec::new(); x.count(n)]).collect();
    let mut pre_y: Vec<Vec<Vec<usize>>> = (0..y.num_levels()).map(|n| vec![Vec::new(); y.count(n)]).collect();
    for n in 0..f.source().num_levels() {
        for a in 0..f.source().count(n) {
            pre_x[n][f.apply(n, a)].push(a + 1);
            pre_y[n][g.apply(n, a)].push(a + 1);
        }
    }
    for lv in pre_x.iter().chain(pre_y.iter()) {
        for p in lv {
            let next = key_x.len();
            key_x.entry(p.clone()).or_insert(next);
        }
    }
    iso_search(
        x,
        y,
        |n, s| key_x[&pre_x[n][s]],
        |n, s| key_x[&pre_y[n][s]],
        Some((f, g)),
    )
}

/// For monos `f: A → X` and `g: B → Y`, an isomorphism `X → Y` carrying the
/// image of `f` exactly onto the image of `g`; this is an isomorphism of
/// arrows, the one on domains being induced.
pub fn find_arrow_isomorphism(f: &SSetMap, g: &SSetMap) -> Option<SSetMap> {
    if !f.is_injective() || !g.is_injective() || f.source().f_vector() != g.source().f_vector() {
        return None;
    }
    let (x, y) = (f.target(), g.target());
    iso_search(
        x,
        y,
        |n, s| usize::from(f.image_contains(n, s)),
        |n, s| usize::from(g.image_contains(n, s)),
        None,
    )
}

/// Number of maps `A → X` (respecting markings when asked).
pub fn count_maps(a: &SSet, x: &SSet, respect_marking: bool) -> usize {
    HomSearch::new(a, x, respect_marking).count()
}

/// Every map `A → X`, in search order.
pub fn all_maps(a: &SSet, x: &SSet, respect_marking: bool) -> Vec<SSetMap> {
    HomSearch::new(a, x, respect_marking).all()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, horn, simplex, simplex_table};

    #[test]
    fn maps_between_simplices() {
        // Maps Δ¹ → Δ² are its three edges.
        assert_eq!(count_maps(&simplex(1), &simplex(2), false), 3);
        // Maps from the boundary of a triangle into Δ²: only the boundary itself.
        assert_eq!(count_maps(boundary(2).source(), &simplex(2), false), 1);
        // The horn Λ²₁ into Δ²: one.
        assert_eq!(count_maps(horn(2, 1).unwrap().source(), &simplex(2), false), 1);
    }

    #[test]
    fn isomorphism_of_opposites() {
        for n in 0..5 {
            let x = simplex(n);
            assert!(find_isomorphism(&x, &x.opposite()).is_some());
        }
        let l0 = horn(2, 0).unwrap().source().clone();
        let l2 = horn(2, 2).unwrap().source().clone();
        assert!(find_isomorphism(&l0.opposite(), &l2).is_some());
        assert!(find_isomorphism(&l0, &l2).is_none());
    }

    #[test]
    fn isomorphism_under_source() {
        let b = boundary(2);
        let psi = find_isomorphism_under(&b, &b).unwrap();
        assert_eq!(psi, SSetMap::identity(b.target()));
        let t = simplex_table(1);
        assert!(find_isomorphism(&t.sset, &t.sset.fully_marked()).is_none());
    }
}
