//! Subdivision through the semicategory of elements, and the cospan
//! `A → A ⋆_F Sd A ← Sd A`.

use std::collections::{BTreeSet, HashMap};

use crate::invariants::{nerve_truncated, FinSemicat};
use crate::monoidal::{indexed_join, IndexedJoinTable, Join, JoinCell};
use crate::ordcalc::{enumerate, Class, MonotoneMap};
use crate::sset::{SSet, SSetMap};
use crate::Mode;

/// The semicategory of elements: objects are simplices `(dim, index)`, and a
/// morphism `x → y` is a proper mono `f` with `y·f = x`.
#[derive(Debug, Clone)]
pub struct Elements {
    pub cat: FinSemicat,
    objects: Vec<(usize, usize)>,
    object_index: HashMap<(usize, usize), usize>,
    monos: Vec<MonotoneMap>,
    by_mono: HashMap<(usize, MonotoneMap), usize>,
}

impl Elements {
    pub fn object(&self, o: usize) -> (usize, usize) {
        self.objects[o]
    }

    pub fn object_of(&self, dim: usize, x: usize) -> usize {
        self.object_index[&(dim, x)]
    }

    pub fn mono(&self, m: usize) -> &MonotoneMap {
        &self.monos[m]
    }

    /// The morphism into `target` given by `f`.
    pub fn morphism(&self, target: usize, f: &MonotoneMap) -> Option<usize> {
        self.by_mono.get(&(target, f.clone())).copied()
    }
}

/// Whether the mono `f: [m] ↪ [n]` into `y` is marked: its last vertex is the
/// last vertex of `[n]`, or the edge of `y` from `f(m)` to `n` is marked.
fn last_vertex_marked(x: &SSet, n: usize, y: usize, f: &MonotoneMap) -> bool {
    let v = *f.values().last().expect("nonempty mono");
    v == n || x.is_marked(x.restrict(n, y, &MonotoneMap::new(n + 1, vec![v, n]).unwrap()))
}

/// In marked mode a morphism is marked by the last vertex rule.
pub fn elements(x: &SSet, mode: Mode) -> Elements {
    let mut objects = Vec::new();
    let mut object_index = HashMap::new();
    for n in 0..x.num_levels() {
        for i in 0..x.count(n) {
            object_index.insert((n, i), objects.len());
            objects.push((n, i));
        }
    }
    let mut morphisms = Vec::new();
    let mut monos = Vec::new();
    let mut by_mono = HashMap::new();
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    let mut marked = BTreeSet::new();
    for (t, &(n, y)) in objects.iter().enumerate() {
        for m in 0..n {
            for f in enumerate(m + 1, n + 1, Class::Mono) {
                let s = object_index[&(m, x.restrict(n, y, &f))];
                let id = morphisms.len();
                if mode.is_marked() && last_vertex_marked(x, n, y, &f) {
                    marked.insert(id);
                }
                morphisms.push((s, t));
                by_mono.insert((t, f.clone()), id);
                monos.push(f);
                into[t].push(id);
            }
        }
    }
    let mut compose = HashMap::new();
    for (g, &(y, z)) in morphisms.iter().enumerate() {
        for &f in &into[y] {
            let h = by_mono[&(z, monos[g].compose(&monos[f]))];
            compose.insert((f, g), h);
        }
    }
    let cat = FinSemicat::new_unchecked(objects.len(), morphisms, compose, marked);
    Elements { cat, objects, object_index, monos, by_mono }
}

/// A flag `x₀ ↪ x₁ ↪ … ↪ xₙ` of simplices of strictly increasing dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    /// Each entry is `(dim, index)`.
    pub chain: Vec<(usize, usize)>,
    /// `links[i]` includes `chain[i]` into `chain[i + 1]`.
    pub links: Vec<MonotoneMap>,
}

#[derive(Debug, Clone)]
pub struct Subdivision {
    pub sset: SSet,
    pub elements: Elements,
    /// `chains[n][s]`: the morphisms of elements making up simplex `s` (`n >= 1`).
    chains: Vec<Vec<Vec<usize>>>,
}

impl Subdivision {
    /// The elements objects along simplex `s` of dimension `n`.
    pub fn objects(&self, n: usize, s: usize) -> Vec<usize> {
        if n == 0 {
            return vec![s];
        }
        let ch = &self.chains[n][s];
        let mut out = vec![self.elements.cat.morphisms()[ch[0]].0];
        out.extend(ch.iter().map(|&m| self.elements.cat.morphisms()[m].1));
        out
    }

    pub fn flag(&self, n: usize, s: usize) -> Flag {
        let chain = self.objects(n, s).into_iter().map(|o| self.elements.object(o)).collect();
        let links = if n == 0 { Vec::new() } else { self.chains[n][s].iter().map(|&m| self.elements.mono(m).clone()).collect() };
        Flag { chain, links }
    }

    /// The first and last simplices of the flag.
    pub fn endpoints(&self, n: usize, s: usize) -> ((usize, usize), (usize, usize)) {
        let objs = self.objects(n, s);
        (self.elements.object(objs[0]), self.elements.object(objs[n]))
    }

    /// The inclusion of `chain[i]` into `chain[j]` for `i <= j`.
    pub fn link_between(&self, n: usize, s: usize, i: usize, j: usize) -> MonotoneMap {
        let f = self.flag(n, s);
        let mut g = MonotoneMap::identity(f.chain[i].0 + 1);
        for l in &f.links[i..j] {
            g = l.compose(&g);
        }
        g
    }

    /// Along a face `δ` of the flag, the inclusion of the last simplex of the
    /// face into the last simplex of the flag.
    pub fn last_vertex_action(&self, n: usize, s: usize, delta: &MonotoneMap) -> MonotoneMap {
        self.link_between(n, s, *delta.values().last().unwrap(), n)
    }

    /// Along a face `δ`, the inclusion of the first simplex of the flag into
    /// the first simplex of the face.
    pub fn first_vertex_action(&self, n: usize, s: usize, delta: &MonotoneMap) -> MonotoneMap {
        self.link_between(n, s, 0, delta.values()[0])
    }
}

/// `Sd X`, the nerve of the semicategory of elements. In marked mode an edge
/// is marked when its morphism is.
pub fn sd(x: &SSet, mode: Mode) -> Subdivision {
    let elements = elements(x, mode);
    let nerve = nerve_truncated(&elements.cat, x.dim().unwrap_or(0), false);
    Subdivision { sset: nerve.sset, elements, chains: nerve.chains }
}

/// The token table of `A ⋆_F Sd A`: tokens over `(x, σ)` are the monos
/// `g: [a] ↪ [k]` with `first(σ)·g = x`, in lexicographic order. Faces of `x`
/// act by precomposition; `d₀` of `σ` postcomposes with its first link. In
/// marked mode a vertex token is marked by the last vertex rule.
pub fn f_table(a: &SSet, sub: &Subdivision, mode: Mode) -> IndexedJoinTable {
    let b = &sub.sset;
    let tokens = |ad: usize, x: usize, bd: usize, y: usize| -> Vec<MonotoneMap> {
        let (k, x0) = sub.endpoints(bd, y).0;
        if ad > k {
            return Vec::new();
        }
        enumerate(ad + 1, k + 1, Class::Mono).into_iter().filter(|g| a.restrict(k, x0, g) == x).collect()
    };
    IndexedJoinTable::build(a, b, |ad, x, bd, y| {
        let own = tokens(ad, x, bd, y);
        let pos = |list: &[MonotoneMap], g: &MonotoneMap| list.binary_search(g).expect("restricted token exists");
        let left = if ad == 0 {
            Vec::new()
        } else {
            (0..=ad)
                .map(|i| {
                    let target = tokens(ad - 1, a.face(ad, x, i), bd, y);
                    own.iter().map(|g| pos(&target, &g.compose(&MonotoneMap::face(ad + 1, i)))).collect()
                })
                .collect()
        };
        let right = if bd == 0 {
            Vec::new()
        } else {
            (0..=bd)
                .map(|j| {
                    let target = tokens(ad, x, bd - 1, b.face(bd, y, j));
                    if j == 0 {
                        let link = sub.link_between(bd, y, 0, 1);
                        own.iter().map(|g| pos(&target, &link.compose(g))).collect()
                    } else {
                        own.iter().map(|g| pos(&target, g)).collect()
                    }
                })
                .collect()
        };
        let mut marked = BTreeSet::new();
        if mode.is_marked() && ad == 0 && bd == 0 {
            let (k, x0) = sub.endpoints(0, y).0;
            for (t, g) in own.iter().enumerate() {
                if last_vertex_marked(a, k, x0, g) {
                    marked.insert(t);
                }
            }
        }
        JoinCell { tokens: own.len(), left, right, marked }
    })
}

#[derive(Debug, Clone)]
pub struct CospanResult {
    pub summit: Join,
    pub left: SSetMap,
    pub right: SSetMap,
    pub sd: Subdivision,
    pub table: IndexedJoinTable,
}

/// `A → A ⋆_F Sd A ← Sd A`.
pub fn cospan(a: &SSet, mode: Mode) -> CospanResult {
    let sub = sd(a, mode);
    let table = f_table(a, &sub, mode);
    let summit = indexed_join(a, &sub.sset, &table);
    let left = summit.left_inclusion();
    let right = summit.right_inclusion();
    CospanResult { summit, left, right, sd: sub, table }
}
