//! Finite semisimplicial sets with a marking, and maps between them.
//!
//! Simplices are addressed by dimension and a dense index within that
//! dimension. An `n`-simplex with `n >= 1` stores its `n + 1` faces; position
//! `i` holds the `d_i` face. Edges therefore run from `d_1` to `d_0`.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use thiserror::Error;

use crate::monoidal::{join, join_map, JoinKind};
use crate::ordcalc::MonotoneMap;
use crate::search::{HomSearch, Preassign};
use crate::unionfind::UnionFind;
use crate::Mode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SSetError {
    #[error("simplex {simplex} in dimension {dim}: face {index} is {face}, out of range")]
    RangeError { dim: usize, simplex: usize, index: usize, face: usize },
    #[error("simplex {simplex} in dimension {dim} has {got} faces")]
    ArityError { dim: usize, simplex: usize, got: usize },
    #[error("simplex {simplex} in dimension {dim} violates the face identity for i = {i}, j = {j}")]
    IdentityViolation { dim: usize, simplex: usize, i: usize, j: usize },
    #[error("marked index {0} is not an edge")]
    MarkingRangeError(usize),
    #[error("map level {dim} has {got} entries, expected {expected}")]
    LevelSize { dim: usize, got: usize, expected: usize },
    #[error("map sends simplex {simplex} in dimension {dim} out of range")]
    MapRange { dim: usize, simplex: usize },
    #[error("map does not commute with d_{i} on simplex {simplex} in dimension {dim}")]
    NotNatural { dim: usize, simplex: usize, i: usize },
    #[error("map sends marked edge {0} to an unmarked edge")]
    MarkingNotPreserved(usize),
    #[error("diagram does not typecheck: {0}")]
    MapMismatch(String),
    #[error("edges {0} and {1} are not parallel")]
    NotParallel(usize, usize),
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

/// A finite semisimplicial set together with a set of marked edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SSet {
    levels: Vec<Vec<Vec<usize>>>,
    marked: BTreeSet<usize>,
}

impl SSet {
    pub fn empty() -> Self {
        SSet::default()
    }

    /// Builds a complex from face tables, one table per dimension starting at
    /// vertices. `vertices` gives the vertex count; `higher[k]` lists the
    /// simplices of dimension `k + 1`.
    pub fn from_faces(
        vertices: usize,
        higher: Vec<Vec<Vec<usize>>>,
        marked: impl IntoIterator<Item = usize>,
    ) -> Result<Self, SSetError> {
        let mut levels = vec![vec![Vec::new(); vertices]];
        levels.extend(higher);
        let mut x = SSet { levels, marked: marked.into_iter().collect() };
        x.trim();
        x.validate()?;
        Ok(x)
    }

    pub(crate) fn from_levels_unchecked(levels: Vec<Vec<Vec<usize>>>, marked: BTreeSet<usize>) -> Self {
        let mut x = SSet { levels, marked };
        x.trim();
        debug_assert_eq!(x.validate(), Ok(()));
        x
    }

    fn trim(&mut self) {
        while self.levels.last().is_some_and(|l| l.is_empty()) {
            self.levels.pop();
        }
    }

    pub fn validate(&self) -> Result<(), SSetError> {
        for (dim, level) in self.levels.iter().enumerate() {
            for (simplex, faces) in level.iter().enumerate() {
                let expected = if dim == 0 { 0 } else { dim + 1 };
                if faces.len() != expected {
                    return Err(SSetError::ArityError { dim, simplex, got: faces.len() });
                }
                for (index, &face) in faces.iter().enumerate() {
                    if face >= self.count(dim - 1) {
                        return Err(SSetError::RangeError { dim, simplex, index, face });
                    }
                }
                if dim >= 2 {
                    for j in 1..=dim {
                        for i in 0..j {
                            let lhs = self.levels[dim - 1][faces[j]][i];
                            let rhs = self.levels[dim - 1][faces[i]][j - 1];
                            if lhs != rhs {
                                return Err(SSetError::IdentityViolation { dim, simplex, i, j });
                            }
                        }
                    }
                }
            }
        }
        for &e in &self.marked {
            if e >= self.count(1) {
                return Err(SSetError::MarkingRangeError(e));
            }
        }
        Ok(())
    }

    pub fn add_vertex(&mut self) -> usize {
        if self.levels.is_empty() {
            self.levels.push(Vec::new());
        }
        self.levels[0].push(Vec::new());
        self.levels[0].len() - 1
    }

    /// Adds a simplex of dimension `faces.len() - 1` and returns its index.
    pub fn add_simplex(&mut self, faces: Vec<usize>) -> Result<usize, SSetError> {
        let dim = faces.len().saturating_sub(1);
        if dim == 0 {
            return Err(SSetError::ArityError { dim: 1, simplex: self.count(1), got: faces.len() });
        }
        let simplex = self.count(dim);
        for (index, &face) in faces.iter().enumerate() {
            if face >= self.count(dim - 1) {
                return Err(SSetError::RangeError { dim, simplex, index, face });
            }
        }
        if dim >= 2 {
            for j in 1..=dim {
                for i in 0..j {
                    if self.levels[dim - 1][faces[j]][i] != self.levels[dim - 1][faces[i]][j - 1] {
                        return Err(SSetError::IdentityViolation { dim, simplex, i, j });
                    }
                }
            }
        }
        while self.levels.len() <= dim {
            self.levels.push(Vec::new());
        }
        self.levels[dim].push(faces);
        Ok(simplex)
    }

    pub fn mark(&mut self, edge: usize) -> Result<(), SSetError> {
        if edge >= self.count(1) {
            return Err(SSetError::MarkingRangeError(edge));
        }
        self.marked.insert(edge);
        Ok(())
    }

    /// Number of `n`-simplices.
    pub fn count(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, |l| l.len())
    }

    pub fn total(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Highest nonempty dimension; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    /// Number of dimensions with simplices, i.e. `dim + 1`.
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn face(&self, n: usize, x: usize, i: usize) -> usize {
        self.levels[n][x][i]
    }

    pub fn faces(&self, n: usize, x: usize) -> &[usize] {
        &self.levels[n][x]
    }

    pub fn is_marked(&self, edge: usize) -> bool {
        self.marked.contains(&edge)
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    pub fn with_marking(mut self, marked: impl IntoIterator<Item = usize>) -> Result<Self, SSetError> {
        self.marked = marked.into_iter().collect();
        self.validate()?;
        Ok(self)
    }

    /// The same complex with no marked edges.
    pub fn unmarked(&self) -> Self {
        SSet { levels: self.levels.clone(), marked: BTreeSet::new() }
    }

    /// The same complex with every edge marked.
    pub fn fully_marked(&self) -> Self {
        SSet { levels: self.levels.clone(), marked: (0..self.count(1)).collect() }
    }

    /// Drops all simplices above dimension `d`.
    pub fn truncate(&self, d: usize) -> Self {
        let mut levels = self.levels.clone();
        levels.truncate(d + 1);
        let marked = if d >= 1 { self.marked.clone() } else { BTreeSet::new() };
        SSet { levels, marked }
    }

    /// Vertex `j` of the `n`-simplex `x`.
    pub fn vertex(&self, n: usize, x: usize, j: usize) -> usize {
        let (mut n, mut x, mut j) = (n, x, j);
        while n > 0 {
            if j < n {
                x = self.levels[n][x][n];
            } else {
                x = self.levels[n][x][0];
                j -= 1;
            }
            n -= 1;
        }
        x
    }

    pub fn vertices(&self, n: usize, x: usize) -> Vec<usize> {
        (0..=n).map(|j| self.vertex(n, x, j)).collect()
    }

    /// `x · f` for a mono `f` into `[n]`: the face of `x` spanned by the image of `f`.
    pub fn restrict(&self, n: usize, x: usize, f: &MonotoneMap) -> usize {
        assert!(f.is_mono() && f.cod() == n + 1 && f.dom() >= 1);
        let mut x = x;
        let mut n = n;
        let mut image: Vec<usize> = f.values().to_vec();
        while image.len() < n + 1 {
            // Remove the largest vertex not in the image.
            let i = (0..=n).rev().find(|v| image.binary_search(v).is_err()).unwrap();
            x = self.levels[n][x][i];
            for v in image.iter_mut() {
                if *v > i {
                    *v -= 1;
                }
            }
            n -= 1;
        }
        x
    }

    /// Cofaces of every simplex: `(i, y)` such that `d_i y` is the simplex.
    pub fn cofaces(&self) -> Vec<Vec<Vec<(usize, usize)>>> {
        let mut out: Vec<Vec<Vec<(usize, usize)>>> =
            self.levels.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for n in 1..self.levels.len() {
            for (y, faces) in self.levels[n].iter().enumerate() {
                for (i, &f) in faces.iter().enumerate() {
                    out[n - 1][f].push((i, y));
                }
            }
        }
        out
    }

    /// The opposite complex: `d_i` becomes `d_{n-i}`.
    pub fn opposite(&self) -> SSet {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                l.iter()
                    .map(|faces| faces.iter().rev().copied().collect())
                    .collect()
            })
            .collect();
        SSet { levels, marked: self.marked.clone() }
    }
}

/// A map of (marked) semisimplicial sets with its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SSetMap {
    source: SSet,
    target: SSet,
    levels: Vec<Vec<usize>>,
}

impl SSetMap {
    pub fn new(source: SSet, target: SSet, levels: Vec<Vec<usize>>) -> Result<Self, SSetError> {
        let map = SSetMap { source, target, levels };
        map.validate()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(source: SSet, target: SSet, levels: Vec<Vec<usize>>) -> Self {
        let map = SSetMap { source, target, levels };
        debug_assert_eq!(map.validate(), Ok(()));
        map
    }

    /// Levels whose target is not known yet, as read from a certificate.
    /// Replay supplies the target through [`SSetMap::with_endpoints`].
    pub(crate) fn pending(source: SSet, levels: Vec<Vec<usize>>) -> Self {
        SSetMap { source, target: SSet::empty(), levels }
    }

    pub fn validate(&self) -> Result<(), SSetError> {
        if self.levels.len() != self.source.num_levels() {
            return Err(SSetError::LevelSize {
                dim: self.levels.len(),
                got: self.levels.len(),
                expected: self.source.num_levels(),
            });
        }
        for (dim, level) in self.levels.iter().enumerate() {
            if level.len() != self.source.count(dim) {
                return Err(SSetError::LevelSize { dim, got: level.len(), expected: self.source.count(dim) });
            }
            for (simplex, &y) in level.iter().enumerate() {
                if y >= self.target.count(dim) {
                    return Err(SSetError::MapRange { dim, simplex });
                }
                if dim >= 1 {
                    for i in 0..=dim {
                        let lhs = self.levels[dim - 1][self.source.face(dim, simplex, i)];
                        if lhs != self.target.face(dim, y, i) {
                            return Err(SSetError::NotNatural { dim, simplex, i });
                        }
                    }
                }
            }
        }
        for &e in self.source.marked() {
            if !self.target.is_marked(self.levels[1][e]) {
                return Err(SSetError::MarkingNotPreserved(e));
            }
        }
        Ok(())
    }

    pub fn identity(x: &SSet) -> Self {
        let levels = (0..x.num_levels()).map(|n| (0..x.count(n)).collect()).collect();
        SSetMap { source: x.clone(), target: x.clone(), levels }
    }

    /// The unique map out of the empty complex.
    pub fn from_empty(target: &SSet) -> Self {
        SSetMap { source: SSet::empty(), target: target.clone(), levels: Vec::new() }
    }

    pub fn source(&self) -> &SSet {
        &self.source
    }

    pub fn target(&self) -> &SSet {
        &self.target
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.levels[n][x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SSetMap) -> Result<SSetMap, SSetError> {
        if first.target != self.source {
            return Err(SSetError::MapMismatch("composite: target and source differ".into()));
        }
        let levels = first
            .levels
            .iter()
            .enumerate()
            .map(|(n, l)| l.iter().map(|&x| self.levels[n][x]).collect())
            .collect();
        Ok(SSetMap { source: first.source.clone(), target: self.target.clone(), levels })
    }

    pub fn is_injective(&self) -> bool {
        self.levels.iter().enumerate().all(|(n, l)| {
            let mut seen = vec![false; self.target.count(n)];
            l.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.target.num_levels()).all(|n| {
            let mut seen = vec![false; self.target.count(n)];
            if let Some(l) = self.levels.get(n) {
                for &y in l {
                    seen[y] = true;
                }
            }
            seen.into_iter().all(|b| b)
        })
    }

    /// Levelwise injective. Marking preservation is part of being a map, and
    /// inclusion of finite markings is always decidable.
    pub fn is_cofibration(&self) -> bool {
        self.is_injective()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective()
            && self.is_surjective()
            && self.target.marked().iter().all(|&e| {
                self.levels[1].iter().position(|&y| y == e).is_some_and(|x| self.source.is_marked(x))
            })
    }

    /// Whether `(n, y)` lies in the image.
    pub fn image_contains(&self, n: usize, y: usize) -> bool {
        self.levels.get(n).is_some_and(|l| l.contains(&y))
    }

    pub fn with_endpoints(&self, source: SSet, target: SSet) -> Result<SSetMap, SSetError> {
        SSetMap::new(source, target, self.levels.clone())
    }
}

/// Simplex index tables for subcomplexes of a standard simplex: simplices are
/// nonempty vertex subsets, listed per dimension in lexicographic order.
#[derive(Debug, Clone)]
pub struct SubsetComplex {
    pub sset: SSet,
    index: HashMap<Vec<usize>, usize>,
    pub subsets: Vec<Vec<Vec<usize>>>,
}

impl SubsetComplex {
    /// All vertex subsets of `0..vertices` accepted by `keep`; `keep` must be
    /// closed under taking nonempty subsets.
    pub fn new(vertices: usize, keep: impl Fn(&[usize]) -> bool) -> Self {
        let mut sset = SSet::empty();
        let mut index = HashMap::new();
        let mut subsets = Vec::new();
        for size in 1..=vertices {
            let mut level = Vec::new();
            for set in (0..vertices).combinations(size) {
                if !keep(&set) {
                    continue;
                }
                let idx = if size == 1 {
                    sset.add_vertex()
                } else {
                    let faces = (0..size)
                        .map(|i| {
                            let mut f = set.clone();
                            f.remove(i);
                            index[&f]
                        })
                        .collect();
                    sset.add_simplex(faces).expect("subsets form a complex")
                };
                index.insert(set.clone(), idx);
                level.push(set);
            }
            if level.is_empty() {
                break;
            }
            subsets.push(level);
        }
        SubsetComplex { sset, index, subsets }
    }

    pub fn index_of(&self, set: &[usize]) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn mark_pairs(&mut self, pairs: &[[usize; 2]]) {
        for p in pairs {
            let e = self.index[&p.to_vec()];
            self.sset.mark(e).unwrap();
        }
    }

    /// The inclusion into `other` by vertex sets (`other` must contain them).
    pub fn inclusion_into(&self, other: &SubsetComplex) -> SSetMap {
        let levels = self
            .subsets
            .iter()
            .map(|l| l.iter().map(|s| other.index[s]).collect())
            .collect();
        SSetMap::new(self.sset.clone(), other.sset.clone(), levels).expect("inclusion of subcomplexes")
    }
}

/// The standard `n`-simplex as a subset complex.
pub fn simplex_table(n: usize) -> SubsetComplex {
    SubsetComplex::new(n + 1, |_| true)
}

pub fn simplex(n: usize) -> SSet {
    simplex_table(n).sset
}

/// The boundary inclusion `∂Δⁿ → Δⁿ`.
pub fn boundary(n: usize) -> SSetMap {
    let full = simplex_table(n);
    let bd = SubsetComplex::new(n + 1, |s| s.len() <= n);
    bd.inclusion_into(&full)
}

fn horn_tables(n: usize, k: usize) -> Result<(SubsetComplex, SubsetComplex), SSetError> {
    if n == 0 || k > n {
        return Err(SSetError::BadParams(format!("horn {n} {k}")));
    }
    let full = simplex_table(n);
    let horn = SubsetComplex::new(n + 1, move |s| {
        s.len() < n || (s.len() == n && s.contains(&k))
    });
    Ok((horn, full))
}

/// The horn inclusion `Λⁿₖ → Δⁿ`.
pub fn horn(n: usize, k: usize) -> Result<SSetMap, SSetError> {
    let (h, full) = horn_tables(n, k)?;
    Ok(h.inclusion_into(&full))
}

/// The critical edge of an outer horn, as a vertex pair.
pub fn critical_edge(n: usize, k: usize) -> Option<[usize; 2]> {
    if n == 0 {
        None
    } else if k == 0 {
        Some([0, 1])
    } else if k == n {
        Some([n - 1, n])
    } else {
        None
    }
}

/// The marked horn inclusion: inner horns minimally marked, outer horns with
/// only the critical edge marked (in the domain too once `n >= 2`).
pub fn marked_horn(n: usize, k: usize) -> Result<SSetMap, SSetError> {
    let (mut h, mut full) = horn_tables(n, k)?;
    if let Some(e) = critical_edge(n, k) {
        full.mark_pairs(&[e]);
        if n >= 2 {
            h.mark_pairs(&[e]);
        }
    }
    Ok(h.inclusion_into(&full))
}

/// `Δ¹ → Δ¹` with the edge marked in the target only.
pub fn edge_marking() -> SSetMap {
    let plain = simplex(1);
    let marked = plain.fully_marked();
    SSetMap::identity(&plain).with_endpoints(plain, marked).unwrap()
}

/// `(Δ³, {02, 13}) → Δ³` with every edge marked.
pub fn marking_saturation() -> SSetMap {
    let mut src = simplex_table(3);
    src.mark_pairs(&[[0, 2], [1, 3]]);
    let tgt = src.sset.fully_marked();
    SSetMap::identity(&src.sset).with_endpoints(src.sset.clone(), tgt).unwrap()
}

/// One simplex in each dimension up to `n`, every face the unique simplex below.
pub fn point_skeleton(n: usize) -> SSet {
    let mut x = SSet::empty();
    x.add_vertex();
    for d in 1..=n {
        x.add_simplex(vec![0; d + 1]).unwrap();
    }
    x
}

/// One vertex, one edge, one triangle with all three faces the edge.
pub fn dunce_hat() -> SSet {
    point_skeleton(2)
}

/// The representable loop: `Δ¹` with its endpoints identified.
pub fn loop_complex() -> SSet {
    point_skeleton(1)
}

/// Two parallel edges between two vertices.
pub fn parallel_pair() -> SSet {
    SSet::from_faces(2, vec![vec![vec![1, 0], vec![1, 0]]], []).unwrap()
}

/// Quotient of the disjoint union of `parts` by identifying the listed pairs
/// of simplices `((part, dim, index), (part, dim, index))`. Identifications
/// must be closed under faces. Classes are numbered by first occurrence, so a
/// part listed first whose simplices are never identified keeps its indices.
fn glue(parts: &[&SSet], pairs: &[((usize, usize, usize), (usize, usize, usize))]) -> (SSet, Vec<SSetMap>) {
    let levels = parts.iter().map(|p| p.num_levels()).max().unwrap_or(0);
    // offsets[part][dim]
    let mut offsets = vec![vec![0; levels]; parts.len()];
    let mut totals = vec![0; levels];
    for (pi, p) in parts.iter().enumerate() {
        for n in 0..levels {
            offsets[pi][n] = totals[n];
            totals[n] += p.count(n);
        }
    }
    let mut ufs: Vec<UnionFind> = totals.iter().map(|&t| UnionFind::new(t)).collect();
    for &((p1, n1, x1), (p2, n2, x2)) in pairs {
        debug_assert_eq!(n1, n2);
        ufs[n1].union(offsets[p1][n1] + x1, offsets[p2][n2] + x2);
    }
    let mut labels = Vec::with_capacity(levels);
    let mut out_levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(levels);
    for (n, uf) in ufs.iter_mut().enumerate() {
        let (lab, count) = uf.labels();
        let mut level = vec![None; count];
        for (pi, p) in parts.iter().enumerate() {
            for x in 0..p.count(n) {
                let c = lab[offsets[pi][n] + x];
                if level[c].is_none() {
                    let faces = if n == 0 {
                        Vec::new()
                    } else {
                        p.faces(n, x)
                            .iter()
                            .map(|&f| labels_at(&labels, n - 1, offsets[pi][n - 1] + f))
                            .collect()
                    };
                    level[c] = Some(faces);
                }
            }
        }
        out_levels.push(level.into_iter().map(|f| f.unwrap()).collect());
        labels.push(lab);
    }
    let mut marked = BTreeSet::new();
    for (pi, p) in parts.iter().enumerate() {
        for &e in p.marked() {
            marked.insert(labels[1][offsets[pi][1] + e]);
        }
    }
    let result = SSet::from_levels_unchecked(out_levels, marked);
    let maps = parts
        .iter()
        .enumerate()
        .map(|(pi, p)| {
            let lv = (0..p.num_levels())
                .map(|n| (0..p.count(n)).map(|x| labels[n][offsets[pi][n] + x]).collect())
                .collect();
            SSetMap::new_unchecked((*p).clone(), result.clone(), lv)
        })
        .collect();
    (result, maps)
}

fn labels_at(labels: &[Vec<usize>], n: usize, global: usize) -> usize {
    labels[n][global]
}

pub fn coproduct(parts: &[&SSet]) -> (SSet, Vec<SSetMap>) {
    glue(parts, &[])
}

/// Pushout of `f: A → B` and `g: A → C`. Returns `(P, B → P, C → P)`;
/// simplices of `B` come first.
pub fn pushout(f: &SSetMap, g: &SSetMap) -> Result<(SSet, SSetMap, SSetMap), SSetError> {
    if f.source != g.source {
        return Err(SSetError::MapMismatch("pushout legs have different sources".into()));
    }
    let a = &f.source;
    let mut pairs = Vec::new();
    for n in 0..a.num_levels() {
        for x in 0..a.count(n) {
            pairs.push(((0, n, f.apply(n, x)), (1, n, g.apply(n, x))));
        }
    }
    let (p, mut maps) = glue(&[&f.target, &g.target], &pairs);
    let to_c = maps.pop().unwrap();
    let to_b = maps.pop().unwrap();
    Ok((p, to_b, to_c))
}

/// Coequalizer of `f, g: A → B`.
pub fn coequalizer(f: &SSetMap, g: &SSetMap) -> Result<(SSet, SSetMap), SSetError> {
    if f.source != g.source || f.target != g.target {
        return Err(SSetError::MapMismatch("coequalizer of non-parallel maps".into()));
    }
    let a = &f.source;
    let mut pairs = Vec::new();
    for n in 0..a.num_levels() {
        for x in 0..a.count(n) {
            pairs.push(((0, n, f.apply(n, x)), (0, n, g.apply(n, x))));
        }
    }
    let (q, mut maps) = glue(&[&f.target], &pairs);
    Ok((q, maps.pop().unwrap()))
}

/// The induced map out of a pushout `P = B +_A C` given compatible maps
/// `u: B → Z`, `v: C → Z`.
pub fn pushout_induced(
    to_b: &SSetMap,
    to_c: &SSetMap,
    u: &SSetMap,
    v: &SSetMap,
) -> Result<SSetMap, SSetError> {
    let p = to_b.target();
    let z = u.target();
    let mut levels: Vec<Vec<Option<usize>>> = (0..p.num_levels()).map(|n| vec![None; p.count(n)]).collect();
    for (leg, m) in [(to_b, u), (to_c, v)] {
        for n in 0..leg.source().num_levels() {
            for x in 0..leg.source().count(n) {
                let slot = &mut levels[n][leg.apply(n, x)];
                let val = m.apply(n, x);
                match slot {
                    Some(old) if *old != val => {
                        return Err(SSetError::MapMismatch("cocone does not agree on the span".into()))
                    }
                    _ => *slot = Some(val),
                }
            }
        }
    }
    let levels = levels
        .into_iter()
        .map(|l| l.into_iter().map(|v| v.expect("pushout legs are jointly surjective")).collect())
        .collect();
    SSetMap::new(p.clone(), z.clone(), levels)
}

/// `X_{/p}`: `n`-simplices are maps `Δⁿ ⋆ A → X` restricting to `p` on `A`,
/// using the marking join and marking-preserving maps in marked mode. Edges
/// of the slice are marked when the edge `01` of the cone is sent to a
/// marked edge.
pub fn slice(p: &SSetMap, mode: Mode) -> SSet {
    let a = p.source();
    let x = p.target();
    let mut out = SSet::empty();
    let mut index: Vec<HashMap<Vec<Vec<usize>>, usize>> = Vec::new();
    let mut prev_cone: Option<(SSet, Vec<Vec<Vec<usize>>>)> = None;
    let top = x.dim().map_or(0, |d| d + 1);
    let kind = if mode.is_marked() { JoinKind::MarkingJoin } else { JoinKind::Join };
    for n in 0..top {
        let cone_base = simplex(n);
        let cone = join(&cone_base, a, kind);
        let right = cone.right_inclusion();
        let exts = extensions(&right, p, mode);
        if exts.is_empty() {
            break;
        }
        let mut level_index = HashMap::new();
        let mut level_maps = Vec::new();
        for ext in &exts {
            let idx = if n == 0 {
                out.add_vertex()
            } else {
                let (prev_sset, _) = prev_cone.as_ref().unwrap();
                let faces = (0..=n)
                    .map(|i| {
                        let di = boundary_face_map(n, i);
                        let jm = join_map(&di, &SSetMap::identity(a), kind);
                        debug_assert_eq!(jm.source(), prev_sset);
                        let restricted = ext.after(&jm).unwrap();
                        index[n - 1][restricted.levels()]
                    })
                    .collect();
                out.add_simplex(faces).unwrap()
            };
            if n == 1 && mode.is_marked() {
                let edge = cone.left_simplex(1, 0);
                if x.is_marked(ext.apply(1, edge)) {
                    out.mark(idx).unwrap();
                }
            }
            level_index.insert(ext.levels().to_vec(), idx);
            level_maps.push(ext.levels().to_vec());
        }
        index.push(level_index);
        prev_cone = Some((cone.sset().clone(), level_maps));
    }
    out
}

/// `d_i: Δ^{n-1} → Δⁿ` as a map of complexes.
pub fn boundary_face_map(n: usize, i: usize) -> SSetMap {
    let full = simplex_table(n);
    let face = simplex_table(n - 1);
    let levels = face
        .subsets
        .iter()
        .map(|l| {
            l.iter()
                .map(|s| {
                    let img: Vec<usize> = s.iter().map(|&v| if v < i { v } else { v + 1 }).collect();
                    full.index_of(&img).unwrap()
                })
                .collect()
        })
        .collect();
    SSetMap::new(face.sset, full.sset, levels).unwrap()
}

/// All maps `J → X` restricting to `p` along `i: A → J`.
pub(crate) fn extensions(i: &SSetMap, p: &SSetMap, mode: Mode) -> Vec<SSetMap> {
    let mut search = HomSearch::new(i.target(), p.target(), mode.is_marked());
    if !search.preassign(Preassign::Along(i, p)) {
        return Vec::new();
    }
    search.all()
}

fn first_extension(i: &SSetMap, p: &SSetMap, mode: Mode) -> Option<SSetMap> {
    let mut search = HomSearch::new(i.target(), p.target(), mode.is_marked());
    if !search.preassign(Preassign::Along(i, p)) {
        return None;
    }
    search.first()
}

/// A cone `Δ⁰ ⋆ P → X` over the parallel pair `[f, g]`. In marked mode the
/// cone edge over the common source vertex must land on a marked edge.
///
/// Without fibrancy the witnessed relation need not be transitive; it is
/// reported as found, not closed up.
pub fn relatedness_witness(x: &SSet, f: usize, g: usize, mode: Mode) -> Result<Option<SSetMap>, SSetError> {
    if f >= x.count(1) || g >= x.count(1) {
        return Err(SSetError::MarkingRangeError(f.max(g)));
    }
    if x.faces(1, f) != x.faces(1, g) {
        return Err(SSetError::NotParallel(f, g));
    }
    let pmap = SSetMap::new(
        parallel_pair(),
        x.clone(),
        vec![vec![x.face(1, f, 1), x.face(1, f, 0)], vec![f, g]],
    )?;
    let cone = join(&simplex(0), pmap.source(), JoinKind::Join);
    let mut total = cone.sset().clone();
    if mode.is_marked() {
        // The cone edge into the source vertex of the pair.
        total.mark(cone.cross_simplex(0, 0, 0, 0)).unwrap();
    }
    let inc = cone.right_inclusion().with_endpoints(pmap.source().clone(), total)?;
    Ok(first_extension(&inc, &pmap, mode))
}

/// An extension of a loop `l: L → X` to `Δ⁰ ⋆ L → X`.
pub fn constant_loop_witness(l: &SSetMap) -> Option<SSetMap> {
    let cone = join(&simplex(0), l.source(), JoinKind::Join);
    first_extension(&cone.right_inclusion(), l, Mode::Plain)
}
