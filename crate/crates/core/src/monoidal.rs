//! Geometric product, cartesian product, joins and Leibniz corner maps.
//!
//! Constructions here propagate markings by their marked rules; feed unmarked
//! complexes to get plain behaviour. Only the marking join creates marks.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::ordcalc::{enumerate, reedy_factorize, Class, MonotoneMap};
use crate::sset::{pushout, pushout_induced, SSet, SSetError, SSetMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinError {
    #[error("token table missing cell ({0}, {1}, {2}, {3})")]
    MissingCell(usize, usize, usize, usize),
    #[error("restriction {0} out of range")]
    RestrictionRange(String),
    #[error("token restrictions are not functorial at {0}")]
    FunctorialityViolation(String),
}

/// An `n`-simplex of `A ⊗ B`: jointly monic epis `p: [n] ↠ [a]`, `q: [n] ↠ [b]`
/// with `a`-simplex `x` of `A` and `b`-simplex `y` of `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorSimplex {
    pub p: MonotoneMap,
    pub q: MonotoneMap,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone)]
pub struct Tensor {
    sset: SSet,
    simplices: Vec<Vec<TensorSimplex>>,
    index: HashMap<TensorSimplex, usize>,
}

impl Tensor {
    pub fn sset(&self) -> &SSet {
        &self.sset
    }

    pub fn simplices(&self, n: usize) -> &[TensorSimplex] {
        self.simplices.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, s: &TensorSimplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn into_sset(self) -> SSet {
        self.sset
    }
}

fn jointly_monic(p: &MonotoneMap, q: &MonotoneMap) -> bool {
    (1..p.dom()).all(|i| p.apply(i - 1) != p.apply(i) || q.apply(i - 1) != q.apply(i))
}

/// The geometric product. An edge is marked when its `A`-component or its
/// `B`-component is a marked edge.
pub fn tensor(a: &SSet, b: &SSet) -> Tensor {
    let (Some(da), Some(db)) = (a.dim(), b.dim()) else {
        return Tensor { sset: SSet::empty(), simplices: Vec::new(), index: HashMap::new() };
    };
    let mut sset = SSet::empty();
    let mut simplices: Vec<Vec<TensorSimplex>> = Vec::new();
    let mut index = HashMap::new();
    for n in 0..=da + db {
        let mut level = Vec::new();
        for ad in 0..=n.min(da) {
            for bd in 0..=n.min(db) {
                if ad + bd < n {
                    continue;
                }
                let ps = enumerate(n + 1, ad + 1, Class::Epi);
                let qs = enumerate(n + 1, bd + 1, Class::Epi);
                for p in &ps {
                    for q in &qs {
                        if !jointly_monic(p, q) {
                            continue;
                        }
                        for x in 0..a.count(ad) {
                            for y in 0..b.count(bd) {
                                level.push(TensorSimplex { p: p.clone(), q: q.clone(), x, y });
                            }
                        }
                    }
                }
            }
        }
        for s in &level {
            let idx = if n == 0 {
                sset.add_vertex()
            } else {
                let faces = (0..=n)
                    .map(|i| index[&tensor_face(a, b, s, i)])
                    .collect();
                sset.add_simplex(faces).expect("tensor faces satisfy the identities")
            };
            if n == 1 {
                let am = s.p.cod() == 2 && a.is_marked(s.x);
                let bm = s.q.cod() == 2 && b.is_marked(s.y);
                if am || bm {
                    sset.mark(idx).unwrap();
                }
            }
            index.insert(s.clone(), idx);
        }
        simplices.push(level);
    }
    Tensor { sset, simplices, index }
}

/// `d_i` of a tensor simplex, via the epi-mono factorizations of `p d_i`, `q d_i`.
pub fn tensor_face(a: &SSet, b: &SSet, s: &TensorSimplex, i: usize) -> TensorSimplex {
    let d = MonotoneMap::face(s.p.dom(), i);
    let (p2, mp) = reedy_factorize(&s.p.compose(&d));
    let (q2, mq) = reedy_factorize(&s.q.compose(&d));
    TensorSimplex {
        x: a.restrict(s.p.cod() - 1, s.x, &mp),
        y: b.restrict(s.q.cod() - 1, s.y, &mq),
        p: p2,
        q: q2,
    }
}

/// `f ⊗ g`.
pub fn tensor_map(f: &SSetMap, g: &SSetMap) -> SSetMap {
    let src = tensor(f.source(), g.source());
    let tgt = tensor(f.target(), g.target());
    let levels = src
        .simplices
        .iter()
        .map(|lv| {
            lv.iter()
                .map(|s| {
                    let t = TensorSimplex {
                        p: s.p.clone(),
                        q: s.q.clone(),
                        x: f.apply(s.p.cod() - 1, s.x),
                        y: g.apply(s.q.cod() - 1, s.y),
                    };
                    tgt.index[&t]
                })
                .collect()
        })
        .collect();
    SSetMap::new(src.sset, tgt.sset, levels).expect("tensor is functorial")
}

/// Levelwise product of `A` and `B`.
#[derive(Debug, Clone)]
pub struct Cartesian {
    sset: SSet,
    pairs: Vec<Vec<(usize, usize)>>,
}

impl Cartesian {
    pub fn sset(&self) -> &SSet {
        &self.sset
    }

    pub fn pairs(&self, n: usize) -> &[(usize, usize)] {
        self.pairs.get(n).map_or(&[], |v| v.as_slice())
    }
}

/// The cartesian product; an edge is marked when both components are.
pub fn cartesian(a: &SSet, b: &SSet) -> Cartesian {
    let levels = a.num_levels().min(b.num_levels());
    let mut sset = SSet::empty();
    let mut pairs = Vec::new();
    for n in 0..levels {
        let nb = b.count(n);
        let mut lv = Vec::new();
        for x in 0..a.count(n) {
            for y in 0..nb {
                let idx = if n == 0 {
                    sset.add_vertex()
                } else {
                    let faces = (0..=n).map(|i| a.face(n, x, i) * b.count(n - 1) + b.face(n, y, i)).collect();
                    sset.add_simplex(faces).unwrap()
                };
                if n == 1 && a.is_marked(x) && b.is_marked(y) {
                    sset.mark(idx).unwrap();
                }
                lv.push((x, y));
            }
        }
        pairs.push(lv);
    }
    Cartesian { sset, pairs }
}

/// The comparison `A × B → A ⊗ B`, sending `(x, y)` to `(id, id, x, y)`.
pub fn comparison(a: &SSet, b: &SSet) -> SSetMap {
    let c = cartesian(a, b);
    let t = tensor(a, b);
    let levels = c
        .pairs
        .iter()
        .enumerate()
        .map(|(n, lv)| {
            lv.iter()
                .map(|&(x, y)| {
                    let id = MonotoneMap::identity(n + 1);
                    t.index[&TensorSimplex { p: id.clone(), q: id, x, y }]
                })
                .collect()
        })
        .collect();
    SSetMap::new(c.sset, t.sset, levels).expect("comparison is a map")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JoinKind {
    /// Keeps the markings of both sides and marks nothing new.
    Join,
    /// Additionally marks every new edge between a vertex of `A` and one of `B`.
    MarkingJoin,
}

/// A simplex of a (possibly indexed) join. Cross simplices carry the
/// dimensions of their two parts and a token, which is always 0 for the
/// ordinary join.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JoinSimplex {
    Left(usize),
    Right(usize),
    Cross { a: usize, x: usize, b: usize, y: usize, t: usize },
}

/// Tokens indexing the cross simplices of a join, with their restrictions.
pub trait JoinTokens {
    fn tokens(&self, a: usize, x: usize, b: usize, y: usize) -> usize;
    /// Restriction of token `t` along `d_i` of `x`.
    fn restrict_left(&self, a: usize, x: usize, b: usize, y: usize, i: usize, t: usize) -> usize;
    /// Restriction of token `t` along `d_j` of `y`.
    fn restrict_right(&self, a: usize, x: usize, b: usize, y: usize, j: usize, t: usize) -> usize;
    /// Whether the cross edge for vertices `x`, `y` and token `t` is marked.
    fn marked(&self, x: usize, y: usize, t: usize) -> bool;
}

struct Terminal(JoinKind);

impl JoinTokens for Terminal {
    fn tokens(&self, _: usize, _: usize, _: usize, _: usize) -> usize {
        1
    }
    fn restrict_left(&self, _: usize, _: usize, _: usize, _: usize, _: usize, _: usize) -> usize {
        0
    }
    fn restrict_right(&self, _: usize, _: usize, _: usize, _: usize, _: usize, _: usize) -> usize {
        0
    }
    fn marked(&self, _: usize, _: usize, _: usize) -> bool {
        self.0 == JoinKind::MarkingJoin
    }
}

/// A join of `A` and `B` with the provenance of every simplex.
#[derive(Debug, Clone)]
pub struct Join {
    sset: SSet,
    simplices: Vec<Vec<JoinSimplex>>,
    index: HashMap<(usize, JoinSimplex), usize>,
    left_src: SSet,
    right_src: SSet,
}

impl Join {
    pub fn sset(&self) -> &SSet {
        &self.sset
    }

    pub fn into_sset(self) -> SSet {
        self.sset
    }

    pub fn simplices(&self, n: usize) -> &[JoinSimplex] {
        self.simplices.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, n: usize, s: JoinSimplex) -> Option<usize> {
        self.index.get(&(n, s)).copied()
    }

    pub fn left_simplex(&self, n: usize, x: usize) -> usize {
        self.index[&(n, JoinSimplex::Left(x))]
    }

    pub fn right_simplex(&self, n: usize, y: usize) -> usize {
        self.index[&(n, JoinSimplex::Right(y))]
    }

    /// The cross simplex of `x ∈ A_a` and `y ∈ B_b` with token 0.
    pub fn cross_simplex(&self, a: usize, x: usize, b: usize, y: usize) -> usize {
        self.index[&(a + b + 1, JoinSimplex::Cross { a, x, b, y, t: 0 })]
    }

    pub fn left_inclusion(&self) -> SSetMap {
        let a = &self.left_src;
        let levels = (0..a.num_levels())
            .map(|n| (0..a.count(n)).map(|x| self.left_simplex(n, x)).collect())
            .collect();
        SSetMap::new(a.clone(), self.sset.clone(), levels).expect("join inclusion")
    }

    pub fn right_inclusion(&self) -> SSetMap {
        let b = &self.right_src;
        let levels = (0..b.num_levels())
            .map(|n| (0..b.count(n)).map(|y| self.right_simplex(n, y)).collect())
            .collect();
        SSetMap::new(b.clone(), self.sset.clone(), levels).expect("join inclusion")
    }
}

fn join_face<T: JoinTokens>(a: &SSet, b: &SSet, tok: &T, s: JoinSimplex, n: usize, i: usize) -> JoinSimplex {
    match s {
        JoinSimplex::Left(x) => JoinSimplex::Left(a.face(n, x, i)),
        JoinSimplex::Right(y) => JoinSimplex::Right(b.face(n, y, i)),
        JoinSimplex::Cross { a: ad, x, b: bd, y, t } => {
            if i <= ad {
                if ad == 0 {
                    JoinSimplex::Right(y)
                } else {
                    JoinSimplex::Cross {
                        a: ad - 1,
                        x: a.face(ad, x, i),
                        b: bd,
                        y,
                        t: tok.restrict_left(ad, x, bd, y, i, t),
                    }
                }
            } else {
                let j = i - ad - 1;
                if bd == 0 {
                    JoinSimplex::Left(x)
                } else {
                    JoinSimplex::Cross {
                        a: ad,
                        x,
                        b: bd - 1,
                        y: b.face(bd, y, j),
                        t: tok.restrict_right(ad, x, bd, y, j, t),
                    }
                }
            }
        }
    }
}

/// The join indexed by `tok`. Simplices of each dimension are listed as
/// those of `A`, then of `B`, then cross blocks by increasing `a`, each block
/// ordered by `x`, `y`, token.
pub fn indexed_join<T: JoinTokens>(a: &SSet, b: &SSet, tok: &T) -> Join {
    let top = match (a.dim(), b.dim()) {
        (None, None) => None,
        (Some(d), None) | (None, Some(d)) => Some(d),
        (Some(da), Some(db)) => Some(da + db + 1),
    };
    let mut sset = SSet::empty();
    let mut simplices = Vec::new();
    let mut index = HashMap::new();
    for n in 0..top.map_or(0, |t| t + 1) {
        let mut level: Vec<JoinSimplex> = (0..a.count(n)).map(JoinSimplex::Left).collect();
        level.extend((0..b.count(n)).map(JoinSimplex::Right));
        for ad in 0..n {
            let bd = n - 1 - ad;
            for x in 0..a.count(ad) {
                for y in 0..b.count(bd) {
                    for t in 0..tok.tokens(ad, x, bd, y) {
                        level.push(JoinSimplex::Cross { a: ad, x, b: bd, y, t });
                    }
                }
            }
        }
        for &s in &level {
            let idx = if n == 0 {
                sset.add_vertex()
            } else {
                let faces = (0..=n).map(|i| index[&(n - 1, join_face(a, b, tok, s, n, i))]).collect();
                sset.add_simplex(faces).expect("join faces satisfy the identities")
            };
            if n == 1 {
                let m = match s {
                    JoinSimplex::Left(x) => a.is_marked(x),
                    JoinSimplex::Right(y) => b.is_marked(y),
                    JoinSimplex::Cross { x, y, t, .. } => tok.marked(x, y, t),
                };
                if m {
                    sset.mark(idx).unwrap();
                }
            }
            index.insert((n, s), idx);
        }
        simplices.push(level);
    }
    Join { sset, simplices, index, left_src: a.clone(), right_src: b.clone() }
}

pub fn join(a: &SSet, b: &SSet, kind: JoinKind) -> Join {
    indexed_join(a, b, &Terminal(kind))
}

/// `f ⋆ g`.
pub fn join_map(f: &SSetMap, g: &SSetMap, kind: JoinKind) -> SSetMap {
    let src = join(f.source(), g.source(), kind);
    let tgt = join(f.target(), g.target(), kind);
    let levels = src
        .simplices
        .iter()
        .enumerate()
        .map(|(n, lv)| {
            lv.iter()
                .map(|&s| {
                    let t = match s {
                        JoinSimplex::Left(x) => JoinSimplex::Left(f.apply(n, x)),
                        JoinSimplex::Right(y) => JoinSimplex::Right(g.apply(n, y)),
                        JoinSimplex::Cross { a, x, b, y, t } => {
                            JoinSimplex::Cross { a, x: f.apply(a, x), b, y: g.apply(b, y), t }
                        }
                    };
                    tgt.index[&(n, t)]
                })
                .collect()
        })
        .collect();
    SSetMap::new(src.sset, tgt.sset, levels).expect("join is functorial")
}

/// A finite token table for an indexed join, stored cell by cell.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndexedJoinTable {
    cells: HashMap<(usize, usize, usize, usize), JoinCell>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JoinCell {
    pub tokens: usize,
    /// `left[i][t]`: restriction of token `t` along `d_i` of the `A`-simplex.
    pub left: Vec<Vec<usize>>,
    /// `right[j][t]`: restriction along `d_j` of the `B`-simplex.
    pub right: Vec<Vec<usize>>,
    /// Marked tokens; meaningful for pairs of vertices only.
    pub marked: BTreeSet<usize>,
}

impl IndexedJoinTable {
    /// The constant table with one token everywhere: the ordinary join.
    pub fn terminal(a: &SSet, b: &SSet, kind: JoinKind) -> Self {
        Self::build(a, b, |ad, _, bd, _| {
            let faces = |d: usize| if d > 0 { vec![vec![0]; d + 1] } else { Vec::new() };
            let mut cell = JoinCell { tokens: 1, left: faces(ad), right: faces(bd), marked: BTreeSet::new() };
            if kind == JoinKind::MarkingJoin {
                cell.marked.insert(0);
            }
            cell
        })
    }

    /// Builds a table from a per-cell constructor over all pairs of simplices.
    pub fn build(a: &SSet, b: &SSet, mut cell: impl FnMut(usize, usize, usize, usize) -> JoinCell) -> Self {
        let mut cells = HashMap::new();
        for ad in 0..a.num_levels() {
            for x in 0..a.count(ad) {
                for bd in 0..b.num_levels() {
                    for y in 0..b.count(bd) {
                        cells.insert((ad, x, bd, y), cell(ad, x, bd, y));
                    }
                }
            }
        }
        IndexedJoinTable { cells }
    }

    pub fn cell(&self, a: usize, x: usize, b: usize, y: usize) -> Option<&JoinCell> {
        self.cells.get(&(a, x, b, y))
    }

    /// Checks ranges and the functoriality of restrictions: the face
    /// identities on each side, and commutation of the two sides.
    pub fn check(&self, a: &SSet, b: &SSet) -> Result<(), JoinError> {
        let get = |ad, x, bd, y| self.cell(ad, x, bd, y).ok_or(JoinError::MissingCell(ad, x, bd, y));
        for ad in 0..a.num_levels() {
            for x in 0..a.count(ad) {
                for bd in 0..b.num_levels() {
                    for y in 0..b.count(bd) {
                        let c = get(ad, x, bd, y)?;
                        if c.marked.iter().any(|&t| t >= c.tokens) {
                            return Err(JoinError::RestrictionRange(format!("marked token in ({ad},{x},{bd},{y})")));
                        }
                        let (nl, nr) = (if ad > 0 { ad + 1 } else { 0 }, if bd > 0 { bd + 1 } else { 0 });
                        if c.left.len() != nl || c.right.len() != nr {
                            return Err(JoinError::RestrictionRange(format!("arity at ({ad},{x},{bd},{y})")));
                        }
                        for i in 0..nl {
                            let f = get(ad - 1, a.face(ad, x, i), bd, y)?;
                            if c.left[i].len() != c.tokens || c.left[i].iter().any(|&t| t >= f.tokens) {
                                return Err(JoinError::RestrictionRange(format!("left {i} at ({ad},{x},{bd},{y})")));
                            }
                        }
                        for j in 0..nr {
                            let f = get(ad, x, bd - 1, b.face(bd, y, j))?;
                            if c.right[j].len() != c.tokens || c.right[j].iter().any(|&t| t >= f.tokens) {
                                return Err(JoinError::RestrictionRange(format!("right {j} at ({ad},{x},{bd},{y})")));
                            }
                        }
                    }
                }
            }
        }
        for ad in 0..a.num_levels() {
            for x in 0..a.count(ad) {
                for bd in 0..b.num_levels() {
                    for y in 0..b.count(bd) {
                        let c = &self.cells[&(ad, x, bd, y)];
                        for t in 0..c.tokens {
                            if ad >= 2 {
                                for j in 1..=ad {
                                    for i in 0..j {
                                        let xj = a.face(ad, x, j);
                                        let xi = a.face(ad, x, i);
                                        let lhs = self.restrict_left(ad - 1, xj, bd, y, i, c.left[j][t]);
                                        let rhs = self.restrict_left(ad - 1, xi, bd, y, j - 1, c.left[i][t]);
                                        if lhs != rhs {
                                            return Err(JoinError::FunctorialityViolation(format!(
                                                "left faces {i}<{j} at ({ad},{x},{bd},{y}) token {t}"
                                            )));
                                        }
                                    }
                                }
                            }
                            if bd >= 2 {
                                for j in 1..=bd {
                                    for i in 0..j {
                                        let yj = b.face(bd, y, j);
                                        let yi = b.face(bd, y, i);
                                        let lhs = self.restrict_right(ad, x, bd - 1, yj, i, c.right[j][t]);
                                        let rhs = self.restrict_right(ad, x, bd - 1, yi, j - 1, c.right[i][t]);
                                        if lhs != rhs {
                                            return Err(JoinError::FunctorialityViolation(format!(
                                                "right faces {i}<{j} at ({ad},{x},{bd},{y}) token {t}"
                                            )));
                                        }
                                    }
                                }
                            }
                            if ad >= 1 && bd >= 1 {
                                for i in 0..=ad {
                                    for j in 0..=bd {
                                        let xi = a.face(ad, x, i);
                                        let yj = b.face(bd, y, j);
                                        let lhs = self.restrict_right(ad - 1, xi, bd, y, j, c.left[i][t]);
                                        let rhs = self.restrict_left(ad, x, bd - 1, yj, i, c.right[j][t]);
                                        if lhs != rhs {
                                            return Err(JoinError::FunctorialityViolation(format!(
                                                "mixed faces {i},{j} at ({ad},{x},{bd},{y}) token {t}"
                                            )));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl JoinTokens for IndexedJoinTable {
    fn tokens(&self, a: usize, x: usize, b: usize, y: usize) -> usize {
        self.cells.get(&(a, x, b, y)).map_or(0, |c| c.tokens)
    }
    fn restrict_left(&self, a: usize, x: usize, b: usize, y: usize, i: usize, t: usize) -> usize {
        self.cells[&(a, x, b, y)].left[i][t]
    }
    fn restrict_right(&self, a: usize, x: usize, b: usize, y: usize, j: usize, t: usize) -> usize {
        self.cells[&(a, x, b, y)].right[j][t]
    }
    fn marked(&self, x: usize, y: usize, t: usize) -> bool {
        self.cells.get(&(0, x, 0, y)).is_some_and(|c| c.marked.contains(&t))
    }
}

/// The bifunctors available to the Leibniz construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Product {
    Tensor,
    Cartesian,
    Join,
    MarkingJoin,
}

impl Product {
    pub fn obj(self, a: &SSet, b: &SSet) -> SSet {
        match self {
            Product::Tensor => tensor(a, b).sset,
            Product::Cartesian => cartesian(a, b).sset,
            Product::Join => join(a, b, JoinKind::Join).sset,
            Product::MarkingJoin => join(a, b, JoinKind::MarkingJoin).sset,
        }
    }

    pub fn map(self, f: &SSetMap, g: &SSetMap) -> SSetMap {
        match self {
            Product::Tensor => tensor_map(f, g),
            Product::Cartesian => cartesian_map(f, g),
            Product::Join => join_map(f, g, JoinKind::Join),
            Product::MarkingJoin => join_map(f, g, JoinKind::MarkingJoin),
        }
    }
}

/// `f × g`.
pub fn cartesian_map(f: &SSetMap, g: &SSetMap) -> SSetMap {
    let src = cartesian(f.source(), g.source());
    let tgt = cartesian(f.target(), g.target());
    let levels = src
        .pairs
        .iter()
        .enumerate()
        .map(|(n, lv)| {
            lv.iter().map(|&(x, y)| f.apply(n, x) * g.target().count(n) + g.apply(n, y)).collect()
        })
        .collect();
    SSetMap::new(src.sset, tgt.sset, levels).expect("cartesian product is functorial")
}

/// The pushout corner map `F(A, D) +_{F(A, C)} F(B, C) → F(B, D)` of
/// `f: A → B` and `g: C → D`.
pub fn leibniz(f: &SSetMap, g: &SSetMap, product: Product) -> Result<SSetMap, SSetError> {
    let id_a = SSetMap::identity(f.source());
    let id_b = SSetMap::identity(f.target());
    let id_c = SSetMap::identity(g.source());
    let id_d = SSetMap::identity(g.target());
    let ac_to_ad = product.map(&id_a, g);
    let ac_to_bc = product.map(f, &id_c);
    let (_, to_p_from_ad, to_p_from_bc) = pushout(&ac_to_ad, &ac_to_bc)?;
    let ad_to_bd = product.map(f, &id_d);
    let bc_to_bd = product.map(&id_b, g);
    pushout_induced(&to_p_from_ad, &to_p_from_bc, &ad_to_bd, &bc_to_bd)
}
