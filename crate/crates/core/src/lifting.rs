//! Lifting problems, finite horn completion, and cell certificates:
//! explicit sequences of generator attachments presenting a cofibration.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::monoidal::{join_map, leibniz, JoinKind, Product};
use crate::search::{find_isomorphism_under, HomSearch, Preassign};
use crate::sset::{
    boundary, edge_marking, horn, marked_horn, marking_saturation, pushout, simplex, SSet, SSetError, SSetMap,
};
use crate::subdiv::cospan;
use crate::Mode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("the square does not commute")]
    NotCommuting,
    #[error("certificate source differs from the map's source")]
    SourceMismatch,
    #[error("attachment {0}: {1}")]
    Replay(usize, SSetError),
    #[error("outside the certified range: {0}")]
    RangeError(String),
    #[error(transparent)]
    SSet(#[from] SSetError),
}

/// A commutative square `top: A → X`, `left: A → B`, `right: X → Y`,
/// `bottom: B → Y`; a solution is a diagonal `B → X`.
#[derive(Debug, Clone)]
pub struct LiftingProblem {
    pub top: SSetMap,
    pub left: SSetMap,
    pub right: SSetMap,
    pub bottom: SSetMap,
}

pub fn solve_lifting(p: &LiftingProblem) -> Result<Option<SSetMap>, LiftError> {
    let lhs = p.right.after(&p.top).map_err(|_| LiftError::NotCommuting)?;
    let rhs = p.bottom.after(&p.left).map_err(|_| LiftError::NotCommuting)?;
    if lhs != rhs {
        return Err(LiftError::NotCommuting);
    }
    let (b, x) = (p.left.target(), p.top.target());
    let right = &p.right;
    let bottom = &p.bottom;
    let mut search = HomSearch::new(b, x, true).filter(move |n, s, t| right.apply(n, t) == bottom.apply(n, s));
    if !search.preassign(Preassign::Along(&p.left, &p.top)) {
        return Ok(None);
    }
    let d = search.first();
    if let Some(d) = &d {
        debug_assert_eq!(d.after(&p.left).as_ref(), Ok(&p.top));
        debug_assert_eq!(p.right.after(d).as_ref(), Ok(&p.bottom));
    }
    Ok(d)
}

/// The generating cofibrations and anodyne maps a cell can be a pushout of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellGenerator {
    Boundary(usize),
    Horn(usize, usize),
    MarkedHorn(usize, usize),
    EdgeMarking,
    MarkingSaturation,
}

impl CellGenerator {
    pub fn inclusion(self) -> Result<SSetMap, SSetError> {
        match self {
            CellGenerator::Boundary(n) => Ok(boundary(n)),
            CellGenerator::Horn(n, k) => horn(n, k),
            CellGenerator::MarkedHorn(n, k) => marked_horn(n, k),
            CellGenerator::EdgeMarking => Ok(edge_marking()),
            CellGenerator::MarkingSaturation => Ok(marking_saturation()),
        }
    }

    pub fn is_horn(self) -> bool {
        matches!(self, CellGenerator::Horn(..) | CellGenerator::MarkedHorn(..))
    }

    fn horn(n: usize, k: usize, mode: Mode) -> Self {
        if mode.is_marked() {
            CellGenerator::MarkedHorn(n, k)
        } else {
            CellGenerator::Horn(n, k)
        }
    }
}

impl fmt::Display for CellGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellGenerator::Boundary(n) => write!(f, "boundary {n}"),
            CellGenerator::Horn(n, k) => write!(f, "horn {n} {k}"),
            CellGenerator::MarkedHorn(n, k) => write!(f, "marked_horn {n} {k}"),
            CellGenerator::EdgeMarking => write!(f, "edge_marking"),
            CellGenerator::MarkingSaturation => write!(f, "marking_saturation"),
        }
    }
}

/// A generator and its attaching map, from the generator's domain into the
/// stage built so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub generator: CellGenerator,
    pub attaching: SSetMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCertificate {
    pub source: SSet,
    pub attachments: Vec<Attachment>,
}

impl CellCertificate {
    pub fn all_horns(&self) -> bool {
        self.attachments.iter().all(|a| a.generator.is_horn())
    }
}

/// Replays the attachments by pushouts. Attaching maps are read as level
/// functions into the current stage, so independent cells may be reordered.
pub fn replay(c: &CellCertificate) -> Result<SSetMap, LiftError> {
    let mut stage = c.source.clone();
    for (i, a) in c.attachments.iter().enumerate() {
        let gen = a.generator.inclusion().map_err(|e| LiftError::Replay(i, e))?;
        let attach = a.attaching.with_endpoints(gen.source().clone(), stage).map_err(|e| LiftError::Replay(i, e))?;
        stage = pushout(&attach, &gen).map_err(|e| LiftError::Replay(i, e))?.0;
    }
    // Pushouts along monos keep the earlier stage as a prefix.
    let levels = (0..c.source.num_levels()).map(|n| (0..c.source.count(n)).collect()).collect();
    Ok(SSetMap::new(c.source.clone(), stage, levels)?)
}

/// Whether replaying `c` yields `f` up to isomorphism under the source.
pub fn verify_certificate(c: &CellCertificate, f: &SSetMap) -> Result<bool, LiftError> {
    if &c.source != f.source() {
        return Err(LiftError::SourceMismatch);
    }
    let r = replay(c)?;
    Ok(find_isomorphism_under(&r, f).is_some())
}

/// A certificate for any cofibration `f`: the simplices missing from the
/// image, attached in dimension order as boundary cells, then edge marking
/// cells for the missing marks.
pub fn cellular_certificate(f: &SSetMap) -> Result<CellCertificate, LiftError> {
    if !f.is_injective() {
        return Err(LiftError::RangeError("not a cofibration".into()));
    }
    let t = f.target();
    let mut stage = f.source().clone();
    // to_stage[n][y]: the stage simplex over target simplex y.
    let mut to_stage: Vec<Vec<Option<usize>>> = (0..t.num_levels()).map(|n| vec![None; t.count(n)]).collect();
    for (n, l) in f.levels().iter().enumerate() {
        for (x, &y) in l.iter().enumerate() {
            to_stage[n][y] = Some(x);
        }
    }
    let mut attachments = Vec::new();
    for n in 0..t.num_levels() {
        for y in 0..t.count(n) {
            if to_stage[n][y].is_some() {
                continue;
            }
            let gen = boundary(n);
            let bd = gen.source();
            let levels: Vec<Vec<usize>> = (0..bd.num_levels())
                .map(|d| {
                    (0..bd.count(d))
                        .map(|s| {
                            let face = gen.apply(d, s);
                            let mono = simplex_mono(n, d, face);
                            to_stage[d][t.restrict(n, y, &mono)].expect("faces come first")
                        })
                        .collect()
                })
                .collect();
            let attaching = SSetMap::new(bd.clone(), stage.clone(), levels)?;
            let (p, _, to_c) = pushout(&attaching, &gen)?;
            to_stage[n][y] = Some(to_c.apply(n, 0));
            stage = p;
            attachments.push(Attachment { generator: CellGenerator::Boundary(n), attaching });
        }
    }
    push_marks(t, &mut stage, &mut attachments, |e| to_stage[1][e].unwrap(), |v| to_stage[0][v].unwrap())?;
    Ok(CellCertificate { source: f.source().clone(), attachments })
}

/// The vertex inclusion of simplex `s` (dimension `d`) of `Δⁿ`.
fn simplex_mono(n: usize, d: usize, s: usize) -> crate::ordcalc::MonotoneMap {
    let full = simplex(n);
    crate::ordcalc::MonotoneMap::new(n + 1, full.vertices(d, s)).unwrap()
}

fn push_marks(
    t: &SSet,
    stage: &mut SSet,
    attachments: &mut Vec<Attachment>,
    edge: impl Fn(usize) -> usize,
    vertex: impl Fn(usize) -> usize,
) -> Result<(), LiftError> {
    for &e in t.marked() {
        let se = edge(e);
        if stage.is_marked(se) {
            continue;
        }
        let gen = edge_marking();
        let levels = vec![vec![vertex(t.face(1, e, 1)), vertex(t.face(1, e, 0))], vec![se]];
        let attaching = SSetMap::new(gen.source().clone(), stage.clone(), levels)?;
        *stage = pushout(&attaching, &gen)?.0;
        attachments.push(Attachment { generator: CellGenerator::EdgeMarking, attaching });
    }
    Ok(())
}

/// `leibniz(iᵃ, iᵇ, ⊗)` as boundary cells, the missing simplices of
/// `Δᵃ ⊗ Δᵇ` in dimension order.
pub fn leibniz_boundary_certificate(a: usize, b: usize) -> Result<(CellCertificate, SSetMap), LiftError> {
    let f = leibniz(&boundary(a), &boundary(b), Product::Tensor)?;
    Ok((cellular_certificate(&f)?, f))
}

/// Attaches horns to a stage whose target simplices are determined by their
/// vertex lists, as in joins of simplices and the subdivision cospan.
struct VertexStage {
    stage: SSet,
    lookup: HashMap<Vec<usize>, usize>,
    attachments: Vec<Attachment>,
}

impl VertexStage {
    fn new(f: &SSetMap) -> Self {
        let mut lookup = HashMap::new();
        for n in 0..f.source().num_levels() {
            for x in 0..f.source().count(n) {
                lookup.insert(f.target().vertices(n, f.apply(n, x)), x);
            }
        }
        VertexStage { stage: f.source().clone(), lookup, attachments: Vec::new() }
    }

    /// Attaches `gen` on the vertices `v` (increasing target vertex indices).
    fn attach(&mut self, gen: CellGenerator, v: &[usize]) -> Result<(), LiftError> {
        let inc = gen.inclusion()?;
        let key = |s: &SSet, n: usize, x: usize| s.vertices(n, x).into_iter().map(|j| v[j]).collect::<Vec<_>>();
        let src = inc.source();
        let levels = (0..src.num_levels())
            .map(|n| (0..src.count(n)).map(|x| self.lookup[&key(src, n, x)]).collect())
            .collect();
        let attaching = SSetMap::new(src.clone(), self.stage.clone(), levels)?;
        let (p, _, to_c) = pushout(&attaching, &inc)?;
        let tgt = inc.target();
        for n in 0..tgt.num_levels() {
            for x in 0..tgt.count(n) {
                self.lookup.entry(key(tgt, n, x)).or_insert(to_c.apply(n, x));
            }
        }
        self.stage = p;
        self.attachments.push(Attachment { generator: gen, attaching });
        Ok(())
    }

    fn finish(mut self, f: &SSetMap) -> Result<CellCertificate, LiftError> {
        let t = f.target();
        let lookup = &self.lookup;
        push_marks(t, &mut self.stage, &mut self.attachments, |e| lookup[&t.vertices(1, e)], |v| lookup[&vec![v]])?;
        Ok(CellCertificate { source: f.source().clone(), attachments: self.attachments })
    }
}

/// Subsets of `items` ordered by size, then lexicographically.
fn subsets_by_size(items: &[usize]) -> Vec<Vec<usize>> {
    (0..=items.len()).flat_map(|s| items.iter().copied().combinations(s)).collect()
}

/// `Δᵏ ⋆ ∂Δᵐ → Δᵏ ⋆ Δᵐ` as pushouts of `Λ₀` horns: writing `Δᵏ = Δ⁰ ⋆ Δᵏ⁻¹`,
/// each simplex `T` of `Δᵏ⁻¹` (empty included) contributes the horn with
/// cone vertex 0 spanned by `0`, `T` and `Δᵐ`. That is `2ᵏ` cells.
pub fn point_join_horn_certificate(k: usize, m: usize) -> Result<(CellCertificate, SSetMap), LiftError> {
    let f = join_map(&SSetMap::identity(&simplex(k)), &boundary(m), JoinKind::Join);
    let mut st = VertexStage::new(&f);
    let top: Vec<usize> = (k + 1..=k + m + 1).collect();
    for t in subsets_by_size(&(1..=k).collect::<Vec<_>>()) {
        let v: Vec<usize> = std::iter::once(0).chain(t).chain(top.iter().copied()).collect();
        st.attach(CellGenerator::Horn(v.len() - 1, 0), &v)?;
    }
    let c = st.finish(&f)?;
    Ok((c, f))
}

/// The left leg `Δⁿ → Δⁿ ⋆_F Sd Δⁿ` of the subdivision cospan, as horn cells.
///
/// Flags `σ` of `Sd Δⁿ` are taken in dimension order. With `T₀` the first
/// simplex of `σ` and `c` its last vertex, the block `T₀ ⋆ σ` is filled by the
/// outer horn on `{c} ⋆ σ`, whose critical edge `c → T₀` is marked in marked
/// mode, followed for each simplex `T` of `T₀ ∖ {c}` by the inner horn on
/// `T ⋆ {c} ⋆ σ` at `c`. Marks of the summit not created by those horns are
/// added by edge marking cells at the end.
pub fn cospan_left_certificate(n: usize, mode: Mode) -> Result<(CellCertificate, SSetMap), LiftError> {
    if n > 3 {
        return Err(LiftError::RangeError(format!("n = {n} > 3")));
    }
    let a = simplex(n);
    let c = cospan(&a, mode);
    let f = c.left.clone();
    let mut st = VertexStage::new(&f);
    let sub = &c.sd;
    for m in 0..sub.sset.num_levels() {
        for s in 0..sub.sset.count(m) {
            let (first, _) = sub.endpoints(m, s);
            let t0 = a.vertices(first.0, first.1);
            let (&cone, rest) = t0.split_last().unwrap();
            let flag: Vec<usize> =
                sub.objects(m, s).into_iter().map(|o| c.summit.right_simplex(0, o)).collect();
            for t in subsets_by_size(rest) {
                let h = t.len();
                let v: Vec<usize> = t.into_iter().chain(std::iter::once(cone)).chain(flag.iter().copied()).collect();
                st.attach(CellGenerator::horn(v.len() - 1, h, mode), &v)?;
            }
        }
    }
    Ok((st.finish(&f)?, f))
}

/// How far horn completion and scanning look.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HornScope {
    /// Injective horns of dimension at least 2.
    #[default]
    Injective,
    /// Every horn map of dimension at least 1.
    All,
}

impl HornScope {
    fn min_dim(self) -> usize {
        match self {
            HornScope::Injective => 2,
            HornScope::All => 1,
        }
    }
}

fn horn_inclusion(n: usize, k: usize, mode: Mode) -> SSetMap {
    CellGenerator::horn(n, k, mode).inclusion().expect("valid horn")
}

/// Every map from `Λⁿₖ` into `x` in the scope, sorted by image.
pub fn horn_maps(x: &SSet, n: usize, k: usize, mode: Mode, scope: HornScope) -> Vec<SSetMap> {
    let inc = horn_inclusion(n, k, mode);
    let mut search = HomSearch::new(inc.source(), x, true);
    if scope == HornScope::Injective {
        search = search.injective();
    }
    let mut maps = search.all();
    maps.sort_by(|a, b| a.levels().cmp(b.levels()));
    maps
}

/// An `n`-simplex of `x` extending the horn map `h`, marked on the critical
/// edge in marked mode.
pub fn find_filler(x: &SSet, n: usize, k: usize, h: &SSetMap, mode: Mode) -> Option<usize> {
    let inc = horn_inclusion(n, k, mode);
    let full = inc.target();
    let faces: Vec<(usize, usize)> = (0..=n)
        .filter(|&i| i != k)
        .map(|i| {
            let fi = full.face(n, 0, i);
            let hx = (0..inc.source().count(n - 1)).find(|&s| inc.apply(n - 1, s) == fi).unwrap();
            (i, h.apply(n - 1, hx))
        })
        .collect();
    (0..x.count(n)).find(|&s| {
        faces.iter().all(|&(i, y)| x.face(n, s, i) == y)
            && full.marked().iter().all(|&e| {
                let mono = crate::ordcalc::MonotoneMap::new(n + 1, full.vertices(1, e)).unwrap();
                x.is_marked(x.restrict(n, s, &mono))
            })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornStatus {
    pub n: usize,
    pub k: usize,
    pub map: SSetMap,
    pub filler: Option<usize>,
}

/// Every horn of dimension up to `d` in the scope, with a filler if one exists.
pub fn horn_filler_scan(x: &SSet, d: usize, mode: Mode, scope: HornScope) -> Vec<HornStatus> {
    let mut out = Vec::new();
    for n in scope.min_dim()..=d {
        for k in 0..=n {
            for map in horn_maps(x, n, k, mode, scope) {
                let filler = find_filler(x, n, k, &map, mode);
                out.push(HornStatus { n, k, map, filler });
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Completion {
    pub result: SSet,
    pub inclusion: SSetMap,
    pub certificate: CellCertificate,
}

/// One stage of horn completion: every horn in the scope without a filler
/// gets one, freely and simultaneously. Attaching maps all land in `x`.
pub fn horn_completion_stage(x: &SSet, mode: Mode, scope: HornScope) -> Result<Completion, LiftError> {
    let top = x.dim().map_or(0, |d| d + 1);
    let mut unfilled = Vec::new();
    for n in scope.min_dim()..=top {
        let mut here = Vec::new();
        for k in 0..=n {
            for map in horn_maps(x, n, k, mode, scope) {
                if find_filler(x, n, k, &map, mode).is_none() {
                    here.push((k, map));
                }
            }
        }
        here.sort_by(|a, b| a.1.levels().cmp(b.1.levels()).then(a.0.cmp(&b.0)));
        unfilled.extend(here.into_iter().map(|(k, m)| (n, k, m)));
    }
    let mut stage = x.clone();
    let mut attachments = Vec::new();
    for (n, k, map) in unfilled {
        let gen = CellGenerator::horn(n, k, mode);
        let inc = gen.inclusion()?;
        let attaching = map.with_endpoints(inc.source().clone(), stage.clone())?;
        stage = pushout(&attaching, &inc)?.0;
        attachments.push(Attachment { generator: gen, attaching });
    }
    let levels = (0..x.num_levels()).map(|n| (0..x.count(n)).collect()).collect();
    let inclusion = SSetMap::new(x.clone(), stage.clone(), levels)?;
    Ok(Completion { result: stage, inclusion, certificate: CellCertificate { source: x.clone(), attachments } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{coproduct, dunce_hat};

    fn collapse(x: &SSet, onto: &SSet) -> SSetMap {
        let levels = (0..x.num_levels()).map(|n| vec![0; x.count(n)]).collect();
        SSetMap::new(x.clone(), onto.clone(), levels).unwrap()
    }

    #[test]
    fn lifting_examples() {
        let id = SSetMap::identity(&simplex(2));
        let p = LiftingProblem { top: id.clone(), left: id.clone(), right: id.clone(), bottom: id.clone() };
        assert_eq!(solve_lifting(&p).unwrap(), Some(id));
        // Λ²₁ into the dunce hat extends over the unique triangle.
        let dh = dunce_hat();
        let h = horn(2, 1).unwrap();
        let p = LiftingProblem {
            top: collapse(h.source(), &dh),
            left: h.clone(),
            right: SSetMap::identity(&dh),
            bottom: collapse(h.target(), &dh),
        };
        let d = solve_lifting(&p).unwrap().unwrap();
        assert_eq!(d.after(&h).unwrap(), p.top);
        // ∂Δ¹ onto two distinct points has no extension over the edge.
        let pt = simplex(0);
        let (two, _) = coproduct(&[&pt, &pt]);
        let l = crate::sset::loop_complex();
        let i1 = boundary(1);
        let p = LiftingProblem {
            top: SSetMap::new(i1.source().clone(), two.clone(), vec![vec![0, 1]]).unwrap(),
            left: i1.clone(),
            right: collapse(&two, &l),
            bottom: collapse(i1.target(), &l),
        };
        assert_eq!(solve_lifting(&p).unwrap(), None);
    }

    #[test]
    fn non_commuting_square() {
        let pt = simplex(0);
        let (two, incs) = coproduct(&[&pt, &pt]);
        let id = SSetMap::identity(&pt);
        let p = LiftingProblem {
            top: incs[0].clone(),
            left: id.clone(),
            right: SSetMap::identity(&two),
            bottom: incs[1].clone(),
        };
        assert_eq!(solve_lifting(&p), Err(LiftError::NotCommuting));
    }

    #[test]
    fn completion_of_inner_horn() {
        let x = horn(2, 1).unwrap().source().clone();
        let c = horn_completion_stage(&x, Mode::Plain, HornScope::Injective).unwrap();
        assert_eq!(c.result.f_vector(), vec![3, 3, 1]);
        assert!(verify_certificate(&c.certificate, &c.inclusion).unwrap());
        let scan = horn_filler_scan(&c.result, 2, Mode::Plain, HornScope::Injective);
        assert!(scan.iter().any(|s| s.n == 2 && s.k == 1 && s.filler.is_some()));
        // Every horn map, degenerate and 1-dimensional ones included.
        let all = horn_completion_stage(&x, Mode::Plain, HornScope::All).unwrap();
        assert_eq!(all.result.f_vector(), vec![5, 9, 5]);
        assert!(verify_certificate(&all.certificate, &all.inclusion).unwrap());
    }

    #[test]
    fn completion_trivial_cases() {
        let (pts, _) = coproduct(&[&simplex(0), &simplex(0)]);
        let c = horn_completion_stage(&pts, Mode::Plain, HornScope::Injective).unwrap();
        assert!(c.certificate.attachments.is_empty());
        assert_eq!(c.result, pts);
        // Δ² has two injective 2-horns with swapped faces and no filler.
        let d2 = simplex(2);
        let c = horn_completion_stage(&d2, Mode::Plain, HornScope::Injective).unwrap();
        let unfilled = horn_filler_scan(&d2, 3, Mode::Plain, HornScope::Injective)
            .into_iter()
            .filter(|s| s.filler.is_none())
            .count();
        assert_eq!(unfilled, 2);
        assert_eq!(c.certificate.attachments.len(), unfilled);
        assert!(verify_certificate(&c.certificate, &c.inclusion).unwrap());
        // Idempotent on a complex whose horns are all filled.
        let again = horn_completion_stage(&c.result, Mode::Plain, HornScope::Injective).unwrap();
        assert!(again.certificate.attachments.len() <= 4);
    }

    #[test]
    fn scan_examples() {
        let d2 = simplex(2);
        let scan = horn_filler_scan(&d2, 2, Mode::Plain, HornScope::All);
        // Λ¹₀ at vertex 2 and Λ¹₁ at vertex 0 have no filler.
        let unfilled1: Vec<_> = scan.iter().filter(|s| s.n == 1 && s.filler.is_none()).collect();
        assert_eq!(unfilled1.len(), 2);
        // The boundary horns of the triangle are filled by it.
        for k in 0..3 {
            let inc = horn(2, k).unwrap().with_endpoints(horn(2, k).unwrap().source().clone(), d2.clone()).unwrap();
            let s = scan.iter().find(|s| s.n == 2 && s.k == k && s.map == inc).unwrap();
            assert_eq!(s.filler, Some(0));
        }
        let scan = horn_filler_scan(&dunce_hat(), 2, Mode::Plain, HornScope::All);
        assert!(scan.iter().filter(|s| s.n == 1).all(|s| s.filler.is_some()));
        assert!(scan.iter().any(|s| s.n == 2));
        assert!(horn_filler_scan(&SSet::empty(), 3, Mode::Plain, HornScope::All).is_empty());
    }

    #[test]
    fn boundary_certificates() {
        let c = CellCertificate {
            source: boundary(2).source().clone(),
            attachments: vec![Attachment {
                generator: CellGenerator::Boundary(2),
                attaching: SSetMap::identity(boundary(2).source()),
            }],
        };
        assert!(verify_certificate(&c, &boundary(2)).unwrap());
        let (c, f) = leibniz_boundary_certificate(1, 1).unwrap();
        assert_eq!(c.attachments.len(), 3);
        assert!(verify_certificate(&c, &f).unwrap());
        let (c, f) = leibniz_boundary_certificate(1, 0).unwrap();
        assert_eq!(c.attachments.len(), 1);
        assert!(verify_certificate(&c, &f).unwrap());
        let (c, f) = leibniz_boundary_certificate(0, 0).unwrap();
        assert!(verify_certificate(&c, &f).unwrap());
    }

    #[test]
    fn reordered_cells_verify() {
        let (mut c, f) = leibniz_boundary_certificate(2, 0).unwrap();
        // The two interior edges of the prism's floor are independent cells.
        assert!(verify_certificate(&c, &f).unwrap());
        let first_dim: Vec<_> = c.attachments.iter().map(|a| a.generator).collect();
        if first_dim.len() >= 2 && first_dim[0] == first_dim[1] {
            c.attachments.swap(0, 1);
            assert!(verify_certificate(&c, &f).unwrap());
        }
    }

    #[test]
    fn point_join_certificates() {
        for (k, m) in [(0, 0), (0, 1), (1, 1), (2, 1), (1, 0)] {
            let (c, f) = point_join_horn_certificate(k, m).unwrap();
            assert_eq!(c.attachments.len(), 1 << k);
            assert!(c.attachments.iter().all(|a| matches!(a.generator, CellGenerator::Horn(_, 0))));
            assert!(verify_certificate(&c, &f).unwrap(), "k={k} m={m}");
        }
        let (c, _) = point_join_horn_certificate(0, 0).unwrap();
        assert_eq!(c.attachments[0].generator, CellGenerator::Horn(1, 0));
    }

    #[test]
    fn cospan_left_larger() {
        for n in 2..=3 {
            let (c, f) = cospan_left_certificate(n, Mode::Plain).unwrap();
            assert!(c.all_horns());
            assert!(verify_certificate(&c, &f).unwrap(), "n={n}");
        }
    }

    #[test]
    fn cospan_left_small() {
        let (c, f) = cospan_left_certificate(0, Mode::Marked).unwrap();
        assert_eq!(c.attachments.len(), 1);
        assert_eq!(c.attachments[0].generator, CellGenerator::MarkedHorn(1, 0));
        assert!(verify_certificate(&c, &f).unwrap());
        let (c, f) = cospan_left_certificate(1, Mode::Plain).unwrap();
        assert!(c.all_horns());
        assert!(verify_certificate(&c, &f).unwrap());
        let (c, f) = cospan_left_certificate(1, Mode::Marked).unwrap();
        assert!(verify_certificate(&c, &f).unwrap());
        assert!(!c.all_horns());
        assert!(cospan_left_certificate(4, Mode::Plain).is_err());
    }
}
