//! Finite semicategories and their nerves, τ₀, τ₁ presentations, and
//! saturation of markings.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::ordcalc::MonotoneMap;
use crate::sset::SSet;
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("morphism {0} has an endpoint out of range")]
    EndpointRange(usize),
    #[error("composable pair ({0}, {1}) has no composite")]
    MissingComposite(usize, usize),
    #[error("composite of ({0}, {1}) has the wrong endpoints")]
    CompositeEndpoints(usize, usize),
    #[error("composition is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("identity at object {0} is not a two-sided unit")]
    IdentityLaw(usize),
    #[error("marked morphism {0} out of range")]
    MarkedRange(usize),
    #[error("generator {0} is sent to a morphism with the wrong endpoints")]
    EndpointMismatch(usize),
    #[error("target has no identities")]
    NoIdentities,
}

/// A finite semicategory, optionally with identities and marked morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSemicat {
    objects: usize,
    morphisms: Vec<(usize, usize)>,
    /// `(f, g) ↦ g ∘ f` for `f` followed by `g`.
    compose: HashMap<(usize, usize), usize>,
    identities: Option<Vec<usize>>,
    marked: BTreeSet<usize>,
}

impl FinSemicat {
    /// `morphisms[m] = (source, target)`; `composites` lists `((f, g), g ∘ f)`.
    pub fn new(
        objects: usize,
        morphisms: Vec<(usize, usize)>,
        composites: impl IntoIterator<Item = ((usize, usize), usize)>,
        identities: Option<Vec<usize>>,
        marked: impl IntoIterator<Item = usize>,
    ) -> Result<Self, CatError> {
        let c = FinSemicat {
            objects,
            morphisms,
            compose: composites.into_iter().collect(),
            identities,
            marked: marked.into_iter().collect(),
        };
        c.check()?;
        Ok(c)
    }

    /// For constructions whose laws hold by design.
    pub(crate) fn new_unchecked(
        objects: usize,
        morphisms: Vec<(usize, usize)>,
        compose: HashMap<(usize, usize), usize>,
        marked: BTreeSet<usize>,
    ) -> Self {
        FinSemicat { objects, morphisms, compose, identities: None, marked }
    }

    fn check(&self) -> Result<(), CatError> {
        for (m, &(s, t)) in self.morphisms.iter().enumerate() {
            if s >= self.objects || t >= self.objects {
                return Err(CatError::EndpointRange(m));
            }
        }
        let n = self.morphisms.len();
        for f in 0..n {
            for g in 0..n {
                if self.morphisms[f].1 != self.morphisms[g].0 {
                    continue;
                }
                let h = *self.compose.get(&(f, g)).ok_or(CatError::MissingComposite(f, g))?;
                if h >= n || self.morphisms[h] != (self.morphisms[f].0, self.morphisms[g].1) {
                    return Err(CatError::CompositeEndpoints(f, g));
                }
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(fg) = self.then(f, g) else { continue };
                for h in 0..n {
                    let Some(gh) = self.then(g, h) else { continue };
                    if self.then(fg, h) != self.then(f, gh) {
                        return Err(CatError::NotAssociative(f, g, h));
                    }
                }
            }
        }
        if let Some(ids) = &self.identities {
            for (x, &id) in ids.iter().enumerate() {
                if id >= n || self.morphisms[id] != (x, x) {
                    return Err(CatError::IdentityLaw(x));
                }
                for f in 0..n {
                    let (s, t) = self.morphisms[f];
                    if (s == x && self.then(id, f) != Some(f)) || (t == x && self.then(f, id) != Some(f)) {
                        return Err(CatError::IdentityLaw(x));
                    }
                }
            }
        }
        if let Some(&m) = self.marked.iter().find(|&&m| m >= n) {
            return Err(CatError::MarkedRange(m));
        }
        Ok(())
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn morphisms(&self) -> &[(usize, usize)] {
        &self.morphisms
    }

    pub fn identities(&self) -> Option<&[usize]> {
        self.identities.as_deref()
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    /// `g ∘ f`, if `f` and `g` are composable.
    pub fn then(&self, f: usize, g: usize) -> Option<usize> {
        self.compose.get(&(f, g)).copied()
    }

    pub fn identity(&self, x: usize) -> Option<usize> {
        self.identities.as_ref().map(|ids| ids[x])
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let ids = self.identities.as_ref()?;
        let (s, t) = self.morphisms[f];
        (0..self.morphisms.len())
            .find(|&g| self.then(f, g) == Some(ids[s]) && self.then(g, f) == Some(ids[t]))
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    /// The poset `[n]` as a category. Morphisms are the pairs `i <= j` in
    /// lexicographic order.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> =
            (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
        let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut comp = Vec::new();
        for (f, &(a, b)) in pairs.iter().enumerate() {
            for (g, &(b2, c)) in pairs.iter().enumerate() {
                if b == b2 {
                    comp.push(((f, g), index[&(a, c)]));
                }
            }
        }
        let ids = (0..=n).map(|i| index[&(i, i)]).collect();
        FinSemicat::new(n + 1, pairs, comp, Some(ids), []).expect("posets are categories")
    }

    /// The commutative square `[1] × [1]`.
    pub fn commutative_square() -> Self {
        let le = |(a, b): (usize, usize), (c, d): (usize, usize)| a <= c && b <= d;
        let objs = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let mut pairs = Vec::new();
        for (i, &p) in objs.iter().enumerate() {
            for (j, &q) in objs.iter().enumerate() {
                if le(p, q) {
                    pairs.push((i, j));
                }
            }
        }
        let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut comp = Vec::new();
        for (f, &(a, b)) in pairs.iter().enumerate() {
            for (g, &(b2, c)) in pairs.iter().enumerate() {
                if b == b2 {
                    comp.push(((f, g), index[&(a, c)]));
                }
            }
        }
        let ids = (0..4).map(|i| index[&(i, i)]).collect();
        FinSemicat::new(4, pairs, comp, Some(ids), []).expect("posets are categories")
    }

    /// The cyclic group of order `k` as a one-object groupoid.
    pub fn cyclic_group(k: usize) -> Self {
        let comp = (0..k).flat_map(|a| (0..k).map(move |b| ((a, b), (a + b) % k)));
        FinSemicat::new(1, vec![(0, 0); k], comp, Some(vec![0]), []).expect("groups are categories")
    }

    /// A single arrow between two objects, no identities.
    pub fn free_arrow(marked: bool) -> Self {
        let m: Vec<usize> = if marked { vec![0] } else { Vec::new() };
        FinSemicat::new(2, vec![(0, 1)], [], None, m).unwrap()
    }
}

/// A truncated nerve and the chain behind each simplex.
#[derive(Debug, Clone)]
pub struct Nerve {
    pub sset: SSet,
    /// `chains[n][s]`: the `n` composable morphisms of simplex `s` (`n >= 1`).
    pub chains: Vec<Vec<Vec<usize>>>,
}

/// Nerve up to dimension `d`. Edges are marked when the morphism is marked,
/// or when `mark_isos` is set and the morphism is invertible.
pub fn nerve_truncated(c: &FinSemicat, d: usize, mark_isos: bool) -> Nerve {
    let mut sset = SSet::empty();
    for _ in 0..c.objects {
        sset.add_vertex();
    }
    let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..c.objects).map(|_| Vec::new()).collect()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for n in 1..=d {
        let mut level: Vec<Vec<usize>> = Vec::new();
        if n == 1 {
            level = (0..c.morphisms.len()).map(|m| vec![m]).collect();
        } else {
            for ch in &chains[n - 1] {
                let end = c.morphisms[*ch.last().unwrap()].1;
                for (m, &(s, _)) in c.morphisms.iter().enumerate() {
                    if s == end {
                        let mut next = ch.clone();
                        next.push(m);
                        level.push(next);
                    }
                }
            }
        }
        if level.is_empty() {
            break;
        }
        for ch in &level {
            let faces: Vec<usize> = if n == 1 {
                let (s, t) = c.morphisms[ch[0]];
                vec![t, s]
            } else {
                (0..=n)
                    .map(|i| {
                        let f: Vec<usize> = if i == 0 {
                            ch[1..].to_vec()
                        } else if i == n {
                            ch[..n - 1].to_vec()
                        } else {
                            let mut f = ch[..i - 1].to_vec();
                            f.push(c.then(ch[i - 1], ch[i]).unwrap());
                            f.extend_from_slice(&ch[i + 1..]);
                            f
                        };
                        index[&f]
                    })
                    .collect()
            };
            let idx = sset.add_simplex(faces).expect("nerve faces satisfy the identities");
            if n == 1 && (c.marked.contains(&ch[0]) || (mark_isos && c.is_iso(ch[0]))) {
                sset.mark(idx).unwrap();
            }
            index.insert(ch.clone(), idx);
        }
        chains.push(level);
    }
    Nerve { sset, chains }
}

/// Connected components of the vertices: `(class of each vertex, number of classes)`.
pub fn tau0(x: &SSet) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::new(x.count(0));
    for e in 0..x.count(1) {
        uf.union(x.face(1, e, 0), x.face(1, e, 1));
    }
    uf.labels()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tau1Variant {
    /// Localize at the marked edges only.
    Category,
    /// Invert every edge.
    Groupoid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub source: usize,
    pub target: usize,
    pub invertible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Gen(usize),
    Inv(usize),
}

/// A formal composable path, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatPresentation {
    pub objects: usize,
    pub generators: Vec<Generator>,
    pub relations: Vec<(Path, Path)>,
}

/// Generators are the edges; each triangle `σ` contributes `d₂σ · d₀σ = d₁σ`;
/// each invertible generator gets its two inverse laws.
pub fn tau1_presentation(x: &SSet, variant: Tau1Variant) -> CatPresentation {
    let generators: Vec<Generator> = (0..x.count(1))
        .map(|e| Generator {
            source: x.face(1, e, 1),
            target: x.face(1, e, 0),
            invertible: variant == Tau1Variant::Groupoid || x.is_marked(e),
        })
        .collect();
    let mut relations = Vec::new();
    for t in 0..x.count(2) {
        let f = x.faces(2, t);
        let (g0, g1, g2) = (f[0], f[1], f[2]);
        relations.push((
            Path { source: generators[g2].source, target: generators[g0].target, steps: vec![Step::Gen(g2), Step::Gen(g0)] },
            Path { source: generators[g1].source, target: generators[g1].target, steps: vec![Step::Gen(g1)] },
        ));
    }
    for (e, g) in generators.iter().enumerate() {
        if g.invertible {
            relations.push((
                Path { source: g.source, target: g.source, steps: vec![Step::Gen(e), Step::Inv(e)] },
                Path { source: g.source, target: g.source, steps: Vec::new() },
            ));
            relations.push((
                Path { source: g.target, target: g.target, steps: vec![Step::Inv(e), Step::Gen(e)] },
                Path { source: g.target, target: g.target, steps: Vec::new() },
            ));
        }
    }
    CatPresentation { objects: x.count(0), generators, relations }
}

/// A functor out of a presented category, by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub generators: Vec<usize>,
}

fn evaluate_path(c: &FinSemicat, f: &Functor, p: &Path) -> Option<usize> {
    let mut cur = c.identity(f.objects[p.source])?;
    for step in &p.steps {
        let m = match *step {
            Step::Gen(e) => f.generators[e],
            Step::Inv(e) => c.inverse(f.generators[e])?,
        };
        cur = c.then(cur, m)?;
    }
    Some(cur)
}

/// The functor determined by an assignment, if every relation holds in `c`
/// and invertible generators land on isomorphisms.
pub fn presentation_evaluate(
    p: &CatPresentation,
    c: &FinSemicat,
    objects: &[usize],
    generators: &[usize],
) -> Result<Option<Functor>, CatError> {
    if c.identities.is_none() {
        return Err(CatError::NoIdentities);
    }
    for (e, g) in p.generators.iter().enumerate() {
        let m = *generators.get(e).ok_or(CatError::EndpointMismatch(e))?;
        if m >= c.morphisms.len() || c.morphisms[m] != (objects[g.source], objects[g.target]) {
            return Err(CatError::EndpointMismatch(e));
        }
    }
    let f = Functor { objects: objects.to_vec(), generators: generators.to_vec() };
    if p.generators.iter().enumerate().any(|(e, g)| g.invertible && !c.is_iso(f.generators[e])) {
        return Ok(None);
    }
    for (lhs, rhs) in &p.relations {
        match (evaluate_path(c, &f, lhs), evaluate_path(c, &f, rhs)) {
            (Some(a), Some(b)) if a == b => {}
            _ => return Ok(None),
        }
    }
    Ok(Some(f))
}

/// Outcome of comparing `τ₁` of the marked nerve of a category with the category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    /// The identity assignment evaluates to a functor `τ₁ N C → C`.
    pub functor: bool,
    /// Generators correspond bijectively to morphisms.
    pub bijective_on_generators: bool,
    /// Every composable pair has its composition relation.
    pub composition_relations: bool,
    /// Every identity generator is invertible and idempotent, hence an identity.
    pub identities_collapse: bool,
}

impl RoundTrip {
    pub fn is_iso(&self) -> bool {
        self.functor && self.bijective_on_generators && self.composition_relations && self.identities_collapse
    }
}

/// Checks `τ₁(N≤d C) ≅ C` for a category `C`, with isomorphisms marked in the
/// nerve. The comparison functor sends each generator to its morphism; its
/// inverse sends each morphism to its generator, which is a functor exactly
/// when the composition relations are present and identity generators
/// collapse to empty paths. Both are checked on the presentation itself.
pub fn tau1_nerve_round_trip(c: &FinSemicat, d: usize) -> Result<RoundTrip, CatError> {
    let ids = c.identities.clone().ok_or(CatError::NoIdentities)?;
    let nerve = nerve_truncated(c, d, true);
    let p = tau1_presentation(&nerve.sset, Tau1Variant::Category);
    let gen_of: Vec<usize> = nerve.chains.get(1).map_or(Vec::new(), |l| l.iter().map(|ch| ch[0]).collect());
    let objects: Vec<usize> = (0..c.objects).collect();
    let functor = presentation_evaluate(&p, c, &objects, &gen_of)?.is_some();
    let mut seen = vec![false; c.morphisms.len()];
    for &m in &gen_of {
        seen[m] = true;
    }
    let bijective_on_generators = gen_of.len() == c.morphisms.len() && seen.iter().all(|&b| b);
    let mut gen_index = vec![usize::MAX; c.morphisms.len()];
    for (e, &m) in gen_of.iter().enumerate() {
        gen_index[m] = e;
    }
    let rels: HashSet<(Vec<Step>, Vec<Step>)> =
        p.relations.iter().map(|(l, r)| (l.steps.clone(), r.steps.clone())).collect();
    let mut composition_relations = bijective_on_generators;
    if composition_relations {
        'outer: for f in 0..c.morphisms.len() {
            for g in 0..c.morphisms.len() {
                if let Some(h) = c.then(f, g) {
                    let key = (
                        vec![Step::Gen(gen_index[f]), Step::Gen(gen_index[g])],
                        vec![Step::Gen(gen_index[h])],
                    );
                    if !rels.contains(&key) {
                        composition_relations = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    let identities_collapse = bijective_on_generators
        && ids.iter().all(|&id| {
            let e = gen_index[id];
            p.generators[e].invertible
                && rels.contains(&(vec![Step::Gen(e), Step::Gen(e)], vec![Step::Gen(e)]))
        });
    Ok(RoundTrip { functor, bijective_on_generators, composition_relations, identities_collapse })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Saturation {
    TwoOfThree,
    TwoOfSix,
}

/// The least marking containing the given one and closed under the rule.
pub fn saturate_marking(x: &SSet, rule: Saturation) -> SSet {
    let mut marked: BTreeSet<usize> = x.marked().clone();
    let edge = |t: usize, i: usize, j: usize| x.restrict(3, t, &MonotoneMap::new(4, vec![i, j]).unwrap());
    loop {
        let before = marked.len();
        for t in 0..x.count(2) {
            let f = x.faces(2, t);
            let m: Vec<bool> = f.iter().map(|e| marked.contains(e)).collect();
            if m.iter().filter(|&&b| b).count() == 2 {
                for &e in f {
                    marked.insert(e);
                }
            }
        }
        if rule == Saturation::TwoOfSix {
            for t in 0..x.count(3) {
                if marked.contains(&edge(t, 0, 2)) && marked.contains(&edge(t, 1, 3)) {
                    for i in 0..4 {
                        for j in i + 1..4 {
                            marked.insert(edge(t, i, j));
                        }
                    }
                }
            }
        }
        if marked.len() == before {
            break;
        }
    }
    x.clone().with_marking(marked).expect("edges stay in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, loop_complex, simplex, simplex_table};

    #[test]
    fn nerve_of_chain() {
        let c = FinSemicat::chain(1);
        assert_eq!(nerve_truncated(&c, 3, false).sset.f_vector(), vec![2, 3, 4, 5]);
        let empty = FinSemicat::new(1, vec![], [], None, []).unwrap();
        assert_eq!(nerve_truncated(&empty, 2, false).sset.f_vector(), vec![1]);
        let arrow = nerve_truncated(&FinSemicat::free_arrow(true), 1, false).sset;
        assert_eq!(arrow, simplex(1).fully_marked());
    }

    #[test]
    fn associativity_checked() {
        // Two idempotents e, f on one object with e∘f, f∘e chosen inconsistently.
        let comp = [((0, 0), 0), ((1, 1), 1), ((0, 1), 0), ((1, 0), 0)];
        assert!(FinSemicat::new(1, vec![(0, 0), (0, 0)], comp, None, []).is_ok());
        let comp = [((0, 0), 1), ((1, 1), 1), ((0, 1), 0), ((1, 0), 1)];
        assert!(matches!(
            FinSemicat::new(1, vec![(0, 0), (0, 0)], comp, None, []),
            Err(CatError::NotAssociative(..))
        ));
    }

    #[test]
    fn tau0_examples() {
        assert_eq!(tau0(boundary(1).source()).1, 2);
        assert_eq!(tau0(&simplex(2)).1, 1);
    }

    #[test]
    fn tau1_examples() {
        let p = tau1_presentation(&simplex(1), Tau1Variant::Category);
        assert_eq!((p.objects, p.generators.len(), p.relations.len()), (2, 1, 0));
        let p = tau1_presentation(&loop_complex(), Tau1Variant::Groupoid);
        assert_eq!(p.objects, 1);
        assert_eq!(p.generators.len(), 1);
        assert!(p.generators[0].invertible);
        // Only the two inverse laws.
        assert_eq!(p.relations.len(), 2);
    }

    #[test]
    fn evaluate_rejects_bad_assignment() {
        let c = FinSemicat::chain(2);
        let p = tau1_presentation(&simplex(2), Tau1Variant::Category);
        // Edges of Δ²: 01, 02, 12. Morphisms of [2]: 00 01 02 11 12 22.
        let ok = presentation_evaluate(&p, &c, &[0, 1, 2], &[1, 2, 4]).unwrap();
        assert!(ok.is_some());
        let empty = CatPresentation { objects: 0, generators: vec![], relations: vec![] };
        assert!(presentation_evaluate(&empty, &c, &[], &[]).unwrap().is_some());
        assert_eq!(
            presentation_evaluate(&p, &c, &[0, 1, 2], &[1, 1, 4]),
            Err(CatError::EndpointMismatch(1))
        );
        // A relation-violating assignment into a category with two parallel arrows.
        let two = FinSemicat::new(
            2,
            vec![(0, 0), (1, 1), (0, 1), (0, 1)],
            [((0, 0), 0), ((1, 1), 1), ((0, 2), 2), ((0, 3), 3), ((2, 1), 2), ((3, 1), 3)],
            Some(vec![0, 1]),
            [],
        )
        .unwrap();
        let t = simplex_table(2);
        let x = t.sset.clone();
        let p = tau1_presentation(&x, Tau1Variant::Category);
        // Collapse vertices 1, 2 onto object 1: 01 ↦ a, 12 ↦ id, 02 ↦ b ≠ a.
        let r = presentation_evaluate(&p, &two, &[0, 1, 1], &[2, 3, 1]).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn round_trip_on_small_categories() {
        for c in [FinSemicat::chain(0), FinSemicat::chain(2), FinSemicat::commutative_square(), FinSemicat::cyclic_group(3)] {
            let r = tau1_nerve_round_trip(&c, 3).unwrap();
            assert!(r.is_iso(), "{r:?}");
        }
        // Truncating below dimension 2 loses the composition relations.
        let r = tau1_nerve_round_trip(&FinSemicat::chain(2), 1).unwrap();
        assert!(!r.composition_relations);
    }

    #[test]
    fn saturation_examples() {
        let mut t = simplex_table(2);
        t.mark_pairs(&[[0, 1], [1, 2]]);
        let s = saturate_marking(&t.sset, Saturation::TwoOfThree);
        assert_eq!(s.marked().len(), 3);
        let mut t = simplex_table(3);
        t.mark_pairs(&[[0, 2], [1, 3]]);
        assert_eq!(saturate_marking(&t.sset, Saturation::TwoOfSix).marked().len(), 6);
        assert_eq!(saturate_marking(&t.sset, Saturation::TwoOfThree).marked().len(), 2);
        let b = boundary(1).source().clone();
        assert_eq!(saturate_marking(&b, Saturation::TwoOfSix), b);
    }
}
