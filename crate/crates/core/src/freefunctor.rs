//! The free simplicial set monad `UL` on semisimplicial sets, truncated to a
//! chosen dimension, and the homotopy `H` between `ηUL` and `ULη`.

use std::collections::HashMap;

use thiserror::Error;

use crate::ordcalc::{
    adhesivity_check, enumerate, pullback_along_mono, pushout_along_mono, reedy_factorize,
    AdhesivityCube, Class, MonotoneMap, OrdError,
};
use crate::sset::{SSet, SSetMap};
use crate::Mode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HError {
    #[error("input maps do not commute")]
    NotCommuting,
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Ord(#[from] OrdError),
}

/// A simplex `(s, x)` of `UL X`: an epi `s: [n] ↠ [k]` and a `k`-simplex `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ULSimplex {
    pub s: MonotoneMap,
    pub x: usize,
}

#[derive(Debug, Clone)]
pub struct UL {
    pub sset: SSet,
    simplices: Vec<Vec<ULSimplex>>,
    index: HashMap<(usize, ULSimplex), usize>,
}

impl UL {
    pub fn simplices(&self, n: usize) -> &[ULSimplex] {
        self.simplices.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, n: usize, s: &ULSimplex) -> Option<usize> {
        self.index.get(&(n, s.clone())).copied()
    }
}

/// `UL X` up to dimension `d`. The `d_i`-face of `(s, x)` is `(s', x·m)` where
/// `s ∘ d_i = m ∘ s'` is the Reedy factorization. An edge `(id, f)` is marked
/// when `f` is; in marked mode the degenerate edges `(s₀, a)` are marked too.
pub fn ul_truncated(x: &SSet, d: usize, mode: Mode) -> UL {
    let mut sset = SSet::empty();
    let mut simplices: Vec<Vec<ULSimplex>> = Vec::new();
    let mut index = HashMap::new();
    for n in 0..=d {
        let mut level = Vec::new();
        for k in 0..=n {
            if x.count(k) == 0 {
                continue;
            }
            for s in enumerate(n + 1, k + 1, Class::Epi) {
                for b in 0..x.count(k) {
                    level.push(ULSimplex { s: s.clone(), x: b });
                }
            }
        }
        if level.is_empty() {
            break;
        }
        for simp in &level {
            let idx = if n == 0 {
                sset.add_vertex()
            } else {
                let faces = (0..=n)
                    .map(|i| {
                        let (s2, m) = reedy_factorize(&simp.s.compose(&MonotoneMap::face(n + 1, i)));
                        let k = simp.s.cod() - 1;
                        let f = ULSimplex { s: s2, x: x.restrict(k, simp.x, &m) };
                        index[&(n - 1, f)]
                    })
                    .collect();
                sset.add_simplex(faces).expect("UL faces satisfy the identities")
            };
            if n == 1 {
                let degenerate = simp.s.cod() == 1;
                if (degenerate && mode.is_marked()) || (!degenerate && x.is_marked(simp.x)) {
                    sset.mark(idx).unwrap();
                }
            }
            index.insert((n, simp.clone()), idx);
        }
        simplices.push(level);
    }
    UL { sset, simplices, index }
}

/// `UL f`: `(s, x) ↦ (s, f x)`.
pub fn ul_map(f: &SSetMap, d: usize, mode: Mode) -> SSetMap {
    let a = ul_truncated(f.source(), d, mode);
    let b = ul_truncated(f.target(), d, mode);
    let levels = a
        .simplices
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|s| {
                    let k = s.s.cod() - 1;
                    b.index[&(n, ULSimplex { s: s.s.clone(), x: f.apply(k, s.x) })]
                })
                .collect()
        })
        .collect();
    SSetMap::new(a.sset, b.sset, levels).expect("UL is functorial")
}

/// The unit `x ↦ (id, x)` from the `d`-truncation of `X`.
pub fn eta(x: &SSet, d: usize, mode: Mode) -> SSetMap {
    let ul = ul_truncated(x, d, mode);
    let src = x.truncate(d);
    let levels = (0..src.num_levels())
        .map(|n| {
            (0..src.count(n))
                .map(|i| ul.index[&(n, ULSimplex { s: MonotoneMap::identity(n + 1), x: i })])
                .collect()
        })
        .collect();
    SSetMap::new(src, ul.sset, levels).expect("the unit is a map")
}

/// The multiplication `(s, (t, x)) ↦ (t ∘ s, x)`.
pub fn mu(x: &SSet, d: usize, mode: Mode) -> SSetMap {
    let ul = ul_truncated(x, d, mode);
    let ulul = ul_truncated(&ul.sset, d, mode);
    let levels = ulul
        .simplices
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|outer| {
                    let k = outer.s.cod() - 1;
                    let inner = &ul.simplices[k][outer.x];
                    ul.index[&(n, ULSimplex { s: inner.s.compose(&outer.s), x: inner.x })]
                })
                .collect()
        })
        .collect();
    SSetMap::new(ulul.sset, ul.sset, levels).expect("the multiplication is a map")
}

/// Which of the monad laws fail on the `d`-truncation of `X`: the two unit
/// laws and associativity of `μ`.
pub fn monad_law_failures(x: &SSet, d: usize, mode: Mode) -> Vec<&'static str> {
    let ul = ul_truncated(x, d, mode);
    let m = mu(x, d, mode);
    let id = SSetMap::identity(&ul.sset);
    let mut failures = Vec::new();
    if m.after(&eta(&ul.sset, d, mode)).as_ref() != Ok(&id) {
        failures.push("mu . eta UL");
    }
    if m.after(&ul_map(&eta(x, d, mode), d, mode)).as_ref() != Ok(&id) {
        failures.push("mu . UL eta");
    }
    let outer = m.after(&mu(&ul.sset, d, mode));
    let inner = m.after(&ul_map(&m, d, mode));
    if outer.is_err() || outer != inner {
        failures.push("mu . mu UL = mu . UL mu");
    }
    failures
}

/// An object `[1] ← [n] ↠ [k]` of the indexing category of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HInput {
    pub phi: MonotoneMap,
    pub s: MonotoneMap,
}

/// The factorization `[n] ↠ [m] ↠ [k]` assigned by `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HOutput {
    pub e1: MonotoneMap,
    pub e2: MonotoneMap,
}

struct HData {
    out: HOutput,
    n1: MonotoneMap,
    r1: MonotoneMap,
    k1: MonotoneMap,
    m2: MonotoneMap,
}

fn h_data(input: &HInput) -> Result<HData, HError> {
    let HInput { phi, s } = input;
    if phi.cod() != 2 || phi.dom() != s.dom() || !s.is_epi() || s.dom() == 0 {
        return Err(HError::BadInput("expected [1] <- [n] ->> [k]".into()));
    }
    let top = MonotoneMap::new(2, vec![1]).unwrap();
    let (n1, _) = pullback_along_mono(phi, &top)?;
    let (r1, k1) = reedy_factorize(&s.compose(&n1));
    let (e1, m2) = pushout_along_mono(&n1, &r1)?;
    // e2 is induced by s on [n] and the image inclusion on [k1].
    let mut e2 = vec![usize::MAX; e1.cod()];
    for (i, &p) in e1.values().iter().enumerate() {
        e2[p] = s.apply(i);
    }
    let e2 = MonotoneMap::new(s.cod(), e2)?;
    debug_assert_eq!(e2.compose(&m2), k1);
    Ok(HData { out: HOutput { e1, e2 }, n1, r1, k1, m2 })
}

/// Pull back `1: [0] → [1]` along `φ` to get `[n₁] ↪ [n]`, Reedy factorize
/// `[n₁] → [k]` as `[n₁] ↠ [k₁] ↪ [k]`, and push out; the pushout `[m]`
/// sits between `[n]` and `[k]`.
pub fn homotopy_h(phi: &MonotoneMap, s: &MonotoneMap) -> Result<HOutput, HError> {
    Ok(h_data(&HInput { phi: phi.clone(), s: s.clone() })?.out)
}

/// A morphism of inputs: monos `a: [n'] ↪ [n]` and `b: [k'] ↪ [k]` with
/// `φ ∘ a = φ'` and `s ∘ a = b ∘ s'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HMorphism {
    pub a: MonotoneMap,
    pub b: MonotoneMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HMorphismOutput {
    /// The induced map `[m'] → [m]`.
    pub c: MonotoneMap,
    /// The cube of the construction, with `c` as its bottom right edge.
    pub cube: AdhesivityCube,
}

/// The map `[m'] → [m]` induced between the pushouts, together with the cube
/// it is the last edge of.
pub fn homotopy_h_morphism(
    source: &HInput,
    target: &HInput,
    mor: &HMorphism,
) -> Result<HMorphismOutput, HError> {
    let HMorphism { a, b } = mor;
    if !a.is_mono() || !b.is_mono() {
        return Err(HError::BadInput("morphism components must be monos".into()));
    }
    let phi_a = target.phi.after(a).map_err(|_| HError::NotCommuting)?;
    let s_a = target.s.after(a).map_err(|_| HError::NotCommuting)?;
    if phi_a != source.phi || b.after(&source.s).ok() != Some(s_a) {
        return Err(HError::NotCommuting);
    }
    let back = h_data(source)?;
    let front = h_data(target)?;
    let mut c = vec![usize::MAX; back.out.e1.cod()];
    for (i, &p) in back.out.e1.values().iter().enumerate() {
        c[p] = front.out.e1.apply(a.apply(i));
    }
    let c = MonotoneMap::new(front.out.e1.cod(), c)?;
    let via = |outer: &MonotoneMap, inner: &MonotoneMap, into: &MonotoneMap| {
        let values = inner.values().iter().map(|&v| into.preimage(outer.apply(v)).unwrap()).collect();
        MonotoneMap::new(into.dom(), values)
    };
    let a1 = via(a, &back.n1, &front.n1)?;
    let x1 = via(b, &back.k1, &front.k1)?;
    let cube = AdhesivityCube {
        back_top: back.n1,
        back_left: back.r1,
        back_right: back.out.e1,
        back_bottom: back.m2,
        front_top: front.n1,
        front_left: front.r1,
        front_right: front.out.e1,
        front_bottom: front.m2,
        a: a1,
        b: a.clone(),
        x: x1,
        y: c.clone(),
    };
    Ok(HMorphismOutput { c, cube })
}

/// An input `[1]ₘ ← [1]ₘ ↠ [k]` whose middle object is the marked edge.
/// `k` is `[0]` or `[1]ₘ`; in the latter case `s` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedHInput {
    pub phi: MonotoneMap,
    pub codomain_marked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedHOutput {
    pub e1: MonotoneMap,
    pub e2: MonotoneMap,
    /// Whether `[m]` is `[1]ₘ`.
    pub middle_marked: bool,
    pub codomain_marked: bool,
}

/// The six inputs `[1]ₘ ← [1]ₘ ↠ [k]`, in the order `k = [0]` then `k = [1]ₘ`.
pub fn marked_h_inputs() -> Vec<MarkedHInput> {
    [false, true]
        .into_iter()
        .flat_map(|cm| enumerate(2, 2, Class::All).into_iter().map(move |phi| MarkedHInput { phi, codomain_marked: cm }))
        .collect()
}

/// Restrict along `[1] → [1]ₘ`, apply `H`, then push the first factor out along
/// `[1] → [1]ₘ`. That pushout is `[1]ₘ` when the first factor is an iso and `[0]`
/// when it collapses the edge.
pub fn homotopy_h_marked(input: &MarkedHInput) -> Result<MarkedHOutput, HError> {
    if input.phi.dom() != 2 || input.phi.cod() != 2 {
        return Err(HError::BadInput("φ must be a map [1] → [1]".into()));
    }
    let s = if input.codomain_marked { MonotoneMap::identity(2) } else { MonotoneMap::degeneracy(1, 0) };
    let out = homotopy_h(&input.phi, &s)?;
    let middle_marked = out.e1.cod() == 2;
    Ok(MarkedHOutput { e1: out.e1, e2: out.e2, middle_marked, codomain_marked: input.codomain_marked })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HReport {
    pub cells: usize,
    pub morphisms: usize,
    pub composable_pairs: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl HReport {
    fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(what);
        }
    }
}

/// The morphism into `target` over the mono `a`: `s ∘ a` factors uniquely as
/// `b ∘ s'`.
fn restrict_input(target: &HInput, a: &MonotoneMap) -> (HInput, HMorphism) {
    let (s2, b) = reedy_factorize(&target.s.compose(a));
    (HInput { phi: target.phi.compose(a), s: s2 }, HMorphism { a: a.clone(), b })
}

/// Exhaustive check of `H` on all inputs with `n ≤ d`: the factorization and
/// boundary laws on objects, and on morphisms commutation, monicity,
/// agreement with the adhesivity lemma, identities and composition.
pub fn verify_h(d: usize) -> HReport {
    let mut report = HReport::default();
    for n in 0..=d {
        for phi in enumerate(n + 1, 2, Class::All) {
            for k in 0..=n {
                for s in enumerate(n + 1, k + 1, Class::Epi) {
                    report.cells += 1;
                    let input = HInput { phi: phi.clone(), s: s.clone() };
                    check_cell(&input, &mut report);
                }
            }
        }
    }
    report
}

fn check_cell(input: &HInput, report: &mut HReport) {
    let tag = format!("φ={:?} s={:?}", input.phi, input.s);
    let out = match h_data(input) {
        Ok(h) => h.out,
        Err(e) => return report.fail(format!("{tag}: {e}")),
    };
    if !out.e1.is_epi() || !out.e2.is_epi() || out.e2.compose(&out.e1) != input.s {
        report.fail(format!("{tag}: e2∘e1 ≠ s"));
    }
    let n = input.phi.dom();
    if input.phi.values().iter().all(|&v| v == 0) && !out.e1.is_identity() {
        report.fail(format!("{tag}: constant 0 but e1 not iso"));
    }
    if input.phi.values().iter().all(|&v| v == 1) && !out.e2.is_identity() {
        report.fail(format!("{tag}: constant 1 but e2 not iso"));
    }
    let id = MonotoneMap::identity(n);
    let monos: Vec<Vec<MonotoneMap>> = (1..=n).map(|p| enumerate(p, n, Class::Mono)).collect();
    for a2 in monos.iter().flatten() {
        report.morphisms += 1;
        let (mid, m2) = restrict_input(input, a2);
        let c2 = match homotopy_h_morphism(&mid, input, &m2) {
            Ok(o) => {
                if !o.c.is_mono() {
                    report.fail(format!("{tag}: induced map over {a2:?} not mono"));
                }
                match adhesivity_check(&o.cube) {
                    Ok((p, q)) if p && q => {}
                    Ok(pq) => report.fail(format!("{tag}: cube over {a2:?} gives {pq:?}")),
                    Err(e) => report.fail(format!("{tag}: cube over {a2:?}: {e}")),
                }
                let (e1m, e1) = (h_data(&mid).unwrap().out.e1, &out.e1);
                if o.c.compose(&e1m) != e1.compose(a2) {
                    report.fail(format!("{tag}: left square over {a2:?} fails"));
                }
                o.c
            }
            Err(e) => return report.fail(format!("{tag}: morphism over {a2:?}: {e}")),
        };
        if *a2 == id && !c2.is_identity() {
            report.fail(format!("{tag}: identity not preserved"));
        }
        for a1 in (1..=a2.dom()).flat_map(|p| enumerate(p, a2.dom(), Class::Mono)) {
            report.composable_pairs += 1;
            let (low, m1) = restrict_input(&mid, &a1);
            let (low2, m12) = restrict_input(input, &a2.compose(&a1));
            debug_assert_eq!(low, low2);
            let c1 = homotopy_h_morphism(&low, &mid, &m1).map(|o| o.c);
            let c12 = homotopy_h_morphism(&low2, input, &m12).map(|o| o.c);
            match (c1, c12) {
                (Ok(c1), Ok(c12)) if c2.compose(&c1) == c12 => {}
                _ => report.fail(format!("{tag}: composition over {a1:?}, {a2:?} fails")),
            }
        }
    }
}
