//! Monotone maps between finite ordinals, including the empty one.
//!
//! Ordinals are stored by their number of elements, so `[n]` has size `n + 1`
//! and the empty ordinal has size 0. Every map carries its domain and codomain
//! sizes explicitly; a value list alone cannot tell `[0] -> [1]` from `[0] -> [5]`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdError {
    #[error("value {value} at position {pos} is outside an ordinal of size {cod}")]
    OutOfRange { pos: usize, value: usize, cod: usize },
    #[error("values decrease at position {0}")]
    NotMonotone(usize),
    #[error("codomain size {cod} does not match domain size {dom}")]
    SizeMismatch { cod: usize, dom: usize },
    #[error("map is not a monomorphism")]
    NotMono,
    #[error("set-level pushout is not a finite ordinal: {0}")]
    InternalOrderViolation(String),
    #[error("cube hypothesis violated: {0}")]
    HypothesisViolated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapClass {
    Iso,
    Mono,
    Epi,
    Other,
}

/// Which maps `enumerate` should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    All,
    Mono,
    Epi,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneMap {
    cod: usize,
    values: Vec<usize>,
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}->{}", self.values, self.dom(), self.cod)
    }
}

impl MonotoneMap {
    pub fn new(cod: usize, values: Vec<usize>) -> Result<Self, OrdError> {
        for (pos, &value) in values.iter().enumerate() {
            if value >= cod {
                return Err(OrdError::OutOfRange { pos, value, cod });
            }
            if pos > 0 && values[pos - 1] > value {
                return Err(OrdError::NotMonotone(pos));
            }
        }
        Ok(MonotoneMap { cod, values })
    }

    pub fn identity(size: usize) -> Self {
        MonotoneMap { cod: size, values: (0..size).collect() }
    }

    /// The unique map out of the empty ordinal.
    pub fn empty(cod: usize) -> Self {
        MonotoneMap { cod, values: Vec::new() }
    }

    /// The constant map onto a single element.
    pub fn constant(dom: usize, cod: usize, value: usize) -> Result<Self, OrdError> {
        MonotoneMap::new(cod, vec![value; dom])
    }

    /// Coface `d_i`: the injection of size `cod - 1` into size `cod` skipping `i`.
    pub fn face(cod: usize, i: usize) -> Self {
        assert!(i < cod, "face index {i} out of range for size {cod}");
        let values = (0..cod - 1).map(|j| if j < i { j } else { j + 1 }).collect();
        MonotoneMap { cod, values }
    }

    /// Codegeneracy `s_i`: the surjection of size `cod + 1` onto size `cod` hitting `i` twice.
    pub fn degeneracy(cod: usize, i: usize) -> Self {
        assert!(i < cod, "degeneracy index {i} out of range for size {cod}");
        let values = (0..=cod).map(|j| if j <= i { j } else { j - 1 }).collect();
        MonotoneMap { cod, values }
    }

    pub fn dom(&self) -> usize {
        self.values.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MonotoneMap) -> Result<MonotoneMap, OrdError> {
        if first.cod != self.dom() {
            return Err(OrdError::SizeMismatch { cod: first.cod, dom: self.dom() });
        }
        Ok(MonotoneMap {
            cod: self.cod,
            values: first.values.iter().map(|&v| self.values[v]).collect(),
        })
    }

    /// Like `after` for call sites where the sizes are known to match.
    pub fn compose(&self, first: &MonotoneMap) -> MonotoneMap {
        self.after(first).expect("composable monotone maps")
    }

    pub fn is_mono(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_epi(&self) -> bool {
        match self.values.first() {
            None => self.cod == 0,
            Some(&first) => {
                first == 0
                    && *self.values.last().unwrap() == self.cod - 1
                    && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.dom() == self.cod && self.is_mono()
    }

    pub fn classify(&self) -> MapClass {
        match (self.is_mono(), self.is_epi()) {
            (true, true) => MapClass::Iso,
            (true, false) => MapClass::Mono,
            (false, true) => MapClass::Epi,
            (false, false) => MapClass::Other,
        }
    }

    /// Preimage position of `v` for a mono; `None` when `v` is not hit.
    pub fn preimage(&self, v: usize) -> Option<usize> {
        self.values.binary_search(&v).ok()
    }

    /// The elements of the codomain not in the image, ascending.
    pub fn missed(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cod];
        for &v in &self.values {
            hit[v] = true;
        }
        (0..self.cod).filter(|&v| !hit[v]).collect()
    }
}

/// Epi-mono factorization: returns `(e, m)` with `self = m ∘ e`.
pub fn reedy_factorize(f: &MonotoneMap) -> (MonotoneMap, MonotoneMap) {
    let mut image: Vec<usize> = f.values.clone();
    image.dedup();
    let epi = f
        .values
        .iter()
        .map(|v| image.binary_search(v).unwrap())
        .collect();
    (
        MonotoneMap { cod: image.len(), values: epi },
        MonotoneMap { cod: f.cod, values: image },
    )
}

/// All maps of the given class between sizes `dom` and `cod`, in lexicographic
/// order on value lists.
pub fn enumerate(dom: usize, cod: usize, class: Class) -> Vec<MonotoneMap> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(dom);
    fn rec(
        dom: usize,
        cod: usize,
        class: Class,
        cur: &mut Vec<usize>,
        out: &mut Vec<MonotoneMap>,
    ) {
        let pos = cur.len();
        if pos == dom {
            let ok = match class {
                Class::All | Class::Mono => true,
                Class::Epi => cur.last().map_or(cod == 0, |&v| v + 1 == cod),
            };
            if ok {
                out.push(MonotoneMap { cod, values: cur.clone() });
            }
            return;
        }
        let remaining = dom - pos;
        let (lo, hi) = match (class, cur.last()) {
            (Class::All, None) => (0, cod),
            (Class::All, Some(&p)) => (p, cod),
            (Class::Mono, None) => (0, (cod + 1).saturating_sub(remaining)),
            (Class::Mono, Some(&p)) => (p + 1, (cod + 1).saturating_sub(remaining)),
            (Class::Epi, None) => (0, 1.min(cod)),
            (Class::Epi, Some(&p)) => (p, (p + 2).min(cod)),
        };
        for v in lo..hi {
            cur.push(v);
            rec(dom, cod, class, cur, out);
            cur.pop();
        }
    }
    rec(dom, cod, class, &mut cur, &mut out);
    out
}

/// `f ⋆ g`: `f` on the first block, `g` shifted past `f.cod()` on the second.
pub fn ordinal_join(f: &MonotoneMap, g: &MonotoneMap) -> MonotoneMap {
    let mut values = f.values.clone();
    values.extend(g.values.iter().map(|v| v + f.cod));
    MonotoneMap { cod: f.cod + g.cod, values }
}

/// Pullback of the mono `m` along `f` (same codomain).
///
/// Returns `(m2, f2)` with `m2: P ↪ f.dom()`, `f2: P → m.dom()` and
/// `f ∘ m2 = m ∘ f2`, where `P` is the preimage of the image of `m`.
pub fn pullback_along_mono(
    f: &MonotoneMap,
    m: &MonotoneMap,
) -> Result<(MonotoneMap, MonotoneMap), OrdError> {
    if !m.is_mono() {
        return Err(OrdError::NotMono);
    }
    if f.cod != m.cod {
        return Err(OrdError::SizeMismatch { cod: f.cod, dom: m.cod });
    }
    let mut inc = Vec::new();
    let mut back = Vec::new();
    for (i, &v) in f.values.iter().enumerate() {
        if let Some(p) = m.preimage(v) {
            inc.push(i);
            back.push(p);
        }
    }
    Ok((
        MonotoneMap { cod: f.dom(), values: inc },
        MonotoneMap { cod: m.dom(), values: back },
    ))
}

/// Pushout of the mono `m: A ↪ B` along `e: A → C`.
///
/// Returns `(e2, m2)` with `e2: B → P`, `m2: C ↪ P` and `e2 ∘ m = m2 ∘ e`.
/// The pushout is formed on sets and then linearly ordered; if the induced
/// relation is not a total order the pushout does not exist in the ordinal
/// world and `InternalOrderViolation` is returned.
pub fn pushout_along_mono(
    m: &MonotoneMap,
    e: &MonotoneMap,
) -> Result<(MonotoneMap, MonotoneMap), OrdError> {
    if !m.is_mono() {
        return Err(OrdError::NotMono);
    }
    if m.dom() != e.dom() {
        return Err(OrdError::SizeMismatch { cod: m.dom(), dom: e.dom() });
    }
    // Provisional names: C's elements are 0..c, new elements of B follow.
    let c = e.cod;
    let mut b_name = vec![usize::MAX; m.cod];
    for (a, &b) in m.values.iter().enumerate() {
        b_name[b] = e.values[a];
    }
    let mut next = c;
    for slot in b_name.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let total = next;
    // Generating order relations: consecutive elements of C and of B.
    let mut le = vec![vec![false; total]; total];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for j in 1..c {
        le[j - 1][j] = true;
    }
    for w in b_name.windows(2) {
        le[w[0]][w[1]] = true;
    }
    for k in 0..total {
        for i in 0..total {
            if le[i][k] {
                for j in 0..total {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..total {
        for j in (i + 1)..total {
            match (le[i][j], le[j][i]) {
                (true, true) => {
                    return Err(OrdError::InternalOrderViolation(format!(
                        "elements {i} and {j} are identified by the order"
                    )))
                }
                (false, false) => {
                    return Err(OrdError::InternalOrderViolation(format!(
                        "elements {i} and {j} are incomparable"
                    )))
                }
                _ => {}
            }
        }
    }
    // Position of an element is the number of elements strictly below it.
    let pos: Vec<usize> = (0..total)
        .map(|i| (0..total).filter(|&j| j != i && le[j][i]).count())
        .collect();
    let e2 = MonotoneMap { cod: total, values: b_name.iter().map(|&n| pos[n]).collect() };
    let m2 = MonotoneMap { cod: total, values: (0..c).map(|n| pos[n]).collect() };
    Ok((e2, m2))
}

/// Whether the commuting square `top: A → B`, `left: A → X`, `right: B → Y`,
/// `bottom: X → Y` is a pushout, for `top` mono.
pub fn is_pushout_square(
    top: &MonotoneMap,
    left: &MonotoneMap,
    right: &MonotoneMap,
    bottom: &MonotoneMap,
) -> bool {
    if right.compose(top) != bottom.compose(left) {
        return false;
    }
    let Ok((e2, m2)) = pushout_along_mono(top, left) else {
        return false;
    };
    // The comparison map P → Y is determined on the jointly surjective legs.
    let mut cmp = vec![usize::MAX; e2.cod];
    for (b, &p) in e2.values.iter().enumerate() {
        cmp[p] = right.values[b];
    }
    for (x, &p) in m2.values.iter().enumerate() {
        cmp[p] = bottom.values[x];
    }
    cmp.len() == right.cod && cmp.iter().enumerate().all(|(i, &v)| v == i)
}

/// Whether the commuting square `top: A → B`, `left: A → X`, `right: B → Y`,
/// `bottom: X → Y` is a pullback, for `bottom` mono.
pub fn is_pullback_square(
    top: &MonotoneMap,
    left: &MonotoneMap,
    right: &MonotoneMap,
    bottom: &MonotoneMap,
) -> bool {
    if right.compose(top) != bottom.compose(left) {
        return false;
    }
    let Ok((m2, _)) = pullback_along_mono(right, bottom) else {
        return false;
    };
    // A is the pullback iff `top` is an iso onto the preimage.
    top.values == m2.values
}

/// The cube of the adhesivity lemma. Primed objects form the back face; the
/// connecting maps run from back to front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdhesivityCube {
    /// `A' ↪ B'`
    pub back_top: MonotoneMap,
    /// `A' ↠ X'`
    pub back_left: MonotoneMap,
    /// `B' ↠ Y'`
    pub back_right: MonotoneMap,
    /// `X' ↪ Y'`
    pub back_bottom: MonotoneMap,
    /// `A ↪ B`
    pub front_top: MonotoneMap,
    /// `A ↠ X`
    pub front_left: MonotoneMap,
    /// `B ↠ Y`
    pub front_right: MonotoneMap,
    /// `X ↪ Y`
    pub front_bottom: MonotoneMap,
    /// `A' ↪ A`
    pub a: MonotoneMap,
    /// `B' ↪ B`
    pub b: MonotoneMap,
    /// `X' ↪ X`
    pub x: MonotoneMap,
    /// `Y' → Y`, the map whose monicity is in question
    pub y: MonotoneMap,
}

impl AdhesivityCube {
    fn check_hypotheses(&self) -> Result<(), OrdError> {
        let bad = |s: &str| Err(OrdError::HypothesisViolated(s.to_string()));
        let composable = [
            (&self.back_top, &self.b, &self.a, &self.front_top, "top face"),
            (&self.back_left, &self.x, &self.a, &self.front_left, "left face"),
            (&self.back_right, &self.y, &self.b, &self.front_right, "right face"),
            (&self.back_bottom, &self.y, &self.x, &self.front_bottom, "bottom face"),
            (&self.back_top, &self.back_right, &self.back_left, &self.back_bottom, "back face"),
            (&self.front_top, &self.front_right, &self.front_left, &self.front_bottom, "front face"),
        ];
        for (p, q, r, s, name) in composable {
            // q ∘ p = s ∘ r
            let lhs = q.after(p);
            let rhs = s.after(r);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                _ => return bad(&format!("{name} does not commute")),
            }
        }
        for (f, name) in [
            (&self.back_left, "A' -> X'"),
            (&self.back_right, "B' -> Y'"),
            (&self.front_left, "A -> X"),
            (&self.front_right, "B -> Y"),
        ] {
            if !f.is_epi() {
                return bad(&format!("{name} is not epi"));
            }
        }
        for (f, name) in [
            (&self.back_top, "A' -> B'"),
            (&self.back_bottom, "X' -> Y'"),
            (&self.front_top, "A -> B"),
            (&self.front_bottom, "X -> Y"),
            (&self.a, "A' -> A"),
            (&self.b, "B' -> B"),
            (&self.x, "X' -> X"),
        ] {
            if !f.is_mono() {
                return bad(&format!("{name} is not mono"));
            }
        }
        if !is_pushout_square(&self.front_top, &self.front_left, &self.front_right, &self.front_bottom)
        {
            return bad("front square is not a pushout");
        }
        if !is_pullback_square(&self.back_top, &self.a, &self.b, &self.front_top) {
            return bad("top square is not a pullback");
        }
        Ok(())
    }
}

/// Returns `(back square is a pushout, Y' → Y is mono)`.
pub fn adhesivity_check(cube: &AdhesivityCube) -> Result<(bool, bool), OrdError> {
    cube.check_hypotheses()?;
    let back = is_pushout_square(
        &cube.back_top,
        &cube.back_left,
        &cube.back_right,
        &cube.back_bottom,
    );
    Ok((back, cube.y.is_mono()))
}

/// Every cube satisfying the lemma's hypotheses whose eight ordinals have at
/// most `max_size` elements, obtained by completing a front pushout, a top
/// pullback and an arbitrary epi out of `B'` compatible with both.
pub fn enumerate_adhesivity_cubes(max_size: usize) -> Vec<AdhesivityCube> {
    let mut out = Vec::new();
    for a_sz in 0..=max_size {
        for b_sz in a_sz..=max_size {
            for front_top in enumerate(a_sz, b_sz, Class::Mono) {
                for x_sz in 0..=a_sz {
                    for front_left in enumerate(a_sz, x_sz, Class::Epi) {
                        // The pushout fails to exist when the epi merges elements
                        // separated by an element outside the mono's image.
                        let Ok((front_right, front_bottom)) = pushout_along_mono(&front_top, &front_left) else {
                            continue;
                        };
                        if front_right.cod() > max_size {
                            continue;
                        }
                        for b1_sz in 0..=b_sz {
                            for b in enumerate(b1_sz, b_sz, Class::Mono) {
                                // A' ↪ B' and A' ↪ A; the latter is mono since A ↪ B is.
                                let (back_top, a) = pullback_along_mono(&b, &front_top).unwrap();
                                let a_to_x = front_left.compose(&a);
                                let (back_left, x) = reedy_factorize(&a_to_x);
                                for y1_sz in 0..=b1_sz {
                                    for back_right in enumerate(b1_sz, y1_sz, Class::Epi) {
                                        if let Some(cube) = complete_cube(
                                            &back_top,
                                            &back_left,
                                            &back_right,
                                            &front_top,
                                            &front_left,
                                            &front_right,
                                            &front_bottom,
                                            &a,
                                            &b,
                                            &x,
                                        ) {
                                            out.push(cube);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn complete_cube(
    back_top: &MonotoneMap,
    back_left: &MonotoneMap,
    back_right: &MonotoneMap,
    front_top: &MonotoneMap,
    front_left: &MonotoneMap,
    front_right: &MonotoneMap,
    front_bottom: &MonotoneMap,
    a: &MonotoneMap,
    b: &MonotoneMap,
    x: &MonotoneMap,
) -> Option<AdhesivityCube> {
    // y is forced by the epi B' ↠ Y'.
    let target = front_right.compose(b);
    let mut y = vec![usize::MAX; back_right.cod()];
    for (i, &v) in back_right.values().iter().enumerate() {
        if y[v] == usize::MAX {
            y[v] = target.apply(i);
        } else if y[v] != target.apply(i) {
            return None;
        }
    }
    let y = MonotoneMap::new(target.cod(), y).ok()?;
    // X' → Y' is forced by the epi A' ↠ X'.
    let via = back_right.compose(back_top);
    let mut bb = vec![usize::MAX; back_left.cod()];
    for (i, &v) in back_left.values().iter().enumerate() {
        if bb[v] == usize::MAX {
            bb[v] = via.apply(i);
        } else if bb[v] != via.apply(i) {
            return None;
        }
    }
    let back_bottom = MonotoneMap::new(back_right.cod(), bb).ok()?;
    if !back_bottom.is_mono() {
        return None;
    }
    let cube = AdhesivityCube {
        back_top: back_top.clone(),
        back_left: back_left.clone(),
        back_right: back_right.clone(),
        back_bottom,
        front_top: front_top.clone(),
        front_left: front_left.clone(),
        front_right: front_right.clone(),
        front_bottom: front_bottom.clone(),
        a: a.clone(),
        b: b.clone(),
        x: x.clone(),
        y,
    };
    cube.check_hypotheses().ok()?;
    Some(cube)
}
