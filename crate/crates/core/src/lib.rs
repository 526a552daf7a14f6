//! Finite semisimplicial sets and marked semisimplicial sets.
//!
//! The crate is organised bottom up:
//!
//! * [`ordcalc`]: monotone maps between finite ordinals, factorizations,
//!   pullbacks and pushouts along monos.
//! * [`sset`]: complexes, maps, generators, colimits, slices.
//! * [`search`]: homomorphism enumeration and isomorphism search.
//! * [`monoidal`]: geometric product, cartesian product, joins, Leibniz corners.
//! * [`invariants`]: nerves, τ₀, τ₁ presentations, marking saturation.
//! * [`freefunctor`]: the free-degeneracy monad and the homotopy `H`.
//! * [`subdiv`]: semicategories of elements, subdivision, the cospan.
//! * [`lifting`]: lifting problems, horn completion, cell certificates.
//! * [`ssx`]: the text format and DOT export used by the command-line tool.
//!
//! A complex always carries a marking (a set of edges). Operations whose
//! behaviour differs between plain and marked semantics take a [`Mode`].

pub mod freefunctor;
pub mod invariants;
pub mod lifting;
pub mod monoidal;
pub mod ordcalc;
pub mod search;
pub mod sset;
pub mod ssx;
pub mod subdiv;
mod unionfind;

pub use ordcalc::MonotoneMap;
pub use sset::{SSet, SSetError, SSetMap};

/// Plain semisimplicial semantics ignore markings on inputs and produce none;
/// marked semantics apply the marking rule of each construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Plain,
    Marked,
}

impl Mode {
    pub fn is_marked(self) -> bool {
        self == Mode::Marked
    }
}
