//! Exact-arithmetic Dialectica categories over the unit interval, fuzzy Petri
//! nets as two-fibre Dialectica objects, fuzzy topological systems, a fuzzy
//! token game, and an exhaustive law checker for all of them.

pub mod dialectica;
pub mod error;
pub mod finset;
pub mod fnets;
pub mod io;
pub mod laws;
pub mod lineale;
pub mod simulator;
pub mod toposys;

pub use error::{Error, Result};
pub use finset::{FinMap, FinSet, Limits};
pub use lineale::{Degree, Orientation};

use serde::Serialize;

/// Outcome of a decision procedure: valid, or the first counterexample found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum Verdict<W> {
    Valid,
    Invalid(W),
}

impl<W> Verdict<W> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Valid => Verdict::Valid,
            Verdict::Invalid(w) => Verdict::Invalid(f(w)),
        }
    }
}
