//! One-dimensional chains as systems of oriented curves.
//!
//! A [`CurveSystem`] stands for the 1-chain `S = Σ T_i`, each `T_i` a curve
//! from `start_i` to `end_i`. When `∂S` is divisible by `p`,
//! [`extract_cycle_indices`] finds indices `Γ₁` such that
//! `S − p·Σ_{i∈Γ₁} T_i` is a cycle, by running the admissible-decomposition
//! reduction on the endpoint combinatorics. [`cycle_representative`] applies
//! the same machinery to integer 1-chains on a graph.

mod paths;
mod reduction;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::chain::ChainError;

pub use paths::{cycle_representative, decompose_paths_loops, EdgeWalk};
pub use reduction::{extract_cycle_indices, CycleCut};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum OneDimError {
    #[error("precondition violated: boundary coefficient {coefficient} at point `{point}` is not divisible by {p}")]
    NotDivisible { point: String, coefficient: i64, p: u64 },
    #[error("curve ids must be 1..n in order; found {found} at position {position}")]
    BadId { position: usize, found: usize },
    #[error("curve {id} has invalid mass {mass}")]
    BadMass { id: usize, mass: f64 },
    #[error("expected a chain of dimension 1, found dimension {0}")]
    NotOneDimensional(usize),
    #[error("cell `{0}` is not an edge with two distinct endpoints")]
    NotGraphLike(String),
    #[error("internal defect: {0}")]
    Defect(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// One oriented curve of a system; `mass` plays the role of its length.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveItem {
    pub id: usize,
    pub start: String,
    pub end: String,
    pub mass: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveSystem {
    items: Vec<CurveItem>,
}

impl CurveSystem {
    /// Items get ids `1..=n` in input order.
    pub fn new<S: Into<String>>(items: impl IntoIterator<Item = (S, S, f64)>) -> Result<Self, OneDimError> {
        let items = items
            .into_iter()
            .enumerate()
            .map(|(i, (s, e, m))| CurveItem {
                id: i + 1,
                start: s.into(),
                end: e.into(),
                mass: m,
            })
            .collect();
        Self::from_items(items)
    }

    /// Checks that ids are `1..=n` in order and masses are finite and
    /// nonnegative.
    pub fn from_items(items: Vec<CurveItem>) -> Result<Self, OneDimError> {
        for (position, item) in items.iter().enumerate() {
            if item.id != position + 1 {
                return Err(OneDimError::BadId {
                    position: position + 1,
                    found: item.id,
                });
            }
            if !(item.mass.is_finite() && item.mass >= 0.0) {
                return Err(OneDimError::BadMass {
                    id: item.id,
                    mass: item.mass,
                });
            }
        }
        Ok(CurveSystem { items })
    }

    pub fn items(&self) -> &[CurveItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.items.iter().map(|c| c.mass).fold(0.0, |a, b| a + b)
    }
}

impl fmt::Display for CurveSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.items {
            writeln!(f, "{}: {} -> {} ({})", c.id, c.start, c.end, c.mass)?;
        }
        Ok(())
    }
}

/// `Σ_i ([end_i] − [start_i])`, zero coefficients dropped.
pub fn system_boundary(sys: &CurveSystem) -> BTreeMap<String, i64> {
    weighted_boundary(sys, |_| 1)
}

/// `Σ_i w(i)·([end_i] − [start_i])` for ids `i`.
pub(crate) fn weighted_boundary(sys: &CurveSystem, w: impl Fn(usize) -> i64) -> BTreeMap<String, i64> {
    let mut out: BTreeMap<String, i64> = BTreeMap::new();
    for c in &sys.items {
        let g = w(c.id);
        *out.entry(c.end.clone()).or_default() += g;
        *out.entry(c.start.clone()).or_default() -= g;
    }
    out.retain(|_, g| *g != 0);
    out
}

/// A reduced system and how its items came from the original ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Preprocessed {
    pub system: CurveSystem,
    /// Original ids making up each reduced item, in traversal order.
    pub trace: Vec<Vec<usize>>,
    /// Closed loops removed along the way, as original ids.
    pub loops: Vec<Vec<usize>>,
}

/// Removes closed loops and concatenates `i` then `j` whenever
/// `end_i = start_j`, lowest pair `(i, j)` first, until no end point is a
/// start point.
pub fn preprocess(sys: &CurveSystem) -> Preprocessed {
    struct Work {
        start: String,
        end: String,
        mass: f64,
        originals: Vec<usize>,
    }
    let mut items: Vec<Work> = sys
        .items
        .iter()
        .map(|c| Work {
            start: c.start.clone(),
            end: c.end.clone(),
            mass: c.mass,
            originals: vec![c.id],
        })
        .collect();
    let mut loops = Vec::new();
    loop {
        if let Some(i) = items.iter().position(|w| w.start == w.end) {
            loops.push(items.remove(i).originals);
            continue;
        }
        let pair = (0..items.len()).find_map(|i| {
            (0..items.len())
                .find(|&j| j != i && items[i].end == items[j].start)
                .map(|j| (i, j))
        });
        let Some((i, j)) = pair else { break };
        let second = items.remove(j);
        let i = if j < i { i - 1 } else { i };
        let first = &mut items[i];
        first.end = second.end;
        first.mass += second.mass;
        first.originals.extend(second.originals);
    }
    let trace = items.iter().map(|w| w.originals.clone()).collect();
    let system = CurveSystem::new(items.into_iter().map(|w| (w.start, w.end, w.mass))).expect("masses stay valid");
    Preprocessed { system, trace, loops }
}

#[cfg(test)]
mod tests;
