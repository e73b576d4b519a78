//! Cells as finite sets of vertex identifiers.
//!
//! A cell *is* its vertex set: the whole calculus treats complexes as
//! families of subsets of a vertex set, so cells are kept canonical
//! (sorted, duplicate-free) and compare as plain sets.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a vertex inside one complex.
pub type VertexId = u32;

/// A non-empty, sorted, duplicate-free set of vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell(Vec<VertexId>);

impl Cell {
    /// Builds a cell from any iterator of vertices; sorts and dedups.
    ///
    /// Panics on an empty vertex set: the empty set is never a cell.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        assert!(!v.is_empty(), "a cell must contain at least one vertex");
        Cell(v)
    }

    /// Single-vertex cell.
    pub fn vertex(v: VertexId) -> Self {
        Cell(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Set inclusion `self ⊆ other`.
    pub fn subset_of(&self, other: &Cell) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        subset_sorted(&self.0, &other.0)
    }

    pub fn strict_subset_of(&self, other: &Cell) -> bool {
        self.0.len() < other.0.len() && self.subset_of(other)
    }

    /// Set intersection; `None` when disjoint.
    pub fn intersection(&self, other: &Cell) -> Option<Cell> {
        let out = intersect_sorted(&self.0, &other.0);
        if out.is_empty() {
            None
        } else {
            Some(Cell(out))
        }
    }

    pub fn union(&self, other: &Cell) -> Cell {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Cell::new(v)
    }

    /// Vertices of `self` not in `set`, as a plain vector (may be empty).
    pub fn difference(&self, set: &[VertexId]) -> Vec<VertexId> {
        self.0
            .iter()
            .copied()
            .filter(|v| set.binary_search(v).is_err())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }
}

/// `a ⊆ b` for sorted slices.
pub(crate) fn subset_sorted(a: &[VertexId], b: &[VertexId]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

pub(crate) fn intersect_sorted(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
