//! Dual sets, the duality map on closed complexes, the ∼-dual and the dual
//! graph.
//!
//! For a pure R-complex the dual set of `A` is the family of R-cells
//! containing `A`. On a closed complex `x ↦ x̄` reverses inclusion and is an
//! involution up to isomorphism: `dual(dual(K)) ≅ K` with rank
//! `rk(x̄) = R − rk(x)`. Dual vertices are fresh integer ids; each one
//! remembers the maximal primal cell it stands for.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cell::{Cell, VertexId};
use crate::complex::{build_complex, CellComplex, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is not closed")]
    NotClosed,
    #[error("complex is not non-singular")]
    NotNonSingular,
    #[error("empty vertex set has no dual")]
    EmptySet,
    #[error("dual failed validation: {0}")]
    Invalid(ValidationReport),
}

/// All maximal cells of a pure complex containing the vertex set `a`.
pub fn dual_set(k: &CellComplex, a: &[VertexId]) -> Result<Vec<Cell>, DualityError> {
    if a.is_empty() {
        return Err(DualityError::EmptySet);
    }
    if !k.is_pure() {
        return Err(DualityError::NotPure);
    }
    let a = Cell::new(a.iter().copied());
    let top = k.rank().unwrap_or(0);
    Ok(k.rank_cells(top)
        .iter()
        .filter(|&&z| a.subset_of(k.cell(z)))
        .map(|&z| k.cell(z).clone())
        .collect())
}

/// A ∼-dual: the dual set in `K` together with the dual set in `∂K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCell {
    /// Maximal cells of `K` containing the set.
    pub in_complex: Vec<Cell>,
    /// Maximal cells of `∂K` containing the set (empty off the boundary).
    pub in_boundary: Vec<Cell>,
    /// The primal vertex set the dual was taken of.
    pub origin: Cell,
}

/// The ∼-dual of `A`: `dual_K(A) ⊔ dual_∂K(A)`, the boundary part being
/// empty whenever `A` is not a set of boundary vertices.
pub fn tilde_dual_set(k: &CellComplex, a: &[VertexId]) -> Result<DualCell, DualityError> {
    if a.is_empty() {
        return Err(DualityError::EmptySet);
    }
    let report = crate::classify::classify(k);
    if !report.non_singular.holds {
        return Err(DualityError::NotNonSingular);
    }
    let in_complex = dual_set(k, a)?;
    let boundary = k.boundary().expect("non-singular complexes are pure");
    let cell = Cell::new(a.iter().copied());
    let in_boundary = if boundary.is_empty() {
        Vec::new()
    } else {
        let top = boundary.rank().unwrap_or(0);
        boundary
            .rank_cells(top)
            .iter()
            .filter(|&&y| cell.subset_of(boundary.cell(y)))
            .map(|&y| boundary.cell(y).clone())
            .collect()
    };
    Ok(DualCell {
        in_complex,
        in_boundary,
        origin: cell,
    })
}

/// The dual of a closed complex plus the cell bijection in both directions.
#[derive(Debug, Clone)]
pub struct DualClosed {
    pub complex: CellComplex,
    /// Dual vertex id → the maximal primal cell it denotes.
    pub vertex_origin: BTreeMap<VertexId, Cell>,
    /// Primal cell → dual cell.
    pub to_dual: BTreeMap<Cell, Cell>,
    /// Dual cell → primal cell.
    pub from_dual: BTreeMap<Cell, Cell>,
}

/// Duality map on a closed complex: `x ↦ x̄ = {maximal z ⊇ x}` with rank
/// `R − rk(x)`. Refuses non-closed input.
pub fn dual_closed(k: &CellComplex) -> Result<DualClosed, DualityError> {
    let report = crate::classify::classify(k);
    if !report.closed.holds {
        return Err(DualityError::NotClosed);
    }
    if k.is_empty() {
        return Ok(DualClosed {
            complex: CellComplex::empty(),
            vertex_origin: BTreeMap::new(),
            to_dual: BTreeMap::new(),
            from_dual: BTreeMap::new(),
        });
    }
    let top = k.rank().expect("nonempty");
    let maximal = k.rank_cells(top);
    let max_id: BTreeMap<usize, VertexId> = maximal
        .iter()
        .enumerate()
        .map(|(i, &z)| (z, i as VertexId))
        .collect();

    let mut ranked = Vec::with_capacity(k.len());
    let mut to_dual = BTreeMap::new();
    let mut from_dual = BTreeMap::new();
    for (i, (c, r)) in k.iter().enumerate() {
        let verts: Vec<VertexId> = maximal
            .iter()
            .filter(|&&z| c.subset_of(k.cell(z)))
            .map(|z| max_id[z])
            .collect();
        let dual = Cell::new(verts);
        ranked.push((dual.clone(), top - r));
        to_dual.insert(c.clone(), dual.clone());
        from_dual.insert(dual, k.cell(i).clone());
    }
    let complex = build_complex(ranked).map_err(DualityError::Invalid)?;
    let vertex_origin = max_id
        .iter()
        .map(|(&z, &id)| (id, k.cell(z).clone()))
        .collect();
    Ok(DualClosed {
        complex,
        vertex_origin,
        to_dual,
        from_dual,
    })
}

/// Plain graph on the maximal cells of a non-singular complex; an edge per
/// interior sub-maximal cell (one with two maximal cofaces).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    /// Vertex `i` stands for `cells[i]`.
    pub cells: Vec<Cell>,
    /// Edges as index pairs `(i, j)`, `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    /// Connectivity of the subgraph induced on a subset of vertex indices.
    pub fn connected_on(&self, keep: &[usize]) -> bool {
        if keep.is_empty() {
            return true;
        }
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut adj = vec![Vec::new(); keep.len()];
        for &(a, b) in &self.edges {
            if let (Some(&pa), Some(&pb)) = (pos.get(&a), pos.get(&b)) {
                adj[pa].push(pb);
                adj[pb].push(pa);
            }
        }
        let mut seen = vec![false; keep.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &n in &adj[i] {
                if !seen[n] {
                    seen[n] = true;
                    count += 1;
                    stack.push(n);
                }
            }
        }
        count == keep.len()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_on(&(0..self.cells.len()).collect::<Vec<_>>())
    }
}

/// Dual graph of a non-singular complex.
pub fn dual_graph(k: &CellComplex) -> Result<DualGraph, DualityError> {
    let report = crate::classify::classify(k);
    if !report.non_singular.holds {
        return Err(DualityError::NotNonSingular);
    }
    Ok(dual_graph_unchecked(k))
}

/// Same as `dual_graph` but skips the non-singularity check; used by the
/// classifier itself.
pub(crate) fn dual_graph_unchecked(k: &CellComplex) -> DualGraph {
    if k.is_empty() {
        return DualGraph {
            cells: Vec::new(),
            edges: Vec::new(),
        };
    }
    let top = k.rank().expect("nonempty");
    let maximal = k.rank_cells(top);
    let max_pos: BTreeMap<usize, usize> =
        maximal.iter().enumerate().map(|(i, &z)| (z, i)).collect();
    let cells = maximal.iter().map(|&z| k.cell(z).clone()).collect();
    let mut edges = Vec::new();
    if top >= 1 {
        for &y in k.rank_cells(top - 1) {
            let cf = k.cofaces(y);
            if cf.len() == 2 {
                let (a, b) = (max_pos[&cf[0]], max_pos[&cf[1]]);
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    DualGraph { cells, edges }
}
