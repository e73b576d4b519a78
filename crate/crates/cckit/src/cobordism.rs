//! Relative complexes, collars, midsections, cobordism validation, the
//! dual cobordism and exact collaring.
//!
//! A cobordism `(K − J)` is a non-singular non-pinching local complex `K`
//! together with a union `J` of connected components of `∂K` marked as
//! removed, subject to non-degeneracy and locality of the pair. The dual
//! swaps the removed components for duals of the collar: its cells are the
//! ∼-duals of the cells outside `J` together with the plain duals of the
//! kept boundary, the latter forming the removed part of the dual.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cell::{Cell, VertexId};
use crate::classify::{classify, Flag};
use crate::complex::{build_complex, CellComplex};

/// The collar of a vertex set: cells meeting it properly.
pub fn collar(k: &CellComplex, b: &[VertexId]) -> Vec<Cell> {
    let set: BTreeSet<VertexId> = b.iter().copied().collect();
    k.cells()
        .iter()
        .filter(|c| {
            let hits = c.iter().filter(|v| set.contains(v)).count();
            hits > 0 && hits < c.len()
        })
        .cloned()
        .collect()
}

/// Collar cell indices.
pub fn collar_indices(k: &CellComplex, b: &[VertexId]) -> Vec<usize> {
    let set: BTreeSet<VertexId> = b.iter().copied().collect();
    (0..k.len())
        .filter(|&i| {
            let c = k.cell(i);
            let hits = c.iter().filter(|v| set.contains(v)).count();
            hits > 0 && hits < c.len()
        })
        .collect()
}

/// `E_J^x`: collar edges of `J` inside the cell `x`.
pub fn collar_edges_in(k: &CellComplex, j_verts: &BTreeSet<VertexId>, x: usize) -> Vec<usize> {
    k.rank_cells(1)
        .iter()
        .copied()
        .filter(|&e| {
            let c = k.cell(e);
            let hits = c.iter().filter(|v| j_verts.contains(v)).count();
            hits > 0 && hits < c.len() && c.subset_of(k.cell(x))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CobordismError {
    #[error("midsection precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("cobordism validation failed")]
    ValidationFailed(Box<CobordismReport>),
    #[error("removed component index {0} out of range")]
    BadComponentIndex(usize),
}

/// Itemized validation report for `validate_cobordism`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CobordismReport {
    pub non_singular: Flag,
    pub non_pinching: Flag,
    pub local_complex: Flag,
    pub removed_is_boundary_union: Flag,
    pub removed_in_b: Flag,
    pub non_degenerate: Flag,
    pub pair_local: Flag,
}

impl CobordismReport {
    pub fn ok(&self) -> bool {
        self.non_singular.holds
            && self.non_pinching.holds
            && self.local_complex.holds
            && self.removed_is_boundary_union.holds
            && self.removed_in_b.holds
            && self.non_degenerate.holds
            && self.pair_local.holds
    }
}

/// A validated cobordism `(K − J)`.
#[derive(Debug, Clone)]
pub struct Cobordism {
    pub complex: CellComplex,
    /// The removed sub-complex `J` (a union of boundary components).
    pub removed: CellComplex,
    /// Indices of the removed components within `∂K`'s component list.
    pub removed_indices: Vec<usize>,
    pub boundary: CellComplex,
}

impl Cobordism {
    /// The kept boundary `∂K ∖ J`.
    pub fn kept_boundary(&self) -> CellComplex {
        let removed: BTreeSet<&Cell> = self.removed.cells().iter().collect();
        let ranked = self
            .boundary
            .iter()
            .filter(|(c, _)| !removed.contains(c))
            .map(|(c, r)| (c.clone(), r));
        build_complex(ranked).expect("components of a valid boundary")
    }
}

/// Literal non-degeneracy of a relative pair: no cell of `K ∖ J` inside
/// `J`'s vertex set.
pub fn is_non_degenerate(k: &CellComplex, j: &CellComplex) -> Flag {
    let jv: BTreeSet<VertexId> = j.vertices().collect();
    for (c, _) in k.iter() {
        if !j.contains(c) && c.iter().all(|v| jv.contains(&v)) {
            return Flag {
                holds: false,
                witness: Some(format!("cell {c} lies inside J")),
            };
        }
    }
    Flag {
        holds: true,
        witness: None,
    }
}

/// Locality of a relative pair: non-degenerate, `K` local, and for every
/// connected component `J₀` of `J`: `J₀ ∩ x` connected for `x` in the
/// collar of `J₀`, and the midsection of `J₀` cell-connected.
pub fn is_pair_local(k: &CellComplex, j: &CellComplex) -> Flag {
    let nd = is_non_degenerate(k, j);
    if !nd.holds {
        return nd;
    }
    let krep = classify(k);
    if !krep.local.holds {
        return Flag {
            holds: false,
            witness: Some("K is not local".into()),
        };
    }
    if j.is_empty() {
        return Flag {
            holds: true,
            witness: None,
        };
    }
    let comps = match j.components() {
        Ok(c) => c,
        Err(_) => {
            return Flag {
                holds: false,
                witness: Some("J has a straddling cell".into()),
            }
        }
    };
    for j0 in &comps {
        let j0v: BTreeSet<VertexId> = j0.vertices().collect();
        let j0vec: Vec<VertexId> = j0v.iter().copied().collect();
        for x in collar_indices(k, &j0vec) {
            let inter: Vec<VertexId> = k.cell(x).iter().filter(|v| j0v.contains(v)).collect();
            if inter.is_empty() {
                continue;
            }
            let sub = j0
                .restriction(&inter)
                .unwrap_or_else(|_| CellComplex::empty());
            if sub.vertex_components().len() > 1 {
                return Flag {
                    holds: false,
                    witness: Some(format!("J₀ ∩ {} is disconnected", k.cell(x))),
                };
            }
        }
        match midsection(k, j0) {
            Ok(m) => {
                let mrep = classify(&m.complex);
                if !mrep.cell_connected.holds {
                    return Flag {
                        holds: false,
                        witness: Some("midsection is not cell-connected".into()),
                    };
                }
            }
            Err(e) => {
                return Flag {
                    holds: false,
                    witness: Some(format!("midsection: {e}")),
                }
            }
        }
    }
    Flag {
        holds: true,
        witness: None,
    }
}

/// The midsection of `J` in `K` plus its origin maps.
#[derive(Debug, Clone)]
pub struct Midsection {
    pub complex: CellComplex,
    /// Midsection vertex id → the collar edge of `K` it stands for.
    pub vertex_origin: BTreeMap<VertexId, Cell>,
    /// Midsection cell → the collar cell `x` with that `E_J^x`.
    pub cell_origin: BTreeMap<Cell, Cell>,
    /// Collar cell of `K` → midsection cell.
    pub from_collar: BTreeMap<Cell, Cell>,
}

/// `M_J^K`: cells are the collar edge sets `E_J^x` with rank `rk(x) − 1`.
pub fn midsection(k: &CellComplex, j: &CellComplex) -> Result<Midsection, CobordismError> {
    let krep = classify(k);
    if !krep.local.holds {
        return Err(CobordismError::PreconditionFailed("K must be local".into()));
    }
    for (c, r) in j.iter() {
        match k.index_of(c) {
            Some(i) if k.rank_of(i) == r => {}
            _ => {
                return Err(CobordismError::PreconditionFailed(format!(
                    "J is not a sub-complex: {c}"
                )))
            }
        }
    }
    let jv: BTreeSet<VertexId> = j.vertices().collect();
    for (c, _) in k.iter() {
        if !j.contains(c) && c.iter().all(|v| jv.contains(&v)) {
            return Err(CobordismError::PreconditionFailed(format!(
                "cell {c} of K∖J lies inside J"
            )));
        }
    }
    let jvec: Vec<VertexId> = jv.iter().copied().collect();
    let collar = collar_indices(k, &jvec);
    if collar.is_empty() {
        return Err(CobordismError::PreconditionFailed("empty collar".into()));
    }
    // Midsection vertices: collar edges, numbered in canonical order.
    let collar_edges: Vec<usize> = collar
        .iter()
        .copied()
        .filter(|&i| k.rank_of(i) == 1)
        .collect();
    let edge_id: BTreeMap<usize, VertexId> = collar_edges
        .iter()
        .enumerate()
        .map(|(n, &e)| (e, n as VertexId))
        .collect();
    let mut ranked = Vec::new();
    let mut cell_origin = BTreeMap::new();
    let mut from_collar = BTreeMap::new();
    let mut seen: BTreeMap<Cell, Cell> = BTreeMap::new();
    for &x in &collar {
        let edges = collar_edges_in(k, &jv, x);
        let mcell = Cell::new(edges.iter().map(|e| edge_id[e]));
        if let Some(prev) = seen.get(&mcell) {
            return Err(CobordismError::PreconditionFailed(format!(
                "collar map not injective: {} and {} share E_J",
                prev,
                k.cell(x)
            )));
        }
        seen.insert(mcell.clone(), k.cell(x).clone());
        ranked.push((mcell.clone(), k.rank_of(x) - 1));
        cell_origin.insert(mcell.clone(), k.cell(x).clone());
        from_collar.insert(k.cell(x).clone(), mcell);
    }
    let complex = build_complex(ranked).map_err(|e| {
        CobordismError::PreconditionFailed(format!("midsection is not a complex: {e}"))
    })?;
    let vertex_origin = edge_id
        .iter()
        .map(|(&e, &id)| (id, k.cell(e).clone()))
        .collect();
    Ok(Midsection {
        complex,
        vertex_origin,
        cell_origin,
        from_collar,
    })
}

/// Validates `(K − removed_components)` as a cobordism.
pub fn validate_cobordism(
    k: &CellComplex,
    removed_indices: &[usize],
) -> Result<Cobordism, Box<CobordismReport>> {
    let rep = classify(k);
    let non_singular = rep.non_singular.clone();
    let non_pinching = rep.non_pinching.clone();
    let local_complex = rep.local.clone();

    let flag_fail = |w: &str| Flag {
        holds: false,
        witness: Some(w.to_string()),
    };
    let flag_ok = Flag {
        holds: true,
        witness: None,
    };

    let boundary = match k.boundary() {
        Ok(b) => b,
        Err(_) => {
            let report = CobordismReport {
                non_singular,
                non_pinching,
                local_complex,
                removed_is_boundary_union: flag_fail("K is not pure"),
                removed_in_b: flag_fail("K is not pure"),
                non_degenerate: flag_fail("K is not pure"),
                pair_local: flag_fail("K is not pure"),
            };
            return Err(Box::new(report));
        }
    };
    let comps = boundary.components().unwrap_or_default();
    let mut bad_index = None;
    for &i in removed_indices {
        if i >= comps.len() {
            bad_index = Some(i);
        }
    }
    let (removed, removed_is_boundary_union) = if let Some(i) = bad_index {
        (
            CellComplex::empty(),
            flag_fail(&format!("component index {i} out of range")),
        )
    } else {
        let mut cells: Vec<(Cell, usize)> = Vec::new();
        let mut idx: Vec<usize> = removed_indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        for &i in &idx {
            cells.extend(comps[i].ranked_cells());
        }
        match build_complex(cells) {
            Ok(j) => (j, flag_ok.clone()),
            Err(e) => (
                CellComplex::empty(),
                flag_fail(&format!("removed union invalid: {e}")),
            ),
        }
    };

    // J ∈ B: closed, non-pinching, cell-connected (empty allowed).
    let removed_in_b = if removed.is_empty() {
        flag_ok.clone()
    } else {
        let jrep = classify(&removed);
        if !jrep.closed.holds {
            flag_fail(&format!(
                "removed part is not closed: {}",
                jrep.closed.witness.unwrap_or_default()
            ))
        } else if !jrep.non_pinching.holds {
            flag_fail("removed part is pinching")
        } else if !jrep.cell_connected.holds {
            flag_fail("removed part is not cell-connected")
        } else {
            flag_ok.clone()
        }
    };

    let non_degenerate = is_non_degenerate(k, &removed);
    let pair_local = is_pair_local(k, &removed);

    let report = CobordismReport {
        non_singular,
        non_pinching,
        local_complex,
        removed_is_boundary_union,
        removed_in_b,
        non_degenerate,
        pair_local,
    };
    if report.ok() {
        let mut idx: Vec<usize> = removed_indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Ok(Cobordism {
            complex: k.clone(),
            removed,
            removed_indices: idx,
            boundary,
        })
    } else {
        Err(Box::new(report))
    }
}

/// Where a vertex of a dual cobordism comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DualVertexOrigin {
    /// The dual of a maximal cell of `K`.
    MaxCell(Cell),
    /// The dual of a maximal cell of the kept boundary `∂K ∖ J`.
    BoundaryMax(Cell),
}

/// The dual cobordism with its vertex bookkeeping.
#[derive(Debug, Clone)]
pub struct DualCobordism {
    pub cob: Cobordism,
    pub vertex_origins: BTreeMap<VertexId, DualVertexOrigin>,
    /// Cells of `dual(K_J)`: the second boundary part of the theorem.
    pub dual_collar: Vec<(Cell, usize)>,
}

/// Duality map on cobordisms:
/// `dual(K − J) = (∼dual(K∖J) ⊔ dual(∂K∖J) − dual(∂K∖J))`.
pub fn dual_cobordism(cob: &Cobordism) -> Result<DualCobordism, CobordismError> {
    let k = &cob.complex;
    let top = k.rank().expect("cobordism complexes are nonempty");
    let boundary = &cob.boundary;
    let kept = cob.kept_boundary();

    // Vertex ids: maximal cells of K first, then maximal cells of ∂K∖J.
    let maximal: Vec<usize> = k.rank_cells(top).to_vec();
    let mut vertex_origins: BTreeMap<VertexId, DualVertexOrigin> = BTreeMap::new();
    let max_id: BTreeMap<usize, VertexId> = maximal
        .iter()
        .enumerate()
        .map(|(i, &z)| (z, i as VertexId))
        .collect();
    for (&z, &id) in &max_id {
        vertex_origins.insert(id, DualVertexOrigin::MaxCell(k.cell(z).clone()));
    }
    let kept_max: Vec<Cell> = if kept.is_empty() {
        Vec::new()
    } else {
        let btop = kept.rank().expect("nonempty");
        kept.rank_cells(btop)
            .iter()
            .map(|&y| kept.cell(y).clone())
            .collect()
    };
    let bnd_id: BTreeMap<&Cell, VertexId> = kept_max
        .iter()
        .enumerate()
        .map(|(i, c)| (c, (maximal.len() + i) as VertexId))
        .collect();
    for (c, &id) in &bnd_id {
        vertex_origins.insert(id, DualVertexOrigin::BoundaryMax((*c).clone()));
    }

    let removed_cells: BTreeSet<&Cell> = cob.removed.cells().iter().collect();
    let boundary_cells: BTreeSet<&Cell> = boundary.cells().iter().collect();

    // ∼-duals of cells outside J.
    let mut ranked: Vec<(Cell, usize)> = Vec::new();
    for (c, r) in k.iter() {
        if removed_cells.contains(c) {
            continue;
        }
        let mut verts: Vec<VertexId> = maximal
            .iter()
            .filter(|&&z| c.subset_of(k.cell(z)))
            .map(|z| max_id[z])
            .collect();
        if boundary_cells.contains(c) {
            for m in &kept_max {
                if c.subset_of(m) {
                    verts.push(bnd_id[m]);
                }
            }
        }
        ranked.push((Cell::new(verts), top - r));
    }
    // Plain duals of the kept boundary; these are the removed components.
    let mut removed_dual: Vec<Cell> = Vec::new();
    if !kept.is_empty() {
        let btop = kept.rank().expect("nonempty");
        for (c, r) in kept.iter() {
            let verts: Vec<VertexId> = kept_max
                .iter()
                .filter(|m| c.subset_of(m))
                .map(|m| bnd_id[m])
                .collect();
            let cell = Cell::new(verts);
            removed_dual.push(cell.clone());
            ranked.push((cell, btop - r));
        }
    }

    let complex = build_complex(ranked)
        .map_err(|e| CobordismError::PreconditionFailed(format!("dual cobordism invalid: {e}")))?;

    // Identify the removed components of the dual by their vertex sets.
    let dual_boundary = complex
        .boundary()
        .map_err(|_| CobordismError::PreconditionFailed("dual cobordism is not pure".into()))?;
    let comps = dual_boundary
        .components()
        .map_err(|_| CobordismError::PreconditionFailed("dual boundary straddles".into()))?;
    let removed_verts: BTreeSet<VertexId> = removed_dual.iter().flat_map(|c| c.iter()).collect();
    let mut removed_indices = Vec::new();
    for (i, comp) in comps.iter().enumerate() {
        if comp.vertices().any(|v| removed_verts.contains(&v)) {
            removed_indices.push(i);
        }
    }

    let cob2 =
        validate_cobordism(&complex, &removed_indices).map_err(CobordismError::ValidationFailed)?;

    // dual(K_J): the interior duals of the collar cells.
    let jv: BTreeSet<VertexId> = cob.removed.vertices().collect();
    let jvec: Vec<VertexId> = jv.iter().copied().collect();
    let dual_collar: Vec<(Cell, usize)> = collar_indices(k, &jvec)
        .into_iter()
        .map(|x| {
            let verts: Vec<VertexId> = maximal
                .iter()
                .filter(|&&z| k.cell(x).subset_of(k.cell(z)))
                .map(|z| max_id[z])
                .collect();
            (Cell::new(verts), top - k.rank_of(x))
        })
        .collect();

    Ok(DualCobordism {
        cob: cob2,
        vertex_origins,
        dual_collar,
    })
}

/// Exact collaring: `E_J^x ↦ x ∩ J^[0]` is a rank-preserving bijection from
/// the midsection onto `J` (with poset-homomorphic inverse).
pub fn is_exactly_collared(k: &CellComplex, j: &CellComplex) -> bool {
    if j.is_empty() {
        return true;
    }
    if !is_non_degenerate(k, j).holds {
        return false;
    }
    let m = match midsection(k, j) {
        Ok(m) => m,
        Err(_) => return false,
    };
    if m.complex.len() != j.len() {
        return false;
    }
    let jv: BTreeSet<VertexId> = j.vertices().collect();
    // x ∩ J^[0] must be a cell of J of rank rk(x) − 1, bijectively.
    let mut hit: BTreeSet<usize> = BTreeSet::new();
    let mut image: BTreeMap<Cell, Cell> = BTreeMap::new();
    for (mcell, x) in &m.cell_origin {
        let xi = k.index_of(x).expect("collar cell");
        let inter: Vec<VertexId> = x.iter().filter(|v| jv.contains(v)).collect();
        let target = Cell::new(inter);
        match j.index_of(&target) {
            Some(t) if j.rank_of(t) + 1 == k.rank_of(xi) => {
                if !hit.insert(t) {
                    return false;
                }
                image.insert(mcell.clone(), target);
            }
            _ => return false,
        }
    }
    if hit.len() != j.len() {
        return false;
    }
    // Inclusion must be preserved in both directions.
    let mcells: Vec<&Cell> = image.keys().collect();
    for a in &mcells {
        for b in &mcells {
            let fwd = a.subset_of(b);
            let back = image[*a].subset_of(&image[*b]);
            if fwd != back {
                return false;
            }
        }
    }
    true
}
