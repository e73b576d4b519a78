//! Structural predicates: graph-based, pure, non-singular, closed,
//! connectedness flavours, pinches, locality, simpliciality, evenness and
//! fullness.
//!
//! Every flag is recomputable from the cell family alone and carries a
//! witness when it fails: one violating cell or pair.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cell::{Cell, VertexId};
use crate::complex::CellComplex;
use crate::duality::dual_graph_unchecked;

/// A predicate outcome; `witness` explains a `false`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Flag {
    fn ok() -> Self {
        Flag {
            holds: true,
            witness: None,
        }
    }
    fn fail(witness: impl Into<String>) -> Self {
        Flag {
            holds: false,
            witness: Some(witness.into()),
        }
    }
    fn and(a: &Flag, b: &Flag) -> Flag {
        match (&a.holds, &b.holds) {
            (true, true) => Flag::ok(),
            (false, _) => a.clone(),
            _ => b.clone(),
        }
    }
}

/// Full classification of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub graph_based: Flag,
    pub pure: Flag,
    pub non_branching: Flag,
    pub non_singular: Flag,
    pub closed: Flag,
    pub connected: Flag,
    pub cell_connected: Flag,
    pub strongly_connected: Flag,
    pub non_pinching: Flag,
    pub local: Flag,
    pub simplicial: Flag,
    pub even: Flag,
    /// `r`-fullness for `2 ≤ r ≤ Rk(K)`.
    pub full: BTreeMap<usize, Flag>,
}

/// Computes every predicate of the report.
pub fn classify(k: &CellComplex) -> PropertyReport {
    let graph_based = check_graph_based(k);
    let pure = if k.is_pure() {
        Flag::ok()
    } else {
        let top = k.rank().unwrap_or(0);
        let w = k
            .maximal_cells()
            .into_iter()
            .find(|&i| k.rank_of(i) != top)
            .map(|i| {
                format!(
                    "maximal cell {} has rank {} < {}",
                    k.cell(i),
                    k.rank_of(i),
                    top
                )
            });
        Flag {
            holds: false,
            witness: w,
        }
    };
    let non_branching = check_non_branching(k);
    let non_singular = Flag::and(&Flag::and(&graph_based, &pure), &non_branching);
    let closed = if non_singular.holds {
        let b = k.boundary().expect("pure");
        if b.is_empty() {
            Flag::ok()
        } else {
            Flag::fail(format!("boundary contains {}", b.cell(0)))
        }
    } else {
        Flag::and(&non_singular, &Flag::fail("not non-singular"))
    };
    let connected = check_connected(k, &graph_based);
    let cell_connected = check_cell_connected(k, &graph_based);
    let local = Flag::and(&connected, &cell_connected);

    let (strongly_connected, non_pinching) = if non_singular.holds {
        let dg = dual_graph_unchecked(k);
        let strong = if dg.is_connected() {
            Flag::ok()
        } else {
            Flag::fail("dual graph is disconnected")
        };
        (strong, check_non_pinching(k))
    } else {
        let f = Flag::fail("not non-singular");
        (f.clone(), f)
    };

    let simplicial = check_simplicial(k);
    let even = check_even(k);
    let mut full = BTreeMap::new();
    if let Some(top) = k.rank() {
        for r in 2..=top.max(2) {
            if r > top {
                break;
            }
            full.insert(r, check_full(k, r));
        }
    }

    PropertyReport {
        graph_based,
        pure,
        non_branching,
        non_singular,
        closed,
        connected,
        cell_connected,
        strongly_connected,
        non_pinching,
        local,
        simplicial,
        even,
        full,
    }
}

fn check_graph_based(k: &CellComplex) -> Flag {
    for &e in k.rank_cells(1) {
        if k.cell(e).len() != 2 {
            return Flag::fail(format!(
                "edge {} has {} vertices",
                k.cell(e),
                k.cell(e).len()
            ));
        }
    }
    Flag::ok()
}

fn check_non_branching(k: &CellComplex) -> Flag {
    if let Some(top) = k.rank() {
        if top >= 1 {
            for &y in k.rank_cells(top - 1) {
                if k.cofaces(y).len() > 2 {
                    return Flag::fail(format!(
                        "sub-maximal cell {} has {} maximal cofaces",
                        k.cell(y),
                        k.cofaces(y).len()
                    ));
                }
            }
        }
    }
    Flag::ok()
}

fn check_connected(k: &CellComplex, graph_based: &Flag) -> Flag {
    if !graph_based.holds {
        return Flag::fail("not graph-based");
    }
    if k.vertex_components().len() <= 1 {
        Flag::ok()
    } else {
        Flag::fail("1-skeleton is disconnected")
    }
}

/// `K ∩ x` connected for every cell `x`.
fn check_cell_connected(k: &CellComplex, graph_based: &Flag) -> Flag {
    if !graph_based.holds {
        return Flag::fail("not graph-based");
    }
    for (i, (c, r)) in k.iter().enumerate() {
        if r < 2 {
            continue;
        }
        let sub = k.restriction_to_cell(i);
        if sub.vertex_components().len() > 1 {
            return Flag::fail(format!("cell {c} is disconnected"));
        }
    }
    Flag::ok()
}

/// No K-pinch and no ∂K-pinch. Assumes `k` non-singular.
fn check_non_pinching(k: &CellComplex) -> Flag {
    let dg = dual_graph_unchecked(k);
    let top = match k.rank() {
        None => return Flag::ok(),
        Some(t) => t,
    };
    let max_pos: BTreeMap<&Cell, usize> =
        dg.cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    for (c, r) in k.iter() {
        if r == top {
            continue;
        }
        let dual: Vec<usize> = k
            .rank_cells(top)
            .iter()
            .filter(|&&z| c.subset_of(k.cell(z)))
            .map(|&z| max_pos[k.cell(z)])
            .collect();
        if !dg.connected_on(&dual) {
            return Flag::fail(format!("{c} is a K-pinch"));
        }
    }
    // ∂K-pinches: with no K-pinch the boundary is closed, hence its dual
    // graph is defined.
    let b = k.boundary().expect("non-singular is pure");
    if !b.is_empty() {
        let breport_ns = b.is_pure();
        if !breport_ns {
            return Flag::fail("boundary is not pure");
        }
        let bdg = dual_graph_unchecked(&b);
        let btop = b.rank().expect("nonempty");
        let bmax_pos: BTreeMap<&Cell, usize> =
            bdg.cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
        for (c, r) in b.iter() {
            if r == btop {
                continue;
            }
            let dual: Vec<usize> = b
                .rank_cells(btop)
                .iter()
                .filter(|&&z| c.subset_of(b.cell(z)))
                .map(|&z| bmax_pos[b.cell(z)])
                .collect();
            if !bdg.connected_on(&dual) {
                return Flag::fail(format!("{c} is a ∂K-pinch"));
            }
        }
    }
    Flag::ok()
}

fn check_simplicial(k: &CellComplex) -> Flag {
    for (c, r) in k.iter() {
        if r + 1 != c.len() {
            return Flag::fail(format!("cell {c} has rank {r} ≠ |{c}|−1"));
        }
        if c.len() >= 2 {
            for v in c.iter() {
                let face = Cell::new(c.iter().filter(|&w| w != v));
                if !k.contains(&face) {
                    return Flag::fail(format!("subset {face} of {c} is missing"));
                }
            }
        }
    }
    Flag::ok()
}

/// Connected components (vertex sets) of the 1-skeleton restricted to a
/// 2-cell.
pub fn two_cell_components(k: &CellComplex, c: &Cell) -> Vec<Vec<VertexId>> {
    let sub = k
        .restriction(c.vertices())
        .expect("restriction to a cell is valid");
    sub.vertex_components()
}

fn check_even(k: &CellComplex) -> Flag {
    for &i in k.rank_cells(2) {
        for comp in two_cell_components(k, k.cell(i)) {
            if comp.len() % 2 != 0 {
                return Flag::fail(format!(
                    "2-cell {} has an odd component of {} vertices",
                    k.cell(i),
                    comp.len()
                ));
            }
        }
    }
    Flag::ok()
}

/// `r`-fullness: for every vertex `v`, every `k ∈ [2, r]` and every
/// `k`-subset `S ⊆ E_v` there is a unique `k`-cell `x` with `E_v^x = S`.
pub fn check_full(k: &CellComplex, r: usize) -> Flag {
    for v in k.vertices() {
        let edges = k.edges_at(v);
        for size in 2..=r {
            if edges.len() < size {
                continue;
            }
            for subset in combinations(edges.len(), size) {
                let chosen: Vec<usize> = subset.iter().map(|&i| edges[i]).collect();
                let mut matching = k
                    .rank_cells(size)
                    .iter()
                    .filter(|&&x| edge_set_at(k, x, v) == chosen);
                match (matching.next(), matching.next()) {
                    (Some(_), None) => {}
                    (None, _) => {
                        let names: Vec<String> =
                            chosen.iter().map(|&e| k.cell(e).to_string()).collect();
                        return Flag::fail(format!(
                            "no {size}-cell with edge set {{{}}} at vertex {v}",
                            names.join(", ")
                        ));
                    }
                    (Some(_), Some(_)) => {
                        return Flag::fail(format!(
                            "two {size}-cells share an edge set at vertex {v}"
                        ))
                    }
                }
            }
        }
    }
    Flag::ok()
}

/// `E_v^x`: sorted edge indices at `v` contained in cell `x`.
pub fn edge_set_at(k: &CellComplex, x: usize, v: VertexId) -> Vec<usize> {
    k.edges_at(v)
        .iter()
        .copied()
        .filter(|&e| k.cell(e).subset_of(k.cell(x)))
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::toolkit::generate::{grid, simplex_boundary};

    #[test]
    fn tetra_boundary_flags() {
        let r = classify(&simplex_boundary(3));
        assert!(r.closed.holds);
        assert!(r.local.holds);
        assert!(r.non_pinching.holds);
        assert!(r.simplicial.holds);
        assert!(r.strongly_connected.holds);
    }

    #[test]
    fn fan_of_six_triangles_has_pinch() {
        // Two fans of three triangles each, meeting only at the central
        // vertex 0: the dual graph restricted to the cells around 0 falls
        // apart into two components.
        let mut cells = vec![(Cell::vertex(0), 0)];
        for v in 1..=8u32 {
            cells.push((Cell::vertex(v), 0));
        }
        for base in [1u32, 5] {
            for i in 0..4 {
                cells.push((Cell::new([0, base + i]), 1));
                if i < 3 {
                    cells.push((Cell::new([base + i, base + i + 1]), 1));
                    cells.push((Cell::new([0, base + i, base + i + 1]), 2));
                }
            }
        }
        let k = build_complex(cells).unwrap();
        assert_eq!(k.rank_cells(2).len(), 6);
        let r = classify(&k);
        assert!(!r.non_pinching.holds);
        assert!(r.non_pinching.witness.as_deref().unwrap().contains("{0}"));
    }

    #[test]
    fn single_edge_classification() {
        let k = build_complex([
            (Cell::vertex(0), 0),
            (Cell::vertex(1), 0),
            (Cell::new([0, 1]), 1),
        ])
        .unwrap();
        let r = classify(&k);
        assert!(r.pure.holds && r.graph_based.holds && r.non_singular.holds);
        assert!(!r.closed.holds);
    }

    #[test]
    fn grid_is_not_full() {
        let k = grid(5, 5);
        let r = classify(&k);
        assert!(!r.full[&2].holds);
        assert!(r.full[&2].witness.is_some());
    }
}
