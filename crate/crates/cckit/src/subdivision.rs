//! Barycentric subdivision and reconstruction of a complex from the
//! oriented 1-skeleton of its subdivision.
//!
//! `bdiv(K)` is the order complex: vertices are cells of `K`, cells are
//! nonempty chains under strict inclusion. It is always simplicial, and the
//! map sending a chain to its top cell is a reduction (checked in the
//! causal module's tests). Orienting each subdivision edge from the smaller
//! to the larger cell determines `K` up to isomorphism, which
//! `reconstruct_from_oriented_bdiv` makes effective by longest-path ranking
//! on the acyclic orientation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cell::{Cell, VertexId};
use crate::complex::{build_complex, CellComplex};

/// Barycentric subdivision together with its bookkeeping.
#[derive(Debug, Clone)]
pub struct Barycentric {
    pub complex: CellComplex,
    /// Subdivision vertex id → the base cell it is the barycenter of.
    pub vertex_origin: BTreeMap<VertexId, Cell>,
    /// Base cell → its subdivision vertex id.
    pub vertex_of_cell: BTreeMap<Cell, VertexId>,
    /// For every subdivision cell, the base cell its chain tops out at;
    /// this is the canonical reduction `bdiv(K) → K`.
    pub rho: BTreeMap<Cell, Cell>,
}

/// First derived subdivision: one vertex per cell, one k-cell per chain of
/// k+1 nested cells.
pub fn barycentric(k: &CellComplex) -> Barycentric {
    let vertex_of_cell: BTreeMap<Cell, VertexId> = k
        .cells()
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as VertexId))
        .collect();
    let vertex_origin: BTreeMap<VertexId, Cell> = vertex_of_cell
        .iter()
        .map(|(c, &v)| (v, c.clone()))
        .collect();

    // Chains by DFS over the inclusion order; cells are indexed by rank so
    // extensions only look upward.
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..k.len()).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("nonempty");
        for next in 0..k.len() {
            if k.cell(last).strict_subset_of(k.cell(next)) {
                let mut ext = chain.clone();
                ext.push(next);
                stack.push(ext);
            }
        }
        chains.push(chain);
    }

    let mut ranked = Vec::with_capacity(chains.len());
    let mut rho = BTreeMap::new();
    for chain in &chains {
        let cell = Cell::new(chain.iter().map(|&i| i as VertexId));
        let top = chain
            .iter()
            .copied()
            .max_by_key(|&i| k.rank_of(i))
            .expect("nonempty chain");
        ranked.push((cell.clone(), chain.len() - 1));
        rho.insert(cell, k.cell(top).clone());
    }
    let complex = build_complex(ranked).expect("order complex is a simplicial complex");
    Barycentric {
        complex,
        vertex_origin,
        vertex_of_cell,
        rho,
    }
}

/// A graph with a chosen direction on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    pub vertices: Vec<VertexId>,
    /// Directed edges (source, target); the underlying undirected edge set
    /// is recovered by forgetting order.
    pub arcs: Vec<(VertexId, VertexId)>,
}

impl OrientedGraph {
    /// Reverses every arc.
    pub fn reversed(&self) -> OrientedGraph {
        OrientedGraph {
            vertices: self.vertices.clone(),
            arcs: self.arcs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// The orientation is transitive when consecutive arcs close into an
    /// arc of the graph.
    pub fn is_transitive(&self) -> bool {
        let set: std::collections::HashSet<(VertexId, VertexId)> =
            self.arcs.iter().copied().collect();
        for &(x, y) in &self.arcs {
            for &(y2, z) in &self.arcs {
                if y2 == y && !set.contains(&(x, z)) && x != z {
                    return false;
                }
            }
        }
        true
    }
}

/// Orients the 1-skeleton of a subdivision by inclusion of cell origins:
/// each edge `{x ⊊ y}` runs from the barycenter of `x` to that of `y`.
pub fn inclusion_orientation(b: &Barycentric) -> OrientedGraph {
    let k = &b.complex;
    let mut arcs = Vec::new();
    for &e in k.rank_cells(1) {
        let vs = k.cell(e).vertices();
        let (cx, cy) = (&b.vertex_origin[&vs[0]], &b.vertex_origin[&vs[1]]);
        if cx.strict_subset_of(cy) {
            arcs.push((vs[0], vs[1]));
        } else {
            arcs.push((vs[1], vs[0]));
        }
    }
    arcs.sort_unstable();
    OrientedGraph {
        vertices: k.vertex_set(),
        arcs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("directed-path structure inconsistent: {0}")]
    NotABdivGraph(String),
}

/// Rebuilds the base complex from the oriented 1-skeleton of its
/// subdivision: the rank of a flag vertex is the longest directed path
/// ending there, and its cell is the set of rank-0 sources reaching it.
pub fn reconstruct_from_oriented_bdiv(g: &OrientedGraph) -> Result<CellComplex, ReconstructError> {
    let n = g.vertices.len();
    let pos: BTreeMap<VertexId, usize> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut out_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(a, b) in &g.arcs {
        let (pa, pb) = match (pos.get(&a), pos.get(&b)) {
            (Some(&pa), Some(&pb)) => (pa, pb),
            _ => {
                return Err(ReconstructError::NotABdivGraph(format!(
                    "unknown vertex in arc ({a},{b})"
                )))
            }
        };
        out_adj[pa].push(pb);
        indeg[pb] += 1;
    }

    // Topological order; a cycle means this is no inclusion orientation.
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    let mut indeg_mut = indeg.clone();
    while let Some(i) = queue.pop() {
        topo.push(i);
        for &j in &out_adj[i] {
            indeg_mut[j] -= 1;
            if indeg_mut[j] == 0 {
                queue.push(j);
            }
        }
    }
    if topo.len() != n {
        return Err(ReconstructError::NotABdivGraph(
            "orientation has a directed cycle".into(),
        ));
    }

    // Longest incoming path per vertex (the rank) and reachable sources.
    let mut rank = vec![0usize; n];
    let mut sources: Vec<std::collections::BTreeSet<usize>> = (0..n)
        .map(|i| {
            if indeg[i] == 0 {
                std::collections::BTreeSet::from([i])
            } else {
                std::collections::BTreeSet::new()
            }
        })
        .collect();
    for &i in &topo {
        for &j in &out_adj[i].clone() {
            rank[j] = rank[j].max(rank[i] + 1);
            let src: Vec<usize> = sources[i].iter().copied().collect();
            sources[j].extend(src);
        }
    }

    let mut ranked: BTreeMap<Cell, usize> = BTreeMap::new();
    for i in 0..n {
        let cell = Cell::new(sources[i].iter().map(|&s| g.vertices[s]));
        if let Some(&prev) = ranked.get(&cell) {
            if prev != rank[i] {
                return Err(ReconstructError::NotABdivGraph(format!(
                    "two flag vertices give cell {cell} with ranks {prev} and {}",
                    rank[i]
                )));
            }
        }
        ranked.insert(cell, rank[i]);
    }
    build_complex(ranked)
        .map_err(|e| ReconstructError::NotABdivGraph(format!("reconstructed cells invalid: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;
    use crate::toolkit::generate::{cycle, simplex_boundary};

    #[test]
    fn bdiv_of_edge_is_two_edge_path() {
        let k = build_complex([
            (Cell::vertex(0), 0),
            (Cell::vertex(1), 0),
            (Cell::new([0, 1]), 1),
        ])
        .unwrap();
        let b = barycentric(&k);
        assert_eq!(b.complex.f_vector(), vec![3, 2]);
        // rho maps both halves onto the edge
        let halves: Vec<&Cell> = b
            .rho
            .iter()
            .filter(|(c, _)| c.len() == 2)
            .map(|(_, t)| t)
            .collect();
        assert!(halves.iter().all(|t| **t == Cell::new([0, 1])));
    }

    #[test]
    fn bdiv_of_triangle_boundary_is_hexagon() {
        let b = barycentric(&cycle(3));
        assert!(is_isomorphic(&b.complex, &cycle(6)).is_some());
    }

    #[test]
    fn bdiv_f_vector_of_tetra_boundary() {
        let b = barycentric(&simplex_boundary(3));
        assert_eq!(b.complex.f_vector(), vec![14, 36, 24]);
    }

    #[test]
    fn orientation_points_up_and_is_transitive() {
        let b = barycentric(&simplex_boundary(3));
        let g = inclusion_orientation(&b);
        for &(s, t) in &g.arcs {
            assert!(b.vertex_origin[&s].strict_subset_of(&b.vertex_origin[&t]));
        }
        assert!(g.is_transitive());
    }

    #[test]
    fn roundtrip_tetra_boundary() {
        let k = simplex_boundary(3);
        let g = inclusion_orientation(&barycentric(&k));
        let r = reconstruct_from_oriented_bdiv(&g).unwrap();
        assert!(is_isomorphic(&k, &r).is_some());
    }

    #[test]
    fn reversed_orientation_gives_dual() {
        let k = simplex_boundary(4);
        let g = inclusion_orientation(&barycentric(&k)).reversed();
        let r = reconstruct_from_oriented_bdiv(&g).unwrap();
        let d = crate::duality::dual_closed(&k).unwrap().complex;
        assert!(is_isomorphic(&d, &r).is_some());
    }

    #[test]
    fn cyclic_input_is_rejected() {
        let g = OrientedGraph {
            vertices: vec![0, 1, 2],
            arcs: vec![(0, 1), (1, 2), (2, 0)],
        };
        assert!(matches!(
            reconstruct_from_oriented_bdiv(&g),
            Err(ReconstructError::NotABdivGraph(_))
        ));
    }
}
