//! Isomorphism testing by backtracking over vertex assignments.
//!
//! Two complexes are cc-isomorphic iff some vertex bijection maps the cell
//! family of one bijectively onto the other preserving ranks (a bijective
//! rank-preserving poset homomorphism is a cc-isomorphism). The search
//! prunes with per-vertex invariants and checks cells as soon as all their
//! vertices are assigned. Complete at desk scale; no canonical form.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::cell::{Cell, VertexId};
use crate::complex::CellComplex;

type Invariant = Vec<(usize, usize, usize)>;

/// Sorted profile of (rank, size, count) over the cells containing `v`.
fn vertex_invariant(k: &CellComplex, v: VertexId) -> Invariant {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (c, r) in k.iter() {
        if c.contains(v) {
            *counts.entry((r, c.len())).or_insert(0) += 1;
        }
    }
    counts.into_iter().map(|((r, s), n)| (r, s, n)).collect()
}

/// Searches for a vertex bijection inducing a rank-preserving cell
/// bijection. Deterministic given input order.
pub fn is_isomorphic(k: &CellComplex, j: &CellComplex) -> Option<BTreeMap<VertexId, VertexId>> {
    is_isomorphic_respecting(
        k,
        j,
        &std::collections::BTreeSet::new(),
        &std::collections::BTreeSet::new(),
    )
}

/// Isomorphism constrained to carry the marked vertices of `k` exactly
/// onto the marked vertices of `j` (used for cobordism isomorphism, where
/// the removed boundary must map onto the removed boundary).
pub fn is_isomorphic_respecting(
    k: &CellComplex,
    j: &CellComplex,
    k_marked: &std::collections::BTreeSet<VertexId>,
    j_marked: &std::collections::BTreeSet<VertexId>,
) -> Option<BTreeMap<VertexId, VertexId>> {
    if k.len() != j.len() {
        return None;
    }
    if k.is_empty() {
        return Some(BTreeMap::new());
    }
    // Global profile must match.
    let profile = |c: &CellComplex| {
        let mut p: Vec<(usize, usize)> = c.iter().map(|(cell, r)| (r, cell.len())).collect();
        p.sort_unstable();
        p
    };
    if profile(k) != profile(j) {
        return None;
    }

    let kv = k.vertex_set();
    let jv = j.vertex_set();
    if kv.len() != jv.len() {
        return None;
    }

    if k_marked.len() != j_marked.len() {
        return None;
    }
    let mark = |inv: Invariant, marked: bool| -> Invariant {
        let mut inv = inv;
        if marked {
            inv.push((usize::MAX, 0, 0));
        }
        inv
    };
    let k_inv: HashMap<VertexId, Invariant> = kv
        .iter()
        .map(|&v| (v, mark(vertex_invariant(k, v), k_marked.contains(&v))))
        .collect();
    let j_inv: HashMap<VertexId, Invariant> = jv
        .iter()
        .map(|&v| (v, mark(vertex_invariant(j, v), j_marked.contains(&v))))
        .collect();

    // Invariant classes must match in size.
    let mut k_classes: BTreeMap<&Invariant, usize> = BTreeMap::new();
    let mut j_classes: BTreeMap<&Invariant, usize> = BTreeMap::new();
    for v in &kv {
        *k_classes.entry(&k_inv[v]).or_insert(0) += 1;
    }
    for v in &jv {
        *j_classes.entry(&j_inv[v]).or_insert(0) += 1;
    }
    if k_classes != j_classes {
        return None;
    }

    // Assignment order: BFS over the 1-skeleton starting from the rarest
    // invariant class, so that candidates stay adjacency-constrained.
    let order = assignment_order(k, &kv, &k_inv, &k_classes);

    let mut mapping: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut used: HashSet<VertexId> = HashSet::new();
    if assign(
        k,
        j,
        &order,
        0,
        &k_inv,
        &j_inv,
        &jv,
        &mut mapping,
        &mut used,
    ) {
        Some(mapping)
    } else {
        None
    }
}

fn assignment_order(
    k: &CellComplex,
    kv: &[VertexId],
    k_inv: &HashMap<VertexId, Invariant>,
    classes: &BTreeMap<&Invariant, usize>,
) -> Vec<VertexId> {
    let mut remaining: HashSet<VertexId> = kv.iter().copied().collect();
    let mut order = Vec::with_capacity(kv.len());
    while !remaining.is_empty() {
        let seed = *remaining
            .iter()
            .min_by_key(|v| (classes[&k_inv[v]], **v))
            .expect("nonempty");
        let mut queue = std::collections::VecDeque::from([seed]);
        remaining.remove(&seed);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<VertexId> = k
                .edges_at(v)
                .iter()
                .flat_map(|&e| k.cell(e).iter())
                .filter(|w| remaining.contains(w))
                .collect();
            nbrs.sort_unstable();
            nbrs.dedup();
            for w in nbrs {
                remaining.remove(&w);
                queue.push_back(w);
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn assign(
    k: &CellComplex,
    j: &CellComplex,
    order: &[VertexId],
    pos: usize,
    k_inv: &HashMap<VertexId, Invariant>,
    j_inv: &HashMap<VertexId, Invariant>,
    jv: &[VertexId],
    mapping: &mut BTreeMap<VertexId, VertexId>,
    used: &mut HashSet<VertexId>,
) -> bool {
    if pos == order.len() {
        return check_full(k, j, mapping);
    }
    let v = order[pos];
    for &w in jv {
        if used.contains(&w) || j_inv[&w] != k_inv[&v] {
            continue;
        }
        mapping.insert(v, w);
        used.insert(w);
        if partial_consistent(k, j, mapping, v)
            && assign(k, j, order, pos + 1, k_inv, j_inv, jv, mapping, used)
        {
            return true;
        }
        mapping.remove(&v);
        used.remove(&w);
    }
    false
}

/// Every cell of `k` containing `v` whose vertices are all assigned must map
/// onto a cell of `j` of the same rank.
fn partial_consistent(
    k: &CellComplex,
    j: &CellComplex,
    mapping: &BTreeMap<VertexId, VertexId>,
    v: VertexId,
) -> bool {
    for (c, r) in k.iter() {
        if !c.contains(v) {
            continue;
        }
        if let Some(image) = map_cell(c, mapping) {
            match j.index_of(&image) {
                Some(t) if j.rank_of(t) == r => {}
                _ => return false,
            }
        }
    }
    true
}

fn map_cell(c: &Cell, mapping: &BTreeMap<VertexId, VertexId>) -> Option<Cell> {
    let mut out = Vec::with_capacity(c.len());
    for v in c.iter() {
        out.push(*mapping.get(&v)?);
    }
    Some(Cell::new(out))
}

fn check_full(k: &CellComplex, j: &CellComplex, mapping: &BTreeMap<VertexId, VertexId>) -> bool {
    let mut seen = HashSet::with_capacity(k.len());
    for (c, r) in k.iter() {
        let image = match map_cell(c, mapping) {
            Some(i) => i,
            None => return false,
        };
        match j.index_of(&image) {
            Some(t) if j.rank_of(t) == r => {
                if !seen.insert(t) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    seen.len() == j.len()
}

/// Applies a vertex bijection to a complex; useful to compose and verify
/// returned isomorphisms.
pub fn apply_bijection(k: &CellComplex, map: &BTreeMap<VertexId, VertexId>) -> CellComplex {
    k.relabel(map)
}
