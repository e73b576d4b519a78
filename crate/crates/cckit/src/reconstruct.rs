//! Connection, covariant edge fields, path moves and the reconstruction of
//! an ambient complex from a 2-skeleton.
//!
//! The connection `∇ʷᵥ` maps edges at `v` to edges at `w` across the unique
//! 2-cell containing both the transported edge and `{v,w}`; transport
//! composes the steps along a path. On full, even, monodromy-free, simply
//! connected complexes transport is path independent, which lets a single
//! seed edge extend to a covariant edge field over the whole vertex set.
//! Induced subcomplexes grow from a vertex and a set of its edges by
//! absorbing 2-cells whose local edge sets stay inside the field; their
//! vertex sets are the higher cells of the ambient complex.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::cell::{Cell, VertexId};
use crate::classify::{classify, edge_set_at, two_cell_components, Flag};
use crate::complex::{build_complex, CellComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("complex is not graph-based")]
    NotGraphBased,
    #[error("complex is not full: {0}")]
    NotFull(String),
    #[error("no 2-cell contains both {edge} and {step}")]
    EdgeNotMapped { edge: Cell, step: Cell },
    #[error("invalid path: {0}")]
    BadPath(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("covariant field inconsistent on edge {edge}")]
    FieldInconsistent { edge: Cell },
    #[error("bad seed: {0}")]
    BadSeed(String),
    #[error("induced cells are not a non-singular collection: {x} vs {y}")]
    NonSingularCollection { x: Cell, y: Cell },
    #[error("ambient complex failed validation: {0}")]
    AmbientInvalid(String),
}

/// An edge path: a start vertex and edge indices; consecutive edges share
/// the running endpoint. The empty path at `v` has no edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePath {
    pub start: VertexId,
    pub edges: Vec<usize>,
}

impl EdgePath {
    pub fn empty(v: VertexId) -> Self {
        EdgePath {
            start: v,
            edges: Vec::new(),
        }
    }

    pub fn new(
        k: &CellComplex,
        start: VertexId,
        edges: Vec<usize>,
    ) -> Result<Self, ReconstructError> {
        let p = EdgePath { start, edges };
        p.vertex_sequence(k)?;
        Ok(p)
    }

    /// The visited vertices `v₀, …, v_k`; errors when some edge does not
    /// continue at the running endpoint.
    pub fn vertex_sequence(&self, k: &CellComplex) -> Result<Vec<VertexId>, ReconstructError> {
        let mut seq = vec![self.start];
        let mut at = self.start;
        for &e in &self.edges {
            let vs = k.cell(e).vertices();
            if vs.len() != 2 {
                return Err(ReconstructError::NotGraphBased);
            }
            let next = if vs[0] == at {
                vs[1]
            } else if vs[1] == at {
                vs[0]
            } else {
                return Err(ReconstructError::BadPath(format!(
                    "edge {} does not contain vertex {at}",
                    k.cell(e)
                )));
            };
            seq.push(next);
            at = next;
        }
        Ok(seq)
    }

    pub fn end(&self, k: &CellComplex) -> Result<VertexId, ReconstructError> {
        Ok(*self.vertex_sequence(k)?.last().expect("nonempty"))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn reversed(&self, k: &CellComplex) -> Result<EdgePath, ReconstructError> {
        let end = self.end(k)?;
        Ok(EdgePath {
            start: end,
            edges: self.edges.iter().rev().copied().collect(),
        })
    }

    pub fn concat(&self, other: &EdgePath) -> EdgePath {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        EdgePath {
            start: self.start,
            edges,
        }
    }

    /// Vertex set `p^[0]`; the empty path owns its base point.
    pub fn vertex_set(&self, k: &CellComplex) -> Result<BTreeSet<VertexId>, ReconstructError> {
        Ok(self.vertex_sequence(k)?.into_iter().collect())
    }

    /// A path is simple when it has `|p|+1` distinct vertices.
    pub fn is_simple(&self, k: &CellComplex) -> Result<bool, ReconstructError> {
        let seq = self.vertex_sequence(k)?;
        let set: BTreeSet<VertexId> = seq.iter().copied().collect();
        Ok(set.len() == self.edges.len() + 1)
    }
}

/// Precomputed connection data for a pure graph-based complex: the unique
/// 2-cell through any two edges that share one.
pub struct Connection<'a> {
    k: &'a CellComplex,
    pair_cell: HashMap<(usize, usize), usize>,
}

impl<'a> Connection<'a> {
    pub fn new(k: &'a CellComplex) -> Result<Self, ReconstructError> {
        for &e in k.rank_cells(1) {
            if k.cell(e).len() != 2 {
                return Err(ReconstructError::NotGraphBased);
            }
        }
        let mut pair_cell = HashMap::new();
        for &c in k.rank_cells(2) {
            let edges: Vec<usize> = k
                .rank_cells(1)
                .iter()
                .copied()
                .filter(|&e| k.cell(e).subset_of(k.cell(c)))
                .collect();
            for (i, &a) in edges.iter().enumerate() {
                for &b in &edges[i + 1..] {
                    pair_cell.insert((a.min(b), a.max(b)), c);
                }
            }
        }
        Ok(Connection { k, pair_cell })
    }

    pub fn complex(&self) -> &CellComplex {
        self.k
    }

    /// The unique 2-cell containing both edges, if any.
    pub fn common_two_cell(&self, a: usize, b: usize) -> Option<usize> {
        self.pair_cell.get(&(a.min(b), a.max(b))).copied()
    }

    /// One connection step `∇ʷᵥ e` across the edge `{v,w}`.
    pub fn step(&self, v: VertexId, w: VertexId, e: usize) -> Result<usize, ReconstructError> {
        let vw = self
            .k
            .index_of(&Cell::new([v, w]))
            .ok_or_else(|| ReconstructError::BadPath(format!("{{{v} {w}}} is not an edge")))?;
        if e == vw {
            return Ok(vw);
        }
        if !self.k.cell(e).contains(v) {
            return Err(ReconstructError::BadPath(format!(
                "edge {} is not incident to {v}",
                self.k.cell(e)
            )));
        }
        let c = self
            .common_two_cell(e, vw)
            .ok_or(ReconstructError::EdgeNotMapped {
                edge: self.k.cell(e).clone(),
                step: self.k.cell(vw).clone(),
            })?;
        let at_w = edge_set_at(self.k, c, w);
        at_w.into_iter()
            .find(|&f| f != vw)
            .ok_or_else(|| ReconstructError::BadPath("diamond property broken".into()))
    }

    /// Transport along a path: `∇_p`.
    pub fn transport(&self, p: &EdgePath, e: usize) -> Result<usize, ReconstructError> {
        let seq = p.vertex_sequence(self.k)?;
        if !self.k.cell(e).contains(p.start) {
            return Err(ReconstructError::BadPath(format!(
                "edge {} is not incident to the start {}",
                self.k.cell(e),
                p.start
            )));
        }
        let mut cur = e;
        for (i, &step) in p.edges.iter().enumerate() {
            let _ = step;
            cur = self.step(seq[i], seq[i + 1], cur)?;
        }
        Ok(cur)
    }
}

/// `transport` with fullness reported as `NotFull`.
pub fn transport(k: &CellComplex, p: &EdgePath, e: usize) -> Result<usize, ReconstructError> {
    let conn = Connection::new(k)?;
    conn.transport(p, e).map_err(|err| match err {
        ReconstructError::EdgeNotMapped { edge, step } => {
            ReconstructError::NotFull(format!("no 2-cell contains {edge} and {step}"))
        }
        other => other,
    })
}

/// One connection step as a standalone operation.
pub fn connection_step(
    k: &CellComplex,
    v: VertexId,
    w: VertexId,
    e: &Cell,
) -> Result<Cell, ReconstructError> {
    let conn = Connection::new(k)?;
    let ei = k
        .index_of(e)
        .ok_or_else(|| ReconstructError::BadPath(format!("{e} is not a cell")))?;
    conn.step(v, w, ei).map(|i| k.cell(i).clone())
}

/// The ordered cycle of a connected component of a 2-cell containing `v`.
pub fn component_representation(
    k: &CellComplex,
    c: usize,
    v: VertexId,
) -> Result<Vec<VertexId>, ReconstructError> {
    let comps = two_cell_components(k, k.cell(c));
    let comp = comps
        .into_iter()
        .find(|comp| comp.contains(&v))
        .ok_or_else(|| ReconstructError::BadPath(format!("{v} not in 2-cell")))?;
    if comp.len() < 3 {
        return Err(ReconstructError::BadPath(
            "2-cell component smaller than a cycle".into(),
        ));
    }
    let inside: BTreeSet<VertexId> = comp.iter().copied().collect();
    let nbrs = |u: VertexId| -> Vec<VertexId> {
        k.edges_at(u)
            .iter()
            .filter(|&&e| k.cell(e).subset_of(k.cell(c)))
            .map(|&e| k.cell(e).iter().find(|&x| x != u).expect("graph-based"))
            .filter(|x| inside.contains(x))
            .collect()
    };
    let mut order = vec![v];
    let first = nbrs(v);
    if first.len() != 2 {
        return Err(ReconstructError::BadPath(format!(
            "vertex {v} has {} neighbours in its 2-cell component",
            first.len()
        )));
    }
    let mut prev = v;
    let mut cur = first[0];
    while cur != v {
        order.push(cur);
        let ns = nbrs(cur);
        if ns.len() != 2 {
            return Err(ReconstructError::BadPath("component is not a cycle".into()));
        }
        let next = if ns[0] == prev { ns[1] } else { ns[0] };
        prev = cur;
        cur = next;
    }
    if order.len() != comp.len() {
        return Err(ReconstructError::BadPath(
            "component is not a single cycle".into(),
        ));
    }
    Ok(order)
}

/// The loop `l_C(v)` of a component representation.
pub fn component_loop(
    k: &CellComplex,
    c: usize,
    v: VertexId,
) -> Result<EdgePath, ReconstructError> {
    let order = component_representation(k, c, v)?;
    let n = order.len();
    let mut edges = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        edges.push(
            k.index_of(&Cell::new([a, b]))
                .ok_or_else(|| ReconstructError::BadPath("missing cycle edge".into()))?,
        );
    }
    EdgePath::new(k, v, edges)
}

/// Monodromy freedom: transport around every 2-cell component loop fixes
/// each edge of `E_v ∩ E_C` pointwise.
pub fn check_monodromy_free(k: &CellComplex) -> Result<Flag, ReconstructError> {
    let conn = Connection::new(k)?;
    for &c in k.rank_cells(2) {
        for comp in two_cell_components(k, k.cell(c)) {
            let v = comp[0];
            let lp = component_loop(k, c, v)?;
            let comp_set: BTreeSet<VertexId> = comp.iter().copied().collect();
            for &e in k.edges_at(v) {
                // E_C: edges meeting the component in exactly one vertex.
                let hits = k.cell(e).iter().filter(|x| comp_set.contains(x)).count();
                if hits != 1 {
                    continue;
                }
                match conn.transport(&lp, e) {
                    Ok(f) if f == e => {}
                    Ok(f) => {
                        return Ok(Flag {
                            holds: false,
                            witness: Some(format!(
                                "loop of {} moves {} to {}",
                                k.cell(c),
                                k.cell(e),
                                k.cell(f)
                            )),
                        })
                    }
                    Err(ReconstructError::EdgeNotMapped { edge, step }) => {
                        return Err(ReconstructError::NotFull(format!(
                            "no 2-cell contains {edge} and {step}"
                        )))
                    }
                    Err(other) => return Err(other),
                }
            }
        }
    }
    Ok(Flag {
        holds: true,
        witness: None,
    })
}

/// Fullness as a standalone check (thin wrapper over the classifier).
pub fn check_full(k: &CellComplex, r: usize) -> Flag {
    crate::classify::check_full(k, r)
}

/// Evenness as a standalone check.
pub fn check_even(k: &CellComplex) -> Flag {
    let rep = classify(k);
    rep.even
}

/// Simple: closed and R-full (closed alone in ranks ≤ 1).
pub fn check_simple(k: &CellComplex) -> Flag {
    let rep = classify(k);
    if !rep.closed.holds {
        return rep.closed;
    }
    match k.rank() {
        Some(r) if r >= 2 => crate::classify::check_full(k, r),
        _ => Flag {
            holds: true,
            witness: None,
        },
    }
}

/// A path move: through a 2-cell or cancelling a back-and-forth edge pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// `m_C^p`: replace the first qualifying occurrence of the simple path
    /// `p` inside the 2-cell `c` by its complement.
    TwoCell { c: usize, p: EdgePath },
    /// `m_{e,v}`: cancel the first qualifying `(e, e)` based at `v`.
    EdgeCancel { e: usize, v: VertexId },
    /// `m_{e,v}⁻¹`: insert `(e, e)` at the first visit of `v`.
    EdgeInsert { e: usize, v: VertexId },
}

/// Applies a move; paths not containing the pattern are returned unchanged.
pub fn apply_move(k: &CellComplex, m: &Move, q: &EdgePath) -> Result<EdgePath, ReconstructError> {
    match m {
        Move::TwoCell { c, p } => {
            if p.is_empty() {
                return Err(ReconstructError::IllegalMove("empty move path".into()));
            }
            if !p.is_simple(k)? {
                return Err(ReconstructError::IllegalMove(
                    "move path is not simple".into(),
                ));
            }
            for &e in &p.edges {
                if !k.cell(e).subset_of(k.cell(*c)) {
                    return Err(ReconstructError::IllegalMove(format!(
                        "edge {} is not inside the 2-cell {}",
                        k.cell(e),
                        k.cell(*c)
                    )));
                }
            }
            let comp = complementary_path(k, *c, p)?;
            let qseq = q.vertex_sequence(k)?;
            let pl = p.edges.len();
            if q.edges.len() < pl {
                return Ok(q.clone());
            }
            for i in 0..=(q.edges.len() - pl) {
                let matches = q.edges[i..i + pl] == p.edges[..] && qseq[i] == p.start;
                if !matches {
                    continue;
                }
                // First occurrence only; the prefix must not contain p.
                let prefix: BTreeSet<usize> = q.edges[..i].iter().copied().collect();
                if p.edges.iter().all(|e| prefix.contains(e)) {
                    return Ok(q.clone());
                }
                let mut edges: Vec<usize> = q.edges[..i].to_vec();
                edges.extend_from_slice(&comp.edges);
                edges.extend_from_slice(&q.edges[i + pl..]);
                return EdgePath::new(k, q.start, edges);
            }
            Ok(q.clone())
        }
        Move::EdgeCancel { e, v } => {
            let vs = k.cell(*e).vertices();
            if vs.len() != 2 || !k.cell(*e).contains(*v) {
                return Err(ReconstructError::IllegalMove("vertex not on edge".into()));
            }
            let w = if vs[0] == *v { vs[1] } else { vs[0] };
            let qseq = q.vertex_sequence(k)?;
            for i in 0..q.edges.len().saturating_sub(1) {
                if q.edges[i] != *e || q.edges[i + 1] != *e || qseq[i] != *v {
                    continue;
                }
                let before: BTreeSet<VertexId> = qseq[..=i].iter().copied().collect();
                let after: BTreeSet<VertexId> = qseq[i + 2..].iter().copied().collect();
                let prefix_has_e = q.edges[..i].contains(e);
                // Both flanks stay clear of the far endpoint w, and the
                // pattern is the first occurrence of e.
                if before.contains(&w) || after.contains(&w) || prefix_has_e {
                    continue;
                }
                let mut edges: Vec<usize> = q.edges[..i].to_vec();
                edges.extend_from_slice(&q.edges[i + 2..]);
                return EdgePath::new(k, q.start, edges);
            }
            Ok(q.clone())
        }
        Move::EdgeInsert { e, v } => {
            let vs = k.cell(*e).vertices();
            if vs.len() != 2 || !k.cell(*e).contains(*v) {
                return Err(ReconstructError::IllegalMove("vertex not on edge".into()));
            }
            let w = if vs[0] == *v { vs[1] } else { vs[0] };
            let qset = q.vertex_set(k)?;
            if !qset.contains(v) || qset.contains(&w) {
                return Ok(q.clone());
            }
            let qseq = q.vertex_sequence(k)?;
            let at = qseq.iter().position(|x| x == v).expect("v visited");
            let mut edges: Vec<usize> = q.edges[..at].to_vec();
            edges.push(*e);
            edges.push(*e);
            edges.extend_from_slice(&q.edges[at..]);
            EdgePath::new(k, q.start, edges)
        }
    }
}

/// The complementary path `p^C` inside the component of `c` containing `p`,
/// running from the same start to the same end the other way round.
pub fn complementary_path(
    k: &CellComplex,
    c: usize,
    p: &EdgePath,
) -> Result<EdgePath, ReconstructError> {
    let order = component_representation(k, c, p.start)?;
    let n = order.len();
    let end = p.end(k)?;
    // Walk the loop backwards from start until end is reached.
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let end_pos = *pos
        .get(&end)
        .ok_or_else(|| ReconstructError::IllegalMove("endpoint not in 2-cell component".into()))?;
    // The loop order[0], order[1], …: p must follow it forwards (p is a path
    // from order[0]); its complement runs backwards from order[0].
    let seq = p.vertex_sequence(k)?;
    let forwards = seq.len() >= 2 && pos[&seq[1]] == 1;
    let mut edges = Vec::new();
    if forwards {
        // complement: order[0] → order[n-1] → … → order[end_pos]
        let mut i = 0usize;
        while i != end_pos {
            let j = (i + n - 1) % n;
            edges.push(
                k.index_of(&Cell::new([order[i], order[j]]))
                    .ok_or_else(|| ReconstructError::IllegalMove("missing loop edge".into()))?,
            );
            i = j;
        }
    } else {
        // p runs backwards along the representation; complement forwards.
        let mut i = 0usize;
        while i != end_pos {
            let j = (i + 1) % n;
            edges.push(
                k.index_of(&Cell::new([order[i], order[j]]))
                    .ok_or_else(|| ReconstructError::IllegalMove("missing loop edge".into()))?,
            );
            i = j;
        }
    }
    EdgePath::new(k, p.start, edges)
}

/// Result of the bounded contractibility search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contractibility {
    Yes { moves: Vec<Move> },
    Unknown,
}

/// Breadth-first search over move applications; a semidecision that never
/// answers "no".
pub fn is_contractible_bounded(
    k: &CellComplex,
    cycle: &EdgePath,
    budget: usize,
) -> Result<Contractibility, ReconstructError> {
    let seq = cycle.vertex_sequence(k)?;
    if seq.first() != seq.last() {
        return Err(ReconstructError::BadPath("not a cycle".into()));
    }
    let target = EdgePath::empty(cycle.start);
    if *cycle == target {
        return Ok(Contractibility::Yes { moves: vec![] });
    }
    let mut queue: VecDeque<EdgePath> = VecDeque::from([cycle.clone()]);
    let mut seen: HashMap<EdgePath, (EdgePath, Move)> = HashMap::new();
    let mut visited: BTreeSet<EdgePath> = BTreeSet::from([cycle.clone()]);
    while let Some(q) = queue.pop_front() {
        if visited.len() > budget {
            return Ok(Contractibility::Unknown);
        }
        for m in candidate_moves(k, &q)? {
            let next = apply_move(k, &m, &q)?;
            if next == q || visited.contains(&next) {
                continue;
            }
            seen.insert(next.clone(), (q.clone(), m.clone()));
            if next == target {
                // Reconstruct the move sequence.
                let mut moves = Vec::new();
                let mut cur = next;
                while cur != *cycle {
                    let (prev, mv) = seen[&cur].clone();
                    moves.push(mv);
                    cur = prev;
                }
                moves.reverse();
                return Ok(Contractibility::Yes { moves });
            }
            visited.insert(next.clone());
            queue.push_back(next);
        }
    }
    Ok(Contractibility::Unknown)
}

/// Shrinking move candidates for the current path: edge cancellations plus,
/// per position and 2-cell, the maximal simple consecutive subpath lying in
/// that cell.
fn candidate_moves(k: &CellComplex, q: &EdgePath) -> Result<Vec<Move>, ReconstructError> {
    let mut out = Vec::new();
    let seq = q.vertex_sequence(k)?;
    for i in 0..q.edges.len().saturating_sub(1) {
        if q.edges[i] == q.edges[i + 1] {
            out.push(Move::EdgeCancel {
                e: q.edges[i],
                v: seq[i],
            });
        }
    }
    let mut cells_of_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in &q.edges {
        cells_of_edge.entry(e).or_insert_with(|| {
            k.rank_cells(2)
                .iter()
                .copied()
                .filter(|&c| k.cell(e).subset_of(k.cell(c)))
                .collect()
        });
    }
    for i in 0..q.edges.len() {
        for &c in &cells_of_edge[&q.edges[i]] {
            // Extend while the subpath stays simple and inside c.
            let mut j = i;
            let mut visited: BTreeSet<VertexId> = BTreeSet::from([seq[i], seq[i + 1]]);
            while j + 1 < q.edges.len()
                && k.cell(q.edges[j + 1]).subset_of(k.cell(c))
                && visited.insert(seq[j + 2])
            {
                j += 1;
            }
            out.push(Move::TwoCell {
                c,
                p: EdgePath {
                    start: seq[i],
                    edges: q.edges[i..=j].to_vec(),
                },
            });
        }
    }
    Ok(out)
}

/// A covariant edge field: one incident edge per vertex, consistent with
/// the connection across every edge of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeField {
    pub assignment: BTreeMap<VertexId, usize>,
}

/// Extends a seed to the unique covariant edge field over the whole vertex
/// set; verifies covariance on every edge and surfaces a witness edge when
/// transport is path dependent.
pub fn extend_field(
    k: &CellComplex,
    seed_vertex: VertexId,
    seed_edge: &Cell,
) -> Result<EdgeField, ReconstructError> {
    check_field_preconditions(k)?;
    let conn = Connection::new(k)?;
    extend_field_with(&conn, seed_vertex, seed_edge)
}

fn check_field_preconditions(k: &CellComplex) -> Result<(), ReconstructError> {
    let rep = classify(k);
    for (name, flag) in [
        ("graph_based", &rep.graph_based),
        ("connected", &rep.connected),
        ("even", &rep.even),
    ] {
        if !flag.holds {
            return Err(ReconstructError::PreconditionFailed(name.into()));
        }
    }
    let full = crate::classify::check_full(k, 2);
    if !full.holds {
        return Err(ReconstructError::PreconditionFailed(format!(
            "full: {}",
            full.witness.unwrap_or_default()
        )));
    }
    let mono = check_monodromy_free(k)?;
    if !mono.holds {
        return Err(ReconstructError::PreconditionFailed(format!(
            "monodromy_free: {}",
            mono.witness.unwrap_or_default()
        )));
    }
    Ok(())
}

/// Field extension over a prebuilt connection; preconditions are the
/// caller's responsibility.
fn extend_field_with(
    conn: &Connection<'_>,
    seed_vertex: VertexId,
    seed_edge: &Cell,
) -> Result<EdgeField, ReconstructError> {
    let k = conn.complex();
    let e0 = k
        .index_of(seed_edge)
        .filter(|&e| k.rank_of(e) == 1 && k.cell(e).contains(seed_vertex))
        .ok_or_else(|| {
            ReconstructError::BadSeed(format!("{seed_edge} not an edge at {seed_vertex}"))
        })?;

    // Spanning tree transport.
    let mut assignment: BTreeMap<VertexId, usize> = BTreeMap::from([(seed_vertex, e0)]);
    let mut queue = VecDeque::from([seed_vertex]);
    while let Some(v) = queue.pop_front() {
        let cur = assignment[&v];
        for &e in k.edges_at(v) {
            let w = k.cell(e).iter().find(|&x| x != v).expect("graph-based");
            if assignment.contains_key(&w) {
                continue;
            }
            let moved = conn.step(v, w, cur)?;
            assignment.insert(w, moved);
            queue.push_back(w);
        }
    }
    // Covariance on every edge, not only tree edges.
    for &e in k.rank_cells(1) {
        let vs = k.cell(e).vertices();
        let (v, w) = (vs[0], vs[1]);
        let moved = conn.step(v, w, assignment[&v])?;
        if moved != assignment[&w] {
            return Err(ReconstructError::FieldInconsistent {
                edge: k.cell(e).clone(),
            });
        }
    }
    Ok(EdgeField { assignment })
}

/// An induced subcomplex grown from a seed `(v, S_v)`.
#[derive(Debug, Clone)]
pub struct InducedCell {
    pub seed_vertex: VertexId,
    pub seed_edges: Vec<Cell>,
    pub complex: CellComplex,
}

/// Grows the unique `|S_v|`-regular induced sub-2-complex with
/// `J^[1] ∩ E_v = S_v`.
pub fn induced_subcomplex(
    k: &CellComplex,
    v: VertexId,
    s_v: &[Cell],
) -> Result<InducedCell, ReconstructError> {
    let degree = k.edges_at(v).len();
    if s_v.len() < 2 || s_v.len() >= degree {
        return Err(ReconstructError::BadSeed(format!(
            "need 2 ≤ |S_v| < {degree}, got {}",
            s_v.len()
        )));
    }
    let fields: Vec<EdgeField> = s_v
        .iter()
        .map(|e| extend_field(k, v, e))
        .collect::<Result<_, _>>()?;
    grow_induced(k, v, s_v, &fields)
}

fn grow_induced(
    k: &CellComplex,
    v: VertexId,
    s_v: &[Cell],
    fields: &[EdgeField],
) -> Result<InducedCell, ReconstructError> {
    // S_w for every vertex: the transported seed edges.
    let mut s_at: BTreeMap<VertexId, BTreeSet<usize>> = BTreeMap::new();
    for w in k.vertices() {
        let set: BTreeSet<usize> = fields.iter().map(|f| f.assignment[&w]).collect();
        if set.len() != fields.len() {
            return Err(ReconstructError::BadSeed(
                "seed edges collide under transport".into(),
            ));
        }
        s_at.insert(w, set);
    }
    // Grow the domain by absorbing admissible 2-cells.
    let mut domain: BTreeSet<VertexId> = BTreeSet::from([v]);
    loop {
        let mut grew = false;
        let snapshot: Vec<VertexId> = domain.iter().copied().collect();
        for &w in &snapshot {
            for &c in k.rank_cells(2) {
                if !k.cell(c).contains(w) {
                    continue;
                }
                let ec: Vec<usize> = edge_set_at(k, c, w);
                if !ec.iter().all(|e| s_at[&w].contains(e)) {
                    continue;
                }
                if k.cell(c).iter().all(|u| domain.contains(&u)) {
                    continue;
                }
                domain.extend(k.cell(c).iter());
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    // Assemble the subcomplex: vertices, their field edges, admissible cells.
    let mut picked: BTreeSet<usize> = BTreeSet::new();
    for &w in &domain {
        picked.insert(k.index_of(&Cell::vertex(w)).expect("vertex cell"));
        for &e in &s_at[&w] {
            picked.insert(e);
        }
        for &c in k.rank_cells(2) {
            if k.cell(c).contains(w) {
                let ec = edge_set_at(k, c, w);
                if ec.iter().all(|e| s_at[&w].contains(e)) {
                    picked.insert(c);
                }
            }
        }
    }
    let ranked = picked.iter().map(|&i| (k.cell(i).clone(), k.rank_of(i)));
    let complex = build_complex(ranked)
        .map_err(|e| ReconstructError::AmbientInvalid(format!("induced complex invalid: {e}")))?;
    Ok(InducedCell {
        seed_vertex: v,
        seed_edges: s_v.to_vec(),
        complex,
    })
}

/// Ambient reconstruction output.
#[derive(Debug, Clone)]
pub struct Ambient {
    pub complex: CellComplex,
    /// The induced r-cell collections for r ≥ 3 (r = 2 is the 2-cells).
    pub induced: BTreeMap<usize, Vec<Cell>>,
}

/// Builds the ambient complex of a local, even, full, monodromy-free
/// (declared simply connected) 2-complex: its r-cells for r ≥ 3 are the
/// vertex sets of the r-regular induced subcomplexes.
pub fn ambient_complex(k2: &CellComplex) -> Result<Ambient, ReconstructError> {
    let rep = classify(k2);
    if k2.rank() != Some(2) {
        return Err(ReconstructError::PreconditionFailed(
            "rank must be 2".into(),
        ));
    }
    for (name, flag) in [
        ("local", &rep.local),
        ("even", &rep.even),
        ("graph_based", &rep.graph_based),
    ] {
        if !flag.holds {
            return Err(ReconstructError::PreconditionFailed(format!(
                "{name}: {}",
                flag.witness.clone().unwrap_or_default()
            )));
        }
    }
    let full = crate::classify::check_full(k2, 2);
    if !full.holds {
        return Err(ReconstructError::PreconditionFailed(format!(
            "full: {}",
            full.witness.unwrap_or_default()
        )));
    }
    let mono = check_monodromy_free(k2)?;
    if !mono.holds {
        return Err(ReconstructError::PreconditionFailed(format!(
            "monodromy_free: {}",
            mono.witness.unwrap_or_default()
        )));
    }
    let mut degrees: BTreeSet<usize> = BTreeSet::new();
    for w in k2.vertices() {
        degrees.insert(k2.edges_at(w).len());
    }
    if degrees.len() != 1 {
        return Err(ReconstructError::PreconditionFailed("not regular".into()));
    }
    let n = degrees.into_iter().next().expect("nonempty");

    // Induced r-cells per rank, deduplicated through selected couples.
    // Preconditions were checked once above, so field extensions reuse a
    // single connection.
    let conn = Connection::new(k2)?;
    let mut induced: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
    induced.insert(
        2,
        k2.rank_cells(2)
            .iter()
            .map(|&c| k2.cell(c).clone())
            .collect(),
    );
    let mut field_cache: HashMap<(VertexId, usize), EdgeField> = HashMap::new();
    for r in 3..n {
        let mut cells: Vec<Cell> = Vec::new();
        let mut selected: BTreeSet<(VertexId, Vec<usize>)> = BTreeSet::new();
        for w in k2.vertex_set() {
            let edges = k2.edges_at(w).to_vec();
            for combo in combinations(edges.len(), r) {
                let seed: Vec<usize> = combo.iter().map(|&i| edges[i]).collect();
                if selected.contains(&(w, seed.clone())) {
                    continue;
                }
                let seed_cells: Vec<Cell> = seed.iter().map(|&e| k2.cell(e).clone()).collect();
                let fields: Vec<EdgeField> = {
                    let mut fs = Vec::with_capacity(seed.len());
                    for &e in &seed {
                        let f = match field_cache.get(&(w, e)) {
                            Some(f) => f.clone(),
                            None => {
                                let f = extend_field_with(&conn, w, k2.cell(e))?;
                                field_cache.insert((w, e), f.clone());
                                f
                            }
                        };
                        fs.push(f);
                    }
                    fs
                };
                let grown = grow_induced(k2, w, &seed_cells, &fields)?;
                // Mark every couple realized by the grown complex.
                for u in grown.complex.vertices() {
                    let s_u: Vec<usize> = grown
                        .complex
                        .edges_at(u)
                        .iter()
                        .map(|&e| k2.index_of(grown.complex.cell(e)).expect("subcomplex"))
                        .collect();
                    let mut s_u = s_u;
                    s_u.sort_unstable();
                    selected.insert((u, s_u));
                }
                cells.push(Cell::new(grown.complex.vertices()));
            }
        }
        cells.sort();
        cells.dedup();
        if !cells.is_empty() {
            induced.insert(r, cells);
        }
    }

    // Non-singularity of every collection.
    for cells in induced.values() {
        for (i, x) in cells.iter().enumerate() {
            for y in cells.iter().skip(i + 1) {
                if let Some(shared) = x.intersection(y) {
                    let sub = k2.restriction(shared.vertices()).expect("vertices of k2");
                    if sub.vertex_components().len() > 1 {
                        return Err(ReconstructError::NonSingularCollection {
                            x: x.clone(),
                            y: y.clone(),
                        });
                    }
                }
            }
        }
    }

    let mut ranked: Vec<(Cell, usize)> = k2.ranked_cells();
    for (&r, cells) in &induced {
        if r >= 3 {
            for c in cells {
                ranked.push((c.clone(), r));
            }
        }
    }
    let complex =
        build_complex(ranked).map_err(|e| ReconstructError::AmbientInvalid(e.to_string()))?;
    // The 2-skeleton must reproduce the input exactly.
    let skel = complex.skeleton(2).expect("rank ≥ 2");
    if skel != *k2 {
        return Err(ReconstructError::AmbientInvalid(
            "2-skeleton of the ambient differs from the input".into(),
        ));
    }
    Ok(Ambient { complex, induced })
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
