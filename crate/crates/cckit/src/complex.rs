//! The cell complex data model and axiom validation.
//!
//! A complex is a finite family of cells (vertex subsets) with a rank
//! function subject to four axioms:
//!
//! 1. rank is strictly monotone along strict inclusion,
//! 2. the family together with the empty set is closed under intersection,
//! 3. no rank gaps: `x ⊊ y` implies `x` is a face of some cell inside `y`,
//! 4. the diamond property: a rank-gap-2 inclusion has exactly two
//!    intermediate cells.
//!
//! `build_complex` is the only entry point; every other operation in the
//! crate consumes validated complexes. Validation is exhaustive and reports
//! every violated axiom with a witness.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cell::{Cell, VertexId};

/// One axiom (or structural) violation found by `build_complex`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxiomViolation {
    /// A vertex occurs in some cell but the singleton is absent or has
    /// nonzero rank.
    MissingVertexRank0 { vertex: VertexId },
    /// The same vertex set was given twice.
    DuplicateCell { cell: Cell },
    /// `x ⊊ y` but `rk(x) ≥ rk(y)`.
    RankNotMonotone { x: Cell, y: Cell },
    /// The intersection of two cells is neither empty nor a cell.
    IntersectionNotCell { x: Cell, y: Cell },
    /// `x ⊊ y` but `x` is a face of no cell contained in `y`.
    RankGap { x: Cell, y: Cell },
    /// A rank-gap-2 pair with `count ≠ 2` intermediate cells.
    DiamondViolation { x: Cell, y: Cell, count: usize },
    /// Safety cap on the number of cells exceeded.
    TooManyCells { count: usize, cap: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::MissingVertexRank0 { vertex } => {
                write!(f, "vertex {vertex} has no rank-0 singleton cell")
            }
            AxiomViolation::DuplicateCell { cell } => write!(f, "duplicate cell {cell}"),
            AxiomViolation::RankNotMonotone { x, y } => {
                write!(f, "rank not monotone on {x} ⊊ {y}")
            }
            AxiomViolation::IntersectionNotCell { x, y } => {
                write!(f, "intersection of {x} and {y} is not a cell")
            }
            AxiomViolation::RankGap { x, y } => write!(f, "rank gap between {x} and {y}"),
            AxiomViolation::DiamondViolation { x, y, count } => {
                write!(
                    f,
                    "diamond property fails on {x} ⊂ {y}: {count} intermediates"
                )
            }
            AxiomViolation::TooManyCells { count, cap } => {
                write!(f, "{count} cells exceeds the cap of {cap}")
            }
        }
    }
}

/// Validation outcome carrying every violation found (up to a cap).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

const MAX_REPORTED: usize = 64;

/// Safety cap on complex size, overridable through `CCKIT_MAX_CELLS`.
pub fn max_cells() -> usize {
    std::env::var("CCKIT_MAX_CELLS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000)
}

/// A validated cell complex.
///
/// Cells are stored sorted by `(rank, vertex set)`; two complexes are equal
/// exactly when their `(cell, rank)` families coincide. Values are immutable
/// after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct CellComplex {
    cells: Vec<Cell>,
    ranks: Vec<usize>,
    index: HashMap<Cell, usize>,
    by_rank: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
    /// Edge index: `E_v`, edges (rank-1 cells) containing each vertex.
    edges_at: HashMap<VertexId, Vec<usize>>,
}

impl fmt::Debug for CellComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellComplex[")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", c, self.ranks[i])?;
        }
        write!(f, "]")
    }
}

/// Validates `(cell, rank)` pairs against the four axioms.
///
/// On failure returns a report listing every violated axiom with at least
/// one witness each.
pub fn build_complex(
    ranked_cells: impl IntoIterator<Item = (Cell, usize)>,
) -> Result<CellComplex, ValidationReport> {
    let mut pairs: Vec<(Cell, usize)> = ranked_cells.into_iter().collect();
    pairs.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));

    let mut violations = Vec::new();
    let cap = max_cells();
    if pairs.len() > cap {
        violations.push(AxiomViolation::TooManyCells {
            count: pairs.len(),
            cap,
        });
        return Err(ValidationReport { violations });
    }

    // Duplicates: same vertex set listed twice (any ranks).
    let mut seen: HashMap<&Cell, usize> = HashMap::new();
    for (c, _) in &pairs {
        *seen.entry(c).or_insert(0) += 1;
    }
    for (c, n) in seen {
        if n > 1 {
            violations.push(AxiomViolation::DuplicateCell { cell: c.clone() });
        }
    }
    if !violations.is_empty() {
        violations.sort_by_key(|v| format!("{v:?}"));
        return Err(ValidationReport { violations });
    }

    // Every vertex used anywhere must be present as a rank-0 singleton,
    // and rank-0 cells must be singletons (covered by monotonicity below).
    let index: HashMap<Cell, usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, (c, _))| (c.clone(), i))
        .collect();
    let mut vertices: BTreeSet<VertexId> = BTreeSet::new();
    for (c, _) in &pairs {
        vertices.extend(c.iter());
    }
    for &v in &vertices {
        match index.get(&Cell::vertex(v)) {
            Some(&i) if pairs[i].1 == 0 => {}
            _ => violations.push(AxiomViolation::MissingVertexRank0 { vertex: v }),
        }
    }

    let cells: Vec<Cell> = pairs.iter().map(|(c, _)| c.clone()).collect();
    let ranks: Vec<usize> = pairs.iter().map(|&(_, r)| r).collect();
    let n = cells.len();

    // Axioms i and ii over all pairs; collect inclusions for iii/iv.
    let mut inclusions: Vec<(usize, usize)> = Vec::new(); // (x, y) with x ⊊ y
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&cells[i], &cells[j]);
            if a.strict_subset_of(b) {
                inclusions.push((i, j));
                if ranks[i] >= ranks[j] && violations.len() < MAX_REPORTED {
                    violations.push(AxiomViolation::RankNotMonotone {
                        x: a.clone(),
                        y: b.clone(),
                    });
                }
            } else if b.strict_subset_of(a) {
                inclusions.push((j, i));
                if ranks[j] >= ranks[i] && violations.len() < MAX_REPORTED {
                    violations.push(AxiomViolation::RankNotMonotone {
                        x: b.clone(),
                        y: a.clone(),
                    });
                }
            } else if let Some(m) = a.intersection(b) {
                if !index.contains_key(&m) && violations.len() < MAX_REPORTED {
                    violations.push(AxiomViolation::IntersectionNotCell {
                        x: a.clone(),
                        y: b.clone(),
                    });
                }
            }
        }
    }

    // Face/coface incidence from the inclusion list.
    let mut faces: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(x, y) in &inclusions {
        if ranks[y] == ranks[x] + 1 {
            faces[y].push(x);
            cofaces[x].push(y);
        }
    }

    // Axiom iii: x ⊊ y needs a coface of x inside y.
    for &(x, y) in &inclusions {
        if ranks[y] <= ranks[x] {
            continue; // already reported as non-monotone
        }
        if ranks[y] == ranks[x] + 1 {
            continue;
        }
        let ok = cofaces[x].iter().any(|&z| cells[z].subset_of(&cells[y]));
        if !ok && violations.len() < MAX_REPORTED {
            violations.push(AxiomViolation::RankGap {
                x: cells[x].clone(),
                y: cells[y].clone(),
            });
        }
    }

    // Axiom iv: rank-gap-2 inclusions have exactly two intermediates.
    for &(x, y) in &inclusions {
        if ranks[y] != ranks[x] + 2 {
            continue;
        }
        let count = cofaces[x]
            .iter()
            .filter(|&&z| cells[z].subset_of(&cells[y]))
            .count();
        if count != 2 && violations.len() < MAX_REPORTED {
            violations.push(AxiomViolation::DiamondViolation {
                x: cells[x].clone(),
                y: cells[y].clone(),
                count,
            });
        }
    }

    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    let max_rank = ranks.iter().copied().max().map_or(0, |r| r + 1);
    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); max_rank];
    for (i, &r) in ranks.iter().enumerate() {
        by_rank[r].push(i);
    }
    let mut edges_at: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for &v in &vertices {
        edges_at.insert(v, Vec::new());
    }
    if by_rank.len() > 1 {
        for &e in &by_rank[1] {
            for v in cells[e].iter() {
                edges_at.get_mut(&v).unwrap().push(e);
            }
        }
    }
    for f in faces.iter_mut().chain(cofaces.iter_mut()) {
        f.sort_unstable();
    }

    Ok(CellComplex {
        cells,
        ranks,
        index,
        by_rank,
        faces,
        cofaces,
        edges_at,
    })
}

impl CellComplex {
    /// The empty complex (zero cells).
    pub fn empty() -> Self {
        build_complex(std::iter::empty()).expect("empty complex is valid")
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// Rank of the complex; `None` when empty.
    pub fn rank(&self) -> Option<usize> {
        self.ranks.iter().copied().max()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn rank_of(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn index_of(&self, c: &Cell) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.index.contains_key(c)
    }

    /// Indices of the r-cells, `K^[r]`.
    pub fn rank_cells(&self, r: usize) -> &[usize] {
        self.by_rank.get(r).map_or(&[], |v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cell, usize)> + '_ {
        self.cells.iter().zip(self.ranks.iter().copied())
    }

    pub fn ranked_cells(&self) -> Vec<(Cell, usize)> {
        self.iter().map(|(c, r)| (c.clone(), r)).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rank_cells(0)
            .iter()
            .map(|&i| self.cells[i].vertices()[0])
    }

    pub fn vertex_set(&self) -> Vec<VertexId> {
        self.vertices().collect()
    }

    pub fn faces(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    pub fn cofaces(&self, i: usize) -> &[usize] {
        &self.cofaces[i]
    }

    /// `E_v`: indices of the edges containing `v`.
    pub fn edges_at(&self, v: VertexId) -> &[usize] {
        self.edges_at.get(&v).map_or(&[], |e| e.as_slice())
    }

    /// Indices of the maximal cells of the inclusion poset.
    pub fn maximal_cells(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.cofaces[i].is_empty())
            .collect()
    }

    /// Every maximal cell has top rank.
    pub fn is_pure(&self) -> bool {
        match self.rank() {
            None => true,
            Some(top) => self.maximal_cells().iter().all(|&i| self.ranks[i] == top),
        }
    }

    /// `f`-vector: number of cells per rank.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_rank.iter().map(|v| v.len()).collect()
    }

    /// `Σ (−1)^r |K^[r]|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.by_rank
            .iter()
            .enumerate()
            .map(|(r, v)| {
                if r % 2 == 0 {
                    v.len() as i64
                } else {
                    -(v.len() as i64)
                }
            })
            .sum()
    }

    /// The k-skeleton `K^(k)`: all cells of rank ≤ k.
    pub fn skeleton(&self, k: usize) -> Result<CellComplex, OpError> {
        match self.rank() {
            None => Ok(self.clone()),
            Some(top) if k <= top => {
                let cells = self
                    .iter()
                    .filter(|&(_, r)| r <= k)
                    .map(|(c, r)| (c.clone(), r));
                Ok(build_complex(cells).expect("skeleton of a valid complex is valid"))
            }
            _ => Err(OpError::KOutOfRange {
                k,
                rank: self.rank(),
            }),
        }
    }

    /// Restriction `K ∩ A`: all cells contained in the vertex set `A`.
    pub fn restriction(&self, a: &[VertexId]) -> Result<CellComplex, OpError> {
        let mut set: Vec<VertexId> = a.to_vec();
        set.sort_unstable();
        set.dedup();
        for &v in &set {
            if !self.index.contains_key(&Cell::vertex(v)) {
                return Err(OpError::UnknownVertex { vertex: v });
            }
        }
        let cells = self
            .iter()
            .filter(|(c, _)| crate::cell::subset_sorted(c.vertices(), &set))
            .map(|(c, r)| (c.clone(), r));
        build_complex(cells).map_err(OpError::Invalid)
    }

    /// Restriction to the vertex set of a cell, `K ∩ x`.
    pub fn restriction_to_cell(&self, i: usize) -> CellComplex {
        self.restriction(self.cells[i].vertices())
            .expect("restriction of a valid complex to a cell is valid")
    }

    /// Sub-maximal cells contained in exactly one maximal cell.
    pub fn boundary_defining(&self) -> Vec<usize> {
        match self.rank() {
            None | Some(0) => Vec::new(),
            Some(top) => self
                .rank_cells(top - 1)
                .iter()
                .copied()
                .filter(|&y| self.cofaces[y].len() == 1)
                .collect(),
        }
    }

    /// The boundary `∂K` of a pure complex: the union of `K ∩ y` over
    /// sub-maximal `y` with one coface.
    pub fn boundary(&self) -> Result<CellComplex, OpError> {
        if !self.is_pure() {
            return Err(OpError::NotPure);
        }
        if self.rank().is_none() || self.rank() == Some(0) {
            return Ok(CellComplex::empty());
        }
        let mut keep = vec![false; self.len()];
        for y in self.boundary_defining() {
            keep[y] = true;
            for (i, c) in self.cells.iter().enumerate() {
                if c.subset_of(&self.cells[y]) {
                    keep[i] = true;
                }
            }
        }
        let cells = self
            .iter()
            .enumerate()
            .filter(|&(i, _)| keep[i])
            .map(|(_, (c, r))| (c.clone(), r));
        Ok(build_complex(cells).expect("boundary of a valid complex is valid"))
    }

    /// Star of a cell: all `y` such that `x ∨ y` exists, i.e. some cell
    /// contains `x ∪ y`.
    pub fn star(&self, x: &Cell) -> Result<Vec<Cell>, OpError> {
        let xi = self
            .index_of(x)
            .ok_or_else(|| OpError::CellNotFound { cell: x.clone() })?;
        let x = &self.cells[xi];
        let mut out = Vec::new();
        for y in &self.cells {
            let u = x.union(y);
            if self.cells.iter().any(|w| u.subset_of(w)) {
                out.push(y.clone());
            }
        }
        Ok(out)
    }

    /// Link of a cell: star members disjoint from it.
    pub fn link(&self, x: &Cell) -> Result<Vec<Cell>, OpError> {
        let star = self.star(x)?;
        Ok(star
            .into_iter()
            .filter(|y| y.intersection(x).is_none())
            .collect())
    }

    /// Least upper bound `x ∨ y`: the minimal cell containing `x ∪ y`,
    /// `None` when no cell does.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let u = self.cells[x].union(&self.cells[y]);
        self.lub_of_union(&u)
    }

    /// Least upper bound of a set of cells given by its vertex union.
    pub fn lub_of_union(&self, u: &Cell) -> Option<usize> {
        // The intersection of all upper bounds is itself an upper bound.
        let mut acc: Option<Cell> = None;
        for (i, c) in self.cells.iter().enumerate() {
            if u.subset_of(c) {
                acc = Some(match acc {
                    None => c.clone(),
                    Some(a) => a.intersection(c).expect("upper bounds share u"),
                });
                let _ = i;
            }
        }
        acc.map(|c| self.index[&c])
    }

    /// Greatest lower bound of a non-empty set of cell indices: their full
    /// intersection when it is a cell, `None` (the empty set) otherwise.
    pub fn glb(&self, set: &[usize]) -> Option<usize> {
        let mut acc = self.cells[set[0]].clone();
        for &i in &set[1..] {
            acc = acc.intersection(&self.cells[i])?;
        }
        self.index_of(&acc)
    }

    /// Connected components of the 1-skeleton, as sorted vertex sets.
    /// Isolated vertices form their own components.
    pub fn vertex_components(&self) -> Vec<Vec<VertexId>> {
        let verts = self.vertex_set();
        let id: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for &e in self.rank_cells(1) {
            let vs = self.cells[e].vertices();
            let a = id[&vs[0]];
            for w in &vs[1..] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, id[w]));
                parent[ra] = rb;
            }
        }
        let mut comps: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for (&v, &i) in id.iter() {
            comps.entry(find(&mut parent, i)).or_default().push(v);
        }
        let mut out: Vec<Vec<VertexId>> = comps.into_values().collect();
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    /// Sub-complexes induced by the vertex components. Errors if some cell
    /// straddles two components (possible only for non-graph-based input).
    pub fn components(&self) -> Result<Vec<CellComplex>, OpError> {
        let comps = self.vertex_components();
        let mut out = Vec::new();
        let mut assigned = 0usize;
        for comp in &comps {
            let sub = self.restriction(comp)?;
            assigned += sub.len();
            out.push(sub);
        }
        if assigned != self.len() {
            return Err(OpError::DisconnectedCell);
        }
        Ok(out)
    }

    /// Relabels vertices through `map` (must be injective on the vertex set).
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> CellComplex {
        let cells = self
            .iter()
            .map(|(c, r)| (Cell::new(c.iter().map(|v| map[&v])), r));
        build_complex(cells).expect("relabeling preserves validity")
    }

    /// Relabels vertices to `offset..offset+n` in sorted order; returns the
    /// new complex and the old→new map.
    pub fn relabel_from(&self, offset: VertexId) -> (CellComplex, BTreeMap<VertexId, VertexId>) {
        let map: BTreeMap<VertexId, VertexId> = self
            .vertex_set()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, offset + i as VertexId))
            .collect();
        (self.relabel(&map), map)
    }

    /// Largest vertex id plus one (0 for the empty complex).
    pub fn vertex_bound(&self) -> VertexId {
        self.vertices().max().map_or(0, |v| v + 1)
    }

    /// Union of two complexes over a shared vertex id space. Cells present
    /// in both must agree on rank; the result is re-validated.
    pub fn union_with(&self, other: &CellComplex) -> Result<CellComplex, ValidationReport> {
        let mut map: BTreeMap<Cell, usize> = BTreeMap::new();
        for (c, r) in self.iter().chain(other.iter()) {
            if let Some(&prev) = map.get(c) {
                if prev != r {
                    return Err(ValidationReport {
                        violations: vec![AxiomViolation::DuplicateCell { cell: c.clone() }],
                    });
                }
            } else {
                map.insert(c.clone(), r);
            }
        }
        build_complex(map)
    }
}

/// Errors of the basic complex operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OpError {
    #[error("k={k} out of range for complex of rank {rank:?}")]
    KOutOfRange { k: usize, rank: Option<usize> },
    #[error("unknown vertex {vertex}")]
    UnknownVertex { vertex: VertexId },
    #[error("complex is not pure")]
    NotPure,
    #[error("cell {cell} not found")]
    CellNotFound { cell: Cell },
    #[error("a cell straddles two components")]
    DisconnectedCell,
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
}
