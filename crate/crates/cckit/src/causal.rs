//! Reductions, collapses, transitions, uniformity, compatibility, slices,
//! the slice/sequence correspondence, boundary pull-backs and unions.
//!
//! A reduction `ρ: J → K` witnesses `J` as a subdivision of `K`; a collapse
//! is the dual notion. Both are surjective poset homomorphisms subject to
//! five conditions each, checked literally. Certificates are first-class:
//! every higher construction here consumes verified maps, never raw ones,
//! because the theorems' preconditions are numerous and silent failure
//! would be undetectable.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cell::{Cell, VertexId};
use crate::classify::{classify, Flag};
use crate::cobordism::{collar_indices, is_non_degenerate, is_pair_local, midsection, Midsection};
use crate::complex::{build_complex, CellComplex};
use crate::duality::dual_closed;

/// A total cell-to-cell map between complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcMap {
    pub source: CellComplex,
    pub target: CellComplex,
    /// `map[i]` is the target index of source cell `i`.
    pub map: Vec<usize>,
}

impl CcMap {
    pub fn new(source: CellComplex, target: CellComplex, map: Vec<usize>) -> Self {
        assert_eq!(map.len(), source.len(), "map must be total on the source");
        CcMap {
            source,
            target,
            map,
        }
    }

    /// Builds a map from `(source cell, target cell)` pairs.
    pub fn from_pairs(
        source: CellComplex,
        target: CellComplex,
        pairs: &[(Cell, Cell)],
    ) -> Result<Self, String> {
        let mut map = vec![usize::MAX; source.len()];
        for (s, t) in pairs {
            let si = source
                .index_of(s)
                .ok_or_else(|| format!("{s} not in source"))?;
            let ti = target
                .index_of(t)
                .ok_or_else(|| format!("{t} not in target"))?;
            map[si] = ti;
        }
        if let Some(miss) = map.iter().position(|&t| t == usize::MAX) {
            return Err(format!("no image for source cell {}", source.cell(miss)));
        }
        Ok(CcMap {
            source,
            target,
            map,
        })
    }

    pub fn identity(k: &CellComplex) -> Self {
        CcMap {
            source: k.clone(),
            target: k.clone(),
            map: (0..k.len()).collect(),
        }
    }

    pub fn is_identity_shaped(&self) -> bool {
        self.source == self.target && self.map.iter().enumerate().all(|(i, &t)| i == t)
    }

    pub fn apply(&self, c: &Cell) -> Option<&Cell> {
        self.source
            .index_of(c)
            .map(|i| self.target.cell(self.map[i]))
    }

    pub fn is_poset_homomorphism(&self) -> Option<(Cell, Cell)> {
        for i in 0..self.source.len() {
            for j in 0..self.source.len() {
                if self.source.cell(i).subset_of(self.source.cell(j))
                    && !self
                        .target
                        .cell(self.map[i])
                        .subset_of(self.target.cell(self.map[j]))
                {
                    return Some((self.source.cell(i).clone(), self.source.cell(j).clone()));
                }
            }
        }
        None
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &t in &self.map {
            hit[t] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Preimage indices per target cell.
    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut pre = vec![Vec::new(); self.target.len()];
        for (i, &t) in self.map.iter().enumerate() {
            pre[t].push(i);
        }
        pre
    }

    /// Composition `other ∘ self` (apply `self` first).
    pub fn then(&self, other: &CcMap) -> Result<CcMap, String> {
        if self.target != other.source {
            return Err("composition mismatch: target ≠ source".into());
        }
        Ok(CcMap {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&t| other.map[t]).collect(),
        })
    }
}

/// The condition a candidate map violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MapCondition {
    NotPosetHomomorphism,
    NotSurjective,
    R1,
    R2,
    R3,
    R4,
    R5,
    C1,
    C2,
    C3,
    C4,
    C5,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapViolation {
    pub condition: MapCondition,
    pub witness: String,
}

/// A verified reduction certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction(CcMap);

/// A verified collapse certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collapse(CcMap);

impl Reduction {
    pub fn map(&self) -> &CcMap {
        &self.0
    }
    pub fn source(&self) -> &CellComplex {
        &self.0.source
    }
    pub fn target(&self) -> &CellComplex {
        &self.0.target
    }
}

impl Collapse {
    pub fn map(&self) -> &CcMap {
        &self.0
    }
    pub fn source(&self) -> &CellComplex {
        &self.0.source
    }
    pub fn target(&self) -> &CellComplex {
        &self.0.target
    }
}

fn common_violations(m: &CcMap) -> Vec<MapViolation> {
    let mut out = Vec::new();
    if let Some((x, y)) = m.is_poset_homomorphism() {
        out.push(MapViolation {
            condition: MapCondition::NotPosetHomomorphism,
            witness: format!("{x} ⊆ {y} not preserved"),
        });
    }
    if !m.is_surjective() {
        out.push(MapViolation {
            condition: MapCondition::NotSurjective,
            witness: "some target cell has no preimage".into(),
        });
    }
    out
}

/// Tests conditions r1–r5 and returns a certificate or all violations.
pub fn check_reduction(m: &CcMap) -> Result<Reduction, Vec<MapViolation>> {
    let mut violations = common_violations(m);
    let (j, k) = (&m.source, &m.target);
    let pre = m.preimages();

    // r1: one preimage per target vertex.
    for &v in k.rank_cells(0) {
        if pre[v].len() != 1 {
            violations.push(MapViolation {
                condition: MapCondition::R1,
                witness: format!("vertex {} has {} preimages", k.cell(v), pre[v].len()),
            });
        }
    }
    // r2: ρ(⋀cofaces(x)) = ⋀ρ(cofaces(x)).
    for x in 0..j.len() {
        let cf = j.cofaces(x);
        if cf.len() < 2 {
            continue;
        }
        let lhs = j.glb(cf).map(|g| m.map[g]);
        let images: Vec<usize> = cf.iter().map(|&y| m.map[y]).collect();
        let rhs = k.glb(&images);
        if lhs != rhs {
            violations.push(MapViolation {
                condition: MapCondition::R2,
                witness: format!("at {}", j.cell(x)),
            });
        }
    }
    // r3: A(ρ(x))^[r] ⊆ ρ(A(x)^[r]).
    'r3: for x in 0..j.len() {
        for w in 0..k.len() {
            if !k.cell(m.map[x]).subset_of(k.cell(w)) {
                continue;
            }
            let r = k.rank_of(w);
            let ok = pre[w]
                .iter()
                .any(|&y| j.rank_of(y) == r && j.cell(x).subset_of(j.cell(y)));
            if !ok {
                violations.push(MapViolation {
                    condition: MapCondition::R3,
                    witness: format!("{} above ρ({}) not covered", k.cell(w), j.cell(x)),
                });
                break 'r3;
            }
        }
    }
    // r4 / r5.
    for x in 0..j.len() {
        let rx = j.rank_of(x);
        let rt = k.rank_of(m.map[x]);
        if rx + 1 == rt {
            let count = j
                .cofaces(x)
                .iter()
                .filter(|&&y| m.map[y] == m.map[x])
                .count();
            if count != 2 {
                violations.push(MapViolation {
                    condition: MapCondition::R4,
                    witness: format!("{} has {count} cofaces over ρ({})", j.cell(x), j.cell(x)),
                });
            }
        } else if rx == rt {
            for &yk in k.cofaces(m.map[x]) {
                let count = j.cofaces(x).iter().filter(|&&y| m.map[y] == yk).count();
                if count != 1 {
                    violations.push(MapViolation {
                        condition: MapCondition::R5,
                        witness: format!("{} has {count} cofaces over {}", j.cell(x), k.cell(yk)),
                    });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(Reduction(m.clone()))
    } else {
        Err(violations)
    }
}

/// Tests conditions c1–c5 and returns a certificate or all violations.
pub fn check_collapse(m: &CcMap) -> Result<Collapse, Vec<MapViolation>> {
    let mut violations = common_violations(m);
    let (j, k) = (&m.source, &m.target);
    let pre = m.preimages();

    // c1: one preimage per maximal target cell.
    for z in k.maximal_cells() {
        if pre[z].len() != 1 {
            violations.push(MapViolation {
                condition: MapCondition::C1,
                witness: format!("maximal {} has {} preimages", k.cell(z), pre[z].len()),
            });
        }
    }
    // c2: π(x) = ⋁π(faces(x)) for rank ≥ 1.
    for x in 0..j.len() {
        if j.rank_of(x) == 0 {
            continue;
        }
        let union = j
            .faces(x)
            .iter()
            .map(|&f| k.cell(m.map[f]).clone())
            .reduce(|a, b| a.union(&b));
        let rhs = union.and_then(|u| k.lub_of_union(&u));
        if rhs != Some(m.map[x]) {
            violations.push(MapViolation {
                condition: MapCondition::C2,
                witness: format!("at {}", j.cell(x)),
            });
        }
    }
    // c3: B(π(x))^[r] ⊆ π(B(x)^[r]).
    'c3: for x in 0..j.len() {
        for w in 0..k.len() {
            if !k.cell(w).subset_of(k.cell(m.map[x])) {
                continue;
            }
            let r = k.rank_of(w);
            let ok = pre[w]
                .iter()
                .any(|&y| j.rank_of(y) == r && j.cell(y).subset_of(j.cell(x)));
            if !ok {
                violations.push(MapViolation {
                    condition: MapCondition::C3,
                    witness: format!("{} below π({}) not covered", k.cell(w), j.cell(x)),
                });
                break 'c3;
            }
        }
    }
    // c4 / c5.
    for x in 0..j.len() {
        let rx = j.rank_of(x);
        let rt = k.rank_of(m.map[x]);
        if rx == rt + 1 {
            let count = j.faces(x).iter().filter(|&&y| m.map[y] == m.map[x]).count();
            if count != 2 {
                violations.push(MapViolation {
                    condition: MapCondition::C4,
                    witness: format!("{} has {count} faces over π({})", j.cell(x), j.cell(x)),
                });
            }
        } else if rx == rt {
            for &yk in k.faces(m.map[x]) {
                let count = j.faces(x).iter().filter(|&&y| m.map[y] == yk).count();
                if count != 1 {
                    violations.push(MapViolation {
                        condition: MapCondition::C5,
                        witness: format!("{} has {count} faces over {}", j.cell(x), k.cell(yk)),
                    });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(Collapse(m.clone()))
    } else {
        Err(violations)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CausalError {
    #[error("composition failed: {0}")]
    CompositionFailed(String),
    #[error("source or target is not in B: {0}")]
    NotInB(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("maps are not compatible: {0}")]
    CompatibilityFailed(String),
    #[error("maps are not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("maps are not reflective (not connecting): {0}")]
    NotConnecting(String),
    #[error("not a slice sequence: {0}")]
    NotASliceSequence(String),
    #[error("not a slice: {0}")]
    NotASlice(String),
    #[error("complexes overlap beyond the interface")]
    OverlapMismatch,
    #[error("states mismatch: {0}")]
    StatesMismatch(String),
}

/// The canonical reduction of the barycentric subdivision onto its base.
pub fn barycentric_reduction(k: &CellComplex) -> Result<Reduction, Vec<MapViolation>> {
    let b = crate::subdivision::barycentric(k);
    let map: Vec<usize> = b
        .complex
        .cells()
        .iter()
        .map(|c| k.index_of(&b.rho[c]).expect("rho lands in the base"))
        .collect();
    check_reduction(&CcMap::new(b.complex.clone(), k.clone(), map))
}

/// Composes two verified reductions and re-verifies the composite.
pub fn compose_reductions(first: &Reduction, second: &Reduction) -> Result<Reduction, CausalError> {
    let composed = first
        .map()
        .then(second.map())
        .map_err(CausalError::CompositionFailed)?;
    check_reduction(&composed)
        .map_err(|v| CausalError::CompositionFailed(format!("composite fails: {v:?}")))
}

/// Dual of a reduction between closed complexes: a collapse (and back).
pub fn dual_of_reduction(rho: &Reduction) -> Result<Collapse, CausalError> {
    let (dj, dk) = dualize_endpoints(rho.map())?;
    let m = dualize_map(rho.map(), &dj, &dk);
    check_collapse(&m).map_err(|v| CausalError::NotInB(format!("dual fails: {v:?}")))
}

/// Dual of a collapse between closed complexes: a reduction.
pub fn dual_of_collapse(pi: &Collapse) -> Result<Reduction, CausalError> {
    let (dj, dk) = dualize_endpoints(pi.map())?;
    let m = dualize_map(pi.map(), &dj, &dk);
    check_reduction(&m).map_err(|v| CausalError::NotInB(format!("dual fails: {v:?}")))
}

fn dualize_endpoints(
    m: &CcMap,
) -> Result<(crate::duality::DualClosed, crate::duality::DualClosed), CausalError> {
    let dj = dual_closed(&m.source).map_err(|e| CausalError::NotInB(e.to_string()))?;
    let dk = dual_closed(&m.target).map_err(|e| CausalError::NotInB(e.to_string()))?;
    Ok((dj, dk))
}

fn dualize_map(
    m: &CcMap,
    dj: &crate::duality::DualClosed,
    dk: &crate::duality::DualClosed,
) -> CcMap {
    let mut map = vec![0usize; dj.complex.len()];
    for (i, &t) in m.map.iter().enumerate() {
        let sdual = &dj.to_dual[m.source.cell(i)];
        let tdual = &dk.to_dual[m.target.cell(t)];
        map[dj.complex.index_of(sdual).expect("dual cell")] =
            dk.complex.index_of(tdual).expect("dual cell");
    }
    CcMap::new(dj.complex.clone(), dk.complex.clone(), map)
}

/// Sub-complex of `J`-cells inside a cell of `K`, as indices into `J`.
fn j_cells_inside(j: &CellComplex, cell: &Cell) -> Vec<usize> {
    (0..j.len())
        .filter(|&i| j.cell(i).subset_of(cell))
        .collect()
}

/// The reduced cell `x_J = {e ∩ J^[0] : e ∈ E_J^x}` of a collar cell.
fn reduced_cell(k: &CellComplex, jv: &BTreeSet<VertexId>, x: usize) -> Option<Cell> {
    let mut verts = Vec::new();
    for &e in k.rank_cells(1) {
        let c = k.cell(e);
        if !c.subset_of(k.cell(x)) {
            continue;
        }
        let inside: Vec<VertexId> = c.iter().filter(|v| jv.contains(v)).collect();
        if inside.len() == 1 && c.len() == 2 {
            verts.push(inside[0]);
        }
    }
    if verts.is_empty() {
        None
    } else {
        Some(Cell::new(verts))
    }
}

/// Uniformity report for a relative pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformReport {
    pub non_degenerate: Flag,
    /// First purity clause: `J ∩ x` pure for every collar cell.
    pub pure_intersections: Flag,
    /// Second purity clause: minimal collar cells over each `J`-cell share
    /// one rank.
    pub pure_minimal_ranks: Flag,
    /// Condition (U).
    pub uniformity: Flag,
    pub transition_valid: Flag,
    pub transition_in_b: Flag,
}

impl UniformReport {
    pub fn ok(&self) -> bool {
        self.non_degenerate.holds
            && self.pure_intersections.holds
            && self.pure_minimal_ranks.holds
            && self.uniformity.holds
            && self.transition_valid.holds
            && self.transition_in_b.holds
    }
}

/// The transition `J(K)` plus the reduced-cell map on the collar.
#[derive(Debug, Clone)]
pub struct Transition {
    pub complex: CellComplex,
    /// Collar cell of `K` → its reduced cell.
    pub reduced: BTreeMap<Cell, Cell>,
}

/// The uniformity report alone.
pub fn check_uniform(k: &CellComplex, j: &CellComplex) -> UniformReport {
    transition(k, j).1
}

/// Computes the transition and the uniformity report of `(K, J)`.
pub fn transition(k: &CellComplex, j: &CellComplex) -> (Option<Transition>, UniformReport) {
    let ok = Flag {
        holds: true,
        witness: None,
    };
    let fail = |w: String| Flag {
        holds: false,
        witness: Some(w),
    };

    let mut non_degenerate = is_non_degenerate(k, j);
    for (c, r) in j.iter() {
        match k.index_of(c) {
            Some(i) if k.rank_of(i) == r => {}
            _ => {
                non_degenerate = fail(format!("J is not a sub-complex of K: {c}"));
                break;
            }
        }
    }
    let jv: BTreeSet<VertexId> = j.vertices().collect();
    let jvec: Vec<VertexId> = jv.iter().copied().collect();
    let collar = collar_indices(k, &jvec);

    // Purity clause 1: J ∩ x pure and nonempty on the collar.
    let mut pure_intersections = ok.clone();
    let mut j_inside: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &x in &collar {
        let inside = j_cells_inside(j, k.cell(x));
        if inside.is_empty() {
            pure_intersections = fail(format!("J ∩ {} is empty", k.cell(x)));
            j_inside.insert(x, inside);
            continue;
        }
        let sub = build_complex(inside.iter().map(|&i| (j.cell(i).clone(), j.rank_of(i))))
            .expect("sub-family of a valid complex");
        if !sub.is_pure() {
            pure_intersections = fail(format!("J ∩ {} is not pure", k.cell(x)));
        }
        j_inside.insert(x, inside);
    }

    // Purity clause 2: minimal collar cells over each J-cell share a rank.
    let mut pure_minimal_ranks = ok.clone();
    'outer: for i in 0..j.len() {
        let over: Vec<usize> = collar
            .iter()
            .copied()
            .filter(|&x| j.cell(i).subset_of(k.cell(x)))
            .collect();
        let minimal: Vec<usize> = over
            .iter()
            .copied()
            .filter(|&x| {
                !over
                    .iter()
                    .any(|&y| y != x && k.cell(y).strict_subset_of(k.cell(x)))
            })
            .collect();
        let ranks: BTreeSet<usize> = minimal.iter().map(|&x| k.rank_of(x)).collect();
        if ranks.len() > 1 {
            pure_minimal_ranks = fail(format!(
                "minimal collar cells over {} have ranks {ranks:?}",
                j.cell(i)
            ));
            break 'outer;
        }
    }

    // Reduced cells and condition (U).
    let mut reduced: BTreeMap<usize, Cell> = BTreeMap::new();
    let mut uniformity = ok.clone();
    for &x in &collar {
        match reduced_cell(k, &jv, x) {
            Some(c) => {
                reduced.insert(x, c);
            }
            None => {
                uniformity = fail(format!("collar cell {} has no collar edge", k.cell(x)));
            }
        }
    }
    if uniformity.holds {
        'pairs: for &x in &collar {
            for &y in &collar {
                let jx = &j_inside[&x];
                let jy = &j_inside[&y];
                let sub_j = jx.iter().all(|i| jy.contains(i));
                let sub_red = reduced[&x].subset_of(&reduced[&y]);
                if sub_j != sub_red {
                    uniformity = fail(format!("(U) fails on {} vs {}", k.cell(x), k.cell(y)));
                    break 'pairs;
                }
            }
        }
    }

    // The transition poset with rank Rk(J ∩ x).
    let mut transition_valid = ok.clone();
    let mut ranked: BTreeMap<Cell, usize> = BTreeMap::new();
    if uniformity.holds {
        for &x in &collar {
            let rank = j_inside[&x]
                .iter()
                .map(|&i| j.rank_of(i))
                .max()
                .unwrap_or(0);
            let cell = reduced[&x].clone();
            if let Some(&prev) = ranked.get(&cell) {
                if prev != rank {
                    transition_valid =
                        fail(format!("reduced cell {cell} has ranks {prev} and {rank}"));
                }
            }
            ranked.insert(cell, rank);
        }
    } else {
        transition_valid = fail("uniformity failed first".into());
    }
    let built = if transition_valid.holds {
        match build_complex(ranked.clone()) {
            Ok(c) => Some(c),
            Err(e) => {
                transition_valid = fail(format!("transition not a complex: {e}"));
                None
            }
        }
    } else {
        None
    };

    let transition_in_b = match &built {
        None => fail("no transition".into()),
        Some(t) => {
            let rep = classify(t);
            if !rep.closed.holds {
                fail(format!(
                    "transition not closed: {}",
                    rep.closed.witness.clone().unwrap_or_default()
                ))
            } else if !rep.non_pinching.holds {
                fail("transition pinches".into())
            } else if !rep.cell_connected.holds {
                fail("transition not cell-connected".into())
            } else {
                ok
            }
        }
    };

    let report = UniformReport {
        non_degenerate,
        pure_intersections,
        pure_minimal_ranks,
        uniformity,
        transition_valid,
        transition_in_b,
    };
    let trans = built.map(|complex| Transition {
        complex,
        reduced: reduced
            .into_iter()
            .map(|(x, c)| (k.cell(x).clone(), c))
            .collect(),
    });
    (trans, report)
}

/// The canonical maps of a uniform local pair.
#[derive(Debug, Clone)]
pub struct CanonicalMaps {
    pub transition: CellComplex,
    pub midsection: Midsection,
    /// `ρ_J^K : J → J(K)`.
    pub rho: Reduction,
    /// `π_J^K : M_J^K → J(K)`.
    pub pi: Collapse,
}

/// Builds and verifies `ρ_J^K` and `π_J^K`, including their compatibility.
pub fn canonical_maps(k: &CellComplex, j: &CellComplex) -> Result<CanonicalMaps, CausalError> {
    let (trans, report) = transition(k, j);
    if !report.ok() {
        return Err(CausalError::PreconditionFailed(format!(
            "pair is not uniform: {}",
            serde_json::to_string(&report).expect("serializable")
        )));
    }
    let local = is_pair_local(k, j);
    if !local.holds {
        return Err(CausalError::PreconditionFailed(format!(
            "pair is not local: {}",
            local.witness.unwrap_or_default()
        )));
    }
    let trans = trans.expect("uniform pair has a transition");
    let jv: BTreeSet<VertexId> = j.vertices().collect();
    let jvec: Vec<VertexId> = jv.iter().copied().collect();
    let collar = collar_indices(k, &jvec);

    // ρ: a J-cell maps to the reduced cell of any minimal collar cell
    // containing it; uniqueness across minimal cells is re-verified.
    let mut rho_map = Vec::with_capacity(j.len());
    for i in 0..j.len() {
        let over: Vec<usize> = collar
            .iter()
            .copied()
            .filter(|&x| j.cell(i).subset_of(k.cell(x)))
            .collect();
        if over.is_empty() {
            return Err(CausalError::PreconditionFailed(format!(
                "no collar cell contains {}",
                j.cell(i)
            )));
        }
        let minimal: Vec<usize> = over
            .iter()
            .copied()
            .filter(|&x| {
                !over
                    .iter()
                    .any(|&y| y != x && k.cell(y).strict_subset_of(k.cell(x)))
            })
            .collect();
        let cells: BTreeSet<&Cell> = minimal.iter().map(|&x| &trans.reduced[k.cell(x)]).collect();
        if cells.len() != 1 {
            return Err(CausalError::PreconditionFailed(format!(
                "minimal collar cells over {} disagree on the reduced cell",
                j.cell(i)
            )));
        }
        let target = *cells.iter().next().expect("one");
        rho_map.push(
            trans
                .complex
                .index_of(target)
                .expect("reduced cells are transition cells"),
        );
    }
    let rho = check_reduction(&CcMap::new(j.clone(), trans.complex.clone(), rho_map))
        .map_err(|v| CausalError::PreconditionFailed(format!("ρ_J^K fails: {v:?}")))?;

    // π: midsection cell ↦ reduced cell of its collar origin.
    let mid = midsection(k, j).map_err(|e| CausalError::PreconditionFailed(e.to_string()))?;
    let mut pi_map = Vec::with_capacity(mid.complex.len());
    for idx in 0..mid.complex.len() {
        let origin = &mid.cell_origin[mid.complex.cell(idx)];
        let target = &trans.reduced[origin];
        pi_map.push(
            trans
                .complex
                .index_of(target)
                .expect("reduced cells are transition cells"),
        );
    }
    let pi = check_collapse(&CcMap::new(
        mid.complex.clone(),
        trans.complex.clone(),
        pi_map,
    ))
    .map_err(|v| CausalError::PreconditionFailed(format!("π_J^K fails: {v:?}")))?;

    check_compatible(rho.map(), pi.map())?;
    Ok(CanonicalMaps {
        transition: trans.complex,
        midsection: mid,
        rho,
        pi,
    })
}

/// Compatibility `j ⋋ l` of two maps into one target.
pub fn check_compatible(jm: &CcMap, lm: &CcMap) -> Result<(), CausalError> {
    if jm.target != lm.target {
        return Err(CausalError::CompatibilityFailed("different targets".into()));
    }
    let jpre = jm.preimages();
    let lpre = lm.preimages();
    for w in 0..jm.target.len() {
        if jpre[w].len() != 1 && lpre[w].len() != 1 {
            return Err(CausalError::CompatibilityFailed(format!(
                "cell {} has multiple preimages under both maps",
                jm.target.cell(w)
            )));
        }
    }
    // Joins under j.
    for x in 0..jm.source.len() {
        for y in 0..jm.source.len() {
            if let Some(join) = jm.source.join(x, y) {
                let lhs = jm.map[join];
                let rhs = jm.target.join(jm.map[x], jm.map[y]);
                if rhs != Some(lhs) {
                    return Err(CausalError::CompatibilityFailed(format!(
                        "j({} ∨ {}) ≠ j(…) ∨ j(…)",
                        jm.source.cell(x),
                        jm.source.cell(y)
                    )));
                }
            }
        }
    }
    // Intersections under l.
    for x in 0..lm.source.len() {
        for y in 0..lm.source.len() {
            if let Some(meet) = lm.source.cell(x).intersection(lm.source.cell(y)) {
                let mi = lm.source.index_of(&meet).expect("intersection closed");
                let lhs = lm.map[mi];
                let rhs = lm
                    .target
                    .cell(lm.map[x])
                    .intersection(lm.target.cell(lm.map[y]))
                    .and_then(|c| lm.target.index_of(&c));
                if rhs != Some(lhs) {
                    return Err(CausalError::CompatibilityFailed(format!(
                        "l({} ∩ {}) ≠ l(…) ∩ l(…)",
                        lm.source.cell(x),
                        lm.source.cell(y)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Reflectivity `j ⋌ l` of two maps out of one source.
pub fn check_reflective(jm: &CcMap, lm: &CcMap) -> Result<(), CausalError> {
    if jm.source != lm.source {
        return Err(CausalError::NotConnecting("different sources".into()));
    }
    let n = jm.source.len();
    for x in 0..n {
        for y in 0..n {
            let jj = jm.target.join(jm.map[x], jm.map[y]);
            let ll = lm.target.join(lm.map[x], lm.map[y]);
            if let (Some(jjoin), Some(ljoin)) = (jj, ll) {
                match jm.source.join(x, y) {
                    None => {
                        return Err(CausalError::NotConnecting(format!(
                            "{} ∨ {} missing in the source",
                            jm.source.cell(x),
                            jm.source.cell(y)
                        )))
                    }
                    Some(join) => {
                        if jm.map[join] != jjoin || lm.map[join] != ljoin {
                            return Err(CausalError::NotConnecting(format!(
                                "joins of {} and {} not preserved",
                                jm.source.cell(x),
                                jm.source.cell(y)
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Orthogonality `j ⊥ l` of two maps out of one source.
pub fn check_orthogonal(jm: &CcMap, lm: &CcMap) -> Result<(), CausalError> {
    if jm.source != lm.source {
        return Err(CausalError::NotOrthogonal("different sources".into()));
    }
    let n = jm.source.len();
    for x in 0..n {
        for y in 0..n {
            let ji = jm
                .target
                .cell(jm.map[x])
                .intersection(jm.target.cell(jm.map[y]))
                .and_then(|c| jm.target.index_of(&c));
            let li = lm
                .target
                .cell(lm.map[x])
                .intersection(lm.target.cell(lm.map[y]))
                .and_then(|c| lm.target.index_of(&c));
            if let (Some(jmeet), Some(lmeet)) = (ji, li) {
                match jm.source.cell(x).intersection(jm.source.cell(y)) {
                    None => {
                        return Err(CausalError::NotOrthogonal(format!(
                            "{} ∩ {} empty in the source",
                            jm.source.cell(x),
                            jm.source.cell(y)
                        )))
                    }
                    Some(meet) => {
                        let mi = jm.source.index_of(&meet).expect("intersection closed");
                        if jm.map[mi] != jmeet || lm.map[mi] != lmeet {
                            return Err(CausalError::NotOrthogonal(format!(
                                "intersections of {} and {} not preserved",
                                jm.source.cell(x),
                                jm.source.cell(y)
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// The augmented poset of two orthogonal maps with disjoint targets:
/// cells `φ_J(m) ⊔ φ_L(m)` with rank `rk(m) + 1`, together with `J` and `L`
/// themselves this is the slice of the correspondence.
pub type AugmentedPoset = (Vec<(Cell, usize)>, BTreeMap<usize, Cell>);

pub fn augmented_poset(phi_j: &CcMap, phi_l: &CcMap) -> Result<AugmentedPoset, CausalError> {
    check_orthogonal(phi_j, phi_l)?;
    let jv: BTreeSet<VertexId> = phi_j.target.vertices().collect();
    if phi_l.target.vertices().any(|v| jv.contains(&v)) {
        return Err(CausalError::NotOrthogonal(
            "targets are not disjoint".into(),
        ));
    }
    let m = &phi_j.source;
    let mut cells = Vec::with_capacity(m.len());
    let mut origin = BTreeMap::new();
    let mut seen: BTreeSet<Cell> = BTreeSet::new();
    for i in 0..m.len() {
        let cell = phi_j
            .target
            .cell(phi_j.map[i])
            .union(phi_l.target.cell(phi_l.map[i]));
        if !seen.insert(cell.clone()) {
            return Err(CausalError::NotOrthogonal(format!(
                "augmented cells collide at {}",
                m.cell(i)
            )));
        }
        origin.insert(i, cell.clone());
        cells.push((cell, m.rank_of(i) + 1));
    }
    // Order isomorphism both ways.
    for x in 0..m.len() {
        for y in 0..m.len() {
            let fwd = m.cell(x).subset_of(m.cell(y));
            let back = origin[&x].subset_of(&origin[&y]);
            if fwd != back {
                return Err(CausalError::NotOrthogonal(format!(
                    "augmented order differs at {} vs {}",
                    m.cell(x),
                    m.cell(y)
                )));
            }
        }
    }
    Ok((cells, origin))
}

/// A verified slice sequence `J ≺ J' ⊣ M ⊢ L' ≻ L`.
#[derive(Debug, Clone)]
pub struct SliceSequence {
    pub j: CellComplex,
    pub j_transition: CellComplex,
    pub m: CellComplex,
    pub l_transition: CellComplex,
    pub l: CellComplex,
    pub rho_j: Reduction,
    pub pi_j: Collapse,
    pub pi_l: Collapse,
    pub rho_l: Reduction,
}

impl SliceSequence {
    /// Validates membership in B, mutual disjointness and the three
    /// compatibility conditions.
    pub fn validate(
        rho_j: Reduction,
        pi_j: Collapse,
        pi_l: Collapse,
        rho_l: Reduction,
    ) -> Result<SliceSequence, CausalError> {
        let j = rho_j.source().clone();
        let j_transition = rho_j.target().clone();
        let m = pi_j.source().clone();
        let l_transition = rho_l.target().clone();
        let l = rho_l.source().clone();
        if *pi_j.target() != j_transition {
            return Err(CausalError::NotASliceSequence("π_J target ≠ J'".into()));
        }
        if *pi_l.target() != l_transition {
            return Err(CausalError::NotASliceSequence("π_L target ≠ L'".into()));
        }
        if *pi_l.source() != m {
            return Err(CausalError::NotASliceSequence("π_J and π_L share M".into()));
        }
        for (name, c) in [
            ("J", &j),
            ("J'", &j_transition),
            ("M", &m),
            ("L'", &l_transition),
            ("L", &l),
        ] {
            let rep = classify(c);
            if !(rep.closed.holds && rep.non_pinching.holds && rep.cell_connected.holds) {
                return Err(CausalError::NotASliceSequence(format!(
                    "{name} is not in B"
                )));
            }
            if !rep.connected.holds {
                return Err(CausalError::NotASliceSequence(format!(
                    "{name} is not local"
                )));
            }
        }
        // Mutual disjointness of the five vertex sets.
        let sets = [&j, &j_transition, &m, &l_transition, &l];
        for (a, sa) in sets.iter().enumerate() {
            for sb in sets.iter().skip(a + 1) {
                let va: BTreeSet<VertexId> = sa.vertices().collect();
                if sb.vertices().any(|v| va.contains(&v)) {
                    return Err(CausalError::NotASliceSequence(
                        "labels share vertex ids; relabel first".into(),
                    ));
                }
            }
        }
        check_compatible(rho_j.map(), pi_j.map())?;
        check_compatible(rho_l.map(), pi_l.map())?;
        check_orthogonal(pi_j.map(), pi_l.map())?;
        Ok(SliceSequence {
            j,
            j_transition,
            m,
            l_transition,
            l,
            rho_j,
            pi_j,
            pi_l,
            rho_l,
        })
    }
}

/// A validated slice: all vertices on a two-component boundary.
#[derive(Debug, Clone)]
pub struct Slice {
    pub complex: CellComplex,
    pub j: CellComplex,
    pub l: CellComplex,
}

/// Validates a slice: a cobordism whose boundary has exactly two
/// components carrying all vertices, uniform and local on both sides.
pub fn validate_slice(s: &CellComplex, j: &CellComplex) -> Result<Slice, CausalError> {
    let rep = classify(s);
    for (name, f) in [
        ("non_singular", &rep.non_singular),
        ("non_pinching", &rep.non_pinching),
        ("local", &rep.local),
    ] {
        if !f.holds {
            return Err(CausalError::NotASlice(format!(
                "{name}: {}",
                f.witness.clone().unwrap_or_default()
            )));
        }
    }
    let boundary = s
        .boundary()
        .map_err(|e| CausalError::NotASlice(e.to_string()))?;
    let comps = boundary
        .components()
        .map_err(|e| CausalError::NotASlice(e.to_string()))?;
    if comps.len() != 2 {
        return Err(CausalError::NotASlice(format!(
            "boundary has {} components, need 2",
            comps.len()
        )));
    }
    let bverts: BTreeSet<VertexId> = boundary.vertices().collect();
    let sverts: BTreeSet<VertexId> = s.vertices().collect();
    if bverts != sverts {
        return Err(CausalError::NotASlice("interior vertices present".into()));
    }
    let l = if comps[0] == *j {
        comps[1].clone()
    } else if comps[1] == *j {
        comps[0].clone()
    } else {
        return Err(CausalError::NotASlice(
            "J is not a boundary component".into(),
        ));
    };
    for (name, side) in [("J", j), ("L", &l)] {
        let (_, report) = transition(s, side);
        if !report.ok() {
            return Err(CausalError::NotASlice(format!(
                "(S, {name}) is not uniform: {}",
                serde_json::to_string(&report).expect("serializable")
            )));
        }
        let local = is_pair_local(s, side);
        if !local.holds {
            return Err(CausalError::NotASlice(format!(
                "(S, {name}) is not local: {}",
                local.witness.unwrap_or_default()
            )));
        }
    }
    Ok(Slice {
        complex: s.clone(),
        j: j.clone(),
        l,
    })
}

/// Builds the slice of a slice sequence: the augmented poset over `M`
/// together with `J` and `L`, then boundary pull-backs when the sequence's
/// ends differ from the transitions.
pub fn slice_from_sequence(seq: &SliceSequence) -> Result<Slice, CausalError> {
    let (aug, _) = augmented_poset(seq.pi_j.map(), seq.pi_l.map())?;
    let mut ranked = aug;
    ranked.extend(seq.j_transition.ranked_cells());
    ranked.extend(seq.l_transition.ranked_cells());
    let core = build_complex(ranked)
        .map_err(|e| CausalError::NotASliceSequence(format!("augmented poset invalid: {e}")))?;

    // Pull the J' boundary back along ρ_J, then L' along ρ_L.
    let s1 = if seq.rho_j.map().is_identity_shaped() {
        core
    } else {
        pull_back_boundary(&core, &seq.j_transition, &seq.rho_j)?.complex
    };
    let s2 = if seq.rho_l.map().is_identity_shaped() {
        s1
    } else {
        pull_back_boundary(&s1, &seq.l_transition, &seq.rho_l)?.complex
    };
    validate_slice(&s2, &seq.j)
}

/// Reads the slice sequence off a slice, relabeling the five complexes
/// into disjoint vertex ranges.
pub fn sequence_from_slice(slice: &Slice) -> Result<SliceSequence, CausalError> {
    let s = &slice.complex;
    let canon_j = canonical_maps(s, &slice.j)?;
    let canon_l = canonical_maps(s, &slice.l)?;
    // The two midsections coincide cell-wise; identify them.
    if canon_j.midsection.complex != canon_l.midsection.complex {
        return Err(CausalError::NotASlice("the two midsections differ".into()));
    }

    // Relabel: J, J', M, L', L into disjoint ranges.
    let mut offset: VertexId = 0;
    let mut relabel = |c: &CellComplex| -> (CellComplex, BTreeMap<VertexId, VertexId>) {
        let (out, map) = c.relabel_from(offset);
        offset += c.vertex_set().len() as VertexId;
        (out, map)
    };
    let (j2, jmap) = relabel(&slice.j);
    let (jt2, jtmap) = relabel(&canon_j.transition);
    let (m2, mmap) = relabel(&canon_j.midsection.complex);
    let (lt2, ltmap) = relabel(&canon_l.transition);
    let (l2, lmap) = relabel(&slice.l);

    let remap = |m: &CcMap,
                 src: &CellComplex,
                 smap: &BTreeMap<VertexId, VertexId>,
                 dst: &CellComplex,
                 dmap: &BTreeMap<VertexId, VertexId>|
     -> CcMap {
        let mut map = vec![0usize; src.len()];
        for i in 0..m.source.len() {
            let s_new = Cell::new(m.source.cell(i).iter().map(|v| smap[&v]));
            let t_new = Cell::new(m.target.cell(m.map[i]).iter().map(|v| dmap[&v]));
            map[src.index_of(&s_new).expect("relabeled cell")] =
                dst.index_of(&t_new).expect("relabeled cell");
        }
        CcMap::new(src.clone(), dst.clone(), map)
    };

    let rho_j = check_reduction(&remap(canon_j.rho.map(), &j2, &jmap, &jt2, &jtmap))
        .map_err(|v| CausalError::NotASlice(format!("relabelled ρ_J fails: {v:?}")))?;
    let pi_j = check_collapse(&remap(canon_j.pi.map(), &m2, &mmap, &jt2, &jtmap))
        .map_err(|v| CausalError::NotASlice(format!("relabelled π_J fails: {v:?}")))?;
    let pi_l = check_collapse(&remap(canon_l.pi.map(), &m2, &mmap, &lt2, &ltmap))
        .map_err(|v| CausalError::NotASlice(format!("relabelled π_L fails: {v:?}")))?;
    let rho_l = check_reduction(&remap(canon_l.rho.map(), &l2, &lmap, &lt2, &ltmap))
        .map_err(|v| CausalError::NotASlice(format!("relabelled ρ_L fails: {v:?}")))?;

    SliceSequence::validate(rho_j, pi_j, pi_l, rho_l)
}

/// Result of a boundary pull-back.
#[derive(Debug, Clone)]
pub struct PullBack {
    pub complex: CellComplex,
    /// The new boundary component (the source of the reduction).
    pub boundary: CellComplex,
}

/// Replaces the boundary component `J'` of `K` by the subdivision `J`
/// along a verified reduction `ρ: J → J'`; requires `(K, J')` uniform and
/// local and the composite `ρ_{J'}^K ∘ ρ` compatible with `π_{J'}^K`.
pub fn pull_back_boundary(
    k: &CellComplex,
    j_prime: &CellComplex,
    rho: &Reduction,
) -> Result<PullBack, CausalError> {
    if rho.target() != j_prime {
        return Err(CausalError::PreconditionFailed(
            "reduction target is not the named component".into(),
        ));
    }
    let canon = canonical_maps(k, j_prime)?;
    let composite = compose_reductions(rho, &canon.rho)?;
    check_compatible(composite.map(), canon.pi.map())?;

    let j = rho.source();
    let kverts: BTreeSet<VertexId> = k.vertices().collect();
    if j.vertices().any(|v| kverts.contains(&v)) && !rho.map().is_identity_shaped() {
        return Err(CausalError::PreconditionFailed(
            "subdivision must use fresh vertex ids".into(),
        ));
    }
    if rho.map().is_identity_shaped() {
        return Ok(PullBack {
            complex: k.clone(),
            boundary: j.clone(),
        });
    }

    let jpv: BTreeSet<VertexId> = j_prime.vertices().collect();
    let jpvec: Vec<VertexId> = jpv.iter().copied().collect();
    let mut ranked: Vec<(Cell, usize)> = Vec::new();
    // Cells untouched by J'.
    for (c, r) in k.iter() {
        if c.iter().all(|v| !jpv.contains(&v)) {
            ranked.push((c.clone(), r));
        }
    }
    // The new boundary J itself.
    ranked.extend(j.ranked_cells());
    // Collar cells with the J' part replaced by ρ-preimage vertices.
    for x in collar_indices(k, &jpvec) {
        let mut verts: Vec<VertexId> = k.cell(x).iter().filter(|v| !jpv.contains(v)).collect();
        for vj in j.vertices() {
            let image = rho.map().apply(&Cell::vertex(vj)).expect("total");
            if image.subset_of(k.cell(x)) {
                verts.push(vj);
            }
        }
        ranked.push((Cell::new(verts), k.rank_of(x)));
    }
    let complex = build_complex(ranked).map_err(|e| {
        CausalError::CompatibilityFailed(format!("pull-back violates the axioms: {e}"))
    })?;
    let rep = classify(&complex);
    if !(rep.non_singular.holds && rep.non_pinching.holds && rep.local.holds) {
        return Err(CausalError::CompatibilityFailed(
            "pull-back left the class C".into(),
        ));
    }
    // J must now be a boundary component.
    let b = complex.boundary().expect("non-singular");
    let comps = b
        .components()
        .map_err(|e| CausalError::CompatibilityFailed(e.to_string()))?;
    if !comps.iter().any(|c| c == j) {
        return Err(CausalError::CompatibilityFailed(
            "subdivided component is not a boundary component".into(),
        ));
    }
    Ok(PullBack {
        complex,
        boundary: j.clone(),
    })
}

/// The union of `K` and `H` along relative reductions `ρ_J : I → J ≤ ∂K`
/// and `ρ_L : I → L ≤ ∂H`; checks the connecting sequence first.
pub fn union(
    k: &CellComplex,
    h: &CellComplex,
    rho_j: &Reduction,
    rho_l: &Reduction,
) -> Result<CellComplex, CausalError> {
    if rho_j.source() != rho_l.source() {
        return Err(CausalError::NotConnecting(
            "the two reductions share I".into(),
        ));
    }
    let canon_j = canonical_maps(k, rho_j.target())?;
    let canon_l = canonical_maps(h, rho_l.target())?;
    let cj = compose_reductions(rho_j, &canon_j.rho)?;
    let cl = compose_reductions(rho_l, &canon_l.rho)?;
    check_compatible(cj.map(), canon_j.pi.map())?;
    check_compatible(cl.map(), canon_l.pi.map())?;
    check_reflective(cj.map(), cl.map())?;

    let kp = pull_back_boundary(k, rho_j.target(), rho_j)?;
    let hp = pull_back_boundary(h, rho_l.target(), rho_l)?;

    // The two halves must overlap exactly on I.
    let iverts: BTreeSet<VertexId> = rho_j.source().vertices().collect();
    let kverts: BTreeSet<VertexId> = kp.complex.vertices().collect();
    let hverts: BTreeSet<VertexId> = hp.complex.vertices().collect();
    let shared: BTreeSet<VertexId> = kverts.intersection(&hverts).copied().collect();
    if shared != iverts {
        return Err(CausalError::OverlapMismatch);
    }
    for (c, _) in kp.complex.iter() {
        if hp.complex.contains(c) && !rho_j.source().contains(c) {
            return Err(CausalError::OverlapMismatch);
        }
    }

    let glued = kp
        .complex
        .union_with(&hp.complex)
        .map_err(|e| CausalError::CompositionFailed(format!("union invalid: {e}")))?;
    let rep = classify(&glued);
    if !(rep.non_singular.holds && rep.non_pinching.holds && rep.local.holds) {
        return Err(CausalError::CompositionFailed(
            "union left the class C".into(),
        ));
    }
    Ok(glued)
}
