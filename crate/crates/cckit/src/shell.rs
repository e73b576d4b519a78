//! Euler characteristic, shellings, 2-shellings, the Euler–Poincaré check
//! and the abstract polytope predicate.
//!
//! Shellings follow the recursive definition: a facet order whose k-th
//! intersection complex is a non-singular (R−1)-complex shellable as a
//! prefix of a shelling of the facet's boundary, with non-empty boundary at
//! intermediate steps and a closing full boundary exactly for the last
//! facet of a closed complex. In rank one this makes a shellable complex a
//! tree (boundary nonempty) or a cycle (closed), which is how the rank ≤ 1
//! base cases are implemented. The search is exhaustive backtracking with
//! memoization on facet subsets: `None` really means no shelling exists.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::cell::Cell;
use crate::cell::VertexId;
use crate::complex::{build_complex, CellComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShellError {
    #[error("complex is not non-singular")]
    NotNonSingular,
    #[error("complex is not pure")]
    NotPure,
    #[error("complex must have rank ≥ 2")]
    RankTooSmall,
    #[error("no shelling certificate for this complex")]
    NoShellingCertificate,
}

/// A certificate for one facet order: per step, the facets of the
/// intersection complex in the order used to start the boundary shelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shelling {
    /// The facet order itself.
    pub order: Vec<Cell>,
    /// Certificate of `∂(K ∩ z₁)` (ranks ≥ 2 only).
    pub first_boundary: Option<Box<Shelling>>,
    /// For each step k ≥ 2: the ordered facets of the intersection complex
    /// and the completed shelling of `∂(K ∩ z_k)` they begin.
    pub steps: Vec<ShellStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellStep {
    pub intersection_facets: Vec<Cell>,
    pub boundary_completion: Option<Box<Shelling>>,
}

/// A 2-shelling: a vertex order making every partial restriction of every
/// 2-cell connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoShelling {
    pub order: Vec<VertexId>,
}

/// Exhaustive shelling search. `None` is a completed proof that no facet
/// order works.
pub fn find_shelling(k: &CellComplex) -> Result<Option<Shelling>, ShellError> {
    let report = crate::classify::classify(k);
    if !report.non_singular.holds {
        return Err(ShellError::NotNonSingular);
    }
    let mut memo = HashMap::new();
    Ok(shell_search(k, &mut memo))
}

type Memo = HashMap<Vec<(Cell, usize)>, Option<Shelling>>;

fn shell_search(k: &CellComplex, memo: &mut Memo) -> Option<Shelling> {
    let key = k.ranked_cells();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let result = shell_search_inner(k, memo);
    memo.insert(key, result.clone());
    result
}

fn shell_search_inner(k: &CellComplex, memo: &mut Memo) -> Option<Shelling> {
    // The empty complex has no shelling.
    let top = k.rank()?;
    match top {
        0 => {
            // A point. Two or more points never shell.
            if k.len() == 1 {
                Some(Shelling {
                    order: vec![k.cell(0).clone()],
                    first_boundary: None,
                    steps: vec![],
                })
            } else {
                None
            }
        }
        1 => shell_rank_one(k),
        _ => {
            let facets: Vec<usize> = k.rank_cells(top).to_vec();
            let closed = k.boundary_defining().is_empty();
            let mut used: Vec<usize> = Vec::new();
            let mut failed: BTreeSet<Vec<usize>> = BTreeSet::new();
            search_order(k, &facets, closed, &mut used, &mut failed, memo)
        }
    }
}

/// Rank-1 base: a shellable 1-complex is a tree or a cycle; grow edges so
/// each new edge meets the previous union in one vertex (both for the
/// closing edge of a cycle).
fn shell_rank_one(k: &CellComplex) -> Option<Shelling> {
    if k.vertex_components().len() != 1 {
        return None;
    }
    let edges: Vec<usize> = k.rank_cells(1).to_vec();
    let nv = k.rank_cells(0).len();
    let ne = edges.len();
    let closed = k.boundary_defining().is_empty();
    let is_tree = ne + 1 == nv;
    let is_cycle = closed && ne == nv && k.vertices().all(|v| k.edges_at(v).len() == 2);
    if !is_tree && !is_cycle {
        return None;
    }
    // Greedy connected growth always yields a valid order for trees/cycles.
    let mut order = vec![edges[0]];
    let mut seen: BTreeSet<usize> = BTreeSet::from([edges[0]]);
    let mut verts: BTreeSet<VertexId> = k.cell(edges[0]).iter().collect();
    while order.len() < ne {
        let next = edges
            .iter()
            .copied()
            .find(|e| !seen.contains(e) && k.cell(*e).iter().any(|v| verts.contains(&v)))
            .expect("connected");
        seen.insert(next);
        verts.extend(k.cell(next).iter());
        order.push(next);
    }
    Some(Shelling {
        order: order.into_iter().map(|e| k.cell(e).clone()).collect(),
        first_boundary: None,
        steps: vec![],
    })
}

fn search_order(
    k: &CellComplex,
    facets: &[usize],
    closed: bool,
    used: &mut Vec<usize>,
    failed: &mut BTreeSet<Vec<usize>>,
    memo: &mut Memo,
) -> Option<Shelling> {
    if used.len() == facets.len() {
        return assemble_certificate(k, used, memo);
    }
    let used_set: Vec<usize> = {
        let mut s = used.clone();
        s.sort_unstable();
        s
    };
    if failed.contains(&used_set) {
        return None;
    }
    for &z in facets {
        if used.contains(&z) {
            continue;
        }
        let ok = if used.is_empty() {
            first_facet_ok(k, z, memo)
        } else {
            step_admissible(k, used, z, closed, used.len() + 1 == facets.len(), memo).is_some()
        };
        if ok {
            used.push(z);
            if let Some(cert) = search_order(k, facets, closed, used, failed, memo) {
                return Some(cert);
            }
            used.pop();
        }
    }
    let mut s = used.clone();
    s.sort_unstable();
    failed.insert(s);
    None
}

/// `∂(K ∩ z)`; `None` when the facet complex has rank 0.
fn boundary_of_facet(k: &CellComplex, z: usize) -> Option<CellComplex> {
    let sub = k.restriction_to_cell(z);
    if sub.rank() == Some(0) {
        None
    } else {
        Some(sub.boundary().expect("facet complexes are pure"))
    }
}

/// First facet: `∂(K ∩ z₁)` must be shellable. The boundary of an edge
/// (two points, the 0-sphere) anchors the recursion.
fn first_facet_ok(k: &CellComplex, z: usize, memo: &mut Memo) -> bool {
    match boundary_of_facet(k, z) {
        None => true,
        Some(b) => b.rank() == Some(0) || shell_search(&b, memo).is_some(),
    }
}

/// Checks the shelling condition for appending facet `z` after `used`,
/// returning the certificate step.
fn step_admissible(
    k: &CellComplex,
    used: &[usize],
    z: usize,
    closed: bool,
    last: bool,
    memo: &mut Memo,
) -> Option<ShellStep> {
    let top = k.rank().expect("nonempty");
    // Intersection complex: the union of the pairwise intersection
    // subcomplexes K ∩ (z ∩ z_j), i.e. cells lying in z and in some
    // earlier facet.
    let mut inter_verts: BTreeSet<VertexId> = BTreeSet::new();
    for &u in used {
        if let Some(i) = k.cell(z).intersection(k.cell(u)) {
            inter_verts.extend(i.iter());
        }
    }

    if top == 1 {
        // Tree/cycle growth: a new edge attaches at one vertex; the closing
        // edge of a closed complex attaches at both its endpoints.
        let shared = inter_verts.len();
        let ok = if last && closed {
            shared == 2
        } else {
            shared == 1
        };
        return ok.then(|| ShellStep {
            intersection_facets: inter_verts.iter().map(|&v| Cell::vertex(v)).collect(),
            boundary_completion: None,
        });
    }

    let zcells = k.restriction_to_cell(z);
    let mut picked: BTreeSet<usize> = BTreeSet::new();
    for &u in used {
        if let Some(i) = k.cell(z).intersection(k.cell(u)) {
            for (idx, (c, _)) in zcells.iter().enumerate() {
                if c.subset_of(&i) {
                    picked.insert(idx);
                }
            }
        }
    }
    if picked.is_empty() {
        return None;
    }
    let inter = build_complex(
        picked
            .iter()
            .map(|&i| (zcells.cell(i).clone(), zcells.rank_of(i))),
    )
    .ok()?;

    // Must be a pure non-singular (R−1)-complex.
    if inter.rank() != Some(top - 1) || !inter.is_pure() {
        return None;
    }
    let rep = crate::classify::classify(&inter);
    if !rep.non_singular.holds {
        return None;
    }
    let inter_boundary_empty = inter.boundary_defining().is_empty();
    let facet_boundary = zcells.boundary().expect("facet complex is pure");
    if inter_boundary_empty {
        // Full boundary allowed only for the last facet of a closed complex.
        if !(last && closed) || inter != facet_boundary {
            return None;
        }
    } else if last && closed {
        return None;
    }

    // A shelling of the intersection must extend to one of ∂(K ∩ z).
    let inter_facets: Vec<usize> = inter.rank_cells(top - 1).to_vec();
    let mut prefix: Vec<usize> = Vec::new();
    let completion =
        extend_to_boundary_shelling(&facet_boundary, &inter, &inter_facets, &mut prefix, memo)?;
    Some(ShellStep {
        intersection_facets: prefix.iter().map(|&i| inter.cell(i).clone()).collect(),
        boundary_completion: completion.map(Box::new),
    })
}

/// Searches an order of the intersection facets that is simultaneously a
/// shelling prefix of `boundary`; returns the full boundary shelling when
/// ranks allow one (rank ≥ 1), `None` on failure.
///
/// Both complexes here have rank = R−1 of the caller; the prefix condition
/// is checked by running the shelling conditions inside `boundary`.
fn extend_to_boundary_shelling(
    boundary: &CellComplex,
    inter: &CellComplex,
    inter_facets: &[usize],
    prefix: &mut Vec<usize>,
    memo: &mut Memo,
) -> Option<Option<Shelling>> {
    // Map intersection facets into boundary indices.
    let as_boundary: Vec<usize> = inter_facets
        .iter()
        .map(|&i| {
            boundary
                .index_of(inter.cell(i))
                .expect("intersection ⊆ boundary")
        })
        .collect();
    let all: Vec<usize> = boundary.rank_cells(boundary.rank()?).to_vec();
    let closed = boundary.boundary_defining().is_empty();

    // Recursive constrained search: first place every intersection facet
    // (recording the order), then the rest.
    fn constrained(
        boundary: &CellComplex,
        all: &[usize],
        required_first: &[usize],
        closed: bool,
        used: &mut Vec<usize>,
        memo: &mut Memo,
    ) -> bool {
        if used.len() == all.len() {
            return true;
        }
        let candidates: Vec<usize> = if used.len() < required_first.len() {
            required_first
                .iter()
                .copied()
                .filter(|z| !used.contains(z))
                .collect()
        } else {
            all.iter().copied().filter(|z| !used.contains(z)).collect()
        };
        for z in candidates {
            let ok = if used.is_empty() {
                first_facet_ok(boundary, z, memo)
            } else {
                step_admissible(boundary, used, z, closed, used.len() + 1 == all.len(), memo)
                    .is_some()
            };
            if ok {
                used.push(z);
                if constrained(boundary, all, required_first, closed, used, memo) {
                    return true;
                }
                used.pop();
            }
        }
        false
    }

    boundary.rank()?;
    let mut used = Vec::new();
    if constrained(boundary, &all, &as_boundary, closed, &mut used, memo) {
        *prefix = used[..as_boundary.len()]
            .iter()
            .map(|z| {
                inter
                    .index_of(boundary.cell(*z))
                    .expect("prefix comes from inter")
            })
            .collect();
        // Record a plain certificate of the completed boundary shelling.
        let order: Vec<Cell> = used.iter().map(|&z| boundary.cell(z).clone()).collect();
        Some(Some(Shelling {
            order,
            first_boundary: None,
            steps: vec![],
        }))
    } else {
        None
    }
}

/// Assembles the final certificate once an order passed all step checks.
fn assemble_certificate(k: &CellComplex, order: &[usize], memo: &mut Memo) -> Option<Shelling> {
    let closed = k.boundary_defining().is_empty();
    let first_boundary = match boundary_of_facet(k, order[0]) {
        None => None,
        Some(b) => {
            if b.rank() == Some(0) {
                None
            } else {
                Some(Box::new(shell_search(&b, memo)?))
            }
        }
    };
    let mut steps = Vec::new();
    for pos in 1..order.len() {
        let step = step_admissible(
            k,
            &order[..pos],
            order[pos],
            closed,
            pos + 1 == order.len(),
            memo,
        )?;
        steps.push(step);
    }
    Some(Shelling {
        order: order.iter().map(|&z| k.cell(z).clone()).collect(),
        first_boundary,
        steps,
    })
}

/// Exhaustive 2-shelling search over vertex orders with memoized failures.
pub fn find_2_shelling(k: &CellComplex) -> Result<Option<TwoShelling>, ShellError> {
    match k.rank() {
        Some(r) if r >= 2 => {}
        _ => return Err(ShellError::RankTooSmall),
    }
    let verts = k.vertex_set();
    let two_cells: Vec<usize> = k.rank_cells(2).to_vec();
    let mut chosen: Vec<VertexId> = Vec::new();
    let mut failed: BTreeSet<Vec<VertexId>> = BTreeSet::new();

    fn admissible(
        k: &CellComplex,
        chosen: &[VertexId],
        next: VertexId,
        two_cells: &[usize],
    ) -> bool {
        // K_j ∩ (C ∖ {v_{j+1}}) connected for every 2-cell C, where j is
        // the current prefix.
        let prefix: BTreeSet<VertexId> = chosen.iter().copied().collect();
        for &c in two_cells {
            let cell = k.cell(c);
            let keep: Vec<VertexId> = cell
                .iter()
                .filter(|v| *v != next && prefix.contains(v))
                .collect();
            if keep.len() <= 1 {
                continue;
            }
            let sub = k.restriction(&keep).expect("vertices of k");
            if sub.vertex_components().len() > 1 {
                return false;
            }
        }
        true
    }

    fn search(
        k: &CellComplex,
        verts: &[VertexId],
        two_cells: &[usize],
        chosen: &mut Vec<VertexId>,
        failed: &mut BTreeSet<Vec<VertexId>>,
    ) -> bool {
        if chosen.len() == verts.len() {
            return true;
        }
        let mut key = chosen.clone();
        key.sort_unstable();
        if failed.contains(&key) {
            return false;
        }
        for &v in verts {
            if chosen.contains(&v) {
                continue;
            }
            if admissible(k, chosen, v, two_cells) {
                chosen.push(v);
                if search(k, verts, two_cells, chosen, failed) {
                    return true;
                }
                chosen.pop();
            }
        }
        failed.insert(key);
        false
    }

    if search(k, &verts, &two_cells, &mut chosen, &mut failed) {
        Ok(Some(TwoShelling { order: chosen }))
    } else {
        Ok(None)
    }
}

/// Outcome of the Euler–Poincaré verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerPoincare {
    Consistent { chi: i64, expected: i64 },
    Violation { chi: i64, expected: i64 },
}

/// Checks `χ = 1` (boundary nonempty) or `χ = 1 + (−1)^R` (closed) for a
/// complex that was certified shellable.
pub fn check_euler_poincare(
    k: &CellComplex,
    certificate: &Option<Shelling>,
) -> Result<EulerPoincare, ShellError> {
    if certificate.is_none() {
        return Err(ShellError::NoShellingCertificate);
    }
    let r = k.rank().unwrap_or(0);
    let closed = k.boundary_defining().is_empty();
    let expected = if closed && r >= 1 {
        1 + if r.is_multiple_of(2) { 1 } else { -1 }
    } else {
        1
    };
    let chi = k.euler_characteristic();
    if chi == expected {
        Ok(EulerPoincare::Consistent { chi, expected })
    } else {
        Ok(EulerPoincare::Violation { chi, expected })
    }
}

/// A section `[x, y]` and its connectivity per the polytope definition.
fn section_connected(k: &CellComplex, x: Option<usize>, y: usize) -> bool {
    let rx = x.map_or(-1i64, |i| k.rank_of(i) as i64);
    let ry = k.rank_of(y) as i64;
    if ry - rx <= 2 {
        return true;
    }
    // Middle cells strictly between x and y; connect via direct inclusions.
    let mid: Vec<usize> = (0..k.len())
        .filter(|&w| {
            let above = x.is_none_or(|i| k.cell(i).strict_subset_of(k.cell(w)));
            above && k.cell(w).strict_subset_of(k.cell(y))
        })
        .collect();
    if mid.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; mid.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for (q, &w) in mid.iter().enumerate() {
            if !seen[q]
                && (k.cell(mid[p]).strict_subset_of(k.cell(w))
                    || k.cell(w).strict_subset_of(k.cell(mid[p])))
            {
                seen[q] = true;
                count += 1;
                stack.push(q);
            }
        }
    }
    count == mid.len()
}

/// A failing section `[x, y]` (with `x = None` for the empty bottom).
pub type SectionWitness = (Option<Cell>, Cell);

/// Polytope predicate: pure, exactly one maximal cell, and every section
/// connected. Returns the witness section on failure.
pub fn is_polytope(k: &CellComplex) -> Result<(bool, Option<SectionWitness>), ShellError> {
    if !k.is_pure() {
        return Err(ShellError::NotPure);
    }
    let top = match k.rank() {
        None => return Ok((false, None)),
        Some(t) => t,
    };
    if k.rank_cells(top).len() != 1 {
        let zs = k.rank_cells(top);
        let witness = zs.first().map(|&z| (None, k.cell(z).clone()));
        return Ok((false, witness));
    }
    for y in 0..k.len() {
        if !section_connected(k, None, y) {
            return Ok((false, Some((None, k.cell(y).clone()))));
        }
        for x in 0..k.len() {
            if k.cell(x).strict_subset_of(k.cell(y)) && !section_connected(k, Some(x), y) {
                return Ok((false, Some((Some(k.cell(x).clone()), k.cell(y).clone()))));
            }
        }
    }
    Ok((true, None))
}
