//! Core data model: validation, skeleton, restriction, boundary, star,
//! link, classification and isomorphism, plus property-based invariants.

use std::collections::BTreeSet;

use proptest::prelude::*;

use cckit::cell::Cell;
use cckit::classify::classify;
use cckit::complex::{build_complex, AxiomViolation, CellComplex, OpError};
use cckit::iso::{apply_bijection, is_isomorphic};
use cckit::toolkit::generate::{grid, simplex_boundary, torus_cell};

fn single_edge() -> CellComplex {
    build_complex([
        (Cell::vertex(0), 0),
        (Cell::vertex(1), 0),
        (Cell::new([0, 1]), 1),
    ])
    .unwrap()
}

#[test]
fn skeleton_of_tetra_boundary_is_complete_graph() {
    let k = simplex_boundary(3);
    let s = k.skeleton(1).unwrap();
    assert_eq!(s.f_vector(), vec![4, 6]);
    assert_eq!(k.skeleton(2).unwrap(), k);
    assert!(matches!(k.skeleton(3), Err(OpError::KOutOfRange { .. })));
}

#[test]
fn skeleton_of_grid() {
    let k = grid(5, 5);
    let s = k.skeleton(1).unwrap();
    assert_eq!(s.f_vector(), vec![36, 60]);
}

#[test]
fn restriction_examples() {
    let k = simplex_boundary(3);
    // Restriction to a cell is the sub-complex under it.
    let t = k.restriction(&[0, 1, 2]).unwrap();
    assert_eq!(t.f_vector(), vec![3, 3, 1]);
    // Empty restriction.
    assert!(k.restriction(&[]).unwrap().is_empty());
    assert!(matches!(
        k.restriction(&[99]),
        Err(OpError::UnknownVertex { vertex: 99 })
    ));
}

#[test]
fn boundary_examples() {
    assert_eq!(single_edge().boundary().unwrap().f_vector(), vec![2]);
    let g = grid(5, 5).boundary().unwrap();
    assert_eq!(g.f_vector(), vec![20, 20]);
    let t = torus_cell().boundary().unwrap();
    assert_eq!(t.f_vector(), vec![12, 24, 12]);
    assert!(classify(&t).closed.holds);
}

#[test]
fn boundary_rejects_non_pure() {
    let k = build_complex([
        (Cell::vertex(0), 0),
        (Cell::vertex(1), 0),
        (Cell::vertex(2), 0),
        (Cell::new([0, 1]), 1),
    ])
    .unwrap();
    assert!(matches!(k.boundary(), Err(OpError::NotPure)));
}

#[test]
fn star_and_link_of_vertex_in_tetra_boundary() {
    let k = simplex_boundary(3);
    let star = k.star(&Cell::vertex(0)).unwrap();
    // Every cell containing 0 joins with {0}; plus faces of those cells
    // that still admit an upper bound with {0}.
    assert!(star.contains(&Cell::new([0, 1, 2])));
    // The link of a vertex is the opposite triangle's boundary: since the
    // full tetrahedron is not a cell of ∂Δ³, the opposite 2-cell admits no
    // upper bound with the vertex and stays out.
    let link: BTreeSet<Cell> = k.link(&Cell::vertex(3)).unwrap().into_iter().collect();
    let expected: BTreeSet<Cell> = [
        Cell::vertex(0),
        Cell::vertex(1),
        Cell::vertex(2),
        Cell::new([0, 1]),
        Cell::new([0, 2]),
        Cell::new([1, 2]),
    ]
    .into_iter()
    .collect();
    assert_eq!(link, expected);
    // Link of a maximal cell is empty.
    assert!(k.link(&Cell::new([0, 1, 2])).unwrap().is_empty());
    assert!(matches!(
        k.star(&Cell::new([0, 3, 9])),
        Err(OpError::CellNotFound { .. })
    ));
}

#[test]
fn classify_torus_cell() {
    let t = torus_cell();
    let r = classify(&t);
    assert!(r.non_singular.holds);
    assert!(r.local.holds);
    assert!(!r.closed.holds);
    assert!(!r.simplicial.holds);
}

#[test]
fn iso_dual_of_tetra_boundary() {
    let k = simplex_boundary(3);
    let d = cckit::duality::dual_closed(&k).unwrap().complex;
    let m = is_isomorphic(&k, &d).unwrap();
    assert_eq!(apply_bijection(&k, &m), d);
}

#[test]
fn duplicate_cell_reported() {
    let err = build_complex([(Cell::vertex(0), 0), (Cell::vertex(0), 1)]).unwrap_err();
    assert!(err
        .violations
        .iter()
        .any(|v| matches!(v, AxiomViolation::DuplicateCell { .. })));
}

/// Random simplicial complexes: downward closures of a few facets.
fn arb_simplicial() -> impl Strategy<Value = CellComplex> {
    proptest::collection::vec(proptest::collection::btree_set(0u32..7, 1..4), 1..5).prop_map(
        |facets| {
            let mut cells: BTreeSet<BTreeSet<u32>> = BTreeSet::new();
            for f in facets {
                let items: Vec<u32> = f.iter().copied().collect();
                for mask in 1u32..(1 << items.len()) {
                    let sub: BTreeSet<u32> = items
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &v)| v)
                        .collect();
                    cells.insert(sub);
                }
            }
            build_complex(
                cells
                    .into_iter()
                    .map(|s| (Cell::new(s.iter().copied()), s.len() - 1)),
            )
            .expect("downward closures are simplicial complexes")
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cell_equals_intersection_of_cofaces(k in arb_simplicial()) {
        for i in 0..k.len() {
            let cf = k.cofaces(i);
            if cf.len() >= 2 {
                let mut acc = k.cell(cf[0]).clone();
                for &y in &cf[1..] {
                    acc = acc.intersection(k.cell(y)).expect("cofaces share x");
                }
                prop_assert_eq!(&acc, k.cell(i));
            }
        }
    }

    #[test]
    fn cell_equals_union_of_faces(k in arb_simplicial()) {
        for i in 0..k.len() {
            if k.rank_of(i) >= 1 {
                let mut verts: BTreeSet<u32> = BTreeSet::new();
                for &f in k.faces(i) {
                    verts.extend(k.cell(f).iter());
                }
                prop_assert_eq!(Cell::new(verts), k.cell(i).clone());
            }
        }
    }

    #[test]
    fn closed_implies_empty_boundary(k in arb_simplicial()) {
        let r = classify(&k);
        if r.closed.holds {
            prop_assert!(k.boundary().unwrap().is_empty());
        }
    }

    #[test]
    fn rebuild_roundtrip(k in arb_simplicial()) {
        let rebuilt = build_complex(k.ranked_cells()).unwrap();
        prop_assert_eq!(rebuilt, k);
    }

    #[test]
    fn iso_reflexive_and_symmetric_under_relabeling(k in arb_simplicial(), offset in 10u32..40) {
        let map: std::collections::BTreeMap<u32, u32> =
            k.vertex_set().into_iter().map(|v| (v, v + offset)).collect();
        let j = k.relabel(&map);
        let fwd = is_isomorphic(&k, &j).expect("relabeling is an isomorphism");
        let bwd = is_isomorphic(&j, &k).expect("symmetric");
        prop_assert_eq!(apply_bijection(&k, &fwd), j.clone());
        // Composition of the two bijections is again an isomorphism (maps k to k).
        let composed: std::collections::BTreeMap<u32, u32> =
            fwd.iter().map(|(&a, &b)| (a, bwd[&b])).collect();
        prop_assert_eq!(apply_bijection(&k, &composed), k);
    }
}
