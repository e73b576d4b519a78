//! Collars, midsections, cobordism validation, duality on cobordisms and
//! exact collaring — the Theorem 3.1 suite on the corpus.

use std::collections::BTreeSet;

use cckit::cell::{Cell, VertexId};
use cckit::cobordism::{
    collar, dual_cobordism, is_exactly_collared, midsection, validate_cobordism, Cobordism,
};
use cckit::complex::{build_complex, CellComplex};
use cckit::iso::is_isomorphic;
use cckit::toolkit::generate::{bitetra, cycle, cylinder, grid3};

fn single_edge() -> CellComplex {
    build_complex([
        (Cell::vertex(0), 0),
        (Cell::vertex(1), 0),
        (Cell::new([0, 1]), 1),
    ])
    .unwrap()
}

fn cylinder_cob(n: usize, h: usize) -> Cobordism {
    validate_cobordism(&cylinder(n, h), &[0]).unwrap()
}

#[test]
fn collar_examples() {
    let k = cylinder(4, 1);
    assert!(collar(&k, &k.vertex_set()).is_empty());
    assert!(collar(&k, &[]).is_empty());
    let end: Vec<VertexId> = (0..4).collect();
    let c = collar(&k, &end);
    // Vertical edges and squares.
    assert_eq!(c.iter().filter(|x| x.len() == 2).count(), 4);
    assert_eq!(c.iter().filter(|x| x.len() == 4).count(), 4);
}

#[test]
fn midsection_of_cylinder_is_the_cycle() {
    let k = cylinder(5, 1);
    let j = k.restriction(&(0..5).collect::<Vec<_>>()).unwrap();
    let m = midsection(&k, &j).unwrap();
    assert!(is_isomorphic(&m.complex, &cycle(5)).is_some());
    // Exactly collared pairs have midsection ≅ J.
    assert!(is_exactly_collared(&k, &j));
    assert!(is_isomorphic(&m.complex, &j).is_some());
}

#[test]
fn midsection_of_cube_grid_is_octahedron() {
    let k = grid3(2, 2, 2);
    let j = k.boundary().unwrap();
    let m = midsection(&k, &j).unwrap();
    assert_eq!(m.complex.f_vector(), vec![6, 12, 8]);
    assert!(cckit::classify::classify(&m.complex).closed.holds);
    // Purity: rank drops by one.
    assert_eq!(m.complex.rank(), Some(2));
}

#[test]
fn simplicial_cobordisms_validate() {
    // Simplicial complexes validate whenever non-degeneracy can hold; with
    // every vertex on the boundary, removing the whole boundary is
    // degenerate (the tetrahedra lie inside the boundary vertex set).
    let k = bitetra();
    assert!(validate_cobordism(&k, &[]).is_ok());
    let err = validate_cobordism(&k, &[0]).unwrap_err();
    assert!(!err.non_degenerate.holds);
}

#[test]
fn edge_cobordisms() {
    let k = single_edge();
    for removed in [vec![], vec![0], vec![1]] {
        assert!(validate_cobordism(&k, &removed).is_ok(), "{removed:?}");
    }
    let err = validate_cobordism(&k, &[7]).unwrap_err();
    assert!(!err.removed_is_boundary_union.holds);
}

#[test]
fn theorem_suite_on_the_corpus() {
    // dual(K−J) validates, is exactly collared, and its boundary splits as
    // dual(∂K∖J) ⊔ dual(K_J) with dual(K_J) ≅ dual(M_J^K).
    let corpus: Vec<Cobordism> = vec![
        validate_cobordism(&single_edge(), &[0]).unwrap(),
        validate_cobordism(&bitetra(), &[]).unwrap(),
        cylinder_cob(3, 1),
        cylinder_cob(4, 2),
    ];
    for cob in corpus {
        let dual = dual_cobordism(&cob).unwrap();
        assert!(is_exactly_collared(&dual.cob.complex, &dual.cob.removed));

        // Boundary decomposition.
        let dual_boundary = dual.cob.complex.boundary().unwrap();
        let mut expected: BTreeSet<(Cell, usize)> = BTreeSet::new();
        expected.extend(dual.cob.removed.ranked_cells());
        expected.extend(dual.dual_collar.iter().cloned());
        let actual: BTreeSet<(Cell, usize)> = dual_boundary.ranked_cells().into_iter().collect();
        assert_eq!(actual, expected, "∂(dual) = dual(∂K∖J) ⊔ dual(K_J)");

        // dual(K_J) ≅ dual(M_J^K) whenever J is nonempty.
        if !cob.removed.is_empty() {
            let collar_complex = build_complex(dual.dual_collar.clone()).unwrap();
            let m = midsection(&cob.complex, &cob.removed).unwrap();
            let dm = cckit::duality::dual_closed(&m.complex).unwrap().complex;
            assert!(is_isomorphic(&collar_complex, &dm).is_some());
        }

        // Double dual of exactly collared cobordisms: an isomorphism that
        // carries the removed part onto the removed part.
        if is_exactly_collared(&cob.complex, &cob.removed) {
            let dd = dual_cobordism(&dual.cob).unwrap();
            let dd_removed: BTreeSet<_> = dd.cob.removed.vertices().collect();
            let removed: BTreeSet<_> = cob.removed.vertices().collect();
            assert!(
                cckit::iso::is_isomorphic_respecting(
                    &dd.cob.complex,
                    &cob.complex,
                    &dd_removed,
                    &removed
                )
                .is_some(),
                "double dual as a cobordism"
            );
        }
    }
}

#[test]
fn bitetra_dual_has_five_three_cells() {
    let cob = validate_cobordism(&bitetra(), &[]).unwrap();
    let dual = dual_cobordism(&cob).unwrap();
    assert_eq!(dual.cob.complex.rank_cells(3).len(), 5);
    // The entire boundary of the dual is removed.
    assert_eq!(
        dual.cob.removed.ranked_cells(),
        dual.cob.complex.boundary().unwrap().ranked_cells()
    );
}

#[test]
fn cylinder_dual_swaps_the_ends() {
    let cob = cylinder_cob(3, 3);
    let dual = dual_cobordism(&cob).unwrap();
    assert!(is_isomorphic(&dual.cob.complex, &cob.complex).is_some());
    assert!(is_exactly_collared(&cob.complex, &cob.removed));
    let dd = dual_cobordism(&dual.cob).unwrap();
    assert!(is_isomorphic(&dd.cob.complex, &cob.complex).is_some());
}

#[test]
fn degenerate_single_cell_rejected() {
    let mut cells = vec![(Cell::new([0, 1, 2, 3]), 3)];
    for v in 0..4u32 {
        cells.push((Cell::vertex(v), 0));
    }
    for pair in [[0u32, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]] {
        cells.push((Cell::new(pair), 1));
    }
    for tri in [[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        cells.push((Cell::new(tri), 2));
    }
    let k = build_complex(cells).unwrap();
    let err = validate_cobordism(&k, &[0]).unwrap_err();
    assert!(!err.non_degenerate.holds);
}

#[test]
fn empty_removed_is_exactly_collared() {
    let k = bitetra();
    assert!(is_exactly_collared(&k, &CellComplex::empty()));
}

#[test]
fn rank_three_prism_cobordism_suite() {
    let base = cckit::toolkit::generate::simplex_boundary(3);
    let p = cckit::toolkit::generate::prism(&base).unwrap();
    let j = p.restriction(&base.vertex_set()).unwrap();
    let comps = p.boundary().unwrap().components().unwrap();
    let idx = comps.iter().position(|c| *c == j).unwrap();
    let cob = validate_cobordism(&p, &[idx]).unwrap();
    assert!(is_exactly_collared(&p, &cob.removed));
    let d = dual_cobordism(&cob).unwrap();
    assert!(is_exactly_collared(&d.cob.complex, &d.cob.removed));
    let dd = dual_cobordism(&d.cob).unwrap();
    let dd_removed: BTreeSet<_> = dd.cob.removed.vertices().collect();
    let removed: BTreeSet<_> = cob.removed.vertices().collect();
    assert!(
        cckit::iso::is_isomorphic_respecting(&dd.cob.complex, &p, &dd_removed, &removed).is_some()
    );
}
