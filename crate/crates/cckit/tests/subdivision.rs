//! Barycentric subdivision, its reduction, orientations and the
//! reconstruction round trips.

use cckit::causal::barycentric_reduction;
use cckit::classify::classify;
use cckit::iso::is_isomorphic;
use cckit::shell::find_shelling;
use cckit::subdivision::{barycentric, inclusion_orientation, reconstruct_from_oriented_bdiv};
use cckit::toolkit::generate::{cycle, dual_bdiv, grid, simplex_boundary};

#[test]
fn bdiv_is_simplicial_and_reduces() {
    for k in [cycle(4), simplex_boundary(3), grid(2, 2)] {
        let b = barycentric(&k);
        assert!(classify(&b.complex).simplicial.holds);
        assert!(barycentric_reduction(&k).is_ok());
    }
}

#[test]
fn bdiv_self_duality_on_closed_corpus() {
    for k in [cycle(5), simplex_boundary(3), simplex_boundary(4)] {
        let b = barycentric(&k).complex;
        let d = cckit::duality::dual_closed(&k).unwrap().complex;
        let bd = barycentric(&d).complex;
        assert!(is_isomorphic(&b, &bd).is_some());
    }
}

#[test]
fn dual_bdiv_is_even() {
    for (fam, params) in [
        ("simplex-boundary", vec![3]),
        ("simplex-boundary", vec![4]),
        ("cycle", vec![5]),
    ] {
        let k = dual_bdiv(fam, &params).unwrap();
        assert!(classify(&k).even.holds, "{fam:?} {params:?}");
    }
}

#[test]
fn bdiv_preserves_euler_characteristic_of_shellables() {
    for k in [
        grid(3, 3),
        simplex_boundary(2),
        simplex_boundary(3),
        simplex_boundary(4),
    ] {
        assert!(find_shelling(&k).unwrap().is_some());
        let b = barycentric(&k).complex;
        assert_eq!(b.euler_characteristic(), k.euler_characteristic());
    }
}

#[test]
fn bdiv_of_shellable_is_shellable() {
    for k in [cycle(4), grid(2, 1), simplex_boundary(3)] {
        let b = barycentric(&k).complex;
        assert!(find_shelling(&b).unwrap().is_some());
    }
}

#[test]
fn orientation_reversal_matches_dual_orientation() {
    // Under the identification of bdiv(K) with bdiv(dual K), the reverse of
    // the inclusion orientation is the dual's inclusion orientation: ranks
    // complement, so arc directions flip.
    let k = simplex_boundary(3);
    let b = barycentric(&k);
    let g = inclusion_orientation(&b);
    assert!(g.is_transitive());
    assert!(g.reversed().is_transitive());
    let r = reconstruct_from_oriented_bdiv(&g.reversed()).unwrap();
    let d = cckit::duality::dual_closed(&k).unwrap().complex;
    assert!(is_isomorphic(&r, &d).is_some());
}

#[test]
fn reconstruction_roundtrip_corpus() {
    for k in [cycle(5), simplex_boundary(3), grid(2, 2), grid(5, 5)] {
        let g = inclusion_orientation(&barycentric(&k));
        let r = reconstruct_from_oriented_bdiv(&g).unwrap();
        assert!(is_isomorphic(&r, &k).is_some(), "roundtrip failed");
    }
}

mod random {
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    use cckit::cell::Cell;
    use cckit::complex::{build_complex, CellComplex};
    use cckit::iso::is_isomorphic;
    use cckit::subdivision::{barycentric, inclusion_orientation, reconstruct_from_oriented_bdiv};

    fn arb_simplicial() -> impl Strategy<Value = CellComplex> {
        proptest::collection::vec(proptest::collection::btree_set(0u32..6, 1..4), 1..4).prop_map(
            |facets| {
                let mut cells: BTreeSet<BTreeSet<u32>> = BTreeSet::new();
                for f in facets {
                    let items: Vec<u32> = f.iter().copied().collect();
                    for mask in 1u32..(1 << items.len()) {
                        cells.insert(
                            items
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| mask & (1 << i) != 0)
                                .map(|(_, &v)| v)
                                .collect(),
                        );
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
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn reconstruction_roundtrip_random(k in arb_simplicial()) {
            let b = barycentric(&k);
            let g = inclusion_orientation(&b);
            let r = reconstruct_from_oriented_bdiv(&g).unwrap();
            prop_assert!(is_isomorphic(&r, &k).is_some());
        }

        #[test]
        fn barycentric_reduction_random(k in arb_simplicial()) {
            prop_assert!(cckit::causal::barycentric_reduction(&k).is_ok());
        }
    }
}
