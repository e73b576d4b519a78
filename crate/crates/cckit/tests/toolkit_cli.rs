//! Document round trips, generator f-vectors, and end-to-end CLI runs.

use std::path::PathBuf;
use std::process::Command;

use cckit::toolkit::{self, generate, CcDocument};

fn write_doc(dir: &std::path::Path, name: &str, k: &cckit::complex::CellComplex) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    toolkit::save(&CcDocument::from_complex(name, k), &path).unwrap();
    path
}

fn cckit_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cckit"))
}

#[test]
fn generator_f_vectors() {
    assert_eq!(generate::grid(5, 5).f_vector(), vec![36, 60, 25]);
    assert_eq!(generate::bitetra().f_vector(), vec![5, 9, 7, 2]);
    assert_eq!(generate::torus_cell().f_vector(), vec![12, 24, 12, 1]);
    assert_eq!(generate::cylinder(4, 2).f_vector(), vec![12, 20, 8]);
    assert_eq!(generate::simplex_boundary(4).f_vector(), vec![5, 10, 10, 5]);
    let prism = generate::prism(&generate::cycle(3)).unwrap();
    assert_eq!(prism.f_vector(), vec![6, 9, 3]);
    // Every generator output revalidates.
    for k in [
        generate::grid(5, 5),
        generate::bitetra(),
        generate::torus_cell(),
        generate::cylinder(4, 2),
        generate::simplex_boundary(4),
        prism,
        generate::dual_bdiv("cycle", &[4]).unwrap(),
    ] {
        assert!(cckit::complex::build_complex(k.ranked_cells()).is_ok());
    }
}

#[test]
fn document_roundtrip_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "grid", &generate::grid(5, 5));
    let bytes1 = std::fs::read(&path).unwrap();
    let doc = toolkit::load(&path).unwrap();
    assert_eq!(doc.cells.len(), 121);
    toolkit::save(&doc, &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), bytes1);
}

#[test]
fn malformed_rank_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"name":"bad","cells":[{"vertices":[0],"rank":1}]}"#,
    )
    .unwrap();
    let doc = toolkit::load(&path).unwrap();
    assert!(doc.to_complex().is_err());
}

#[test]
fn cli_euler_of_torus_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "torus", &generate::torus_cell());
    let out = cckit_bin().args(["euler"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["chi"], -1);
}

#[test]
fn cli_dual_involution_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "sphere3", &generate::simplex_boundary(3));
    let out = cckit_bin()
        .args(["dual", "--check-involution"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], true);
}

#[test]
fn cli_validate_exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_doc(dir.path(), "cycle", &generate::cycle(5));
    let out1 = cckit_bin().arg("classify").arg(&good).output().unwrap();
    let out2 = cckit_bin().arg("classify").arg(&good).output().unwrap();
    assert!(out1.status.success());
    assert_eq!(
        out1.stdout, out2.stdout,
        "identical inputs, identical bytes"
    );

    // Invalid complex: exit 1.
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"bad","cells":[{"vertices":[0],"rank":0},{"vertices":[1],"rank":0},{"vertices":[2],"rank":0},{"vertices":[0,1,2],"rank":2}]}"#,
    )
    .unwrap();
    let out = cckit_bin().arg("validate").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);

    // Missing file: exit 2.
    let out = cckit_bin()
        .arg("validate")
        .arg(dir.path().join("absent.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // The size cap refuses oversized documents: exit 2.
    let out = cckit_bin()
        .arg("validate")
        .arg(&good)
        .env("CCKIT_MAX_CELLS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_gen_shell_and_iso() {
    let dir = tempfile::tempdir().unwrap();
    let out = cckit_bin()
        .args(["gen", "grid", "2", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: CcDocument = serde_json::from_slice(&out.stdout).unwrap();
    let path = dir.path().join("grid22.json");
    std::fs::write(&path, &out.stdout).unwrap();
    assert_eq!(doc.cells.len(), 9 + 12 + 4);

    let out = cckit_bin().arg("shell").arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["shellable"], true);

    let out = cckit_bin().arg("shell2").arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["two_shellable"], true);

    let other = write_doc(dir.path(), "grid22b", &generate::grid(2, 2));
    let out = cckit_bin()
        .arg("iso")
        .arg(&path)
        .arg(&other)
        .output()
        .unwrap();
    assert!(out.status.success());

    let cyc = write_doc(dir.path(), "c5", &generate::cycle(5));
    let out = cckit_bin()
        .arg("iso")
        .arg(&path)
        .arg(&cyc)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cli_midsection_transition_and_dual_cob() {
    let dir = tempfile::tempdir().unwrap();
    let cyl = write_doc(dir.path(), "cyl", &generate::cylinder(4, 1));
    let out = cckit_bin()
        .args(["midsection", "--removed", "0"])
        .arg(&cyl)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: CcDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.cells.len(), 8); // C_4: 4 vertices, 4 edges

    let out = cckit_bin()
        .args(["transition", "--removed", "0"])
        .arg(&cyl)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["uniform"], true);

    // Dual cobordism document.
    let mut doc = CcDocument::from_complex("cyl", &generate::cylinder(4, 1));
    doc.removed_components = Some(vec![0]);
    let path = dir.path().join("cyl_cob.json");
    toolkit::save(&doc, &path).unwrap();
    let out = cckit_bin().arg("dual-cob").arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exactly_collared"], true);
}

#[test]
fn cli_glue_two_cylinders() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_doc(dir.path(), "cylA", &generate::cylinder(4, 1));
    // Second cylinder sharing ring 4..8.
    let mut cells = Vec::new();
    for row in 0..2u32 {
        for i in 0..4u32 {
            let at = |i: u32, r: u32| 4 + r * 4 + (i % 4);
            cells.push((cckit::cell::Cell::vertex(at(i, row)), 0));
            cells.push((cckit::cell::Cell::new([at(i, row), at(i + 1, row)]), 1));
            if row < 1 {
                cells.push((cckit::cell::Cell::new([at(i, row), at(i, row + 1)]), 1));
                cells.push((
                    cckit::cell::Cell::new([
                        at(i, row),
                        at(i + 1, row),
                        at(i, row + 1),
                        at(i + 1, row + 1),
                    ]),
                    2,
                ));
            }
        }
    }
    let k2 = cckit::complex::build_complex(cells).unwrap();
    let b = write_doc(dir.path(), "cylB", &k2);
    let out = cckit_bin()
        .args(["glue"])
        .arg(&a)
        .arg(&b)
        .args(["--interface", "1"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: CcDocument = serde_json::from_slice(&out.stdout).unwrap();
    let glued = doc.to_complex().unwrap();
    assert!(cckit::iso::is_isomorphic(&glued, &generate::cylinder(4, 2)).is_some());
}

#[test]
fn cli_slice_decompose_and_check_map() {
    let dir = tempfile::tempdir().unwrap();
    let cyl = write_doc(dir.path(), "cyl", &generate::cylinder(3, 1));
    let out = cckit_bin()
        .args(["slice-decompose", "--removed", "0"])
        .arg(&cyl)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let bundle: toolkit::Bundle = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(bundle.complexes.len(), 5);
    assert_eq!(bundle.maps.as_ref().unwrap().len(), 4);

    // The emitted bundle's maps re-verify via check-map.
    let bpath = dir.path().join("bundle.json");
    std::fs::write(&bpath, &out.stdout).unwrap();
    let out = cckit_bin().arg("check-map").arg(&bpath).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let maps = v["maps"].as_array().unwrap();
    // ρ maps are reductions; π maps are collapses.
    assert_eq!(maps.len(), 4);
    for m in maps {
        assert!(m["reduction"] == true || m["collapse"] == true);
    }

    // And slice-build rebuilds a cylinder from it.
    let out = cckit_bin().arg("slice-build").arg(&bpath).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: CcDocument = serde_json::from_slice(&out.stdout).unwrap();
    let rebuilt = doc.to_complex().unwrap();
    assert!(cckit::iso::is_isomorphic(&rebuilt, &generate::cylinder(3, 1)).is_some());
}

#[test]
fn cli_bdiv_and_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let tetra = write_doc(dir.path(), "tetra", &generate::simplex_boundary(3));
    let out = cckit_bin().arg("bdiv").arg(&tetra).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cells = v["document"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 74); // 14 + 36 + 24

    // Build the oriented 1-skeleton by hand and reconstruct.
    let b = cckit::subdivision::barycentric(&generate::simplex_boundary(3));
    let g = cckit::subdivision::inclusion_orientation(&b);
    let gpath = dir.path().join("graph.json");
    std::fs::write(
        &gpath,
        serde_json::to_string(&serde_json::json!({
            "vertices": g.vertices,
            "arcs": g.arcs,
        }))
        .unwrap(),
    )
    .unwrap();
    let out = cckit_bin()
        .arg("reconstruct-bdiv")
        .arg(&gpath)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: CcDocument = serde_json::from_slice(&out.stdout).unwrap();
    let k = doc.to_complex().unwrap();
    assert!(cckit::iso::is_isomorphic(&k, &generate::simplex_boundary(3)).is_some());
}

#[test]
fn cli_ambient_with_seed() {
    let dir = tempfile::tempdir().unwrap();
    let l = generate::dual_bdiv("simplex-boundary", &[3]).unwrap();
    let path = write_doc(dir.path(), "dbdiv3", &l);
    let out = cckit_bin().arg("ambient").arg(&path).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: CcDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.cells.len(), l.len());

    // Induced-cell query: a vertex and two of its edges name one 2-cell.
    let v = l.vertices().next().unwrap();
    let e1 = l.cell(l.edges_at(v)[0]).vertices().to_vec();
    let e2 = l.cell(l.edges_at(v)[1]).vertices().to_vec();
    let seed = format!("{v}:{}-{},{}-{}", e1[0], e1[1], e2[0], e2[1]);
    let out = cckit_bin()
        .arg("ambient")
        .arg(&path)
        .args(["--seed", &seed])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
