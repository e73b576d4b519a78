//! Command line front end.
//!
//! Inputs are JSON complex documents (or bundles for map-carrying
//! commands). Successful commands print JSON to stdout and exit 0; failed
//! checks exit 1 with a machine-readable report; IO, parse and size-cap
//! problems exit 2. Output is deterministic for identical inputs.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use cckit::causal::{self, CcMap};
use cckit::cell::{Cell, VertexId};
use cckit::cobordism;
use cckit::complex::CellComplex;
use cckit::shell;
use cckit::subdivision;
use cckit::toolkit::{self, generate, Bundle, CcDocument};

#[derive(Parser)]
#[command(name = "cckit", version, about = "combinatorial cell complex toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (only json is supported).
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a complex document against the axioms.
    Validate { input: PathBuf },
    /// Structural predicates of a complex.
    Classify { input: PathBuf },
    /// Euler characteristic.
    Euler { input: PathBuf },
    /// Dual of a closed complex.
    Dual {
        input: PathBuf,
        /// Also verify dual(dual(K)) ≅ K.
        #[arg(long)]
        check_involution: bool,
    },
    /// Dual cobordism of a document with removed components.
    DualCob { input: PathBuf },
    /// Barycentric subdivision.
    Bdiv { input: PathBuf },
    /// Rebuild a complex from an oriented subdivision 1-skeleton.
    ReconstructBdiv { input: PathBuf },
    /// Shelling search.
    Shell { input: PathBuf },
    /// 2-shelling search.
    Shell2 { input: PathBuf },
    /// Ambient complex of a 2-skeleton; with --seed, one induced cell.
    Ambient {
        input: PathBuf,
        /// Induced-cell seed "v:e1a-e1b,e2a-e2b,…".
        #[arg(long)]
        seed: Option<String>,
        /// Optional contractibility spot-check budget (semidecision).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Midsection with respect to removed boundary components.
    Midsection {
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        removed: Vec<usize>,
    },
    /// Transition and uniformity report.
    Transition {
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        removed: Vec<usize>,
    },
    /// Check the maps of a bundle as reductions/collapses.
    CheckMap { input: PathBuf },
    /// Build a slice from a slice-sequence bundle (j, j', m, l', l).
    SliceBuild { input: PathBuf },
    /// Decompose a slice into its slice sequence.
    SliceDecompose {
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        removed: Vec<usize>,
    },
    /// Glue two complexes along a shared boundary component.
    Glue {
        a: PathBuf,
        b: PathBuf,
        /// Index of the interface component within ∂A.
        #[arg(long)]
        interface: usize,
    },
    /// Isomorphism test between two documents.
    Iso { a: PathBuf, b: PathBuf },
    /// Generate a named family, e.g. `gen grid 5 5`.
    Gen {
        family: String,
        params: Vec<usize>,
        /// Prism base document (for `gen prism`).
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Validate a document as a cobordism (uses removed_components).
    ValidateCob { input: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.format != "json" {
        eprintln!("unsupported format: {}", cli.format);
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(value) => {
            print!("{}", toolkit::to_canonical_json(&value));
            ExitCode::SUCCESS
        }
        Err(Failure::Check(value)) => {
            print!("{}", toolkit::to_canonical_json(&value));
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

enum Failure {
    /// A failed check: exit 1 with a JSON report.
    Check(serde_json::Value),
    /// IO or parse problem: exit 2.
    Io(String),
}

fn load_complex(path: &PathBuf) -> Result<(CcDocument, CellComplex), Failure> {
    let doc = toolkit::load(path).map_err(|e| Failure::Io(e.to_string()))?;
    match doc.to_complex() {
        Ok(k) => Ok((doc, k)),
        Err(report) => Err(Failure::Check(json!({
            "valid": false,
            "violations": report.violations,
        }))),
    }
}

fn load_bundle(path: &PathBuf) -> Result<Bundle, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| Failure::Io(e.to_string()))
}

fn doc_json(name: &str, k: &CellComplex) -> serde_json::Value {
    let mut doc = CcDocument::from_complex(name, k);
    doc.canonicalize();
    serde_json::to_value(doc).expect("serializable")
}

fn removed_subcomplex(k: &CellComplex, removed: &[usize]) -> Result<CellComplex, Failure> {
    match cobordism::validate_cobordism(k, removed) {
        Ok(cob) => Ok(cob.removed),
        Err(report) => Err(Failure::Check(json!({
            "cobordism_valid": false,
            "report": report,
        }))),
    }
}

fn run(cmd: Command) -> Result<serde_json::Value, Failure> {
    match cmd {
        Command::Validate { input } => {
            let (_, _k) = load_complex(&input)?;
            Ok(json!({"valid": true}))
        }
        Command::Classify { input } => {
            let (_, k) = load_complex(&input)?;
            Ok(serde_json::to_value(cckit::classify::classify(&k)).expect("serializable"))
        }
        Command::Euler { input } => {
            let (_, k) = load_complex(&input)?;
            Ok(json!({"chi": k.euler_characteristic()}))
        }
        Command::Dual {
            input,
            check_involution,
        } => {
            let (doc, k) = load_complex(&input)?;
            let d = cckit::duality::dual_closed(&k)
                .map_err(|e| Failure::Check(json!({"error": e.to_string()})))?;
            if check_involution {
                let dd = cckit::duality::dual_closed(&d.complex)
                    .map_err(|e| Failure::Check(json!({"error": e.to_string()})))?;
                let iso = cckit::iso::is_isomorphic(&dd.complex, &k).is_some();
                if !iso {
                    return Err(Failure::Check(json!({"ok": false})));
                }
                return Ok(json!({"ok": true}));
            }
            Ok(doc_json(&format!("dual({})", doc.name), &d.complex))
        }
        Command::DualCob { input } => {
            let (doc, k) = load_complex(&input)?;
            let removed = doc.removed_components.clone().unwrap_or_default();
            let cob = cobordism::validate_cobordism(&k, &removed).map_err(|report| {
                Failure::Check(json!({"cobordism_valid": false, "report": report}))
            })?;
            let dual = cobordism::dual_cobordism(&cob)
                .map_err(|e| Failure::Check(json!({"error": e.to_string()})))?;
            let mut out =
                CcDocument::from_complex(format!("dual-cob({})", doc.name), &dual.cob.complex);
            out.removed_components = Some(dual.cob.removed_indices.clone());
            out.canonicalize();
            let exactly = cobordism::is_exactly_collared(&dual.cob.complex, &dual.cob.removed);
            Ok(json!({
                "document": out,
                "exactly_collared": exactly,
            }))
        }
        Command::Bdiv { input } => {
            let (doc, k) = load_complex(&input)?;
            let b = subdivision::barycentric(&k);
            let origins: BTreeMap<String, String> = b
                .vertex_origin
                .iter()
                .map(|(v, c)| (v.to_string(), c.to_string()))
                .collect();
            Ok(json!({
                "document": doc_json(&format!("bdiv({})", doc.name), &b.complex),
                "origins": origins,
            }))
        }
        Command::ReconstructBdiv { input } => {
            let text = std::fs::read_to_string(&input).map_err(|e| Failure::Io(e.to_string()))?;
            #[derive(serde::Deserialize)]
            struct GraphDoc {
                vertices: Vec<VertexId>,
                arcs: Vec<(VertexId, VertexId)>,
            }
            let g: GraphDoc =
                serde_json::from_str(&text).map_err(|e| Failure::Io(e.to_string()))?;
            let graph = subdivision::OrientedGraph {
                vertices: g.vertices,
                arcs: g.arcs,
            };
            match subdivision::reconstruct_from_oriented_bdiv(&graph) {
                Ok(k) => Ok(doc_json("reconstructed", &k)),
                Err(e) => Err(Failure::Check(json!({"error": e.to_string()}))),
            }
        }
        Command::Shell { input } => {
            let (_, k) = load_complex(&input)?;
            match shell::find_shelling(&k) {
                Ok(Some(s)) => Ok(json!({
                    "shellable": true,
                    "order": s.order.iter().map(|c| c.vertices().to_vec()).collect::<Vec<_>>(),
                })),
                Ok(None) => Ok(json!({"shellable": false})),
                Err(e) => Err(Failure::Check(json!({"error": e.to_string()}))),
            }
        }
        Command::Shell2 { input } => {
            let (_, k) = load_complex(&input)?;
            match shell::find_2_shelling(&k) {
                Ok(Some(s)) => Ok(json!({"two_shellable": true, "order": s.order})),
                Ok(None) => Ok(json!({"two_shellable": false})),
                Err(e) => Err(Failure::Check(json!({"error": e.to_string()}))),
            }
        }
        Command::Ambient {
            input,
            seed,
            budget,
        } => {
            let (doc, k) = load_complex(&input)?;
            if let Some(seed_arg) = seed {
                let (v, edges) = parse_seed(&seed_arg).map_err(Failure::Io)?;
                let cells: Vec<Cell> = edges;
                match cckit::reconstruct::induced_subcomplex(&k, v, &cells) {
                    Ok(ind) => {
                        return Ok(doc_json(
                            &format!("induced({}, v={v})", doc.name),
                            &ind.complex,
                        ))
                    }
                    Err(e) => return Err(Failure::Check(json!({"error": e.to_string()}))),
                }
            }
            // Optional spot check: try to contract each 2-cell loop within
            // the budget (a semidecision, reported alongside the result).
            let loop_checks = budget.map(|b| {
                let (mut contracted, mut unknown) = (0usize, 0usize);
                for &c in k.rank_cells(2) {
                    let v = k.cell(c).vertices()[0];
                    match cckit::reconstruct::component_loop(&k, c, v)
                        .and_then(|lp| cckit::reconstruct::is_contractible_bounded(&k, &lp, b))
                    {
                        Ok(cckit::reconstruct::Contractibility::Yes { .. }) => contracted += 1,
                        _ => unknown += 1,
                    }
                }
                json!({"contracted": contracted, "unknown": unknown, "budget": b})
            });
            match cckit::reconstruct::ambient_complex(&k) {
                Ok(a) => {
                    let document = doc_json(&format!("ambient({})", doc.name), &a.complex);
                    Ok(match loop_checks {
                        Some(checks) => json!({"document": document, "loop_checks": checks}),
                        None => document,
                    })
                }
                Err(e) => Err(Failure::Check(json!({"error": e.to_string()}))),
            }
        }
        Command::Midsection { input, removed } => {
            let (doc, k) = load_complex(&input)?;
            let j = removed_subcomplex(&k, &removed)?;
            match cobordism::midsection(&k, &j) {
                Ok(m) => Ok(doc_json(&format!("midsection({})", doc.name), &m.complex)),
                Err(e) => Err(Failure::Check(json!({"error": e.to_string()}))),
            }
        }
        Command::Transition { input, removed } => {
            let (doc, k) = load_complex(&input)?;
            let j = removed_subcomplex(&k, &removed)?;
            let (t, report) = causal::transition(&k, &j);
            let doc_val = t.map(|t| doc_json(&format!("transition({})", doc.name), &t.complex));
            let value = json!({
                "uniform": report.ok(),
                "report": report,
                "transition": doc_val,
            });
            if report.ok() {
                Ok(value)
            } else {
                Err(Failure::Check(value))
            }
        }
        Command::CheckMap { input } => {
            let bundle = load_bundle(&input)?;
            let complexes = bundle_complexes(&bundle)?;
            let mut results = Vec::new();
            for m in bundle.maps.clone().unwrap_or_default() {
                let map = resolve_map(&complexes, &m)?;
                let red = causal::check_reduction(&map);
                let col = causal::check_collapse(&map);
                results.push(json!({
                    "from": m.from,
                    "to": m.to,
                    "reduction": red.is_ok(),
                    "reduction_violations": red.err(),
                    "collapse": col.is_ok(),
                    "collapse_violations": col.err(),
                }));
            }
            Ok(json!({"maps": results}))
        }
        Command::SliceBuild { input } => {
            let bundle = load_bundle(&input)?;
            let complexes = bundle_complexes(&bundle)?;
            let maps = bundle.maps.clone().unwrap_or_default();
            let find = |from: &str, to: &str| -> Result<CcMap, Failure> {
                let entry = maps
                    .iter()
                    .find(|m| m.from == from && m.to == to)
                    .ok_or_else(|| Failure::Io(format!("missing map {from} → {to}")))?;
                resolve_map(&complexes, entry)
            };
            let rho_j = causal::check_reduction(&find("j", "j_transition")?)
                .map_err(|v| Failure::Check(json!({"rho_j": v})))?;
            let pi_j = causal::check_collapse(&find("m", "j_transition")?)
                .map_err(|v| Failure::Check(json!({"pi_j": v})))?;
            let pi_l = causal::check_collapse(&find("m", "l_transition")?)
                .map_err(|v| Failure::Check(json!({"pi_l": v})))?;
            let rho_l = causal::check_reduction(&find("l", "l_transition")?)
                .map_err(|v| Failure::Check(json!({"rho_l": v})))?;
            let seq = causal::SliceSequence::validate(rho_j, pi_j, pi_l, rho_l)
                .map_err(|e| Failure::Check(json!({"error": e.to_string()})))?;
            match causal::slice_from_sequence(&seq) {
                Ok(slice) => Ok(doc_json("slice", &slice.complex)),
                Err(e) => Err(Failure::Check(json!({"error": e.to_string()}))),
            }
        }
        Command::SliceDecompose { input, removed } => {
            let (_, k) = load_complex(&input)?;
            let j = removed_subcomplex(&k, &removed)?;
            let slice = causal::validate_slice(&k, &j)
                .map_err(|e| Failure::Check(json!({"error": e.to_string()})))?;
            let seq = causal::sequence_from_slice(&slice)
                .map_err(|e| Failure::Check(json!({"error": e.to_string()})))?;
            let complexes = vec![
                CcDocument::from_complex("j", &seq.j),
                CcDocument::from_complex("j_transition", &seq.j_transition),
                CcDocument::from_complex("m", &seq.m),
                CcDocument::from_complex("l_transition", &seq.l_transition),
                CcDocument::from_complex("l", &seq.l),
            ];
            let maps = vec![
                map_entry("j", "j_transition", seq.rho_j.map()),
                map_entry("m", "j_transition", seq.pi_j.map()),
                map_entry("m", "l_transition", seq.pi_l.map()),
                map_entry("l", "l_transition", seq.rho_l.map()),
            ];
            let mut bundle = Bundle {
                complexes,
                maps: Some(maps),
            };
            for c in &mut bundle.complexes {
                c.canonicalize();
            }
            Ok(serde_json::to_value(bundle).expect("serializable"))
        }
        Command::Glue { a, b, interface } => {
            let (doc_a, ka) = load_complex(&a)?;
            let (_, kb) = load_complex(&b)?;
            let boundary = ka
                .boundary()
                .map_err(|e| Failure::Check(json!({"error": e.to_string()})))?;
            let comps = boundary
                .components()
                .map_err(|e| Failure::Check(json!({"error": e.to_string()})))?;
            let i = comps
                .get(interface)
                .ok_or_else(|| Failure::Io(format!("no boundary component {interface}")))?;
            let id_i =
                causal::check_reduction(&CcMap::identity(i)).expect("identity is a reduction");
            match causal::union(&ka, &kb, &id_i, &id_i) {
                Ok(u) => Ok(doc_json(&format!("glue({}, …)", doc_a.name), &u)),
                Err(e) => Err(Failure::Check(json!({"error": e.to_string()}))),
            }
        }
        Command::Iso { a, b } => {
            let (_, ka) = load_complex(&a)?;
            let (_, kb) = load_complex(&b)?;
            match cckit::iso::is_isomorphic(&ka, &kb) {
                Some(m) => {
                    let map: BTreeMap<String, VertexId> =
                        m.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
                    Ok(json!({"isomorphic": true, "bijection": map}))
                }
                None => Err(Failure::Check(json!({"isomorphic": false}))),
            }
        }
        Command::Gen {
            family,
            params,
            base,
        } => {
            let k = if family == "prism" {
                let base = base.ok_or_else(|| Failure::Io("gen prism needs --base".into()))?;
                let (_, basek) = load_complex(&base)?;
                generate::prism(&basek).map_err(|e| Failure::Io(e.to_string()))?
            } else if family == "dual-bdiv" {
                let (inner, rest) = params_family(&params)?;
                generate::dual_bdiv(inner, rest).map_err(|e| Failure::Io(e.to_string()))?
            } else {
                generate::by_name(&family, &params).map_err(|e| Failure::Io(e.to_string()))?
            };
            Ok(doc_json(&family, &k))
        }
        Command::ValidateCob { input } => {
            let (doc, k) = load_complex(&input)?;
            let removed = doc.removed_components.clone().unwrap_or_default();
            match cobordism::validate_cobordism(&k, &removed) {
                Ok(cob) => Ok(json!({
                    "cobordism_valid": true,
                    "exactly_collared":
                        cobordism::is_exactly_collared(&cob.complex, &cob.removed),
                })),
                Err(report) => Err(Failure::Check(json!({
                    "cobordism_valid": false,
                    "report": report,
                }))),
            }
        }
    }
}

/// `gen dual-bdiv` selects its nested family by the leading numeric
/// parameter: 0 = simplex-boundary, 1 = cycle, 2 = grid, 3 = cylinder;
/// the remaining parameters go to that family.
fn params_family(params: &[usize]) -> Result<(&'static str, &[usize]), Failure> {
    match params.split_first() {
        Some((0, rest)) => Ok(("simplex-boundary", rest)),
        Some((1, rest)) => Ok(("cycle", rest)),
        Some((2, rest)) => Ok(("grid", rest)),
        Some((3, rest)) => Ok(("cylinder", rest)),
        _ => Err(Failure::Io(
            "gen dual-bdiv <0|1|2|3> <params…> (simplex-boundary, cycle, grid, cylinder)".into(),
        )),
    }
}

fn parse_seed(arg: &str) -> Result<(VertexId, Vec<Cell>), String> {
    let (v, edges) = arg
        .split_once(':')
        .ok_or_else(|| "seed must be v:e1a-e1b,e2a-e2b".to_string())?;
    let v: VertexId = v.trim().parse().map_err(|e| format!("bad vertex: {e}"))?;
    let mut cells = Vec::new();
    for part in edges.split(',') {
        let (a, b) = part
            .split_once('-')
            .ok_or_else(|| format!("bad edge {part}"))?;
        let a: VertexId = a.trim().parse().map_err(|e| format!("bad edge: {e}"))?;
        let b: VertexId = b.trim().parse().map_err(|e| format!("bad edge: {e}"))?;
        cells.push(Cell::new([a, b]));
    }
    Ok((v, cells))
}

fn bundle_complexes(bundle: &Bundle) -> Result<BTreeMap<String, CellComplex>, Failure> {
    let mut out = BTreeMap::new();
    for doc in &bundle.complexes {
        let k = doc.to_complex().map_err(|report| {
            Failure::Check(json!({
                "valid": false,
                "complex": doc.name,
                "violations": report.violations,
            }))
        })?;
        out.insert(doc.name.clone(), k);
    }
    Ok(out)
}

fn resolve_map(
    complexes: &BTreeMap<String, CellComplex>,
    entry: &toolkit::MapEntry,
) -> Result<CcMap, Failure> {
    let source = complexes
        .get(&entry.from)
        .ok_or_else(|| Failure::Io(format!("unknown complex {}", entry.from)))?;
    let target = complexes
        .get(&entry.to)
        .ok_or_else(|| Failure::Io(format!("unknown complex {}", entry.to)))?;
    let pairs: Vec<(Cell, Cell)> = entry
        .pairs
        .iter()
        .map(|(s, t)| (Cell::new(s.iter().copied()), Cell::new(t.iter().copied())))
        .collect();
    CcMap::from_pairs(source.clone(), target.clone(), &pairs).map_err(Failure::Io)
}

fn map_entry(from: &str, to: &str, m: &CcMap) -> toolkit::MapEntry {
    toolkit::MapEntry {
        from: from.into(),
        to: to.into(),
        pairs: (0..m.source.len())
            .map(|i| {
                (
                    m.source.cell(i).vertices().to_vec(),
                    m.target.cell(m.map[i]).vertices().to_vec(),
                )
            })
            .collect(),
    }
}
