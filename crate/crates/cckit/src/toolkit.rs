//! Serialization, generators for the standard example families, and shared
//! document formats for the CLI.
//!
//! Documents are JSON with cells canonically ordered by `(rank, vertices)`,
//! so saving a loaded canonical document is byte-stable.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cell::{Cell, VertexId};
use crate::complex::{build_complex, CellComplex, ValidationReport};

/// One serialized cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellEntry {
    pub vertices: Vec<VertexId>,
    pub rank: usize,
}

/// A named cell-to-cell map between two complexes identified by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub from: String,
    pub to: String,
    /// Pairs `[source_vertices, target_vertices]`.
    pub pairs: Vec<(Vec<VertexId>, Vec<VertexId>)>,
}

/// The on-disk complex document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CcDocument {
    pub name: String,
    pub cells: Vec<CellEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub removed_components: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<MapEntry>>,
}

/// A bundle of documents plus maps, used by `check-map` and `slice-build`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub complexes: Vec<CcDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<MapEntry>>,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("validation: {0}")]
    Validation(ValidationReport),
    #[error("document cap exceeded: {count} cells > {cap}")]
    TooLarge { count: usize, cap: usize },
}

impl CcDocument {
    pub fn from_complex(name: impl Into<String>, k: &CellComplex) -> Self {
        CcDocument {
            name: name.into(),
            cells: k
                .iter()
                .map(|(c, r)| CellEntry {
                    vertices: c.vertices().to_vec(),
                    rank: r,
                })
                .collect(),
            removed_components: None,
            maps: None,
        }
    }

    /// Validates and returns the complex described by this document.
    pub fn to_complex(&self) -> Result<CellComplex, ValidationReport> {
        build_complex(
            self.cells
                .iter()
                .map(|e| (Cell::new(e.vertices.iter().copied()), e.rank)),
        )
    }

    /// Canonicalizes the cell order to `(rank, vertices)`.
    pub fn canonicalize(&mut self) {
        self.cells
            .sort_by(|a, b| (a.rank, &a.vertices).cmp(&(b.rank, &b.vertices)));
    }
}

/// Loads a document; the cell count is capped by `CCKIT_MAX_CELLS`.
pub fn load(path: impl AsRef<Path>) -> Result<CcDocument, IoError> {
    let text = std::fs::read_to_string(path)?;
    let doc: CcDocument = serde_json::from_str(&text)?;
    let cap = crate::complex::max_cells();
    if doc.cells.len() > cap {
        return Err(IoError::TooLarge {
            count: doc.cells.len(),
            cap,
        });
    }
    Ok(doc)
}

/// Saves a document in canonical order with a trailing newline.
pub fn save(doc: &CcDocument, path: impl AsRef<Path>) -> Result<(), IoError> {
    let mut doc = doc.clone();
    doc.canonicalize();
    std::fs::write(path, to_canonical_json(&doc))?;
    Ok(())
}

/// Canonical pretty JSON rendering used by both `save` and the CLI.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Generators for the example families.
pub mod generate {
    use super::*;

    #[derive(Debug, Clone, PartialEq, Eq, Error)]
    pub enum GenError {
        #[error("bad parameters: {0}")]
        BadParams(String),
        #[error("generated complex failed validation: {0}")]
        Invalid(ValidationReport),
    }

    /// Boundary of the R-simplex: all proper nonempty subsets of
    /// `{0, …, R}`; a closed simplicial (R−1)-complex.
    pub fn simplex_boundary(r: usize) -> CellComplex {
        assert!(r >= 1, "simplex boundary needs R ≥ 1");
        let verts: Vec<VertexId> = (0..=r as VertexId).collect();
        let mut cells = Vec::new();
        for mask in 1u64..(1 << verts.len()) {
            let subset: Vec<VertexId> = verts
                .iter()
                .copied()
                .filter(|&v| mask & (1 << v) != 0)
                .collect();
            if subset.len() <= r {
                cells.push((Cell::new(subset.clone()), subset.len() - 1));
            }
        }
        build_complex(cells).expect("simplex boundary is valid")
    }

    /// The n-cycle as a closed 1-complex.
    pub fn cycle(n: usize) -> CellComplex {
        assert!(n >= 3, "cycle needs n ≥ 3");
        let mut cells = Vec::new();
        for v in 0..n as VertexId {
            cells.push((Cell::vertex(v), 0));
            cells.push((Cell::new([v, (v + 1) % n as VertexId]), 1));
        }
        build_complex(cells).expect("cycle is valid")
    }

    /// An m×n square lattice patch: (m+1)(n+1) vertices, mn squares.
    pub fn grid(m: usize, n: usize) -> CellComplex {
        assert!(m >= 1 && n >= 1);
        let cols = (n + 1) as VertexId;
        let at = |i: usize, j: usize| -> VertexId { i as VertexId * cols + j as VertexId };
        let mut cells = Vec::new();
        for i in 0..=m {
            for j in 0..=n {
                cells.push((Cell::vertex(at(i, j)), 0));
                if j < n {
                    cells.push((Cell::new([at(i, j), at(i, j + 1)]), 1));
                }
                if i < m {
                    cells.push((Cell::new([at(i, j), at(i + 1, j)]), 1));
                }
                if i < m && j < n {
                    cells.push((
                        Cell::new([at(i, j), at(i, j + 1), at(i + 1, j), at(i + 1, j + 1)]),
                        2,
                    ));
                }
            }
        }
        build_complex(cells).expect("grid is valid")
    }

    /// Cylinder over the n-cycle with h rings of squares. Vertex `(i, j)`
    /// is `j*n + i` with `j` the height level.
    pub fn cylinder(n: usize, h: usize) -> CellComplex {
        assert!(n >= 3 && h >= 1, "cylinder needs n ≥ 3, h ≥ 1");
        let nn = n as VertexId;
        let at = |i: usize, j: usize| -> VertexId { j as VertexId * nn + (i % n) as VertexId };
        let mut cells = Vec::new();
        for j in 0..=h {
            for i in 0..n {
                cells.push((Cell::vertex(at(i, j)), 0));
                cells.push((Cell::new([at(i, j), at(i + 1, j)]), 1));
                if j < h {
                    cells.push((Cell::new([at(i, j), at(i, j + 1)]), 1));
                    cells.push((
                        Cell::new([at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)]),
                        2,
                    ));
                }
            }
        }
        build_complex(cells).expect("cylinder is valid")
    }

    /// Prism over a graph-based complex: two relabeled copies of the base
    /// joined by vertical edges, with one prism cell of rank `rk(x) + 1`
    /// per base cell `x` (squares over edges, solid prisms over 2-cells,
    /// and so on).
    pub fn prism(base: &CellComplex) -> Result<CellComplex, GenError> {
        if base.is_empty() {
            return Err(GenError::BadParams("prism base must be nonempty".into()));
        }
        for &e in base.rank_cells(1) {
            if base.cell(e).len() != 2 {
                return Err(GenError::BadParams("prism base must be graph-based".into()));
            }
        }
        let bound = base.vertex_bound();
        let top = |v: VertexId| v + bound;
        let mut cells: BTreeMap<Cell, usize> = BTreeMap::new();
        for (c, r) in base.iter() {
            cells.insert(c.clone(), r);
            cells.insert(Cell::new(c.iter().map(top)), r);
            // The prism cell over a vertex is its vertical edge.
            cells.insert(Cell::new(c.iter().chain(c.iter().map(top))), r + 1);
        }
        build_complex(cells).map_err(GenError::Invalid)
    }

    /// Two tetrahedra sharing a triangle; five vertices.
    pub fn bitetra() -> CellComplex {
        let tets = [[0u32, 1, 2, 3], [0, 1, 2, 4]];
        let mut cells = Vec::new();
        for v in 0..5u32 {
            cells.push((Cell::vertex(v), 0));
        }
        let mut push_subsets = |tet: &[u32; 4]| {
            for mask in 1u8..16 {
                let subset: Vec<u32> = (0..4)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| tet[i])
                    .collect();
                if subset.len() >= 2 {
                    cells.push((Cell::new(subset.clone()), subset.len() - 1));
                }
            }
        };
        for t in &tets {
            push_subsets(t);
        }
        let dedup: BTreeMap<Cell, usize> = cells.into_iter().collect();
        build_complex(dedup).expect("bitetra is valid")
    }

    /// A solid torus as one 3-cell over a 3×4 torus grid boundary:
    /// 12 vertices, 24 edges, 12 squares, one 3-cell; χ = −1.
    pub fn torus_cell() -> CellComplex {
        let (m, n) = (3usize, 4usize);
        let at = |i: usize, j: usize| -> VertexId { ((i % m) * n + (j % n)) as VertexId };
        let mut cells = Vec::new();
        for i in 0..m {
            for j in 0..n {
                cells.push((Cell::vertex(at(i, j)), 0));
                cells.push((Cell::new([at(i, j), at(i, j + 1)]), 1));
                cells.push((Cell::new([at(i, j), at(i + 1, j)]), 1));
                cells.push((
                    Cell::new([at(i, j), at(i, j + 1), at(i + 1, j), at(i + 1, j + 1)]),
                    2,
                ));
            }
        }
        cells.push((Cell::new(0..(m * n) as VertexId), 3));
        build_complex(cells).expect("torus cell is valid")
    }

    /// A 2×2×2 cube lattice (27 vertices, one interior); handy rank-3
    /// ground for midsections and transitions.
    pub fn grid3(l: usize, m: usize, n: usize) -> CellComplex {
        assert!(l >= 1 && m >= 1 && n >= 1);
        let (my, mz) = ((m + 1) as VertexId, (n + 1) as VertexId);
        let at = |x: usize, y: usize, z: usize| -> VertexId {
            (x as VertexId * my + y as VertexId) * mz + z as VertexId
        };
        let mut cells = Vec::new();
        for x in 0..=l {
            for y in 0..=m {
                for z in 0..=n {
                    cells.push((Cell::vertex(at(x, y, z)), 0));
                    if x < l {
                        cells.push((Cell::new([at(x, y, z), at(x + 1, y, z)]), 1));
                    }
                    if y < m {
                        cells.push((Cell::new([at(x, y, z), at(x, y + 1, z)]), 1));
                    }
                    if z < n {
                        cells.push((Cell::new([at(x, y, z), at(x, y, z + 1)]), 1));
                    }
                    if x < l && y < m {
                        cells.push((
                            Cell::new([
                                at(x, y, z),
                                at(x + 1, y, z),
                                at(x, y + 1, z),
                                at(x + 1, y + 1, z),
                            ]),
                            2,
                        ));
                    }
                    if x < l && z < n {
                        cells.push((
                            Cell::new([
                                at(x, y, z),
                                at(x + 1, y, z),
                                at(x, y, z + 1),
                                at(x + 1, y, z + 1),
                            ]),
                            2,
                        ));
                    }
                    if y < m && z < n {
                        cells.push((
                            Cell::new([
                                at(x, y, z),
                                at(x, y + 1, z),
                                at(x, y, z + 1),
                                at(x, y + 1, z + 1),
                            ]),
                            2,
                        ));
                    }
                    if x < l && y < m && z < n {
                        let cube: Vec<VertexId> = (0..8)
                            .map(|b| at(x + (b & 1), y + ((b >> 1) & 1), z + ((b >> 2) & 1)))
                            .collect();
                        cells.push((Cell::new(cube), 3));
                    }
                }
            }
        }
        build_complex(cells).expect("grid3 is valid")
    }

    /// Dispatch by family name, as exposed on the CLI.
    pub fn by_name(family: &str, params: &[usize]) -> Result<CellComplex, GenError> {
        match (family, params) {
            ("simplex-boundary", [r]) if *r >= 1 => Ok(simplex_boundary(*r)),
            ("cycle", [n]) if *n >= 3 => Ok(cycle(*n)),
            ("grid", [m, n]) if *m >= 1 && *n >= 1 => Ok(grid(*m, *n)),
            ("cylinder", [n, h]) if *n >= 3 && *h >= 1 => Ok(cylinder(*n, *h)),
            ("bitetra", []) => Ok(bitetra()),
            ("torus-cell", []) => Ok(torus_cell()),
            ("dual-bdiv", _) if !params.is_empty() || params.is_empty() => {
                Err(GenError::BadParams(
                    "dual-bdiv takes a nested family: use `gen dual-bdiv <family> <params…>`"
                        .into(),
                ))
            }
            _ => Err(GenError::BadParams(format!(
                "unknown family or bad parameters: {family} {params:?}"
            ))),
        }
    }

    /// `dual(bdiv(K))` of a closed generated complex.
    pub fn dual_bdiv(family: &str, params: &[usize]) -> Result<CellComplex, GenError> {
        let base = by_name(family, params)?;
        let bdiv = crate::subdivision::barycentric(&base).complex;
        crate::duality::dual_closed(&bdiv)
            .map(|d| d.complex)
            .map_err(|e| GenError::BadParams(format!("base is not closed: {e}")))
    }
}
