use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Position of a cell inside a [`Complex`]: its dimension and its index
/// among the cells of that dimension.
///
/// Indices are the "cell ids" used for all deterministic tie-breaks: the
/// lexicographically least cell is the one with the smallest index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef {
    pub dim: usize,
    pub index: usize,
}

/// A cell as described before validation: faces are referenced by label.
#[derive(Clone, Debug, PartialEq)]
pub struct RawCell {
    pub label: String,
    pub volume: f64,
    pub faces: Vec<(String, i64)>,
}

impl RawCell {
    pub fn new(label: impl Into<String>, volume: f64) -> Self {
        RawCell {
            label: label.into(),
            volume,
            faces: Vec::new(),
        }
    }

    pub fn with_face(mut self, face: impl Into<String>, sign: i64) -> Self {
        self.faces.push((face.into(), sign));
        self
    }
}

/// Unvalidated description of a graded cell complex, indexed by dimension.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexDescription {
    pub ambient_dim: usize,
    pub cells: Vec<Vec<RawCell>>,
}

impl ComplexDescription {
    pub fn new(ambient_dim: usize) -> Self {
        ComplexDescription {
            ambient_dim,
            cells: Vec::new(),
        }
    }

    pub fn push(&mut self, dim: usize, cell: RawCell) {
        if self.cells.len() <= dim {
            self.cells.resize_with(dim + 1, Vec::new);
        }
        self.cells[dim].push(cell);
    }
}

/// Why a [`ComplexDescription`] is not a chain complex.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum ComplexViolation {
    #[error("duplicate cell id `{0}`")]
    DuplicateLabel(String),
    #[error("dangling face: cell `{cell}` references unknown cell `{face}`")]
    DanglingFace { cell: String, face: String },
    #[error("cell `{cell}` of dimension {dim} has face `{face}` of dimension {face_dim}")]
    FaceDimension {
        cell: String,
        dim: usize,
        face: String,
        face_dim: usize,
    },
    #[error("cell `{cell}` lists face `{face}` twice")]
    RepeatedFace { cell: String, face: String },
    #[error("cell `{cell}` has invalid volume {volume}")]
    Volume { cell: String, volume: f64 },
    #[error("∂∂ ≠ 0 at cell `{cell}`: {}", format_residual(.residual))]
    BoundaryOfBoundary {
        cell: String,
        residual: Vec<(String, i64)>,
    },
}

fn format_residual(residual: &[(String, i64)]) -> String {
    residual
        .iter()
        .map(|(label, c)| format!("{c}·[{label}]"))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    label: String,
    volume: f64,
    boundary: Vec<(usize, i64)>,
}

impl Cell {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Faces as `(index in dimension d−1, incidence)`, sorted by index.
    pub fn boundary(&self) -> &[(usize, i64)] {
        &self.boundary
    }
}

/// A finite graded cell complex with integer incidences and positive volumes.
///
/// Only obtainable through [`validate_complex`], so every value satisfies
/// `∂∘∂ = 0` and has no dangling faces.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    ambient_dim: usize,
    cells: Vec<Vec<Cell>>,
    labels: HashMap<String, CellRef>,
}

impl Complex {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Highest dimension with a slot in the complex (possibly empty), or
    /// `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    pub fn cells(&self, dim: usize) -> &[Cell] {
        self.cells.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn cell(&self, r: CellRef) -> &Cell {
        &self.cells[r.dim][r.index]
    }

    pub fn volume(&self, dim: usize, index: usize) -> f64 {
        self.cells[dim][index].volume
    }

    pub fn find(&self, label: &str) -> Option<CellRef> {
        self.labels.get(label).copied()
    }

    /// For every cell of dimension `dim`, the cells of dimension `dim + 1`
    /// having it as a face, with incidence, in increasing index order.
    pub fn cofaces(&self, dim: usize) -> Vec<Vec<(usize, i64)>> {
        let mut out = vec![Vec::new(); self.num_cells(dim)];
        for (sigma, cell) in self.cells(dim + 1).iter().enumerate() {
            for &(tau, c) in &cell.boundary {
                out[tau].push((sigma, c));
            }
        }
        out
    }

    /// Back to the label-based description; `validate_complex` of the result
    /// reproduces `self`.
    pub fn describe(&self) -> ComplexDescription {
        let mut d = ComplexDescription::new(self.ambient_dim);
        for (dim, cells) in self.cells.iter().enumerate() {
            d.cells.push(Vec::new());
            for cell in cells {
                let mut raw = RawCell::new(cell.label.clone(), cell.volume);
                for &(f, c) in &cell.boundary {
                    raw.faces.push((self.cells[dim - 1][f].label.clone(), c));
                }
                d.cells[dim].push(raw);
            }
        }
        d
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = self.cells.iter().map(|c| c.len().to_string()).collect();
        write!(f, "complex in R^{} with cells [{}]", self.ambient_dim, counts.join(", "))
    }
}

/// Checks every complex invariant and produces the validated [`Complex`].
///
/// The ∂∘∂ check is exact integer arithmetic; the first offending cell (in
/// dimension order, then input order) is reported.
pub fn validate_complex(desc: &ComplexDescription) -> Result<Complex, ComplexViolation> {
    let mut labels = HashMap::new();
    for (dim, cells) in desc.cells.iter().enumerate() {
        for (index, cell) in cells.iter().enumerate() {
            if labels.insert(cell.label.clone(), CellRef { dim, index }).is_some() {
                return Err(ComplexViolation::DuplicateLabel(cell.label.clone()));
            }
        }
    }

    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(desc.cells.len());
    for (dim, raw_cells) in desc.cells.iter().enumerate() {
        let mut resolved = Vec::with_capacity(raw_cells.len());
        for raw in raw_cells {
            let volume_ok = if dim == 0 {
                raw.volume == 1.0
            } else {
                raw.volume.is_finite() && raw.volume > 0.0
            };
            if !volume_ok {
                return Err(ComplexViolation::Volume {
                    cell: raw.label.clone(),
                    volume: raw.volume,
                });
            }
            let mut boundary: Vec<(usize, i64)> = Vec::with_capacity(raw.faces.len());
            for (face, c) in &raw.faces {
                let r = labels.get(face).ok_or_else(|| ComplexViolation::DanglingFace {
                    cell: raw.label.clone(),
                    face: face.clone(),
                })?;
                if dim == 0 || r.dim != dim - 1 {
                    return Err(ComplexViolation::FaceDimension {
                        cell: raw.label.clone(),
                        dim,
                        face: face.clone(),
                        face_dim: r.dim,
                    });
                }
                if boundary.iter().any(|&(i, _)| i == r.index) {
                    return Err(ComplexViolation::RepeatedFace {
                        cell: raw.label.clone(),
                        face: face.clone(),
                    });
                }
                if *c != 0 {
                    boundary.push((r.index, *c));
                }
            }
            boundary.sort_unstable();
            resolved.push(Cell {
                label: raw.label.clone(),
                volume: raw.volume,
                boundary,
            });
        }
        cells.push(resolved);
    }

    for dim in 2..cells.len() {
        for cell in &cells[dim] {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(f, c) in &cell.boundary {
                for &(g, d) in &cells[dim - 1][f].boundary {
                    *acc.entry(g).or_insert(0) += c * d;
                }
            }
            let mut residual: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
            if !residual.is_empty() {
                residual.sort_unstable();
                return Err(ComplexViolation::BoundaryOfBoundary {
                    cell: cell.label.clone(),
                    residual: residual
                        .into_iter()
                        .map(|(g, v)| (cells[dim - 2][g].label.clone(), v))
                        .collect(),
                });
            }
        }
    }

    Ok(Complex {
        ambient_dim: desc.ambient_dim,
        cells,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unit square with vertices a=(0,0), b=(1,0), c=(1,1), d=(0,1).
    pub(crate) fn unit_square(signs: [i64; 4]) -> ComplexDescription {
        let mut d = ComplexDescription::new(2);
        for v in ["a", "b", "c", "d"] {
            d.push(0, RawCell::new(v, 1.0));
        }
        d.push(1, RawCell::new("ab", 1.0).with_face("b", 1).with_face("a", -1));
        d.push(1, RawCell::new("bc", 1.0).with_face("c", 1).with_face("b", -1));
        d.push(1, RawCell::new("dc", 1.0).with_face("c", 1).with_face("d", -1));
        d.push(1, RawCell::new("ad", 1.0).with_face("d", 1).with_face("a", -1));
        d.push(
            2,
            RawCell::new("sq", 1.0)
                .with_face("ab", signs[0])
                .with_face("bc", signs[1])
                .with_face("dc", signs[2])
                .with_face("ad", signs[3]),
        );
        d
    }

    #[test]
    fn unit_square_is_valid() {
        let c = validate_complex(&unit_square([1, 1, -1, -1])).unwrap();
        assert_eq!(c.num_cells(0), 4);
        assert_eq!(c.num_cells(1), 4);
        assert_eq!(c.num_cells(2), 1);
        assert_eq!(c.top_dim(), Some(2));
    }

    #[test]
    fn dangling_face_is_reported() {
        let mut d = ComplexDescription::new(1);
        d.push(0, RawCell::new("a", 1.0));
        d.push(1, RawCell::new("e", 1.0).with_face("b", 1).with_face("a", -1));
        let err = validate_complex(&d).unwrap_err();
        assert_eq!(
            err,
            ComplexViolation::DanglingFace {
                cell: "e".into(),
                face: "b".into()
            }
        );
        assert!(err.to_string().starts_with("dangling face"));
    }

    #[test]
    fn all_positive_square_breaks_boundary_of_boundary() {
        let err = validate_complex(&unit_square([1, 1, 1, 1])).unwrap_err();
        match &err {
            ComplexViolation::BoundaryOfBoundary { cell, residual } => {
                assert_eq!(cell, "sq");
                // a: -1 (ab) -1 (ad) ; c: +1 (bc) +1 (dc)
                assert_eq!(residual, &vec![("a".to_string(), -2), ("c".to_string(), 2)]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("∂∂ ≠ 0"));
    }

    #[test]
    fn zero_volume_edge_rejected() {
        let mut d = ComplexDescription::new(1);
        d.push(0, RawCell::new("a", 1.0));
        d.push(0, RawCell::new("b", 1.0));
        d.push(1, RawCell::new("e", 0.0).with_face("b", 1).with_face("a", -1));
        assert!(matches!(validate_complex(&d), Err(ComplexViolation::Volume { .. })));
    }

    #[test]
    fn describe_round_trips() {
        let c = validate_complex(&unit_square([1, 1, -1, -1])).unwrap();
        let again = validate_complex(&c.describe()).unwrap();
        assert_eq!(c, again);
    }
}
