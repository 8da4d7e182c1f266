use std::collections::BTreeMap;
use std::sync::Arc;

use super::{ChainError, Complex, IntChain};

/// A cellular chain map: every source cell goes to zero or to `±1` times a
/// target cell of the same dimension, commuting with the boundary.
#[derive(Clone, Debug)]
pub struct CellularMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    images: Vec<Vec<Option<(usize, i64)>>>,
}

impl CellularMap {
    /// `images[d][i]` is the image of cell `i` of dimension `d`.
    pub fn new(
        source: &Arc<Complex>,
        target: &Arc<Complex>,
        images: Vec<Vec<Option<(usize, i64)>>>,
    ) -> Result<Self, ChainError> {
        let depth = source.top_dim().map_or(0, |d| d + 1);
        if images.len() != depth {
            return Err(ChainError::BadImage {
                cell: String::new(),
                reason: format!("expected images for {depth} dimensions, got {}", images.len()),
            });
        }
        for (dim, row) in images.iter().enumerate() {
            if row.len() != source.num_cells(dim) {
                return Err(ChainError::BadImage {
                    cell: String::new(),
                    reason: format!("dimension {dim}: expected {} images, got {}", source.num_cells(dim), row.len()),
                });
            }
            for (i, img) in row.iter().enumerate() {
                if let Some((t, s)) = img {
                    let label = source.cells(dim)[i].label();
                    if *t >= target.num_cells(dim) {
                        return Err(ChainError::BadImage {
                            cell: label.to_string(),
                            reason: format!("target cell {t} of dimension {dim} does not exist"),
                        });
                    }
                    if s.abs() != 1 {
                        return Err(ChainError::BadImage {
                            cell: label.to_string(),
                            reason: format!("sign must be ±1, got {s}"),
                        });
                    }
                }
            }
        }
        let map = CellularMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images,
        };
        map.check_chain_map()?;
        Ok(map)
    }

    /// Images given by label: `(source, Some((target, sign)))` or `(source, None)`.
    /// Cells not mentioned map to zero.
    pub fn from_labels(
        source: &Arc<Complex>,
        target: &Arc<Complex>,
        pairs: &[(&str, Option<(&str, i64)>)],
    ) -> Result<Self, ChainError> {
        let depth = source.top_dim().map_or(0, |d| d + 1);
        let mut images: Vec<Vec<Option<(usize, i64)>>> =
            (0..depth).map(|d| vec![None; source.num_cells(d)]).collect();
        for (src, img) in pairs {
            let s = source
                .find(src)
                .ok_or_else(|| ChainError::UnknownLabel(src.to_string()))?;
            images[s.dim][s.index] = match img {
                None => None,
                Some((tgt, sign)) => {
                    let t = target
                        .find(tgt)
                        .ok_or_else(|| ChainError::UnknownLabel(tgt.to_string()))?;
                    if t.dim != s.dim {
                        return Err(ChainError::DimensionMismatch {
                            expected: s.dim,
                            found: t.dim,
                        });
                    }
                    Some((t.index, *sign))
                }
            };
        }
        Self::new(source, target, images)
    }

    pub fn identity(complex: &Arc<Complex>) -> Self {
        let depth = complex.top_dim().map_or(0, |d| d + 1);
        let images = (0..depth)
            .map(|d| (0..complex.num_cells(d)).map(|i| Some((i, 1))).collect())
            .collect();
        Self::new(complex, complex, images).expect("identity is a chain map")
    }

    fn check_chain_map(&self) -> Result<(), ChainError> {
        for dim in 1..self.images.len() {
            for (i, cell) in self.source.cells(dim).iter().enumerate() {
                // f(∂σ)
                let mut lhs: BTreeMap<usize, i64> = BTreeMap::new();
                for &(face, c) in cell.boundary() {
                    if let Some((t, s)) = self.images[dim - 1][face] {
                        *lhs.entry(t).or_insert(0) += c * s;
                    }
                }
                // ∂f(σ)
                let mut rhs: BTreeMap<usize, i64> = BTreeMap::new();
                if let Some((t, s)) = self.images[dim][i] {
                    for &(face, c) in self.target.cells(dim)[t].boundary() {
                        *rhs.entry(face).or_insert(0) += c * s;
                    }
                }
                lhs.retain(|_, v| *v != 0);
                rhs.retain(|_, v| *v != 0);
                if lhs != rhs {
                    return Err(ChainError::NotAChainMap {
                        cell: cell.label().to_string(),
                        dim,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    /// Linear extension of the cell map.
    pub fn push_forward(&self, t: &IntChain) -> Result<IntChain, ChainError> {
        if !Arc::ptr_eq(t.complex(), &self.source) && **t.complex() != *self.source {
            return Err(ChainError::WrongComplex);
        }
        let row = self.images.get(t.dim());
        let terms = t.iter().filter_map(|(i, c)| {
            row.and_then(|r| r[i]).map(|(target, s)| (target, c * s))
        });
        IntChain::from_coeffs(&self.target, t.dim(), terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{validate_complex, ComplexDescription, Modulus, RawCell};

    fn path(n_edges: usize) -> Arc<Complex> {
        let mut d = ComplexDescription::new(1);
        for i in 0..=n_edges {
            d.push(0, RawCell::new(format!("v{i}"), 1.0));
        }
        for i in 0..n_edges {
            d.push(
                1,
                RawCell::new(format!("e{i}"), 1.0)
                    .with_face(format!("v{}", i + 1), 1)
                    .with_face(format!("v{i}"), -1),
            );
        }
        Arc::new(validate_complex(&d).unwrap())
    }

    #[test]
    fn identity_is_identity() {
        let c = path(3);
        let t = IntChain::from_coeffs(&c, 1, [(0, 2), (2, -1)]).unwrap();
        assert_eq!(CellularMap::identity(&c).push_forward(&t).unwrap(), t);
    }

    #[test]
    fn collapsing_an_edge_drops_it() {
        let src = path(2);
        let tgt = path(1);
        // v1, v2 both go to v1 of the target; e1 collapses.
        let f = CellularMap::from_labels(
            &src,
            &tgt,
            &[
                ("v0", Some(("v0", 1))),
                ("v1", Some(("v1", 1))),
                ("v2", Some(("v1", 1))),
                ("e0", Some(("e0", 1))),
                ("e1", None),
            ],
        )
        .unwrap();
        let t = IntChain::from_coeffs(&src, 1, [(0, 1), (1, 3)]).unwrap();
        let image = f.push_forward(&t).unwrap();
        assert_eq!(image, IntChain::from_coeffs(&tgt, 1, [(0, 1)]).unwrap());
        assert_eq!(image.boundary().unwrap(), f.push_forward(&t.boundary().unwrap()).unwrap());
    }

    #[test]
    fn relabeling_preserves_masses() {
        let c = path(3);
        // reverse the path: v_i -> v_{3-i}, e_i -> -e_{2-i}
        let f = CellularMap::from_labels(
            &c,
            &c,
            &[
                ("v0", Some(("v3", 1))),
                ("v1", Some(("v2", 1))),
                ("v2", Some(("v1", 1))),
                ("v3", Some(("v0", 1))),
                ("e0", Some(("e2", -1))),
                ("e1", Some(("e1", -1))),
                ("e2", Some(("e0", -1))),
            ],
        )
        .unwrap();
        let t = IntChain::from_coeffs(&c, 1, [(0, 4), (1, -1)]).unwrap();
        let image = f.push_forward(&t).unwrap();
        assert_eq!(image.mass(), t.mass());
        let p = Modulus::new(3).unwrap();
        assert_eq!(image.mass_p(p), t.mass_p(p));
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = path(2);
        // e0 -> e1 but vertices fixed: f(∂e0) = v1 - v0, ∂f(e0) = v2 - v1
        let err = CellularMap::from_labels(
            &c,
            &c,
            &[
                ("v0", Some(("v0", 1))),
                ("v1", Some(("v1", 1))),
                ("v2", Some(("v2", 1))),
                ("e0", Some(("e1", 1))),
                ("e1", Some(("e1", 1))),
            ],
        )
        .unwrap_err();
        assert_eq!(err, ChainError::NotAChainMap { cell: "e0".into(), dim: 1 });
    }
}
