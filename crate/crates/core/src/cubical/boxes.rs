use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::BoxError;
use crate::chain::Modulus;

fn clean(x: f64) -> f64 {
    // -0.0 and 0.0 must be the same coordinate.
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// An axis-aligned box `Π [lo_j, hi_j]` in `ℝⁿ`, oriented by the wedge of
/// its extended directions in increasing axis order.
#[derive(Clone, Debug)]
pub struct BoxCell {
    bounds: Vec<(f64, f64)>,
}

impl BoxCell {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self, BoxError> {
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(BoxError::BadInterval { axis, lo, hi });
            }
        }
        Ok(BoxCell {
            bounds: bounds.into_iter().map(|(a, b)| (clean(a), clean(b))).collect(),
        })
    }

    pub(crate) fn from_bounds_unchecked(bounds: Vec<(f64, f64)>) -> Self {
        BoxCell {
            bounds: bounds.into_iter().map(|(a, b)| (clean(a), clean(b))).collect(),
        }
    }

    /// A single point.
    pub fn point(coords: &[f64]) -> Self {
        Self::from_bounds_unchecked(coords.iter().map(|&x| (x, x)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn lo(&self, axis: usize) -> f64 {
        self.bounds[axis].0
    }

    pub fn hi(&self, axis: usize) -> f64 {
        self.bounds[axis].1
    }

    pub fn extends(&self, axis: usize) -> bool {
        self.bounds[axis].0 < self.bounds[axis].1
    }

    /// Extended axes in increasing order.
    pub fn directions(&self) -> Vec<usize> {
        (0..self.bounds.len()).filter(|&j| self.extends(j)).collect()
    }

    pub fn dim(&self) -> usize {
        (0..self.bounds.len()).filter(|&j| self.extends(j)).count()
    }

    pub fn volume(&self) -> f64 {
        self.bounds
            .iter()
            .filter(|(lo, hi)| lo < hi)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    pub(crate) fn with_bound(&self, axis: usize, lo: f64, hi: f64) -> BoxCell {
        let mut b = self.bounds.clone();
        b[axis] = (clean(lo), clean(hi));
        BoxCell { bounds: b }
    }

    /// Oriented faces: `Σ_i (−1)^i (B|_{x_{d_i}=hi} − B|_{x_{d_i}=lo})` over the
    /// directions `d_0 < d_1 < …`.
    pub fn faces(&self) -> Vec<(BoxCell, i64)> {
        let mut out = Vec::new();
        for (i, j) in self.directions().into_iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let (lo, hi) = self.bounds[j];
            out.push((self.with_bound(j, hi, hi), sign));
            out.push((self.with_bound(j, lo, lo), -sign));
        }
        out
    }

    fn key(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.bounds.iter().map(|(a, b)| (a.to_bits(), b.to_bits()))
    }
}

impl PartialEq for BoxCell {
    fn eq(&self, other: &Self) -> bool {
        self.bounds == other.bounds
    }
}

impl Eq for BoxCell {}

impl Hash for BoxCell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for k in self.key() {
            k.hash(state);
        }
    }
}

impl Ord for BoxCell {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.bounds.iter().zip(&other.bounds) {
            let c = a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.bounds.len().cmp(&other.bounds.len())
    }
}

impl PartialOrd for BoxCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BoxCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bounds
            .iter()
            .map(|&(lo, hi)| if lo == hi { format!("{{{lo}}}") } else { format!("[{lo},{hi}]") })
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// An integer combination of `k`-dimensional boxes in `ℝⁿ`.
///
/// Stored canonically: every box is split along every coordinate that occurs
/// on its axis anywhere in the chain, equal pieces are merged and zero
/// coefficients dropped. Two chains are equal exactly when they define the
/// same current.
#[derive(Clone, Debug)]
pub struct BoxChain {
    n: usize,
    dim: usize,
    cells: BTreeMap<BoxCell, BigInt>,
}

impl BoxChain {
    pub fn zero(n: usize, dim: usize) -> Self {
        BoxChain {
            n,
            dim,
            cells: BTreeMap::new(),
        }
    }

    /// Canonicalizes an arbitrary list of boxes (overlaps allowed).
    pub fn new<C: Into<BigInt>>(n: usize, dim: usize, items: impl IntoIterator<Item = (BoxCell, C)>) -> Result<Self, BoxError> {
        let mut raw = Vec::new();
        for (cell, c) in items {
            if cell.ambient_dim() != n {
                return Err(BoxError::AmbientMismatch {
                    expected: n,
                    found: cell.ambient_dim(),
                });
            }
            if cell.dim() != dim {
                return Err(BoxError::CellDimension {
                    expected: dim,
                    found: cell.dim(),
                    cell: cell.to_string(),
                });
            }
            raw.push((cell, c.into()));
        }
        Ok(Self::canonical(n, dim, raw))
    }

    /// Items are trusted to have ambient dimension `n` and dimension `dim`;
    /// degenerate boxes (dimension below `dim`) are dropped.
    pub(crate) fn canonical(n: usize, dim: usize, raw: Vec<(BoxCell, BigInt)>) -> Self {
        let mut breaks: Vec<BTreeSet<OrdF>> = vec![BTreeSet::new(); n];
        let raw: Vec<_> = raw
            .into_iter()
            .filter(|(c, g)| !g.is_zero() && c.dim() == dim)
            .collect();
        for (cell, _) in &raw {
            for (j, &(lo, hi)) in cell.bounds.iter().enumerate() {
                breaks[j].insert(OrdF(lo));
                breaks[j].insert(OrdF(hi));
            }
        }
        let breaks: Vec<Vec<f64>> = breaks.into_iter().map(|s| s.into_iter().map(|x| x.0).collect()).collect();
        let mut cells: BTreeMap<BoxCell, BigInt> = BTreeMap::new();
        for (cell, g) in raw {
            for piece in split_along(&cell, &breaks) {
                let e = cells.entry(piece).or_insert_with(BigInt::zero);
                *e += &g;
            }
        }
        cells.retain(|_, g| !g.is_zero());
        BoxChain { n, dim, cells }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Canonical pieces in increasing box order.
    pub fn iter(&self) -> impl Iterator<Item = (&BoxCell, &BigInt)> {
        self.cells.iter()
    }

    pub fn mass(&self) -> f64 {
        self.cells
            .iter()
            .map(|(c, g)| g.abs().to_f64().unwrap_or(f64::INFINITY) * c.volume())
            .fold(0.0, |a, b| a + b)
    }

    pub fn mass_p(&self, p: Modulus) -> f64 {
        self.cells
            .iter()
            .map(|(c, g)| p.norm_big(g) as f64 * c.volume())
            .fold(0.0, |a, b| a + b)
    }

    /// Chain with every coefficient replaced by its canonical residue.
    pub fn reduce_mod_p(&self, p: Modulus) -> BoxChain {
        let raw = self
            .cells
            .iter()
            .map(|(c, g)| (c.clone(), BigInt::from(p.residue_big(g))))
            .collect();
        Self::canonical(self.n, self.dim, raw)
    }

    pub fn boundary(&self) -> Result<BoxChain, BoxError> {
        if self.dim == 0 {
            return Err(BoxError::NoBoundaryInDimensionZero);
        }
        let raw = self
            .cells
            .iter()
            .flat_map(|(c, g)| c.faces().into_iter().map(move |(f, s)| (f, g * s)))
            .collect();
        Ok(Self::canonical(self.n, self.dim - 1, raw))
    }

    pub fn scaled(&self, factor: impl Into<BigInt>) -> BoxChain {
        let f = factor.into();
        let raw = self.cells.iter().map(|(c, g)| (c.clone(), g * &f)).collect();
        Self::canonical(self.n, self.dim, raw)
    }

    fn combine(&self, other: &BoxChain, sign: i64) -> BoxChain {
        assert!(
            self.n == other.n && self.dim == other.dim,
            "box chains differ in ambient dimension or dimension"
        );
        let raw = self
            .cells
            .iter()
            .map(|(c, g)| (c.clone(), g.clone()))
            .chain(other.cells.iter().map(|(c, g)| (c.clone(), g * sign)))
            .collect();
        Self::canonical(self.n, self.dim, raw)
    }

    /// Every coordinate (fixed or endpoint) per axis, sorted.
    pub fn breakpoints(&self) -> Vec<Vec<f64>> {
        let mut b: Vec<BTreeSet<OrdF>> = vec![BTreeSet::new(); self.n];
        for cell in self.cells.keys() {
            for (j, &(lo, hi)) in cell.bounds.iter().enumerate() {
                b[j].insert(OrdF(lo));
                b[j].insert(OrdF(hi));
            }
        }
        b.into_iter().map(|s| s.into_iter().map(|x| x.0).collect()).collect()
    }
}

impl PartialEq for BoxChain {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.dim == other.dim && self.combine(other, -1).is_zero()
    }
}

impl Eq for BoxChain {}

impl Add for &BoxChain {
    type Output = BoxChain;
    fn add(self, rhs: &BoxChain) -> BoxChain {
        self.combine(rhs, 1)
    }
}

impl Sub for &BoxChain {
    type Output = BoxChain;
    fn sub(self, rhs: &BoxChain) -> BoxChain {
        self.combine(rhs, -1)
    }
}

impl Neg for &BoxChain {
    type Output = BoxChain;
    fn neg(self) -> BoxChain {
        self.scaled(-1)
    }
}

impl fmt::Display for BoxChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.cells.iter().map(|(c, g)| format!("{g}·{c}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Total order on finite floats for breakpoint sets.
#[derive(Clone, Copy, Debug)]
pub(crate) struct OrdF(pub f64);

impl PartialEq for OrdF {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}
impl Eq for OrdF {}
impl PartialOrd for OrdF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Pieces of `cell` cut along the sorted per-axis `breaks` inside its
/// extended intervals.
pub(crate) fn split_along(cell: &BoxCell, breaks: &[Vec<f64>]) -> Vec<BoxCell> {
    let mut pieces = vec![cell.bounds.clone()];
    for (j, &(lo, hi)) in cell.bounds.iter().enumerate() {
        if lo == hi {
            continue;
        }
        let start = breaks[j].partition_point(|&x| x <= lo);
        let end = breaks[j].partition_point(|&x| x < hi);
        let inner = &breaks[j][start..end];
        if inner.is_empty() {
            continue;
        }
        let mut cuts = Vec::with_capacity(inner.len() + 2);
        cuts.push(lo);
        cuts.extend_from_slice(inner);
        cuts.push(hi);
        let mut next = Vec::with_capacity(pieces.len() * (cuts.len() - 1));
        for p in &pieces {
            for w in cuts.windows(2) {
                let mut q = p.clone();
                q[j] = (w[0], w[1]);
                next.push(q);
            }
        }
        pieces = next;
    }
    pieces.into_iter().map(|b| BoxCell { bounds: b }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bx(b: &[(f64, f64)]) -> BoxCell {
        BoxCell::new(b.to_vec()).unwrap()
    }

    #[test]
    fn square_faces_have_cubical_signs() {
        let sq = bx(&[(0.0, 1.0), (0.0, 1.0)]);
        let faces = sq.faces();
        assert_eq!(
            faces,
            vec![
                (bx(&[(1.0, 1.0), (0.0, 1.0)]), 1),
                (bx(&[(0.0, 0.0), (0.0, 1.0)]), -1),
                (bx(&[(0.0, 1.0), (1.0, 1.0)]), -1),
                (bx(&[(0.0, 1.0), (0.0, 0.0)]), 1),
            ]
        );
        let c = BoxChain::new(2, 2, [(sq, 1)]).unwrap();
        let b = c.boundary().unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.boundary().unwrap().is_zero());
    }

    #[test]
    fn overlaps_merge_into_current_equality() {
        let whole = BoxChain::new(1, 1, [(bx(&[(0.0, 1.0)]), 1)]).unwrap();
        let halves = BoxChain::new(1, 1, [(bx(&[(0.0, 0.5)]), 1), (bx(&[(0.5, 1.0)]), 1)]).unwrap();
        assert_eq!(whole, halves);
        let overlap = BoxChain::new(1, 1, [(bx(&[(0.0, 1.0)]), 1), (bx(&[(0.5, 2.0)]), 1)]).unwrap();
        assert_eq!(overlap.len(), 3);
        assert_eq!(overlap.mass(), 2.5);
        let cancel = BoxChain::new(1, 1, [(bx(&[(0.0, 1.0)]), 1), (bx(&[(0.0, 0.5)]), -1)]).unwrap();
        assert_eq!(cancel, BoxChain::new(1, 1, [(bx(&[(0.5, 1.0)]), 1)]).unwrap());
    }

    #[test]
    fn dimension_checked() {
        let err = BoxChain::new(2, 2, [(bx(&[(0.0, 1.0), (0.0, 0.0)]), 1)]).unwrap_err();
        assert!(matches!(err, BoxError::CellDimension { .. }));
        assert!(BoxCell::new(vec![(1.0, 0.0)]).is_err());
    }

    #[test]
    fn negative_zero_is_zero() {
        assert_eq!(bx(&[(-0.0, 1.0)]), bx(&[(0.0, 1.0)]));
    }
}
