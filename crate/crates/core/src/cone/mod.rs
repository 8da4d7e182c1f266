//! Simplicial chains in `ℝⁿ` and the cone construction `{x}×T`.
//!
//! A simplex is an ordered vertex tuple. Chains are formal sums kept in a
//! canonical form: vertices sorted (the permutation sign moves into the
//! coefficient), degenerate simplices dropped, equal simplices merged.
//! Dropping degenerates is what makes `cone(x, cone(x, T)) = 0`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::chain::Modulus;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ConeError {
    #[error("vertex has {found} coordinates, expected {expected}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("vertex coordinate {0} is not finite")]
    NotFinite(f64),
    #[error("simplex has {found} vertices, expected {expected}")]
    VertexCount { expected: usize, found: usize },
    #[error("a {k}-simplex does not fit in R^{n}")]
    DimensionTooLarge { k: usize, n: usize },
    #[error("a 0-chain has no boundary")]
    NoBoundaryInDimensionZero,
    #[error("internal defect: {0}")]
    Defect(String),
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn cmp_point(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// An ordered tuple of `k + 1` points in `ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self, ConeError> {
        let n = vertices.first().map_or(0, Vec::len);
        for v in &vertices {
            if v.len() != n {
                return Err(ConeError::AmbientMismatch { expected: n, found: v.len() });
            }
            if let Some(&x) = v.iter().find(|x| !x.is_finite()) {
                return Err(ConeError::NotFinite(x));
            }
        }
        if vertices.is_empty() {
            return Err(ConeError::VertexCount { expected: 1, found: 0 });
        }
        if vertices.len() > n + 1 {
            return Err(ConeError::DimensionTooLarge {
                k: vertices.len() - 1,
                n,
            });
        }
        Ok(Simplex {
            vertices: vertices.into_iter().map(|v| v.into_iter().map(clean).collect()).collect(),
        })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    fn gram_det(&self) -> (f64, f64) {
        let v0 = &self.vertices[0];
        let edges: Vec<Vec<f64>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        let k = edges.len();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).fold(0.0, |s, t| s + t);
        let mut g: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| dot(&edges[i], &edges[j])).collect()).collect();
        let hadamard = (0..k).map(|i| g[i][i]).fold(1.0, |a, b| a * b);
        let mut det = 1.0;
        for c in 0..k {
            let piv = (c..k)
                .max_by(|&a, &b| g[a][c].abs().total_cmp(&g[b][c].abs()))
                .expect("nonempty range");
            if g[piv][c] == 0.0 {
                return (0.0, hadamard);
            }
            if piv != c {
                g.swap(piv, c);
                det = -det;
            }
            det *= g[c][c];
            for r in c + 1..k {
                let f = g[r][c] / g[c][c];
                for j in c..k {
                    g[r][j] -= f * g[c][j];
                }
            }
        }
        (det, hadamard)
    }

    /// `√det G / k!` with `G` the Gram matrix of the edge vectors from
    /// `v₀`; a point has volume 1.
    pub fn volume(&self) -> f64 {
        let (det, _) = self.gram_det();
        let fact = (1..=self.dim()).map(|i| i as f64).fold(1.0, |a, b| a * b);
        det.max(0.0).sqrt() / fact
    }

    /// Repeated vertices, or a Gram determinant below `1e-20` of the
    /// product of squared edge lengths.
    pub fn is_degenerate(&self) -> bool {
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                if self.vertices[i] == self.vertices[j] {
                    return true;
                }
            }
        }
        let (det, hadamard) = self.gram_det();
        det <= 1e-20 * hadamard
    }

    /// Sorted vertices and the sign of the sorting permutation.
    fn canonical(mut self) -> (Simplex, i64) {
        let mut sign = 1;
        for i in 1..self.vertices.len() {
            let mut j = i;
            while j > 0 && cmp_point(&self.vertices[j - 1], &self.vertices[j]) == Ordering::Greater {
                self.vertices.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        (self, sign)
    }

    /// Faces with the alternating signs `(−1)^i` for omitting `vᵢ`.
    pub fn faces(&self) -> Vec<(Simplex, i64)> {
        (0..self.vertices.len())
            .map(|i| {
                let mut v = self.vertices.clone();
                v.remove(i);
                (Simplex { vertices: v }, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// Largest distance from `x` to a vertex.
    pub fn radius_from(&self, x: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).fold(0.0, |s, t| s + t).sqrt())
            .fold(0.0, f64::max)
    }
}

impl Eq for Simplex {}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.vertices.iter().zip(&other.vertices) {
            let c = cmp_point(a, b);
            if c.is_ne() {
                return c;
            }
        }
        self.vertices.len().cmp(&other.vertices.len())
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let c: Vec<String> = v.iter().map(f64::to_string).collect();
                format!("({})", c.join(","))
            })
            .collect();
        write!(f, "<{}>", pts.join(" "))
    }
}

/// An integer combination of `k`-simplices in `ℝⁿ`, kept canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialChain {
    n: usize,
    dim: usize,
    cells: BTreeMap<Simplex, BigInt>,
}

impl SimplicialChain {
    pub fn zero(n: usize, dim: usize) -> Self {
        SimplicialChain {
            n,
            dim,
            cells: BTreeMap::new(),
        }
    }

    pub fn new<C: Into<BigInt>>(n: usize, dim: usize, items: impl IntoIterator<Item = (Simplex, C)>) -> Result<Self, ConeError> {
        if dim > n {
            return Err(ConeError::DimensionTooLarge { k: dim, n });
        }
        let mut raw = Vec::new();
        for (s, g) in items {
            if s.ambient_dim() != n {
                return Err(ConeError::AmbientMismatch {
                    expected: n,
                    found: s.ambient_dim(),
                });
            }
            if s.dim() != dim {
                return Err(ConeError::VertexCount {
                    expected: dim + 1,
                    found: s.vertices.len(),
                });
            }
            raw.push((s, g.into()));
        }
        Ok(Self::canonical(n, dim, raw))
    }

    fn canonical(n: usize, dim: usize, raw: Vec<(Simplex, BigInt)>) -> Self {
        let mut cells: BTreeMap<Simplex, BigInt> = BTreeMap::new();
        for (s, g) in raw {
            if g.is_zero() || s.is_degenerate() {
                continue;
            }
            let (s, sign) = s.canonical();
            *cells.entry(s).or_default() += g * sign;
        }
        cells.retain(|_, g| !g.is_zero());
        SimplicialChain { n, dim, cells }
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

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &BigInt)> {
        self.cells.iter()
    }

    /// `Σ |g|·vol`, the mass of the formal sum.
    pub fn mass(&self) -> f64 {
        self.cells
            .iter()
            .map(|(s, g)| g.abs().to_f64().unwrap_or(f64::INFINITY) * s.volume())
            .fold(0.0, |a, b| a + b)
    }

    pub fn mass_p(&self, p: Modulus) -> f64 {
        self.cells
            .iter()
            .map(|(s, g)| p.norm_big(g) as f64 * s.volume())
            .fold(0.0, |a, b| a + b)
    }

    /// Chain with every coefficient replaced by its canonical residue.
    pub fn reduce_mod_p(&self, p: Modulus) -> SimplicialChain {
        let raw = self
            .cells
            .iter()
            .map(|(s, g)| (s.clone(), BigInt::from(p.residue_big(g))))
            .collect();
        Self::canonical(self.n, self.dim, raw)
    }

    /// `Σ g` over all simplices.
    pub fn total_coefficient(&self) -> BigInt {
        self.cells.values().sum()
    }

    pub fn scaled(&self, factor: impl Into<BigInt>) -> SimplicialChain {
        let f = factor.into();
        let raw = self.cells.iter().map(|(s, g)| (s.clone(), g * &f)).collect();
        Self::canonical(self.n, self.dim, raw)
    }

    fn combine(&self, other: &SimplicialChain, sign: i64) -> SimplicialChain {
        assert!(
            self.n == other.n && self.dim == other.dim,
            "simplicial chains differ in ambient dimension or dimension"
        );
        let raw = self
            .cells
            .iter()
            .map(|(s, g)| (s.clone(), g.clone()))
            .chain(other.cells.iter().map(|(s, g)| (s.clone(), g * sign)))
            .collect();
        Self::canonical(self.n, self.dim, raw)
    }

    /// Largest distance from `x` to a vertex of the support; 0 for the
    /// zero chain.
    pub fn radius_from(&self, x: &[f64]) -> f64 {
        self.cells.keys().map(|s| s.radius_from(x)).fold(0.0, f64::max)
    }
}

impl Add for &SimplicialChain {
    type Output = SimplicialChain;
    fn add(self, rhs: &SimplicialChain) -> SimplicialChain {
        self.combine(rhs, 1)
    }
}

impl Sub for &SimplicialChain {
    type Output = SimplicialChain;
    fn sub(self, rhs: &SimplicialChain) -> SimplicialChain {
        self.combine(rhs, -1)
    }
}

impl Neg for &SimplicialChain {
    type Output = SimplicialChain;
    fn neg(self) -> SimplicialChain {
        self.scaled(-1)
    }
}

impl fmt::Display for SimplicialChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.cells.iter().map(|(s, g)| format!("{g}·{s}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn boundary_simplicial(t: &SimplicialChain) -> Result<SimplicialChain, ConeError> {
    if t.dim == 0 {
        return Err(ConeError::NoBoundaryInDimensionZero);
    }
    let raw = t
        .cells
        .iter()
        .flat_map(|(s, g)| s.faces().into_iter().map(move |(f, sign)| (f, g * sign)))
        .collect();
    Ok(SimplicialChain::canonical(t.n, t.dim - 1, raw))
}

/// `{x}×T`: every `(v₀,…,v_k)` becomes `(x, v₀,…,v_k)`.
///
/// Then `∂(x×T) = T − x×∂T` for `k ≥ 1` and `∂(x×T) = T − (Σg)·[x]` for
/// `k = 0`, exactly as formal sums whenever no cone simplex is degenerate
/// (that is, `x` is off the affine hull of every simplex).
pub fn cone(x: &[f64], t: &SimplicialChain) -> Result<SimplicialChain, ConeError> {
    if x.len() != t.n {
        return Err(ConeError::AmbientMismatch {
            expected: t.n,
            found: x.len(),
        });
    }
    if let Some(&bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(ConeError::NotFinite(bad));
    }
    if t.dim + 1 > t.n {
        return Err(ConeError::DimensionTooLarge { k: t.dim + 1, n: t.n });
    }
    let apex: Vec<f64> = x.iter().copied().map(clean).collect();
    let raw = t
        .cells
        .iter()
        .map(|(s, g)| {
            let mut v = Vec::with_capacity(s.vertices.len() + 1);
            v.push(apex.clone());
            v.extend(s.vertices.iter().cloned());
            (Simplex { vertices: v }, g.clone())
        })
        .collect();
    Ok(SimplicialChain::canonical(t.n, t.dim + 1, raw))
}

/// Mass figures of a cone and the radius used in the bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeReport {
    pub mass: f64,
    pub mass_p: f64,
    /// Largest distance from the apex to a vertex of `T`.
    pub r: f64,
    pub bound: f64,
    pub bound_p: f64,
}

/// Builds `x×T` and checks `M(x×T) ≤ r·M(T)` and `M_p(x×T) ≤ r·M_p(T)`
/// up to `1e-9·(1 + r·M(T))`.
pub fn cone_mass_report(x: &[f64], t: &SimplicialChain, p: Modulus) -> Result<ConeReport, ConeError> {
    let c = cone(x, t)?;
    let r = t.radius_from(x);
    let report = ConeReport {
        mass: c.mass(),
        mass_p: c.mass_p(p),
        r,
        bound: r * t.mass(),
        bound_p: r * t.mass_p(p),
    };
    let tol = 1e-9 * (1.0 + report.bound);
    if report.mass > report.bound + tol || report.mass_p > report.bound_p + tol {
        return Err(ConeError::Defect(format!("cone mass bound violated: {report:?}")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
