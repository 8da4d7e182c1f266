//! Axis-aligned box chains in `ℝⁿ`.
//!
//! Restriction and slicing use coordinate functions only. A slice is computed
//! literally as `⟨T, x_j, r⟩ = ∂(T⌞{x_j < r}) − (∂T)⌞{x_j < r}`, so every sign
//! follows from the box orientation (the increasing-axis wedge) and the
//! boundary convention. Levels `r` that hit a coordinate of the chain are
//! rejected, never perturbed.
//!
//! Axes are numbered from 0 in the library.

mod boxes;
mod deform;
mod grid;

use num_bigint::BigInt;
use thiserror::Error;

use crate::chain::{ChainError, Modulus};
use crate::flatnorm::FlatNormError;

pub use boxes::{BoxCell, BoxChain};
pub use deform::{deform, deform_best_thresholds, default_thresholds, lattice_denominator, on_coarse_grid, DeformationResult, MAX_DENOMINATOR};
pub use grid::{compile, flat_norm_under_refinement, Grid, GridComplex};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum BoxError {
    #[error("bad interval on axis {axis}: [{lo}, {hi}]")]
    BadInterval { axis: usize, lo: f64, hi: f64 },
    #[error("box has ambient dimension {found}, expected {expected}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("box {cell} has dimension {found}, expected {expected}")]
    CellDimension { expected: usize, found: usize, cell: String },
    #[error("no boundary in dimension 0")]
    NoBoundaryInDimensionZero,
    #[error("axis {axis} out of range for ambient dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },
    #[error("level hits a face; perturb r (axis {axis}, r = {r}, try r = {suggestion})")]
    NonGenericLevel { axis: usize, r: f64, suggestion: f64 },
    #[error("axis {0} repeated")]
    RepeatedAxis(usize),
    #[error("{axes} slicing axes for a chain of dimension {dim}")]
    TooManyAxes { axes: usize, dim: usize },
    #[error("{axes} axes but {levels} levels")]
    LevelCount { axes: usize, levels: usize },
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("region corner {value} on axis {axis} is not a multiple of the scale")]
    Misaligned { axis: usize, value: f64 },
    #[error("coordinate {value} on axis {axis} is not a multiple of eta/m for any m up to {max}")]
    Incommensurable { axis: usize, value: f64, max: u64 },
    #[error("threshold {rho} on axis {axis} must lie in (0, 1)")]
    BadThreshold { axis: usize, rho: f64 },
    #[error("threshold {rho} on axis {axis} collides with a fine grid coordinate")]
    ThresholdCollision { axis: usize, rho: f64 },
    #[error("{found} thresholds for ambient dimension {n}")]
    ThresholdCount { found: usize, n: usize },
    #[error("subdivision factor must be at least {min}, got {found}")]
    BadSubdivision { min: u64, found: u64 },
    #[error("box {0} is not a union of grid cells")]
    NotOnGrid(String),
    #[error("chain and grid differ in ambient dimension")]
    GridMismatch,
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Flat(#[from] FlatNormError),
}

fn check_axis(t: &BoxChain, axis: usize) -> Result<(), BoxError> {
    if axis >= t.ambient_dim() {
        return Err(BoxError::AxisOutOfRange {
            axis,
            n: t.ambient_dim(),
        });
    }
    Ok(())
}

/// Fails unless `r` avoids every coordinate of `t` on `axis`.
fn check_generic(t: &BoxChain, axis: usize, r: f64) -> Result<(), BoxError> {
    check_axis(t, axis)?;
    let breaks = &t.breakpoints()[axis];
    if !r.is_finite() || breaks.contains(&r) {
        return Err(BoxError::NonGenericLevel {
            axis,
            r,
            suggestion: suggest_level(breaks, r),
        });
    }
    Ok(())
}

/// Midpoint of the coordinate gap just above `r`.
pub fn suggest_level(breaks: &[f64], r: f64) -> f64 {
    if !r.is_finite() {
        return breaks.first().map_or(0.5, |b| b - 0.5);
    }
    match breaks.iter().find(|&&b| b > r) {
        Some(&next) => r + (next - r) / 2.0,
        None => r + 0.5,
    }
}

/// Midpoint of the gap containing `r`, or `r` itself when it is generic.
pub fn generic_level_near(t: &BoxChain, axis: usize, r: f64) -> f64 {
    let breaks = &t.breakpoints()[axis];
    if breaks.contains(&r) {
        suggest_level(breaks, r)
    } else {
        r
    }
}

fn cut(t: &BoxChain, axis: usize, r: f64, below: bool) -> BoxChain {
    let mut raw = Vec::new();
    for (cell, g) in t.iter() {
        let (lo, hi) = cell.bounds()[axis];
        let piece = if below {
            if hi < r {
                Some(cell.clone())
            } else if lo < r {
                Some(cell.with_bound(axis, lo, r))
            } else {
                None
            }
        } else if lo > r {
            Some(cell.clone())
        } else if hi > r {
            Some(cell.with_bound(axis, r, hi))
        } else {
            None
        };
        if let Some(piece) = piece {
            raw.push((piece, g.clone()));
        }
    }
    BoxChain::canonical(t.ambient_dim(), t.dim(), raw)
}

/// `T⌞{x_axis < r}`.
pub fn restrict(t: &BoxChain, axis: usize, r: f64) -> Result<BoxChain, BoxError> {
    check_generic(t, axis, r)?;
    Ok(cut(t, axis, r, true))
}

/// `T⌞{x_axis > r}`; `restrict + restrict_above = T` for generic `r`.
pub fn restrict_above(t: &BoxChain, axis: usize, r: f64) -> Result<BoxChain, BoxError> {
    check_generic(t, axis, r)?;
    Ok(cut(t, axis, r, false))
}

/// `⟨T, x_axis, r⟩ = ∂(T⌞{x_axis < r}) − (∂T)⌞{x_axis < r}`.
pub fn slice(t: &BoxChain, axis: usize, r: f64) -> Result<BoxChain, BoxError> {
    if t.dim() == 0 {
        return Err(BoxError::NoBoundaryInDimensionZero);
    }
    check_generic(t, axis, r)?;
    let lower = cut(t, axis, r, true).boundary()?;
    let bt = t.boundary()?;
    Ok(&lower - &cut(&bt, axis, r, true))
}

/// Slices along `axes[0]` at `levels[0]`, then along `axes[1]`, and so on.
pub fn iterated_slice(t: &BoxChain, axes: &[usize], levels: &[f64]) -> Result<BoxChain, BoxError> {
    check_axes(t, axes)?;
    if axes.len() != levels.len() {
        return Err(BoxError::LevelCount {
            axes: axes.len(),
            levels: levels.len(),
        });
    }
    let mut cur = t.clone();
    for (&axis, &r) in axes.iter().zip(levels) {
        cur = slice(&cur, axis, r)?;
    }
    Ok(cur)
}

fn check_axes(t: &BoxChain, axes: &[usize]) -> Result<(), BoxError> {
    for (i, &a) in axes.iter().enumerate() {
        check_axis(t, a)?;
        if axes[..i].contains(&a) {
            return Err(BoxError::RepeatedAxis(a));
        }
    }
    if axes.len() > t.dim() {
        return Err(BoxError::TooManyAxes {
            axes: axes.len(),
            dim: t.dim(),
        });
    }
    Ok(())
}

/// `∫_{ℝ^m} M_p(⟨T, π, x⟩) dx` for the coordinate projection `π` onto `axes`.
///
/// The integrand is constant on each open box of the arrangement cut out by
/// the coordinates of `T` on those axes and vanishes outside it, so the
/// integral is the finite sum of midpoint values times box measures.
pub fn slice_mass_integral(t: &BoxChain, axes: &[usize], p: Modulus) -> Result<f64, BoxError> {
    check_axes(t, axes)?;
    if axes.is_empty() {
        return Ok(t.mass_p(p));
    }
    let breaks = t.breakpoints();
    let gaps: Vec<Vec<(f64, f64)>> = axes
        .iter()
        .map(|&a| breaks[a].windows(2).map(|w| (w[0] + (w[1] - w[0]) / 2.0, w[1] - w[0])).collect())
        .collect();
    if gaps.iter().any(Vec::is_empty) {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut idx = vec![0usize; axes.len()];
    loop {
        let levels: Vec<f64> = idx.iter().zip(&gaps).map(|(&i, g)| g[i].0).collect();
        let measure: f64 = idx.iter().zip(&gaps).map(|(&i, g)| g[i].1).product();
        total += iterated_slice(t, axes, &levels)?.mass_p(p) * measure;
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(total);
            }
            idx[pos] += 1;
            if idx[pos] < gaps[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Maximum of [`slice_mass_integral`] over all `k`-element axis sets.
pub fn slice_mass_star(t: &BoxChain, p: Modulus) -> Result<f64, BoxError> {
    let mut best = 0.0f64;
    for axes in subsets(t.ambient_dim(), t.dim()) {
        best = best.max(slice_mass_integral(t, &axes, p)?);
    }
    Ok(best)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn multiple_of(value: f64, delta: f64) -> Option<i64> {
    let q = value / delta;
    let r = q.round();
    ((q - r).abs() <= 1e-9 * (1.0 + q.abs())).then_some(r as i64)
}

/// Every `k`-cell of the `δ`-grid inside `region`, each with coefficient
/// `coeff(cell)`; zero coefficients are skipped.
pub fn grid_chain<C: Into<BigInt>>(
    n: usize,
    k: usize,
    region: &[(f64, f64)],
    delta: f64,
    mut coeff: impl FnMut(&BoxCell) -> C,
) -> Result<BoxChain, BoxError> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(BoxError::BadScale(delta));
    }
    if region.len() != n {
        return Err(BoxError::AmbientMismatch {
            expected: n,
            found: region.len(),
        });
    }
    let mut ranges = Vec::with_capacity(n);
    for (axis, &(lo, hi)) in region.iter().enumerate() {
        if !(lo <= hi) {
            return Err(BoxError::BadInterval { axis, lo, hi });
        }
        let a = multiple_of(lo, delta).ok_or(BoxError::Misaligned { axis, value: lo })?;
        let b = multiple_of(hi, delta).ok_or(BoxError::Misaligned { axis, value: hi })?;
        ranges.push((a, b));
    }
    let mut items = Vec::new();
    for dirs in subsets(n, k) {
        // Per axis: extended axes run over intervals, the others over points.
        let counts: Vec<i64> = (0..n)
            .map(|j| {
                let (a, b) = ranges[j];
                if dirs.contains(&j) {
                    b - a
                } else {
                    b - a + 1
                }
            })
            .collect();
        if counts.iter().any(|&c| c <= 0) {
            continue;
        }
        let mut idx = vec![0i64; n];
        'cells: loop {
            let bounds: Vec<(f64, f64)> = (0..n)
                .map(|j| {
                    let s = ranges[j].0 + idx[j];
                    if dirs.contains(&j) {
                        (s as f64 * delta, (s + 1) as f64 * delta)
                    } else {
                        (s as f64 * delta, s as f64 * delta)
                    }
                })
                .collect();
            let cell = BoxCell::from_bounds_unchecked(bounds);
            let g: BigInt = coeff(&cell).into();
            items.push((cell, g));
            let mut pos = n;
            loop {
                if pos == 0 {
                    break 'cells;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < counts[pos] {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
    Ok(BoxChain::canonical(n, k, items))
}
