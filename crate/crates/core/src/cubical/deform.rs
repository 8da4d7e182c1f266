//! Coordinate-rounding deformation onto a coarse grid.
//!
//! Coordinates are first rescaled to integers on the fine lattice `(η/m)ℤ`.
//! For each axis `j` in turn, the map `f_j` moves every fine coordinate of
//! axis `j` to the coarse endpoint on its side of the threshold and fixes the
//! coarse coordinates. For a box `B` not extending in `j`, the straight-line
//! homotopy sweeps the box `Sw(B)` obtained by stretching `B` between its
//! `j`-coordinate `c` and `f_j(c)`, oriented by
//! `sign(f_j(c) − c)·(−1)^{#directions below j}`; boxes extending in `j`
//! sweep nothing. This gives, for every chain `C`,
//!
//! ```text
//! f_j#(C) − C = ∂Sw(C) + Sw(∂C)
//! ```
//!
//! and summing over the axes yields `T = P + U + ∂Q` with
//! `Q = −Σ Sw(C_{j−1})` and `U = −Σ Sw(∂C_{j−1})`.

use std::collections::HashMap;

use super::{BoxCell, BoxChain, BoxError};
use crate::chain::Modulus;

/// Largest fine-lattice denominator [`lattice_denominator`] tries.
pub const MAX_DENOMINATOR: u64 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationResult {
    pub p: BoxChain,
    pub u: BoxChain,
    pub q: BoxChain,
    pub c_p: f64,
    pub c_u: f64,
    pub c_q: f64,
    /// Fine lattice denominator: coordinates of `T` lie in `(η/m)ℤ`.
    pub m: u64,
    pub rho: Vec<f64>,
}

fn on_lattice(x: f64, scale: f64) -> Option<i64> {
    let q = x * scale;
    let r = q.round();
    ((q - r).abs() <= 1e-9 * (1.0 + q.abs())).then_some(r as i64)
}

/// Smallest `m ≤ MAX_DENOMINATOR` with every coordinate of `t` in `(η/m)ℤ`.
pub fn lattice_denominator(t: &BoxChain, eta: f64) -> Result<u64, BoxError> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(BoxError::BadScale(eta));
    }
    let breaks = t.breakpoints();
    'm: for m in 1..=MAX_DENOMINATOR {
        let scale = m as f64 / eta;
        for axis in &breaks {
            for &x in axis {
                if on_lattice(x, scale).is_none() {
                    continue 'm;
                }
            }
        }
        return Ok(m);
    }
    for (axis, coords) in breaks.iter().enumerate() {
        for &x in coords {
            if (1..=MAX_DENOMINATOR).all(|m| on_lattice(x, m as f64 / eta).is_none()) {
                return Err(BoxError::Incommensurable {
                    axis,
                    value: x,
                    max: MAX_DENOMINATOR,
                });
            }
        }
    }
    // Every coordinate fits some m, but no single m ≤ MAX fits all of them.
    Err(BoxError::Incommensurable {
        axis: 0,
        value: breaks.iter().flatten().copied().next().unwrap_or(0.0),
        max: MAX_DENOMINATOR,
    })
}

/// `ρ_j = (⌊m/2⌋ + ½)/m` on every axis.
pub fn default_thresholds(n: usize, m: u64) -> Vec<f64> {
    vec![((m / 2) as f64 + 0.5) / m as f64; n]
}

/// Thresholds in fine lattice units. A threshold collides when it equals
/// the offset of a coordinate of the chain inside its coarse interval, since
/// that coordinate would have no side to round to.
fn lattice_thresholds(rho: &[f64], coords: &[Vec<i64>], m: u64) -> Result<Vec<f64>, BoxError> {
    let n = coords.len();
    if rho.len() != n {
        return Err(BoxError::ThresholdCount { found: rho.len(), n });
    }
    let mut out = Vec::with_capacity(n);
    for (axis, &r) in rho.iter().enumerate() {
        if !(r > 0.0 && r < 1.0) {
            return Err(BoxError::BadThreshold { axis, rho: r });
        }
        let t = r * m as f64;
        let hit = coords[axis]
            .iter()
            .any(|&c| (c.rem_euclid(m as i64) as f64 - t).abs() <= 1e-9);
        if hit {
            return Err(BoxError::ThresholdCollision { axis, rho: r });
        }
        out.push(t);
    }
    Ok(out)
}

fn round_coord(c: i64, m: i64, threshold: f64) -> i64 {
    let a = c.div_euclid(m);
    let off = c - a * m;
    if (off as f64) < threshold {
        a * m
    } else {
        (a + 1) * m
    }
}

/// `f_j#(C)` and `Sw_j(C)` for one axis.
fn step(c: &BoxChain, axis: usize, m: i64, threshold: f64) -> (BoxChain, BoxChain) {
    let n = c.ambient_dim();
    let k = c.dim();
    let r = |x: f64| round_coord(x as i64, m, threshold) as f64;
    let mut rounded = Vec::new();
    let mut swept = Vec::new();
    for (cell, g) in c.iter() {
        let (lo, hi) = cell.bounds()[axis];
        if lo < hi {
            rounded.push((cell.with_bound(axis, r(lo), r(hi)), g.clone()));
            continue;
        }
        let target = r(lo);
        rounded.push((cell.with_bound(axis, target, target), g.clone()));
        if target != lo {
            let below = cell.directions().iter().filter(|&&d| d < axis).count();
            let mut sign: i64 = if target > lo { 1 } else { -1 };
            if below % 2 == 1 {
                sign = -sign;
            }
            swept.push((cell.with_bound(axis, lo.min(target), lo.max(target)), g * sign));
        }
    }
    (
        BoxChain::canonical(n, k, rounded),
        BoxChain::canonical(n, k + 1, swept),
    )
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

fn map_coords(t: &BoxChain, f: impl Fn(usize, f64) -> f64) -> BoxChain {
    let raw = t
        .iter()
        .map(|(c, g)| {
            let bounds = c
                .bounds()
                .iter()
                .enumerate()
                .map(|(j, &(lo, hi))| (f(j, lo), f(j, hi)))
                .collect();
            (BoxCell::from_bounds_unchecked(bounds), g.clone())
        })
        .collect();
    BoxChain::canonical(t.ambient_dim(), t.dim(), raw)
}

struct Lattice {
    m: u64,
    eta: f64,
    /// Original coordinate for each lattice value that occurs in the input.
    originals: Vec<HashMap<i64, f64>>,
}

impl Lattice {
    fn to_lattice(&self, t: &BoxChain) -> BoxChain {
        let scale = self.m as f64 / self.eta;
        map_coords(t, |_, x| on_lattice(x, scale).expect("checked commensurable") as f64)
    }

    fn from_lattice(&self, t: &BoxChain) -> BoxChain {
        let m = self.m as i64;
        map_coords(t, |j, x| {
            let xi = x as i64;
            match self.originals[j].get(&xi) {
                Some(&orig) => orig,
                None => (xi.div_euclid(m)) as f64 * self.eta,
            }
        })
    }
}

/// Deformation of `t` onto the `η`-grid with thresholds `rho` (in units of
/// `η`, one per axis; `None` picks [`default_thresholds`]).
///
/// The identity `T = P + U + ∂Q` is verified exactly before returning.
pub fn deform(t: &BoxChain, eta: f64, rho: Option<&[f64]>, p: Modulus) -> Result<DeformationResult, BoxError> {
    let m = lattice_denominator(t, eta)?;
    let n = t.ambient_dim();
    let rho = rho.map_or_else(|| default_thresholds(n, m), <[f64]>::to_vec);
    let scale = m as f64 / eta;
    let breaks = t.breakpoints();
    let coords: Vec<Vec<i64>> = breaks
        .iter()
        .map(|axis| axis.iter().map(|&x| on_lattice(x, scale).expect("checked commensurable")).collect())
        .collect();
    let thresholds = lattice_thresholds(&rho, &coords, m)?;
    let originals = coords
        .iter()
        .zip(&breaks)
        .map(|(ls, xs)| ls.iter().copied().zip(xs.iter().copied()).collect())
        .collect();
    let lattice = Lattice { m, eta, originals };
    let lt = lattice.to_lattice(t);
    let (p_chain, u, q) = deform_lattice(&lt, m as i64, &thresholds)?;

    let p_out = lattice.from_lattice(&p_chain);
    let u_out = lattice.from_lattice(&u);
    let q_out = lattice.from_lattice(&q);

    let bt_mass = if t.dim() > 0 { t.boundary()?.mass_p(p) } else { 0.0 };
    let t_mass = t.mass_p(p);
    Ok(DeformationResult {
        c_p: ratio(p_out.mass_p(p), t_mass + eta * bt_mass),
        c_u: ratio(u_out.mass_p(p), eta * bt_mass),
        c_q: ratio(q_out.mass_p(p), eta * t_mass),
        p: p_out,
        u: u_out,
        q: q_out,
        m,
        rho,
    })
}

/// The rounding on integer lattice coordinates; returns `(P, U, Q)`.
fn deform_lattice(t: &BoxChain, m: i64, thresholds: &[f64]) -> Result<(BoxChain, BoxChain, BoxChain), BoxError> {
    let n = t.ambient_dim();
    let k = t.dim();
    let mut cur = t.clone();
    let mut q = BoxChain::zero(n, k + 1);
    let mut u = BoxChain::zero(n, k);
    for (axis, &th) in thresholds.iter().enumerate() {
        let (next, sw) = step(&cur, axis, m, th);
        q = &q - &sw;
        if k > 0 {
            let (_, sw_b) = step(&cur.boundary()?, axis, m, th);
            u = &u - &sw_b;
        }
        cur = next;
    }
    let rebuilt = &(&cur + &u) + &boundary_or_zero(&q)?;
    assert!(rebuilt == *t, "deformation identity T = P + U + ∂Q failed");
    for (cell, _) in cur.iter() {
        for &(lo, hi) in cell.bounds() {
            assert!(lo as i64 % m == 0 && hi as i64 % m == 0, "P left the coarse grid");
        }
    }
    Ok((cur, u, q))
}

fn boundary_or_zero(q: &BoxChain) -> Result<BoxChain, BoxError> {
    if q.dim() == 0 {
        return Ok(BoxChain::zero(q.ambient_dim(), 0));
    }
    if q.is_zero() {
        return Ok(BoxChain::zero(q.ambient_dim(), q.dim() - 1));
    }
    q.boundary()
}

/// [`deform`] with the thresholds minimizing `M(P)` among all `m^n` choices
/// `ρ_j ∈ {(i + ½)/m}`; ties go to the lexicographically least choice.
pub fn deform_best_thresholds(t: &BoxChain, eta: f64, p: Modulus) -> Result<DeformationResult, BoxError> {
    let m = lattice_denominator(t, eta)?;
    let n = t.ambient_dim();
    let choices: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) / m as f64).collect();
    let mut idx = vec![0usize; n];
    let mut best: Option<DeformationResult> = None;
    loop {
        let rho: Vec<f64> = idx.iter().map(|&i| choices[i]).collect();
        let r = deform(t, eta, Some(&rho), p)?;
        if best.as_ref().map_or(true, |b| r.p.mass() < b.p.mass()) {
            best = Some(r);
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(best.expect("at least one threshold choice"));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// True when every coordinate of `c` is an integer multiple of `eta`.
pub fn on_coarse_grid(c: &BoxChain, eta: f64) -> bool {
    c.iter()
        .all(|(cell, _)| cell.bounds().iter().all(|&(lo, hi)| on_lattice(lo, 1.0 / eta).is_some() && on_lattice(hi, 1.0 / eta).is_some()))
}
