//! Flat norms, minimal fillings and isoperimetric ratios on a finite complex.
//!
//! All infima are taken over the chains of the given complex, not over an
//! ambient space: `𝓕(T)` minimizes `M(T − ∂S) + M(S)` over integer
//! `(k+1)`-chains `S` of the complex, and `𝓕_p(T)` minimizes
//! `M_p(T − ∂s) + M_p(s)` over the finitely many mod-p assignments `s`. Every
//! inequality between these quantities holds verbatim in this relative
//! setting, while absolute values can exceed the ambient ones.

mod oracle;
mod search;

use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::chain::{ChainError, Complex, IntChain, ModPChain, Modulus};

pub use oracle::{flat_norm_mod_p_oracle, ORACLE_LIMIT};
use search::{solve, Mode, Norm, Problem};

/// Maximum number of automatic bound escalations in [`flat_norm_int_auto`].
pub const MAX_ESCALATIONS: u32 = 8;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FlatNormError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("oracle too large: {size} assignments exceed the limit of {limit}")]
    OracleTooLarge { size: f64, limit: u64 },
    #[error("coefficient bound must be at least 1")]
    ZeroBound,
    #[error("coefficients too large for the integral search")]
    CoefficientTooLarge,
    #[error("precondition violated: the chain is not a cycle mod {0}")]
    NotACycle(u64),
    #[error("infeasible in this complex: no filling exists")]
    Infeasible,
    #[error("zero cycle: mass mod p vanishes")]
    ZeroCycle,
    #[error("isoperimetric ratio needs a cycle of dimension at least 1")]
    DimensionZero,
}

/// An optimal decomposition `T = R + ∂S` (mod p in the mod-p case).
#[derive(Clone, Debug, PartialEq)]
pub struct FlatWitness<C> {
    pub value: f64,
    pub r: C,
    pub s: C,
    /// The solver proved optimality over the whole search space.
    pub exact: bool,
    /// Integral case only: some optimal coefficient of `S` sits on `±B`.
    pub bound_saturated: bool,
}

pub(crate) fn sum_in_order(terms: impl Iterator<Item = f64>) -> f64 {
    terms.fold(0.0, |a, b| a + b)
}

fn dense_problem(complex: &Complex, dim: usize, target: Vec<i64>, norm: Norm, mode: Mode, values: Vec<i64>) -> Problem {
    let up = dim + 1;
    Problem {
        norm,
        mode,
        target,
        target_volumes: complex.cells(dim).iter().map(|c| c.volume()).collect(),
        var_volumes: complex.cells(up).iter().map(|c| c.volume()).collect(),
        var_faces: complex.cells(up).iter().map(|c| c.boundary().to_vec()).collect(),
        values,
    }
}

fn dense_residues(t: &ModPChain) -> Vec<i64> {
    let mut v = vec![0; t.complex().num_cells(t.dim())];
    for (i, r) in t.iter() {
        v[i] = r;
    }
    v
}

fn mod_p_chain(complex: &Arc<Complex>, p: Modulus, dim: usize, dense: &[i64]) -> ModPChain {
    ModPChain::from_residues(complex, p, dim, dense.iter().copied().enumerate().filter(|(_, g)| *g != 0))
        .expect("dense vector matches the complex")
}

/// `𝓕_p(T)`: exact minimum of `M_p(T − ∂s) + M_p(s)` over all mod-p
/// `(k+1)`-chains `s` of the complex.
///
/// The witness is the lexicographically least optimal `s` (by cell index,
/// then canonical residue), so results never depend on search order.
pub fn flat_norm_mod_p(t: &ModPChain) -> FlatWitness<ModPChain> {
    let p = t.modulus();
    let complex = t.complex();
    let k = t.dim();
    let pb = dense_problem(complex, k, dense_residues(t), Norm::Mod(p), Mode::Flat, p.residues_by_size());
    let sol = solve(&pb).expect("s = 0 is always feasible");
    let r = mod_p_chain(complex, p, k, &sol.residual);
    let s = mod_p_chain(complex, p, k + 1, &sol.assignment);
    FlatWitness {
        value: r.mass() + s.mass(),
        r,
        s,
        exact: true,
        bound_saturated: false,
    }
}

/// [`flat_norm_mod_p`] of the reduction of an integer chain.
pub fn flat_norm_mod_p_int(t: &IntChain, p: Modulus) -> FlatWitness<ModPChain> {
    flat_norm_mod_p(&t.reduce_mod_p(p))
}

/// `𝓕(T)` restricted to integer `(k+1)`-chains with coefficients in `[−B, B]`.
///
/// `R := T − ∂S`. When an optimal coefficient reaches `±B` the witness is
/// flagged `bound_saturated` and is not a proof of optimality over `ℤ`.
pub fn flat_norm_int(t: &IntChain, bound: u64) -> Result<FlatWitness<IntChain>, FlatNormError> {
    if bound == 0 {
        return Err(FlatNormError::ZeroBound);
    }
    const LIMIT: i64 = 1 << 40;
    let b = i64::try_from(bound).ok().filter(|b| *b <= LIMIT).ok_or(FlatNormError::CoefficientTooLarge)?;
    let complex = t.complex();
    let k = t.dim();
    let mut target = vec![0i64; complex.num_cells(k)];
    for (i, c) in t.iter() {
        target[i] = c
            .to_i64()
            .filter(|c| c.abs() <= LIMIT)
            .ok_or(FlatNormError::CoefficientTooLarge)?;
    }
    let mut values = vec![0];
    for v in 1..=b {
        values.push(v);
        values.push(-v);
    }
    let pb = dense_problem(complex, k, target, Norm::Abs, Mode::Flat, values);
    let sol = solve(&pb).expect("S = 0 is always feasible");
    let saturated = sol.assignment.iter().any(|v| v.abs() == b);
    let r = IntChain::from_coeffs(complex, k, sol.residual.iter().copied().enumerate())?;
    let s = IntChain::from_coeffs(complex, k + 1, sol.assignment.iter().copied().enumerate())?;
    Ok(FlatWitness {
        value: r.mass() + s.mass(),
        r,
        s,
        exact: !saturated,
        bound_saturated: saturated,
    })
}

/// Default coefficient bound `2·(max|T| + 1)`.
pub fn default_bound(t: &IntChain) -> u64 {
    let m = t.max_abs_coeff().to_u64().unwrap_or(u64::MAX / 4);
    2 * (m + 1)
}

/// [`flat_norm_int`] starting from [`default_bound`], raising the bound by one
/// while the optimum is saturated, at most [`MAX_ESCALATIONS`] times.
pub fn flat_norm_int_auto(t: &IntChain) -> Result<FlatWitness<IntChain>, FlatNormError> {
    let mut bound = default_bound(t);
    let mut w = flat_norm_int(t, bound)?;
    for _ in 0..MAX_ESCALATIONS {
        if !w.bound_saturated {
            break;
        }
        bound += 1;
        w = flat_norm_int(t, bound)?;
    }
    Ok(w)
}

/// A minimal filling: `∂S ≡ L (mod p)` with least `M_p(S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Filling {
    pub s: ModPChain,
    pub mass: f64,
}

/// Minimal-mass mod-p filling of a mod-p cycle `L` inside the complex.
pub fn fill_mod_p(l: &ModPChain) -> Result<Filling, FlatNormError> {
    let p = l.modulus();
    if l.dim() > 0 && !l.boundary()?.is_zero() {
        return Err(FlatNormError::NotACycle(p.get()));
    }
    let complex = l.complex();
    let k = l.dim();
    let pb = dense_problem(complex, k, dense_residues(l), Norm::Mod(p), Mode::Fill, p.residues_by_size());
    let sol = solve(&pb).ok_or(FlatNormError::Infeasible)?;
    let s = mod_p_chain(complex, p, k + 1, &sol.assignment);
    Ok(Filling { mass: s.mass(), s })
}

/// `M_p(minimal filling of L) / M_p(L)^((k+1)/k)`.
pub fn isoperimetric_ratio(l: &ModPChain) -> Result<f64, FlatNormError> {
    let k = l.dim();
    if k == 0 {
        return Err(FlatNormError::DimensionZero);
    }
    let boundary_mass = l.mass();
    if boundary_mass == 0.0 {
        return Err(FlatNormError::ZeroCycle);
    }
    let filling = fill_mod_p(l)?;
    let exponent = (k as f64 + 1.0) / k as f64;
    Ok(filling.mass / boundary_mass.powf(exponent))
}
