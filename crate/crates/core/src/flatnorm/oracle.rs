//! Exhaustive reference for [`flat_norm_mod_p`](super::flat_norm_mod_p).
//!
//! Walks every assignment `s ∈ (ℤ/p)^N` with an odometer, keeping the
//! residual `T − ∂s` up to date one digit at a time. A running float
//! objective screens candidates; every candidate within tolerance of the best
//! is re-scored exactly as `M_p(R) + M_p(S)` on freshly built chains.

use crate::chain::{ModPChain, Modulus};

use super::FlatNormError;

/// Largest search space the oracle accepts.
pub const ORACLE_LIMIT: u64 = 10_000_000;

fn score(t: &ModPChain, p: Modulus, residual: &[i64], digits: &[i64]) -> f64 {
    let complex = t.complex();
    let k = t.dim();
    let r = ModPChain::from_residues(complex, p, k, residual.iter().copied().enumerate()).expect("valid indices");
    let s = ModPChain::from_residues(complex, p, k + 1, digits.iter().copied().enumerate()).expect("valid indices");
    r.mass() + s.mass()
}

pub fn flat_norm_mod_p_oracle(t: &ModPChain) -> Result<f64, FlatNormError> {
    let p = t.modulus();
    let complex = t.complex();
    let k = t.dim();
    let vars = complex.cells(k + 1);
    let size = (p.get() as f64).powi(vars.len() as i32);
    if size > ORACLE_LIMIT as f64 {
        return Err(FlatNormError::OracleTooLarge {
            size,
            limit: ORACLE_LIMIT,
        });
    }

    let pm = p.get() as i64;
    let kvol: Vec<f64> = complex.cells(k).iter().map(|c| c.volume()).collect();
    let svol: Vec<f64> = vars.iter().map(|c| c.volume()).collect();
    let cost = |g: i64| p.norm(g) as f64;

    // Digits run over 0..p; the residual is kept in 0..p as well.
    let mut digits = vec![0i64; vars.len()];
    let mut residual: Vec<i64> = (0..kvol.len()).map(|i| t.residue(i).rem_euclid(pm)).collect();
    let full = |residual: &[i64], digits: &[i64]| -> f64 {
        let r: f64 = residual.iter().zip(&kvol).map(|(&g, &v)| cost(g) * v).sum();
        let s: f64 = digits.iter().zip(&svol).map(|(&g, &v)| cost(g) * v).sum();
        r + s
    };
    let mut running = full(&residual, &digits);

    let mut best = score(t, p, &residual, &digits);
    let mut best_running = running;
    loop {
        // Odometer increment with carries.
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(best);
            }
            let old = digits[pos];
            let new = (old + 1) % pm;
            digits[pos] = new;
            running += (cost(new) - cost(old)) * svol[pos];
            for &(tau, c) in vars[pos].boundary() {
                let before = residual[tau];
                let after = (before - c * (new - old)).rem_euclid(pm);
                residual[tau] = after;
                running += (cost(after) - cost(before)) * kvol[tau];
            }
            if new != 0 {
                break;
            }
            pos += 1;
        }
        if pos >= 2 {
            // Keep the incremental sum from drifting.
            running = full(&residual, &digits);
        }
        let slack = 1e-9 * (1.0 + best_running.abs());
        if running <= best_running + slack {
            let exact = score(t, p, &residual, &digits);
            if exact < best {
                best = exact;
            }
            if running < best_running {
                best_running = running;
            }
        }
    }
}
