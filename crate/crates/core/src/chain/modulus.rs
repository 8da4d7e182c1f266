use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::ChainError;

/// A coefficient modulus `p ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(p: u64) -> Result<Self, ChainError> {
        if p < 2 || p > u64::from(u32::MAX) {
            return Err(ChainError::InvalidModulus(p));
        }
        Ok(Modulus(p as u32))
    }

    pub fn get(self) -> u64 {
        u64::from(self.0)
    }

    fn signed(self) -> i64 {
        i64::from(self.0)
    }

    /// Canonical residue in `(−p/2, p/2]`; ties at `+p/2` for even `p`.
    pub fn residue(self, g: i64) -> i64 {
        let p = self.signed();
        let r = g.rem_euclid(p);
        if 2 * r > p {
            r - p
        } else {
            r
        }
    }

    pub fn residue_big(self, g: &BigInt) -> i64 {
        let r = g
            .mod_floor(&BigInt::from(self.0))
            .to_i64()
            .expect("residue below p fits in i64");
        self.residue(r)
    }

    /// Distance from `g` to `pℤ`.
    pub fn norm(self, g: i64) -> u64 {
        self.residue(g).unsigned_abs()
    }

    pub fn norm_big(self, g: &BigInt) -> u64 {
        self.residue_big(g).unsigned_abs()
    }

    /// All canonical residues ordered by absolute value, positive first:
    /// `0, 1, −1, 2, −2, …`.
    pub fn residues_by_size(self) -> Vec<i64> {
        let p = self.signed();
        let mut out = vec![0];
        let mut k = 1;
        while out.len() < p as usize {
            if 2 * k <= p {
                out.push(k);
            }
            if 2 * k < p {
                out.push(-k);
            }
            k += 1;
        }
        out
    }
}

/// `min_q |g − p·q|`.
pub fn norm_mod_p(g: i64, p: u64) -> Result<u64, ChainError> {
    Ok(Modulus::new(p)?.norm(g))
}
