use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{ChainError, Complex, Modulus};

fn same_complex(a: &Arc<Complex>, b: &Arc<Complex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An integer `k`-chain on a [`Complex`]: a sparse map from cell index to a
/// nonzero arbitrary-precision coefficient.
#[derive(Clone, Debug)]
pub struct IntChain {
    complex: Arc<Complex>,
    dim: usize,
    coeffs: BTreeMap<usize, BigInt>,
}

impl PartialEq for IntChain {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.coeffs == other.coeffs && same_complex(&self.complex, &other.complex)
    }
}

impl Eq for IntChain {}

impl IntChain {
    pub fn zero(complex: &Arc<Complex>, dim: usize) -> Self {
        IntChain {
            complex: Arc::clone(complex),
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a chain from `(cell index, coefficient)` pairs; repeated cells
    /// are summed and zeros dropped.
    pub fn from_coeffs<I, C>(complex: &Arc<Complex>, dim: usize, coeffs: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let n = complex.num_cells(dim);
        let mut out = Self::zero(complex, dim);
        for (index, c) in coeffs {
            if index >= n {
                return Err(ChainError::NoSuchCell { dim, index });
            }
            out.add_term(index, c.into());
        }
        Ok(out)
    }

    /// Like [`IntChain::from_coeffs`] with cells given by label.
    pub fn from_labels<'a, I, C>(complex: &Arc<Complex>, dim: usize, coeffs: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = (&'a str, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero(complex, dim);
        for (label, c) in coeffs {
            let r = complex
                .find(label)
                .ok_or_else(|| ChainError::UnknownLabel(label.to_string()))?;
            if r.dim != dim {
                return Err(ChainError::DimensionMismatch {
                    expected: dim,
                    found: r.dim,
                });
            }
            out.add_term(r.index, c.into());
        }
        Ok(out)
    }

    fn add_term(&mut self, index: usize, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(index).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of cells with nonzero coefficient.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, index: usize) -> BigInt {
        self.coeffs.get(&index).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing cell index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    /// Largest absolute coefficient (zero for the zero chain).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn boundary(&self) -> Result<IntChain, ChainError> {
        if self.dim == 0 {
            return Err(ChainError::NoBoundaryInDimensionZero);
        }
        let mut out = Self::zero(&self.complex, self.dim - 1);
        for (&index, c) in &self.coeffs {
            for &(face, inc) in self.complex.cells(self.dim)[index].boundary() {
                out.add_term(face, c * inc);
            }
        }
        Ok(out)
    }

    /// `Σ |g_σ|·vol(σ)`, summed in cell index order.
    pub fn mass(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&i, c)| c.abs().to_f64().unwrap_or(f64::INFINITY) * self.complex.volume(self.dim, i))
            .fold(0.0, |a, b| a + b)
    }

    /// `Σ dist(g_σ, pℤ)·vol(σ)`.
    pub fn mass_p(&self, p: Modulus) -> f64 {
        self.coeffs
            .iter()
            .map(|(&i, c)| p.norm_big(c) as f64 * self.complex.volume(self.dim, i))
            .fold(0.0, |a, b| a + b)
    }

    /// Cellwise canonical residues.
    pub fn reduce_mod_p(&self, p: Modulus) -> ModPChain {
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(&i, c)| {
                let r = p.residue_big(c);
                (r != 0).then_some((i, r))
            })
            .collect();
        ModPChain {
            complex: Arc::clone(&self.complex),
            p,
            dim: self.dim,
            coeffs,
        }
    }

    /// True iff every coefficient of `self − other` is divisible by `p`.
    pub fn congruent(&self, other: &IntChain, p: Modulus) -> bool {
        (self - other).reduce_mod_p(p).is_zero()
    }

    fn combine(&self, other: &IntChain, sign: i64) -> IntChain {
        assert!(
            self.dim == other.dim && same_complex(&self.complex, &other.complex),
            "chains live on different complexes or dimensions"
        );
        let mut out = self.clone();
        for (&i, c) in &other.coeffs {
            out.add_term(i, c * sign);
        }
        out
    }

    pub fn scaled(&self, factor: impl Into<BigInt>) -> IntChain {
        let f = factor.into();
        if f.is_zero() {
            return Self::zero(&self.complex, self.dim);
        }
        IntChain {
            complex: Arc::clone(&self.complex),
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c * &f)).collect(),
        }
    }
}

impl Add for &IntChain {
    type Output = IntChain;
    fn add(self, rhs: &IntChain) -> IntChain {
        self.combine(rhs, 1)
    }
}

impl Sub for &IntChain {
    type Output = IntChain;
    fn sub(self, rhs: &IntChain) -> IntChain {
        self.combine(rhs, -1)
    }
}

impl Neg for &IntChain {
    type Output = IntChain;
    fn neg(self) -> IntChain {
        self.scaled(-1)
    }
}

impl Mul<&IntChain> for i64 {
    type Output = IntChain;
    fn mul(self, rhs: &IntChain) -> IntChain {
        rhs.scaled(self)
    }
}

impl fmt::Display for IntChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let cells = self.complex.cells(self.dim);
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&i, c)| format!("{c}·[{}]", cells[i].label()))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A chain with coefficients in `ℤ/p`, stored as canonical residues in
/// `(−p/2, p/2]` with zeros dropped.
#[derive(Clone, Debug)]
pub struct ModPChain {
    complex: Arc<Complex>,
    p: Modulus,
    dim: usize,
    coeffs: BTreeMap<usize, i64>,
}

impl PartialEq for ModPChain {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.dim == other.dim
            && self.coeffs == other.coeffs
            && same_complex(&self.complex, &other.complex)
    }
}

impl Eq for ModPChain {}

impl ModPChain {
    pub fn zero(complex: &Arc<Complex>, p: Modulus, dim: usize) -> Self {
        ModPChain {
            complex: Arc::clone(complex),
            p,
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// Arbitrary integer values are reduced to canonical residues.
    pub fn from_residues<I>(complex: &Arc<Complex>, p: Modulus, dim: usize, values: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let n = complex.num_cells(dim);
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (i, v) in values {
            if i >= n {
                return Err(ChainError::NoSuchCell { dim, index: i });
            }
            let e = acc.entry(i).or_insert(0);
            *e = p.residue(*e + p.residue(v));
        }
        acc.retain(|_, v| *v != 0);
        Ok(ModPChain {
            complex: Arc::clone(complex),
            p,
            dim,
            coeffs: acc,
        })
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn modulus(&self) -> Modulus {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn residue(&self, index: usize) -> i64 {
        self.coeffs.get(&index).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&i, &r)| (i, r))
    }

    /// The integer chain whose coefficients are the canonical residues.
    pub fn lift(&self) -> IntChain {
        IntChain {
            complex: Arc::clone(&self.complex),
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(&i, &r)| (i, BigInt::from(r))).collect(),
        }
    }

    /// Mass mod p: `Σ |r_σ|·vol(σ)` over canonical residues.
    pub fn mass(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&i, &r)| r.unsigned_abs() as f64 * self.complex.volume(self.dim, i))
            .fold(0.0, |a, b| a + b)
    }

    pub fn boundary(&self) -> Result<ModPChain, ChainError> {
        if self.dim == 0 {
            return Err(ChainError::NoBoundaryInDimensionZero);
        }
        let cells = self.complex.cells(self.dim);
        let terms = self
            .coeffs
            .iter()
            .flat_map(|(&i, &r)| cells[i].boundary().iter().map(move |&(f, c)| (f, r * c)));
        ModPChain::from_residues(&self.complex, self.p, self.dim - 1, terms)
    }

    fn combine(&self, other: &ModPChain, sign: i64) -> ModPChain {
        assert!(
            self.p == other.p && self.dim == other.dim && same_complex(&self.complex, &other.complex),
            "mod-p chains differ in modulus, dimension or complex"
        );
        let terms = self.iter().chain(other.iter().map(|(i, r)| (i, sign * r)));
        ModPChain::from_residues(&self.complex, self.p, self.dim, terms).expect("indices already valid")
    }
}

impl Add for &ModPChain {
    type Output = ModPChain;
    fn add(self, rhs: &ModPChain) -> ModPChain {
        self.combine(rhs, 1)
    }
}

impl Sub for &ModPChain {
    type Output = ModPChain;
    fn sub(self, rhs: &ModPChain) -> ModPChain {
        self.combine(rhs, -1)
    }
}

impl fmt::Display for ModPChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.lift(), self.p.get())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{validate_complex, ComplexDescription, RawCell};

    fn edges(lengths: &[f64]) -> Arc<Complex> {
        let mut d = ComplexDescription::new(1);
        for i in 0..=lengths.len() {
            d.push(0, RawCell::new(format!("v{i}"), 1.0));
        }
        for (i, &l) in lengths.iter().enumerate() {
            d.push(
                1,
                RawCell::new(format!("e{i}"), l)
                    .with_face(format!("v{}", i + 1), 1)
                    .with_face(format!("v{i}"), -1),
            );
        }
        Arc::new(validate_complex(&d).unwrap())
    }

    #[test]
    fn mass_examples() {
        let c = edges(&[1.0, 0.5, 0.25]);
        assert_eq!(IntChain::from_coeffs(&c, 1, [(0, 3)]).unwrap().mass(), 3.0);
        assert_eq!(IntChain::zero(&c, 1).mass(), 0.0);
        let t = IntChain::from_coeffs(&c, 1, [(1, 1), (2, -2)]).unwrap();
        assert_eq!(t.mass(), 1.0);
    }

    #[test]
    fn boundary_of_doubled_edge() {
        let c = edges(&[1.0]);
        let t = IntChain::from_coeffs(&c, 1, [(0, 2)]).unwrap();
        let b = t.boundary().unwrap();
        assert_eq!(b, IntChain::from_labels(&c, 0, [("v1", 2), ("v0", -2)]).unwrap());
        assert_eq!(b.boundary(), Err(ChainError::NoBoundaryInDimensionZero));
    }

    #[test]
    fn reduce_examples() {
        let c = edges(&[1.0, 1.0, 1.0]);
        let p3 = Modulus::new(3).unwrap();
        let t = IntChain::from_coeffs(&c, 1, [(0, 5), (1, -4), (2, 3)]).unwrap();
        let r = t.reduce_mod_p(p3);
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![(0, -1), (1, -1)]);
        assert_eq!(t.mass_p(p3), 2.0);
        assert_eq!(r.lift().mass(), t.mass_p(p3));

        let p2 = Modulus::new(2).unwrap();
        let seven = IntChain::from_coeffs(&c, 1, [(0, 7)]).unwrap();
        assert_eq!(seven.reduce_mod_p(p2).residue(0), 1);
        assert!(t.scaled(3).reduce_mod_p(p3).is_zero());
        assert_eq!(t.scaled(3).mass_p(p3), 0.0);
    }

    #[test]
    fn five_edge_mod_three() {
        let c = edges(&[1.0]);
        let t = IntChain::from_coeffs(&c, 1, [(0, 5)]).unwrap();
        assert_eq!(t.mass_p(Modulus::new(3).unwrap()), 1.0);
    }

    #[test]
    fn arbitrary_precision_coefficients() {
        let c = edges(&[1.0]);
        let big: BigInt = BigInt::from(3).pow(80u32) + 1;
        let t = IntChain::from_coeffs(&c, 1, [(0, big)]).unwrap();
        assert_eq!(t.mass_p(Modulus::new(3).unwrap()), 1.0);
        assert_eq!(t.reduce_mod_p(Modulus::new(3).unwrap()).residue(0), 1);
    }

    #[test]
    fn mod_p_arithmetic_wraps() {
        let c = edges(&[1.0, 1.0]);
        let p = Modulus::new(5).unwrap();
        let a = ModPChain::from_residues(&c, p, 1, [(0, 2), (1, 1)]).unwrap();
        let b = ModPChain::from_residues(&c, p, 1, [(0, 3), (1, 1)]).unwrap();
        let s = &a + &b;
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(1, 2)]);
        assert!((&a - &a).is_zero());
    }
}
