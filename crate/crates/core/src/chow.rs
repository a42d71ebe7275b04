//! The ring A(X) = Z[t1,t2,t3]/(t1², t2², t3²) of X = P¹×P¹×P¹.
//!
//! A class is stored as its 8 coefficients on the square-free monomials,
//! in the order ∅, {1}, {2}, {3}, {1,2}, {1,3}, {2,3}, {1,2,3}.
//! All arithmetic is checked; overflow is an error, never a wrap.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("integer overflow in Chow ring arithmetic")]
    Overflow,
    #[error("class is not a unit: constant term is {0}, expected 1")]
    NotUnit(i64),
}

pub type Result<T> = std::result::Result<T, ChowError>;

/// Monomial bitmask (bit i set means t_{i+1} divides) for each basis slot.
const SLOT_MASK: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];
/// Inverse of `SLOT_MASK`.
const MASK_SLOT: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

const SLOT_NAMES: [&str; 8] = ["", "t1", "t2", "t3", "t1t2", "t1t3", "t2t3", "t1t2t3"];

pub(crate) fn checked(v: Option<i64>) -> Result<i64> {
    v.ok_or(ChowError::Overflow)
}

/// An element of A(X).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ChowClass(pub [i64; 8]);

impl ChowClass {
    pub const ZERO: ChowClass = ChowClass([0; 8]);
    pub const ONE: ChowClass = ChowClass([1, 0, 0, 0, 0, 0, 0, 0]);

    pub fn constant(c: i64) -> Self {
        let mut v = [0; 8];
        v[0] = c;
        ChowClass(v)
    }

    /// The generator t_i, for i in 1..=3.
    pub fn t(i: usize) -> Self {
        assert!((1..=3).contains(&i), "generator index must be 1, 2 or 3");
        let mut v = [0; 8];
        v[i] = 1;
        ChowClass(v)
    }

    /// The point class t1t2t3.
    pub fn point() -> Self {
        let mut v = [0; 8];
        v[7] = 1;
        ChowClass(v)
    }

    pub fn coeffs(&self) -> &[i64; 8] {
        &self.0
    }

    /// Coefficient of the monomial Π_{i∈S} t_i, with S given as 1-based indices.
    pub fn coeff(&self, subset: &[usize]) -> i64 {
        let mut mask = 0u8;
        for &i in subset {
            assert!((1..=3).contains(&i));
            mask |= 1 << (i - 1);
        }
        self.0[MASK_SLOT[mask as usize]]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut v = [0; 8];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = checked(self.0[k].checked_add(other.0[k]))?;
        }
        Ok(ChowClass(v))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn neg(&self) -> Result<Self> {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        let mut v = [0; 8];
        for (slot, &c) in v.iter_mut().zip(self.0.iter()) {
            *slot = checked(c.checked_mul(k))?;
        }
        Ok(ChowClass(v))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut v = [0i64; 8];
        for (i, &x) in self.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.0.iter().enumerate() {
                if y == 0 || SLOT_MASK[i] & SLOT_MASK[j] != 0 {
                    continue;
                }
                let k = MASK_SLOT[(SLOT_MASK[i] | SLOT_MASK[j]) as usize];
                let p = checked(x.checked_mul(y))?;
                v[k] = checked(v[k].checked_add(p))?;
            }
        }
        Ok(ChowClass(v))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = ChowClass::ONE;
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Coefficient of t1t2t3.
    pub fn degree(&self) -> i64 {
        self.0[7]
    }

    /// The part of codimension `k` (0..=3), other coefficients zeroed.
    pub fn graded_part(&self, k: u32) -> Self {
        let mut v = [0; 8];
        for (slot, mask) in SLOT_MASK.iter().enumerate() {
            if mask.count_ones() == k {
                v[slot] = self.0[slot];
            }
        }
        ChowClass(v)
    }

    /// Multiplicative inverse of a class with constant term 1.
    ///
    /// Writes x = 1 − n with n nilpotent (n⁴ = 0), so x⁻¹ = 1 + n + n² + n³.
    pub fn invert_unit(&self) -> Result<Self> {
        if self.0[0] != 1 {
            return Err(ChowError::NotUnit(self.0[0]));
        }
        let n = ChowClass::ONE.sub(self)?;
        let n2 = n.mul(&n)?;
        let n3 = n2.mul(&n)?;
        ChowClass::ONE.add(&n)?.add(&n2)?.add(&n3)
    }

    /// Relabels t_i as t_{σ(i)}.
    pub fn permute(&self, sigma: &Permutation) -> Self {
        let mut v = [0; 8];
        for (slot, &mask) in SLOT_MASK.iter().enumerate() {
            let mut image = 0u8;
            for i in 0..3 {
                if mask & (1 << i) != 0 {
                    image |= 1 << sigma.0[i];
                }
            }
            v[MASK_SLOT[image as usize]] = self.0[slot];
        }
        ChowClass(v)
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (slot, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = SLOT_NAMES[slot];
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if name.is_empty() || mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "{name}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A permutation of the three factors, stored 0-based: `0[i]` is the image of i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation(pub [usize; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    /// Builds a permutation from a 0-based image array, rejecting non-bijections.
    pub fn new(images: [usize; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if i > 2 || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation(images))
    }

    /// The transposition of two 1-based factor indices.
    pub fn transposition(i: usize, j: usize) -> Self {
        let mut p = [0, 1, 2];
        p.swap(i - 1, j - 1);
        Permutation(p)
    }

    pub fn all() -> [Permutation; 6] {
        [
            Permutation([0, 1, 2]),
            Permutation([0, 2, 1]),
            Permutation([1, 0, 2]),
            Permutation([1, 2, 0]),
            Permutation([2, 0, 1]),
            Permutation([2, 1, 0]),
        ]
    }

    /// Moves the entry at position i to position σ(i).
    pub fn apply<T: Copy>(&self, v: [T; 3]) -> [T; 3] {
        let mut out = v;
        for (i, &x) in v.iter().enumerate() {
            out[self.0[i]] = x;
        }
        out
    }
}

/// A divisor class a1t1 + a2t2 + a3t3, naming the line bundle O_X(a1,a2,a3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Divisor3(pub [i64; 3]);

impl Divisor3 {
    pub const ZERO: Divisor3 = Divisor3([0, 0, 0]);

    pub fn new(a1: i64, a2: i64, a3: i64) -> Self {
        Divisor3([a1, a2, a3])
    }

    pub fn to_chow(&self) -> ChowClass {
        let mut v = [0; 8];
        v[1..4].copy_from_slice(&self.0);
        ChowClass(v)
    }

    /// Reads the codimension-1 part of a class.
    pub fn from_chow(x: &ChowClass) -> Self {
        Divisor3([x.0[1], x.0[2], x.0[3]])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Divisor3([
            checked(self.0[0].checked_add(other.0[0]))?,
            checked(self.0[1].checked_add(other.0[1]))?,
            checked(self.0[2].checked_add(other.0[2]))?,
        ]))
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        Ok(Divisor3([
            checked(self.0[0].checked_mul(k))?,
            checked(self.0[1].checked_mul(k))?,
            checked(self.0[2].checked_mul(k))?,
        ]))
    }

    pub fn neg(&self) -> Result<Self> {
        self.scale(-1)
    }

    pub fn permute(&self, sigma: &Permutation) -> Self {
        Divisor3(sigma.apply(self.0))
    }
}

impl fmt::Display for Divisor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A curve class e1·t2t3 + e2·t1t3 + e3·t1t2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct CurveClass(pub [i64; 3]);

impl CurveClass {
    pub const ZERO: CurveClass = CurveClass([0, 0, 0]);

    pub fn new(e1: i64, e2: i64, e3: i64) -> Self {
        CurveClass([e1, e2, e3])
    }

    pub fn to_chow(&self) -> ChowClass {
        // slots 6, 5, 4 hold t2t3, t1t3, t1t2
        let mut v = [0; 8];
        v[6] = self.0[0];
        v[5] = self.0[1];
        v[4] = self.0[2];
        ChowClass(v)
    }

    /// Reads the codimension-2 part of a class.
    pub fn from_chow(x: &ChowClass) -> Self {
        CurveClass([x.0[6], x.0[5], x.0[4]])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(CurveClass([
            checked(self.0[0].checked_add(other.0[0]))?,
            checked(self.0[1].checked_add(other.0[1]))?,
            checked(self.0[2].checked_add(other.0[2]))?,
        ]))
    }

    /// Total degree e1 + e2 + e3.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn permute(&self, sigma: &Permutation) -> Self {
        CurveClass(sigma.apply(self.0))
    }

    /// Componentwise ≤.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(a: i64, b: i64, c: i64) -> ChowClass {
        Divisor3::new(a, b, c).to_chow()
    }

    #[test]
    fn addition() {
        let t1 = ChowClass::t(1);
        assert_eq!(t1.add(&t1).unwrap(), lin(2, 0, 0));
        assert_eq!(t1.add(&ChowClass::ZERO).unwrap(), t1);
        assert_eq!(lin(2, 1, 1).add(&lin(0, 1, 1)).unwrap(), lin(2, 2, 2));
    }

    #[test]
    fn products() {
        let x = ChowClass::ONE.add(&lin(2, 1, 1)).unwrap();
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq, ChowClass([1, 4, 2, 2, 4, 4, 2, 0]));
        assert!(ChowClass::t(1).mul(&ChowClass::t(1)).unwrap().is_zero());
        let h = lin(1, 1, 1);
        assert_eq!(h.pow(3).unwrap(), ChowClass::point().scale(6).unwrap());
    }

    #[test]
    fn degrees() {
        assert_eq!(lin(1, 1, 1).pow(3).unwrap().degree(), 6);
        assert_eq!(ChowClass::ONE.degree(), 0);
        let d = lin(2, 1, 1).pow(2).unwrap().mul(&lin(2, 0, 0)).unwrap();
        assert_eq!(d.degree(), 4);
        assert_eq!(lin(2, 2, 1).pow(3).unwrap().degree(), 24);
        assert_eq!(lin(2, 2, 2).pow(3).unwrap().degree(), 48);
    }

    #[test]
    fn inverses() {
        assert_eq!(ChowClass::ONE.invert_unit().unwrap(), ChowClass::ONE);
        let x = ChowClass::ONE.sub(&lin(1, 1, 1)).unwrap();
        let inv = x.invert_unit().unwrap();
        assert_eq!(inv, ChowClass([1, 1, 1, 1, 2, 2, 2, 6]));
        assert_eq!(inv.mul(&x).unwrap(), ChowClass::ONE);
        let y = ChowClass::ONE.sub(&lin(2, 0, 0)).unwrap();
        assert_eq!(y.invert_unit().unwrap(), ChowClass::ONE.add(&lin(2, 0, 0)).unwrap());
        assert_eq!(lin(1, 0, 0).invert_unit(), Err(ChowError::NotUnit(0)));
    }

    #[test]
    fn permutations() {
        let s12 = Permutation::transposition(1, 2);
        assert_eq!(ChowClass::t(1).permute(&s12), ChowClass::t(2));
        let s23 = Permutation::transposition(2, 3);
        let x = CurveClass::new(2, 1, 0).to_chow();
        assert_eq!(x.permute(&s23), CurveClass::new(2, 0, 1).to_chow());
        let y = ChowClass([3, 1, -2, 5, 7, 0, 1, 9]);
        assert_eq!(y.permute(&Permutation::IDENTITY), y);
    }

    #[test]
    fn overflow_is_reported() {
        let big = ChowClass::constant(i64::MAX);
        assert_eq!(big.add(&ChowClass::ONE), Err(ChowError::Overflow));
        assert_eq!(big.mul(&ChowClass::constant(2)), Err(ChowError::Overflow));
    }

    #[test]
    fn curve_class_round_trip() {
        let e = CurveClass::new(4, 4, 8);
        assert_eq!(CurveClass::from_chow(&e.to_chow()), e);
        assert_eq!(e.to_chow().coeff(&[2, 3]), 4);
        assert_eq!(e.to_chow().coeff(&[1, 2]), 8);
    }

    #[test]
    fn display() {
        assert_eq!(ChowClass([1, 4, 2, 2, 4, 4, 2, 0]).to_string(), "1 + 4t1 + 2t2 + 2t3 + 4t1t2 + 4t1t3 + 2t2t3");
        assert_eq!(ChowClass([0, -1, 0, 0, 0, 0, 0, 6]).to_string(), "-t1 + 6t1t2t3");
        assert_eq!(ChowClass::ZERO.to_string(), "0");
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&ChowClass::ONE).unwrap();
        assert_eq!(j, "[1,0,0,0,0,0,0,0]");
        assert_eq!(serde_json::to_string(&Divisor3::new(2, 1, 1)).unwrap(), "[2,1,1]");
        let e: CurveClass = serde_json::from_str("[0,3,3]").unwrap();
        assert_eq!(e, CurveClass::new(0, 3, 3));
    }
}
