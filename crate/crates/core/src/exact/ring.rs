//! Minimal algebraic traits shared by every coefficient domain.

use std::fmt::Debug;

/// A commutative ring with unit.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_i64(v: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;

    fn divide(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.times(&inv))
    }
}
