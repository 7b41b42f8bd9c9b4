//! Integer cells used by the random-access and streaming code.
//!
//! Everything in [`crate::construction`] is written once against [`Cell`] and
//! instantiated twice: with `u64` when the whole sequence length fits in a
//! machine word (with checked arithmetic that panics on overflow), and with
//! [`BigUint`] otherwise.

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub trait Cell: Clone + Ord + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_u64(v: u64) -> Self;
    fn from_big(v: &BigUint) -> Option<Self>;
    fn to_big(&self) -> BigUint;
    fn to_u64(&self) -> Option<u64>;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// `self - rhs` if positive, else zero.
    fn monus(&self, rhs: &Self) -> Self;
    fn div_rem(&self, rhs: &Self) -> (Self, Self);
    fn rem(&self, rhs: &Self) -> Self;
    fn incr(&mut self);

    /// True iff `b` is a legal successor of `self`: an increment or a reset.
    fn steps_to(&self, b: &Self) -> bool;

    fn succ(&self) -> Self {
        let mut s = self.clone();
        s.incr();
        s
    }
}

impl Cell for u64 {
    fn zero() -> Self {
        0
    }
    fn from_u64(v: u64) -> Self {
        v
    }
    fn from_big(v: &BigUint) -> Option<Self> {
        ToPrimitive::to_u64(v)
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn to_u64(&self) -> Option<u64> {
        Some(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(*rhs).expect("u64 cell overflow in add")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("u64 cell overflow in mul")
    }
    fn monus(&self, rhs: &Self) -> Self {
        self.saturating_sub(*rhs)
    }
    fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        (self / rhs, self % rhs)
    }
    fn rem(&self, rhs: &Self) -> Self {
        self % rhs
    }
    fn incr(&mut self) {
        *self = self.checked_add(1).expect("u64 cell overflow in incr");
    }
    fn steps_to(&self, b: &Self) -> bool {
        *b == 0 || self.checked_add(1) == Some(*b)
    }
}

impl Cell for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn from_big(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn to_u64(&self) -> Option<u64> {
        ToPrimitive::to_u64(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn monus(&self, rhs: &Self) -> Self {
        if self > rhs {
            self - rhs
        } else {
            Zero::zero()
        }
    }
    fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        Integer::div_rem(self, rhs)
    }
    fn rem(&self, rhs: &Self) -> Self {
        self % rhs
    }
    fn incr(&mut self) {
        *self += 1u32;
    }
    fn steps_to(&self, b: &Self) -> bool {
        Zero::is_zero(b) || &(self + 1u32) == b
    }
}
