//! Exact fields of characteristic not 2.
//!
//! A field is a value (its context); elements are plain data interpreted
//! through that context. Arithmetic never mixes contexts implicitly; the
//! checked [`Scalar`] wrapper reports mismatches as errors.

mod descriptor;
mod extension;
mod finite;
pub mod poly;
mod quadratic;
pub mod rational;
mod scalar;

pub use descriptor::AnyField;
pub use extension::{FieldExtension, FiniteExt, Tower, Trivial};
pub use finite::FiniteField;
pub use quadratic::{Quad, QuadExt};
pub use rational::Rationals;
pub use scalar::Scalar;

use std::fmt::Debug;
use std::hash::Hash;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no square class")]
    Zero,
    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cannot parse {0:?}: {1}")]
    Parse(String, String),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("invalid field: {0}")]
    Invalid(String),
}

pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    /// A square root when one exists in this field; `sqrt(0) = Some(0)`.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn descriptor(&self) -> String;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;

    /// Number of elements, for finite fields.
    fn order(&self) -> Option<u64> {
        None
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_square(&self, a: &Self::Elem) -> Result<bool, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::Zero);
        }
        Ok(self.sqrt(a).is_some())
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^n` for a possibly negative exponent.
    fn powi(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem, FieldError> {
        let p = self.pow(a, e.unsigned_abs());
        if e < 0 {
            self.inv(&p)
        } else {
            Ok(p)
        }
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}
