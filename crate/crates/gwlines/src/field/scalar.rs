use std::fmt;

use super::{Field, FieldError};

/// A field element bundled with its context, for API boundaries where
/// mixing contexts must be reported rather than assumed away.
#[derive(Clone, PartialEq)]
pub struct Scalar<F: Field> {
    field: F,
    value: F::Elem,
}

impl<F: Field> fmt::Debug for Scalar<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.format(&self.value), self.field.descriptor())
    }
}

impl<F: Field> fmt::Display for Scalar<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

impl<F: Field> Scalar<F> {
    pub fn new(field: &F, value: F::Elem) -> Self {
        Scalar { field: field.clone(), value }
    }

    pub fn parse(field: &F, text: &str) -> Result<Self, FieldError> {
        Ok(Scalar::new(field, field.parse(text)?))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn value(&self) -> &F::Elem {
        &self.value
    }

    pub fn into_value(self) -> F::Elem {
        self.value
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch(self.field.descriptor(), other.field.descriptor()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(Scalar::new(&self.field, self.field.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(Scalar::new(&self.field, self.field.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(Scalar::new(&self.field, self.field.mul(&self.value, &other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(Scalar::new(&self.field, self.field.div(&self.value, &other.value)?))
    }

    pub fn neg(&self) -> Self {
        Scalar::new(&self.field, self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Ok(Scalar::new(&self.field, self.field.inv(&self.value)?))
    }

    pub fn is_square(&self) -> Result<bool, FieldError> {
        self.field.is_square(&self.value)
    }
}
