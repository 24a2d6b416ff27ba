//! Field-tagged scalars for callers that only know the field at runtime.

use std::fmt;

use num_rational::BigRational;

use super::field::{Field, FieldDesc, PrimeField, Rationals};
use super::LinalgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A canonical field element that remembers which field it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Residue { value: u64, modulus: u64 },
    Rational(BigRational),
}

impl Scalar {
    pub fn residue(field: PrimeField, value: i64) -> Self {
        Scalar::Residue {
            value: field.from_i64(value),
            modulus: field.modulus(),
        }
    }

    pub fn rational(numer: i64, denom: i64) -> Result<Self, LinalgError> {
        if denom == 0 {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn field(&self) -> FieldDesc {
        match self {
            Scalar::Residue { modulus, .. } => FieldDesc::Prime(*modulus),
            Scalar::Rational(_) => FieldDesc::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::Rational(q) => Rationals.is_zero(q),
        }
    }

    /// Exact `self op other`. Both operands must come from the same field.
    pub fn arith(&self, op: ArithOp, other: &Scalar) -> Result<Scalar, LinalgError> {
        match (self, other) {
            (
                Scalar::Residue { value: a, modulus: p },
                Scalar::Residue { value: b, modulus: q },
            ) if p == q => {
                let f = PrimeField::new(*p)?;
                let value = match op {
                    ArithOp::Add => f.add(a, b),
                    ArithOp::Sub => f.sub(a, b),
                    ArithOp::Mul => f.mul(a, b),
                    ArithOp::Div => f.mul(a, &f.inv(b).ok_or(LinalgError::DivisionByZero)?),
                };
                Ok(Scalar::Residue { value, modulus: *p })
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                let q = Rationals;
                let v = match op {
                    ArithOp::Add => q.add(a, b),
                    ArithOp::Sub => q.sub(a, b),
                    ArithOp::Mul => q.mul(a, b),
                    ArithOp::Div => q.mul(a, &q.inv(b).ok_or(LinalgError::DivisionByZero)?),
                };
                Ok(Scalar::Rational(v))
            }
            _ => Err(LinalgError::FieldMismatch(self.field(), other.field())),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) => write!(f, "{q}"),
        }
    }
}
