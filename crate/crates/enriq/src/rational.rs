//! Nonnegative rationals extended with a distinguished infinity.
//!
//! This is the carrier of the extended-real quantales: exact arithmetic
//! only, no floating point anywhere. Values are kept in lowest terms by
//! `num_rational`; `Inf` is absorbing for addition.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// A nonnegative rational in lowest terms, or infinity.
///
/// The derived `Ord` is the usual numeric order with `Inf` greatest.
/// (Quantale orders over this carrier are the *reverse* of it; that
/// reversal lives in the quantale layer, not here.)
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRat {
    Fin(BigRational),
    Inf,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Fin(BigRational::zero())
    }

    pub fn inf() -> Self {
        ExtRat::Inf
    }

    pub fn from_int(n: u64) -> Self {
        ExtRat::Fin(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `num/den`, reduced. Fails on a zero denominator.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid(format!(
                "rational {num}/0 has zero denominator"
            )));
        }
        Ok(ExtRat::Fin(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    /// Builds from arbitrary-precision parts; rejects negatives and zero
    /// denominators.
    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid(format!(
                "rational {num}/0 has zero denominator"
            )));
        }
        let r = BigRational::new(num, den);
        if r.is_negative() {
            return Err(Error::Invalid(format!("rational {r} is negative")));
        }
        Ok(ExtRat::Fin(r))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtRat::Inf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Fin(r) if r.is_zero())
    }

    /// Addition with absorbing infinity.
    pub fn add(&self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Inf, _) | (_, ExtRat::Inf) => ExtRat::Inf,
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a + b),
        }
    }

    /// Truncated subtraction `self ∸ rhs`, extended to infinity:
    /// subtracting infinity gives zero, and a finite amount off infinity
    /// leaves infinity.
    pub fn truncated_sub(&self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (_, ExtRat::Inf) => ExtRat::zero(),
            (ExtRat::Inf, ExtRat::Fin(_)) => ExtRat::Inf,
            (ExtRat::Fin(a), ExtRat::Fin(b)) => {
                if a <= b {
                    ExtRat::zero()
                } else {
                    ExtRat::Fin(a - b)
                }
            }
        }
    }

    pub fn max(&self, rhs: &ExtRat) -> ExtRat {
        if self >= rhs {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    pub fn min(&self, rhs: &ExtRat) -> ExtRat {
        if self <= rhs {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    /// Numerator and denominator of a finite value.
    pub fn parts(&self) -> Option<(&BigInt, &BigInt)> {
        match self {
            ExtRat::Fin(r) => Some((r.numer(), r.denom())),
            ExtRat::Inf => None,
        }
    }
}

impl std::fmt::Display for ExtRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtRat::Inf => write!(f, "inf"),
            ExtRat::Fin(r) => {
                if r.denom() == &BigInt::from(1) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}
