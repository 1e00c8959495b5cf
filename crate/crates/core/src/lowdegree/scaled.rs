use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact value `q·ε^d`.
///
/// Moments and cumulants indexed by a matrix of weight `w` are homogeneous of
/// degree `w` in `ε`, so sums only ever combine equal degrees; mixed-degree
/// sums go through [`ScaledRational::substitute`] first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledRational {
    pub eps_degree: u32,
    pub coeff: BigRational,
}

impl ScaledRational {
    pub fn new(eps_degree: u32, coeff: BigRational) -> Self {
        Self { eps_degree, coeff }
    }

    pub fn zero(eps_degree: u32) -> Self {
        Self::new(eps_degree, BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(0, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.eps_degree != other.eps_degree {
            return Err(Error::InvalidParameter(format!(
                "adding ε^{} to ε^{}",
                self.eps_degree, other.eps_degree
            )));
        }
        Ok(Self::new(self.eps_degree, &self.coeff + &other.coeff))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.eps_degree != other.eps_degree {
            return Err(Error::InvalidParameter(format!(
                "subtracting ε^{} from ε^{}",
                other.eps_degree, self.eps_degree
            )));
        }
        Ok(Self::new(self.eps_degree, &self.coeff - &other.coeff))
    }

    /// Exact value for a concrete rational `ε²`. Odd degrees are only defined
    /// when the coefficient vanishes.
    pub fn substitute(&self, eps_sq: &BigRational) -> Result<BigRational> {
        if self.coeff.is_zero() {
            return Ok(BigRational::zero());
        }
        if self.eps_degree % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "ε^{} is not a rational function of ε²",
                self.eps_degree
            )));
        }
        Ok(&self.coeff * pow_rational(eps_sq, self.eps_degree / 2))
    }

    pub fn to_f64(&self, eps: f64) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * eps.powi(self.eps_degree as i32)
    }
}

impl Mul for &ScaledRational {
    type Output = ScaledRational;

    fn mul(self, rhs: Self) -> ScaledRational {
        ScaledRational::new(self.eps_degree + rhs.eps_degree, &self.coeff * &rhs.coeff)
    }
}

impl fmt::Display for ScaledRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·ε^{}", self.coeff, self.eps_degree)
    }
}

impl Serialize for ScaledRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ScaledRational", 3)?;
        st.serialize_field("eps_degree", &self.eps_degree)?;
        st.serialize_field("numerator", &self.coeff.numer().to_string())?;
        st.serialize_field("denominator", &self.coeff.denom().to_string())?;
        st.end()
    }
}

pub(crate) fn pow_rational(x: &BigRational, e: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

pub(crate) fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_add_under_multiplication() {
        let a = ScaledRational::new(2, ratio(1, 2));
        let b = ScaledRational::new(3, ratio(2, 3));
        let c = &a * &b;
        assert_eq!(c.eps_degree, 5);
        assert_eq!(c.coeff, ratio(1, 3));
        assert!(a.checked_add(&b).is_err());
        assert_eq!(a.checked_sub(&a).unwrap(), ScaledRational::zero(2));
    }

    #[test]
    fn substitution() {
        let a = ScaledRational::new(4, ratio(1, 16));
        assert_eq!(a.substitute(&ratio(1, 2)).unwrap(), ratio(1, 64));
        assert!(ScaledRational::new(3, ratio(1, 1)).substitute(&ratio(1, 2)).is_err());
        assert!(ScaledRational::zero(3).substitute(&ratio(1, 2)).unwrap().is_zero());
        assert!((a.to_f64(2.0) - 1.0).abs() < 1e-15);
    }
}
