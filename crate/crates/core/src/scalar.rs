//! Exact constants: rationals, Gaussian rationals, and the field
//! ℚ(i)(r) of rational functions in the transcendental symbol r = √π.

use crate::field::{Field, Poly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(n: i64, d: i64) -> Self {
        Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Self {
        Rational(BigRational::new(n, d))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Rational(self.0.recip()))
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        GaussRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: self.im.neg() }
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }
}

impl Field for GaussRational {
    fn zero() -> Self {
        Self::real(Rational::zero())
    }
    fn one() -> Self {
        Self::real(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        GaussRational { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }
    fn sub(&self, rhs: &Self) -> Self {
        GaussRational { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(self.re.mul(&rhs.re));
        }
        GaussRational {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }
    fn neg(&self) -> Self {
        GaussRational { re: self.re.neg(), im: self.im.neg() }
    }
    fn inv(&self) -> Option<Self> {
        if self.im.is_zero() {
            return self.re.inv().map(Self::real);
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let ninv = n.inv()?;
        Some(GaussRational { re: self.re.mul(&ninv), im: self.im.neg().mul(&ninv) })
    }
    fn from_i64(v: i64) -> Self {
        Self::real(Rational::from_i64(v))
    }
}

/// Error raised by exact scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Element of ℚ(i)(√π): a reduced quotient of polynomials in the formal
/// symbol r = √π. π is r² and is never rewritten.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiScalar {
    num: Poly<GaussRational>,
    den: Poly<GaussRational>,
}

impl PiScalar {
    /// Build and canonicalize `num/den`.
    pub fn from_parts(
        num: Poly<GaussRational>,
        den: Poly<GaussRational>,
    ) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<GaussRational>, den: Poly<GaussRational>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let inv = den.coeff(0).inv().expect("nonzero denominator");
            return PiScalar { num: num.scale(&inv), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lead = den.leading().expect("nonzero").inv().expect("nonzero");
        PiScalar { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn gauss(g: GaussRational) -> Self {
        PiScalar { num: Poly::constant(g), den: Poly::one() }
    }

    pub fn rational(r: Rational) -> Self {
        Self::gauss(GaussRational::real(r))
    }

    pub fn int(v: i64) -> Self {
        Self::from_i64(v)
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(Rational::new(n, d))
    }

    pub fn i() -> Self {
        Self::gauss(GaussRational::i())
    }

    /// The symbol r = √π.
    pub fn sqrt_pi() -> Self {
        PiScalar { num: Poly::var(), den: Poly::one() }
    }

    pub fn num(&self) -> &Poly<GaussRational> {
        &self.num
    }

    pub fn den(&self) -> &Poly<GaussRational> {
        &self.den
    }

    /// The value as a Gaussian rational when it does not involve r.
    pub fn as_gauss(&self) -> Option<GaussRational> {
        if self.den.is_one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_gauss().filter(GaussRational::is_real).map(|g| g.re)
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_rational().and_then(|r| r.to_i64())
    }

    /// Identity map on canonical values; re-reduces otherwise.
    pub fn canonicalize(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.div(rhs).ok_or(ScalarError::DivisionByZero)
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv().expect("nonzero base for negative power") } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::one(), |acc, _| acc.mul(&base))
    }

    /// Whether the value, read with r = √π real, is real. Only meaningful as
    /// a structural check: every Gaussian coefficient has zero imaginary part
    /// after normalizing the denominator to be monic.
    pub fn is_real(&self) -> bool {
        self.num.coeffs().iter().all(GaussRational::is_real)
            && self.den.coeffs().iter().all(GaussRational::is_real)
    }
}

impl Field for PiScalar {
    fn zero() -> Self {
        PiScalar { num: Poly::zero(), den: Poly::one() }
    }
    fn one() -> Self {
        PiScalar { num: Poly::one(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return PiScalar { num: self.num.add(&rhs.num), den: Poly::one() };
        }
        if self.den == rhs.den {
            return Self::reduce(self.num.add(&rhs.num), self.den.clone());
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::reduce(num, self.den.mul(&rhs.den))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return PiScalar { num: self.num.mul(&rhs.num), den: Poly::one() };
        }
        Self::reduce(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        PiScalar { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }
    fn from_i64(v: i64) -> Self {
        Self::rational(Rational::from_i64(v))
    }
}


impl From<i64> for PiScalar {
    fn from(v: i64) -> Self {
        PiScalar::from_i64(v)
    }
}

impl From<Rational> for PiScalar {
    fn from(v: Rational) -> Self {
        PiScalar::rational(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> PiScalar {
        PiScalar::sqrt_pi()
    }

    #[test]
    fn gaussian_units() {
        let one_plus_i = PiScalar::one().add(&PiScalar::i());
        let one_minus_i = PiScalar::one().sub(&PiScalar::i());
        assert_eq!(one_plus_i.mul(&one_minus_i), PiScalar::int(2));
        assert_eq!(PiScalar::i().mul(&PiScalar::i()), PiScalar::int(-1));
    }

    #[test]
    fn pi_is_not_rewritten() {
        let pi = r().mul(&r());
        assert_eq!(pi.num().degree(), Some(2));
        assert!(pi.as_gauss().is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let two_over_r = PiScalar::int(2).checked_div(&r()).unwrap();
        assert_eq!(two_over_r.den().degree(), Some(1));
        assert_eq!(two_over_r.mul(&r()), PiScalar::int(2));
        assert_eq!(PiScalar::one().checked_div(&PiScalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn canonical_reduction() {
        let r2 = r().mul(&r());
        let rp1 = r().add(&PiScalar::one());
        let rm1 = r().sub(&PiScalar::one());
        assert!(r2.sub(&r2).div(&rp1).unwrap().is_zero());
        assert_eq!(r().mul(&PiScalar::int(2)).div(&PiScalar::int(2)).unwrap(), r());
        let q = r2.sub(&PiScalar::one()).div(&rm1).unwrap();
        assert_eq!(q, rp1);
        assert!(q.den().is_one());
        assert_eq!(q.canonicalize(), q);
    }

    #[test]
    fn zero_tests() {
        assert!(PiScalar::zero().is_zero());
        let ir = PiScalar::i().mul(&r());
        assert!(ir.sub(&ir).is_zero());
        assert!(!PiScalar::frac(1, 12).is_zero());
    }
}
