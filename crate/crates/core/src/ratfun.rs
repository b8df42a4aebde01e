//! Rational functions of x over the constant field ℚ(i)(√π).

use crate::field::{Field, Poly};
use crate::scalar::PiScalar;

pub type XPoly = Poly<PiScalar>;

/// Reduced quotient `num/den` of polynomials in x with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: XPoly,
    den: XPoly,
}

impl RationalFunction {
    /// Canonicalize `num/den`; panics on a zero denominator.
    pub fn new(num: XPoly, den: XPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        Self::reduce(num, den)
    }

    pub fn poly(p: XPoly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: PiScalar) -> Self {
        Self::poly(Poly::constant(c))
    }

    pub fn int(v: i64) -> Self {
        Self::constant(PiScalar::int(v))
    }

    /// The function x.
    pub fn x() -> Self {
        Self::poly(Poly::var())
    }

    /// Polynomial from integer coefficients, lowest degree first.
    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::poly(Poly::from_i64s(cs))
    }

    /// `num/den` from integer coefficient lists.
    pub fn ratio_i64(num: &[i64], den: &[i64]) -> Self {
        Self::new(Poly::from_i64s(num), Poly::from_i64s(den))
    }

    fn reduce(num: XPoly, den: XPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let inv = den.coeff(0).inv().expect("nonzero");
            return RationalFunction { num: num.scale(&inv), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lead = den.leading().expect("nonzero").inv().expect("nonzero");
        if lead.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction { num: num.scale(&lead), den: den.scale(&lead) }
        }
    }

    pub fn num(&self) -> &XPoly {
        &self.num
    }

    pub fn den(&self) -> &XPoly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value when the function does not depend on x.
    pub fn as_constant(&self) -> Option<PiScalar> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn derivative(&self) -> Self {
        if self.den.is_one() {
            return Self::poly(self.num.derivative());
        }
        // (N/D)' = (N'D - ND')/D²; any common factor divides D.
        let dn = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        if dn.is_zero() {
            return Self::zero();
        }
        let g = dn.gcd(&self.den);
        let (num, d1) = (dn.exact_div(&g).expect("divides"), self.den.exact_div(&g).expect("divides"));
        let den = d1.mul(&self.den);
        let lead = den.leading().expect("nonzero").inv().expect("nonzero");
        RationalFunction { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv().expect("nonzero base") } else { self.clone() };
        // coprime and monic stay coprime and monic under powers
        RationalFunction { num: base.num.pow(k.unsigned_abs()), den: base.den.pow(k.unsigned_abs()) }
    }

    /// Sum of products `Σ a_k · b_k`, cancelling common factors once at the
    /// end instead of after every partial sum.
    pub fn sum_of_products<'a>(terms: impl IntoIterator<Item = (&'a Self, &'a Self)>) -> Self {
        let parts: Vec<(XPoly, XPoly)> = terms
            .into_iter()
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| (a.num.mul(&b.num), a.den.mul(&b.den)))
            .collect();
        match parts.len() {
            0 => return Self::zero(),
            1 => {
                let (n, d) = parts.into_iter().next().expect("one part");
                return Self::reduce(n, d);
            }
            _ => {}
        }
        let mut lcm = XPoly::one();
        for (_, d) in &parts {
            if d.is_one() || lcm.div_rem(d).1.is_zero() {
                continue;
            }
            if let Some(q) = d.exact_div(&lcm) {
                lcm = lcm.mul(&q);
            } else {
                let g = lcm.gcd(d);
                lcm = lcm.mul(&d.exact_div(&g).expect("gcd divides"));
            }
        }
        let mut num = XPoly::zero();
        for (n, d) in &parts {
            let cofactor = lcm.exact_div(d).expect("lcm is a multiple");
            num = num.add(&n.mul(&cofactor));
        }
        Self::reduce(num, lcm)
    }

    /// Substitute `x -> c·x`.
    pub fn scale_var(&self, c: &PiScalar) -> Self {
        let inner = Poly::monomial(c.clone(), 1);
        Self::new(self.num.compose(&inner), self.den.compose(&inner))
    }

    /// Substitute a rational function for x.
    pub fn compose(&self, inner: &RationalFunction) -> Self {
        let eval = |p: &XPoly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RationalFunction::zero(), |acc, c| acc.mul(inner).add(&RationalFunction::constant(c.clone())))
        };
        eval(&self.num).div(&eval(&self.den)).expect("composition with a pole")
    }

    /// Value at a constant point; `None` at a pole.
    pub fn eval(&self, t: &PiScalar) -> Option<PiScalar> {
        self.num.eval(t).div(&self.den.eval(t))
    }

    /// Parity under x -> -x: `Some(true)` even, `Some(false)` odd.
    pub fn parity(&self) -> Option<bool> {
        if self.is_zero() {
            return Some(true);
        }
        let flipped = self.scale_var(&PiScalar::int(-1));
        if flipped == *self {
            Some(true)
        } else if flipped == self.neg() {
            Some(false)
        } else {
            None
        }
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }
    fn one() -> Self {
        RationalFunction { num: Poly::one(), den: Poly::one() }
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
            return Self::poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            let num = self.num.add(&rhs.num);
            if num.is_zero() {
                return Self::zero();
            }
            let g = num.gcd(&self.den);
            if g.is_one() {
                return RationalFunction { num, den: self.den.clone() };
            }
            return Self::reduce(num, self.den.clone());
        }
        // Henrici: only the gcd of the denominators can cancel.
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            return RationalFunction { num, den: self.den.mul(&rhs.den) };
        }
        let d1 = self.den.exact_div(&g).expect("divides");
        let d2 = rhs.den.exact_div(&g).expect("divides");
        let num = self.num.mul(&d2).add(&rhs.num.mul(&d1));
        if num.is_zero() {
            return Self::zero();
        }
        let den = d1.mul(&rhs.den);
        let h = num.gcd(&g);
        if h.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction { num: num.exact_div(&h).expect("divides"), den: den.exact_div(&h).expect("divides") }
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::poly(self.num.mul(&rhs.num));
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.exact_div(&g1).expect("divides"), rhs.den.exact_div(&g1).expect("divides"))
        };
        let (c, b) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.exact_div(&g2).expect("divides"), self.den.exact_div(&g2).expect("divides"))
        };
        let num = a.mul(&c);
        let den = b.mul(&d);
        let lead = den.leading().expect("nonzero").clone();
        if lead.is_one() {
            RationalFunction { num, den }
        } else {
            let li = lead.inv().expect("nonzero");
            RationalFunction { num: num.scale(&li), den: den.scale(&li) }
        }
    }
    fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }
    fn from_i64(v: i64) -> Self {
        Self::int(v)
    }
}

impl From<PiScalar> for RationalFunction {
    fn from(c: PiScalar) -> Self {
        Self::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_quotient_rule() {
        // d/dx 1/(1+2x²) = -4x/(1+2x²)²
        let f = RationalFunction::ratio_i64(&[1], &[1, 0, 2]);
        let expected = RationalFunction::ratio_i64(&[0, -4], &[1, 0, 4, 0, 4]);
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn sums_cancel_common_factors() {
        // x/(x²-1) - 1/(x²-1)·1 ... (x - 1)/(x² - 1) = 1/(x + 1)
        let a = RationalFunction::ratio_i64(&[0, 1], &[-1, 0, 1]);
        let b = RationalFunction::ratio_i64(&[1], &[-1, 0, 1]);
        assert_eq!(a.sub(&b), RationalFunction::ratio_i64(&[1], &[1, 1]));
        let c = RationalFunction::ratio_i64(&[1], &[-1, 1]);
        let d = RationalFunction::ratio_i64(&[1], &[1, 1]);
        // 1/(x-1) - 1/(x+1) = 2/(x²-1)
        assert_eq!(c.sub(&d), RationalFunction::ratio_i64(&[2], &[-1, 0, 1]));
    }

    #[test]
    fn parity_detection() {
        assert_eq!(RationalFunction::ratio_i64(&[0, 8], &[2, 0, 4]).parity(), Some(false));
        assert_eq!(RationalFunction::ratio_i64(&[1], &[1, 0, 2]).parity(), Some(true));
        assert_eq!(RationalFunction::from_i64s(&[1, 1]).parity(), None);
    }
}
