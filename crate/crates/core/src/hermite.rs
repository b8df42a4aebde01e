//! Hermite and pseudo-Hermite polynomials.

use crate::error::{Error, Result};
use crate::field::{Field, Poly};
use crate::ratfun::XPoly;
use crate::scalar::PiScalar;

/// Physicists' Hermite polynomial from `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: i64) -> Result<XPoly> {
    if n < 0 {
        return Err(Error::NegativeDegree(n));
    }
    let two_x = Poly::monomial(PiScalar::int(2), 1);
    let (mut prev, mut cur) = (Poly::zero(), XPoly::one());
    for k in 0..n {
        let next = two_x.mul(&cur).sub(&prev.scale(&PiScalar::int(2 * k)));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `H_n(i x)`; complex coefficients for odd `n`.
pub fn hermite_imaginary(n: i64) -> Result<XPoly> {
    hermite(n).map(|h| rotate(&h, &PiScalar::i()))
}

/// Real pseudo-Hermite polynomial `(-i)^n H_n(i x)`.
pub fn pseudo_hermite(n: i64) -> Result<XPoly> {
    let unit = PiScalar::i().neg().pow(n as i32);
    hermite_imaginary(n).map(|h| h.scale(&unit))
}

fn rotate(p: &XPoly, c: &PiScalar) -> XPoly {
    let mut pow = PiScalar::one();
    let mut out = Vec::with_capacity(p.coeffs().len());
    for a in p.coeffs() {
        out.push(a.mul(&pow));
        pow = pow.mul(c);
    }
    Poly::from_coeffs(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &XPoly) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.as_i64().expect("integer")).collect()
    }

    #[test]
    fn low_orders() {
        assert_eq!(ints(&hermite(0).unwrap()), vec![1]);
        assert_eq!(ints(&hermite(2).unwrap()), vec![-2, 0, 4]);
        assert_eq!(ints(&hermite(3).unwrap()), vec![0, -12, 0, 8]);
        assert_eq!(ints(&pseudo_hermite(0).unwrap()), vec![1]);
        assert_eq!(ints(&pseudo_hermite(1).unwrap()), vec![0, 2]);
        assert_eq!(ints(&pseudo_hermite(2).unwrap()), vec![2, 0, 4]);
        assert!(hermite(-1).is_err());
    }

    #[test]
    fn pseudo_hermite_is_real() {
        for n in 0..=20 {
            let p = pseudo_hermite(n).unwrap();
            assert!(p.coeffs().iter().all(|c| c.is_real()), "n = {n}");
        }
    }
}
