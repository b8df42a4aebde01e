//! Differential operators in the Heun variables. With t = x², the s frame
//! uses s = −2t and the s₁ frame uses s₁ = 2t/(1+2t). Odd functions of x
//! carry the factor x = √t, which in either frame is a power prefactor
//! `base₀^{1/2} (1−u)^{σ} √2^{-1}`. An operator is `prefactor ∘ R` with R
//! rational-coefficient in the frame variable u.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::operator::DiffOperator;
use crate::ratfun::RationalFunction;
use crate::scalar::PiScalar;
use crate::series::{apply_to_prefactored, Image, Prefactor, PrefactoredSeries};

/// Target frame of a change of variables from x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    /// `s = −2x²`, power base `−s`.
    S,
    /// `s₁ = 2x²/(1+2x²)`, power base `s₁`.
    S1,
}

impl Frame {
    /// Sign of the variable inside the power base.
    pub fn base0_sign(self) -> i64 {
        match self {
            Frame::S => -1,
            Frame::S1 => 1,
        }
    }

    /// `t = x²` as a function of the frame variable.
    pub fn t_of_u(self) -> RationalFunction {
        match self {
            Frame::S => RationalFunction::from_i64s(&[0, -1]).scale(&PiScalar::frac(1, 2)),
            Frame::S1 => RationalFunction::ratio_i64(&[0, 1], &[2, -2]),
        }
    }

    /// The factor x as a prefactor.
    pub fn x_prefactor(self) -> Prefactor {
        match self {
            Frame::S => Prefactor::new(1, 0, -1),
            Frame::S1 => Prefactor::new(1, -1, -1),
        }
    }

    /// `du/dx = x · w(u)`; returns `w`.
    pub fn dudx_over_x(self) -> RationalFunction {
        match self {
            Frame::S => RationalFunction::int(-4),
            Frame::S1 => RationalFunction::from_i64s(&[4, -8, 4]),
        }
    }
}

/// `prefactor ∘ op` in a frame variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameOperator {
    pub frame: Frame,
    pub prefactor: Prefactor,
    pub op: DiffOperator,
}

impl FrameOperator {
    pub fn new(frame: Frame, prefactor: Prefactor, op: DiffOperator) -> Self {
        FrameOperator { frame, prefactor, op }
    }

    pub fn rational(frame: Frame, op: DiffOperator) -> Self {
        Self::new(frame, Prefactor::ONE, op)
    }

    /// Multiplication by the prefactor.
    pub fn factor(frame: Frame, prefactor: Prefactor) -> Self {
        Self::new(frame, prefactor, DiffOperator::identity())
    }

    pub fn is_zero(&self) -> bool {
        self.op.is_zero()
    }

    /// Move integer powers and even √2 powers into the rational part, so that
    /// every prefactor exponent is 0 or 1 (doubled exponents 0 or 1).
    pub fn normalize(&self) -> Self {
        if self.op.is_zero() {
            return Self::rational(self.frame, DiffOperator::zero());
        }
        let p = self.prefactor;
        let keep = Prefactor::new(p.rho2.rem_euclid(2), p.sigma2.rem_euclid(2), p.root2.rem_euclid(2));
        let moved = p * keep.inv();
        let m = moved.as_rf(self.frame.base0_sign()).expect("integral part");
        Self::new(self.frame, keep, self.op.premul(&m))
    }

    /// `(P₁∘R₁)∘(P₂∘R₂) = P₁P₂ ∘ (P₂⁻¹R₁P₂) ∘ R₂`.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.frame, rhs.frame, "operators in different frames");
        let ell = rhs.prefactor.log_derivative();
        let r1 = if ell.is_zero() { self.op.clone() } else { self.op.conjugate_log(&ell) };
        Self::new(self.frame, self.prefactor * rhs.prefactor, r1.compose(&rhs.op)).normalize()
    }

    /// Sum; the prefactors must differ by a rational function.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.frame, rhs.frame, "operators in different frames");
        if self.is_zero() {
            return Ok(rhs.normalize());
        }
        if rhs.is_zero() {
            return Ok(self.normalize());
        }
        let ratio = rhs.prefactor * self.prefactor.inv();
        let m = ratio
            .as_rf(self.frame.base0_sign())
            .ok_or_else(|| Error::Invalid("sum of operators with incompatible power prefactors".into()))?;
        Ok(Self::new(self.frame, self.prefactor, self.op.add(&rhs.op.premul(&m))).normalize())
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        Self::new(self.frame, self.prefactor, self.op.scale(c))
    }

    /// Value on a prefactored series.
    pub fn apply(&self, f: &PrefactoredSeries) -> Image {
        let mut img = apply_to_prefactored(&self.op, f);
        img.prefactor = img.prefactor * self.prefactor;
        img
    }
}

/// Even rational function of x as a rational function of t = x².
pub fn even_rf_in_t(f: &RationalFunction) -> Result<RationalFunction> {
    let halve = |p: &crate::ratfun::XPoly| -> Result<crate::ratfun::XPoly> {
        let mut out = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if k % 2 == 1 {
                if !c.is_zero() {
                    return Err(Error::Invalid("coefficient is not even in x".into()));
                }
            } else {
                out.push(c.clone());
            }
        }
        Ok(crate::ratfun::XPoly::from_coeffs(out))
    };
    Ok(RationalFunction::new(halve(f.num())?, halve(f.den())?))
}

/// Split `f = E + x·O` with E and O even, both returned as functions of t.
fn split_parity(f: &RationalFunction) -> Result<(RationalFunction, RationalFunction)> {
    let flipped = f.scale_var(&PiScalar::int(-1));
    let half = PiScalar::frac(1, 2);
    let even = f.add(&flipped).scale(&half);
    let odd = f.sub(&flipped).scale(&half);
    let odd_over_x = odd.div(&RationalFunction::x()).expect("x ≠ 0");
    Ok((even_rf_in_t(&even)?, even_rf_in_t(&odd_over_x)?))
}

/// Rewrite an x-frame operator in the s or s₁ frame.
pub fn from_x(op: &DiffOperator, frame: Frame) -> Result<FrameOperator> {
    let t_of_u = frame.t_of_u();
    let xf = FrameOperator::factor(frame, frame.x_prefactor());
    let w = DiffOperator::from_coeffs(vec![RationalFunction::zero(), frame.dudx_over_x()]);
    let dx = xf.compose(&FrameOperator::rational(frame, w));
    let mut power = FrameOperator::rational(frame, DiffOperator::identity());
    let mut out = FrameOperator::rational(frame, DiffOperator::zero());
    for (j, a) in op.coeffs().iter().enumerate() {
        if j > 0 {
            power = dx.compose(&power);
        }
        if a.is_zero() {
            continue;
        }
        let (even, odd) = split_parity(a)?;
        if !even.is_zero() {
            let m = FrameOperator::rational(frame, DiffOperator::multiplication(even.compose(&t_of_u)));
            out = out.add(&m.compose(&power))?;
        }
        if !odd.is_zero() {
            let m = FrameOperator::rational(frame, DiffOperator::multiplication(odd.compose(&t_of_u)));
            out = out.add(&xf.compose(&m).compose(&power))?;
        }
    }
    Ok(out.normalize())
}

/// `∂_s = −(1/(4x)) D_x` as an x-frame operator.
pub fn d_s_in_x() -> DiffOperator {
    DiffOperator::from_coeffs(vec![RationalFunction::zero(), RationalFunction::ratio_i64(&[-1], &[0, 4])])
}

/// Ladder on `v = dω/ds` induced by an x-frame ladder L without a
/// zero-order term: `∂_s ∘ (L ∘ ∂_s⁻¹)`, written in x.
pub fn derivative_ladder(l: &DiffOperator) -> Result<DiffOperator> {
    let ds = d_s_in_x();
    let (q, r) = l.right_div_rem(&ds);
    if !r.is_zero() {
        return Err(Error::Invalid("ladder has a zero-order term; no induced ladder on derivatives".into()));
    }
    Ok(ds.compose(&q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ratfun::XPoly;

    fn op(name: &str) -> DiffOperator {
        (*catalog::build(name).unwrap()).clone()
    }

    #[test]
    fn gauged_hamiltonian_in_s_is_rational() {
        let h = from_x(&op("H_gauged"), Frame::S).unwrap();
        assert_eq!(h.prefactor, Prefactor::ONE);
        // -D_x² = 8s D_s² + 4 D_s; the first-order part adds (4s + 16s/(1-s)) D_s
        let d2 = h.op.coeff(2);
        assert_eq!(d2, RationalFunction::from_i64s(&[0, 8]));
    }

    #[test]
    fn odd_ladder_carries_half_power() {
        let b = from_x(&op("b~"), Frame::S1).unwrap();
        assert_eq!(b.prefactor, Prefactor::new(1, 1, 1));
        let c = from_x(&op("c~"), Frame::S).unwrap();
        assert_eq!(c.prefactor, Prefactor::new(1, 0, 1));
    }

    #[test]
    fn even_rf_conversion() {
        let f = RationalFunction::ratio_i64(&[1, 0, 3], &[1, 0, 2]);
        let t = even_rf_in_t(&f).unwrap();
        assert_eq!(t, RationalFunction::ratio_i64(&[1, 3], &[1, 2]));
        assert!(even_rf_in_t(&RationalFunction::x()).is_err());
    }

    #[test]
    fn compose_with_factor_conjugates() {
        // D ∘ u^{1/2} = u^{1/2} ∘ (D + 1/(2u))
        let f = FrameOperator::factor(Frame::S1, Prefactor::new(1, 0, 0));
        let d = FrameOperator::rational(Frame::S1, DiffOperator::d());
        let c = d.compose(&f);
        assert_eq!(c.prefactor, Prefactor::new(1, 0, 0));
        assert_eq!(c.op.coeff(0), RationalFunction::ratio_i64(&[1], &[0, 2]));
        let _ = XPoly::one();
    }

    #[test]
    fn derivative_ladder_of_d_s() {
        // ∂_s itself induces ∂_s
        let ds = d_s_in_x();
        assert_eq!(derivative_ladder(&ds).unwrap(), ds);
        assert!(derivative_ladder(&DiffOperator::identity()).is_err());
    }
}
