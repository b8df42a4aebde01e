//! Exactly truncated power series with mechanical tracking of how many
//! leading coefficients are known, series with half-integer power
//! prefactors, and generalized hypergeometric expansions.

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::{Field, Poly};
use crate::operator::DiffOperator;
use crate::ratfun::{RationalFunction, XPoly};
use crate::report::Status;
use crate::scalar::{PiScalar, Rational};
use crate::text::format_scalar;
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Expansion variable of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    X,
    S,
    S1,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::X => "x",
            Variable::S => "s",
            Variable::S1 => "s1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// `Σ c_k t^k`. A truncated series knows `c_0 .. c_{len-1}` and nothing
/// beyond; an exact series is a polynomial whose missing coefficients are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalSeries {
    variable: Variable,
    coeffs: Vec<PiScalar>,
    exact: bool,
}

fn min_precision(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    }
}

impl FormalSeries {
    /// Series known through order `order` (coefficients `c_0 .. c_order`);
    /// `coeffs` is padded with zeros or cut to that length.
    pub fn truncated(variable: Variable, mut coeffs: Vec<PiScalar>, order: usize) -> Self {
        coeffs.resize(order + 1, PiScalar::zero());
        FormalSeries { variable, coeffs, exact: false }
    }

    /// Series with the first `known` coefficients known; `known` may be 0.
    fn with_precision(variable: Variable, mut coeffs: Vec<PiScalar>, known: Option<usize>) -> Self {
        match known {
            Some(p) => {
                coeffs.resize(p, PiScalar::zero());
                FormalSeries { variable, coeffs, exact: false }
            }
            None => Self::polynomial(variable, coeffs),
        }
    }

    /// Exact polynomial.
    pub fn polynomial(variable: Variable, mut coeffs: Vec<PiScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FormalSeries { variable, coeffs, exact: true }
    }

    pub fn from_xpoly(variable: Variable, p: &XPoly) -> Self {
        Self::polynomial(variable, p.coeffs().to_vec())
    }

    pub fn zero(variable: Variable) -> Self {
        Self::polynomial(variable, Vec::new())
    }

    pub fn one(variable: Variable) -> Self {
        Self::constant(variable, PiScalar::one())
    }

    pub fn constant(variable: Variable, c: PiScalar) -> Self {
        Self::polynomial(variable, vec![c])
    }

    /// `c · t^k`.
    pub fn monomial(variable: Variable, c: PiScalar, k: usize) -> Self {
        let mut coeffs = vec![PiScalar::zero(); k + 1];
        coeffs[k] = c;
        Self::polynomial(variable, coeffs)
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Number of known leading coefficients; `None` when exact.
    pub fn precision(&self) -> Option<usize> {
        (!self.exact).then_some(self.coeffs.len())
    }

    /// Highest guaranteed order, `None` when exact; `Some(-1)` when nothing is known.
    pub fn order(&self) -> Option<i64> {
        self.precision().map(|p| p as i64 - 1)
    }

    /// Coefficient of `t^k` when known.
    pub fn coeff(&self, k: usize) -> Option<PiScalar> {
        match self.coeffs.get(k) {
            Some(c) => Some(c.clone()),
            None if self.exact => Some(PiScalar::zero()),
            None => None,
        }
    }

    /// The stored coefficients (all known ones for a truncated series).
    pub fn coeffs(&self) -> &[PiScalar] {
        &self.coeffs
    }

    /// Index of the first nonzero known coefficient. A truncated series with
    /// no nonzero known coefficient reports its precision; exact zero reports
    /// `usize::MAX`.
    pub fn valuation(&self) -> usize {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => k,
            None if self.exact => usize::MAX,
            None => self.coeffs.len(),
        }
    }

    /// True when every known coefficient is zero.
    pub fn vanishes(&self) -> bool {
        self.coeffs.iter().all(PiScalar::is_zero)
    }

    pub fn parity(&self) -> Parity {
        let odd_zero = self.coeffs.iter().skip(1).step_by(2).all(PiScalar::is_zero);
        let even_zero = self.coeffs.iter().step_by(2).all(PiScalar::is_zero);
        match (odd_zero, even_zero) {
            (true, _) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::None,
        }
    }

    fn same_variable(&self, rhs: &Self) {
        assert_eq!(self.variable, rhs.variable, "series in different variables");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.same_variable(rhs);
        let known = min_precision(self.precision(), rhs.precision());
        let len = known.unwrap_or(self.coeffs.len().max(rhs.coeffs.len()));
        let coeffs = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(PiScalar::zero);
                let b = rhs.coeffs.get(k).cloned().unwrap_or_else(PiScalar::zero);
                a.add(&b)
            })
            .collect();
        Self::with_precision(self.variable, coeffs, known)
    }

    pub fn neg(&self) -> Self {
        FormalSeries { variable: self.variable, coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), exact: self.exact }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        let coeffs = self.coeffs.iter().map(|v| v.mul(c)).collect();
        Self::with_precision(self.variable, coeffs, self.precision())
    }

    /// Product; coefficient k is known when every contributing pair is.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.same_variable(rhs);
        if (self.exact && self.coeffs.is_empty()) || (rhs.exact && rhs.coeffs.is_empty()) {
            return Self::zero(self.variable);
        }
        let bound = |p: Option<usize>, v: usize| p.map(|p| p.saturating_add(v));
        let known = min_precision(bound(self.precision(), rhs.valuation()), bound(rhs.precision(), self.valuation()));
        let len = known.unwrap_or((self.coeffs.len() + rhs.coeffs.len()).saturating_sub(1));
        let mut coeffs = vec![PiScalar::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        Self::with_precision(self.variable, coeffs, known)
    }

    pub fn mul_xpoly(&self, p: &XPoly) -> Self {
        self.mul(&Self::from_xpoly(self.variable, p))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.variable), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let coeffs: Vec<PiScalar> =
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.mul(&PiScalar::int(k as i64))).collect();
        Self::with_precision(self.variable, coeffs, self.precision().map(|p| p.saturating_sub(1)))
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.derivative())
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![PiScalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::with_precision(self.variable, coeffs, self.precision().map(|p| p + k))
    }

    /// Divide by `t^k`; the first k coefficients must be known zeros.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        for j in 0..k {
            match self.coeff(j) {
                Some(c) if c.is_zero() => {}
                _ => return Err(Error::Invalid(format!("series is not divisible by {}^{k}", self.variable.name()))),
            }
        }
        let coeffs = self.coeffs.iter().skip(k).cloned().collect();
        Ok(Self::with_precision(self.variable, coeffs, self.precision().map(|p| p - k)))
    }

    /// Keep at most `known` coefficients.
    pub fn truncate(&self, known: usize) -> Self {
        let known = min_precision(self.precision(), Some(known));
        let coeffs = self.coeffs.iter().take(known.unwrap_or(usize::MAX)).cloned().collect();
        Self::with_precision(self.variable, coeffs, known)
    }

    /// `1/f` through order `order`; needs `c_0 ≠ 0`.
    pub fn reciprocal(&self, order: usize) -> Result<Self> {
        let c0 = self.coeff(0).ok_or(Error::ZeroDivisor)?;
        let inv0 = c0.inv().ok_or(Error::ZeroDivisor)?;
        let len = min_precision(self.precision(), Some(order + 1)).expect("bounded");
        let mut out: Vec<PiScalar> = Vec::with_capacity(len);
        out.push(inv0.clone());
        for k in 1..len {
            let mut acc = PiScalar::zero();
            for j in 1..=k {
                if let Some(a) = self.coeffs.get(j) {
                    if !a.is_zero() {
                        acc = acc.add(&a.mul(&out[k - j]));
                    }
                }
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(Self::with_precision(self.variable, out, Some(len)))
    }

    /// `f(g(u))` for an inner series `g` with zero constant term, known through
    /// at most `order` unless both series are exact. The result lives in the
    /// inner variable.
    pub fn compose(&self, inner: &Self, order: usize) -> Result<Self> {
        if !inner.coeff(0).is_some_and(|c| c.is_zero()) {
            return Err(Error::Invalid("inner series must have a vanishing constant term".into()));
        }
        let v = inner.valuation().max(1);
        let cap = if self.exact && inner.exact {
            None
        } else {
            Some(self.precision().map_or(order + 1, |p| (order + 1).min(p.saturating_mul(v))))
        };
        let cut = |f: Self| match cap {
            Some(c) => f.truncate(c),
            None => f,
        };
        let mut acc = Self::zero(inner.variable);
        let mut power = Self::one(inner.variable);
        for (k, c) in self.coeffs.iter().enumerate() {
            if cap.is_some_and(|c| k.saturating_mul(v) >= c) {
                break;
            }
            if k > 0 {
                power = cut(power.mul(inner));
            }
            if !c.is_zero() {
                acc = acc.add(&power.scale(c));
            }
        }
        Ok(cut(acc))
    }

    /// Substitute `t -> t^k`, k ≥ 1.
    pub fn stretch(&self, k: usize, variable: Variable) -> Self {
        let mut coeffs = vec![PiScalar::zero(); self.coeffs.len() * k];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j * k] = c.clone();
        }
        Self::with_precision(variable, coeffs, self.precision().map(|p| p * k))
    }

    /// Keep every k-th coefficient: `Σ c_{jk} t^j`. The others must vanish.
    pub fn compress(&self, k: usize, variable: Variable) -> Result<Self> {
        for (j, c) in self.coeffs.iter().enumerate() {
            if j % k != 0 && !c.is_zero() {
                return Err(Error::Invalid(format!("series is not a function of {}^{k}", self.variable.name())));
            }
        }
        let coeffs: Vec<PiScalar> = self.coeffs.iter().step_by(k).cloned().collect();
        let known = self.precision().map(|p| p.div_ceil(k));
        Ok(Self::with_precision(variable, coeffs, known))
    }

    /// Relabel the variable.
    pub fn rename(&self, variable: Variable) -> Self {
        FormalSeries { variable, ..self.clone() }
    }

    /// Series of a rational function about 0, known through `order`.
    pub fn from_rf(variable: Variable, f: &RationalFunction, order: usize) -> Result<Self> {
        let num = Self::from_xpoly(variable, f.num());
        if f.den().is_one() {
            return Ok(num);
        }
        let den = Self::from_xpoly(variable, f.den());
        Ok(num.mul(&den.reciprocal(order)?).truncate(order + 1))
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = match self.order() {
            None => "exact".to_string(),
            Some(o) => o.to_string(),
        };
        let cs: Vec<String> = self.coeffs.iter().map(format_scalar).collect();
        write!(f, "{}, {}, [{}]", self.variable.name(), order, cs.join(", "))
    }
}

/// Polynomial coefficients `D·a_j` of an operator cleared of denominators,
/// together with the common denominator `D`.
pub fn clear_denominators(op: &DiffOperator) -> (Vec<XPoly>, XPoly) {
    let mut lcm = XPoly::one();
    for a in op.coeffs() {
        let d = a.den();
        if d.is_one() {
            continue;
        }
        let g = lcm.gcd(d);
        lcm = lcm.mul(&d.exact_div(&g).expect("gcd divides"));
    }
    let polys = op
        .coeffs()
        .iter()
        .map(|a| a.num().mul(&lcm.exact_div(a.den()).expect("lcm is a multiple")))
        .collect();
    (polys, lcm)
}

/// `Σ p_j f^{(j)}` for polynomial coefficients.
pub fn apply_poly_op(coeffs: &[XPoly], f: &FormalSeries) -> FormalSeries {
    let mut out = FormalSeries::zero(f.variable());
    let mut deriv = f.clone();
    for (j, p) in coeffs.iter().enumerate() {
        if j > 0 {
            deriv = deriv.derivative();
        }
        if !p.is_zero() {
            out = out.add(&deriv.mul_xpoly(p));
        }
    }
    out
}

/// Outcome of comparing `lhs` with `κ·rhs` up to the guaranteed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub status: Status,
    /// The constant λ with `lhs = λ·rhs` when one exists.
    pub lambda: Option<PiScalar>,
    /// Number of coefficients compared; `None` when both sides are exact.
    pub known: Option<usize>,
    pub note: Option<String>,
}

impl Comparison {
    /// Highest order compared, as a display string.
    pub fn order_text(&self) -> String {
        match self.known {
            None => "exact".into(),
            Some(k) => (k as i64 - 1).to_string(),
        }
    }
}

/// Compare `lhs` with `κ·rhs`. A different constant multiple is a soft
/// mismatch; anything else is a failure. Fewer than `min_known` compared
/// coefficients is a failure.
pub fn compare_scaled(lhs: &FormalSeries, rhs: &FormalSeries, kappa: &PiScalar, min_known: usize) -> Comparison {
    let known = min_precision(lhs.precision(), rhs.precision());
    let fail = |note: String, lambda: Option<PiScalar>| Comparison { status: Status::Fail, lambda, known, note: Some(note) };
    if known.is_some_and(|k| k < min_known) {
        return fail(format!("only {} coefficients are guaranteed", known.unwrap_or(0)), None);
    }
    let diff = lhs.sub(&rhs.scale(kappa));
    if diff.vanishes() {
        return Comparison { status: Status::Pass, lambda: Some(kappa.clone()), known, note: None };
    }
    let len = known.unwrap_or(lhs.coeffs.len().max(rhs.coeffs.len()));
    let pivot = (0..len).find(|&k| rhs.coeff(k).is_some_and(|c| !c.is_zero()));
    let Some(k) = pivot else {
        return fail("the right-hand side vanishes but the image does not".into(), None);
    };
    let lambda = lhs.coeff(k).expect("known").div(&rhs.coeff(k).expect("known")).expect("nonzero pivot");
    if lhs.sub(&rhs.scale(&lambda)).vanishes() {
        Comparison {
            status: Status::SoftMismatch,
            lambda: Some(lambda),
            known,
            note: Some("the image is a different multiple of the right-hand side".into()),
        }
    } else {
        fail("the image is not proportional to the right-hand side".into(), None)
    }
}

/// Exponents of the power prefactor `base₀^{ρ} · base₁^{σ} · √2^{k}` of a
/// series or operator, stored doubled for ρ and σ. In the s₁ frame
/// `base₀ = s₁`, in the s frame `base₀ = −s`; `base₁ = 1 − variable`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Prefactor {
    pub rho2: i64,
    pub sigma2: i64,
    pub root2: i64,
}

impl std::ops::Mul for Prefactor {
    type Output = Prefactor;

    fn mul(self, rhs: Prefactor) -> Prefactor {
        Prefactor { rho2: self.rho2 + rhs.rho2, sigma2: self.sigma2 + rhs.sigma2, root2: self.root2 + rhs.root2 }
    }
}

impl Prefactor {
    pub const ONE: Prefactor = Prefactor { rho2: 0, sigma2: 0, root2: 0 };

    pub fn new(rho2: i64, sigma2: i64, root2: i64) -> Self {
        Prefactor { rho2, sigma2, root2 }
    }


    pub fn inv(self) -> Prefactor {
        Prefactor { rho2: -self.rho2, sigma2: -self.sigma2, root2: -self.root2 }
    }

    /// True when every exponent is an integer and the √2 power is even,
    /// so the prefactor is a rational function.
    pub fn is_rational(self) -> bool {
        self.rho2 % 2 == 0 && self.sigma2 % 2 == 0 && self.root2 % 2 == 0
    }

    /// Logarithmic derivative `ρ/u − σ/(1−u)`.
    pub fn log_derivative(self) -> RationalFunction {
        let a = RationalFunction::ratio_i64(&[1], &[0, 1]).scale(&PiScalar::frac(self.rho2, 2));
        let b = RationalFunction::ratio_i64(&[1], &[1, -1]).scale(&PiScalar::frac(self.sigma2, 2));
        a.sub(&b)
    }

    /// The prefactor as a rational function when [`Prefactor::is_rational`];
    /// `base0_sign` is +1 for the s₁ frame and −1 for the s frame.
    pub fn as_rf(self, base0_sign: i64) -> Option<RationalFunction> {
        if !self.is_rational() {
            return None;
        }
        let base0 = RationalFunction::from_i64s(&[0, base0_sign]);
        let base1 = RationalFunction::from_i64s(&[1, -1]);
        let two = PiScalar::int(2).pow((self.root2 / 2) as i32);
        Some(base0.pow((self.rho2 / 2) as i32).mul(&base1.pow((self.sigma2 / 2) as i32)).scale(&two))
    }

    /// Half-integer exponents as text, e.g. `s1^(1/2) (1-s1)^(-3/2) √2^-1`.
    pub fn text(self, variable: Variable) -> String {
        let half = |v: i64| if v % 2 == 0 { (v / 2).to_string() } else { format!("{v}/2") };
        let base0 = match variable {
            Variable::S => "(-s)".to_string(),
            v => v.name().to_string(),
        };
        let mut parts = Vec::new();
        if self.rho2 != 0 {
            parts.push(format!("{base0}^({})", half(self.rho2)));
        }
        if self.sigma2 != 0 {
            parts.push(format!("(1-{})^({})", variable.name(), half(self.sigma2)));
        }
        if self.root2 != 0 {
            parts.push(format!("sqrt(2)^({})", self.root2));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

/// `prefactor · body`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefactoredSeries {
    pub prefactor: Prefactor,
    pub body: FormalSeries,
}

impl PrefactoredSeries {
    pub fn new(prefactor: Prefactor, body: FormalSeries) -> Self {
        PrefactoredSeries { prefactor, body }
    }

    pub fn plain(body: FormalSeries) -> Self {
        Self::new(Prefactor::ONE, body)
    }

    /// `rho` and `sigma` as doubled integers.
    pub fn rho2(&self) -> i64 {
        self.prefactor.rho2
    }

    pub fn sigma2(&self) -> i64 {
        self.prefactor.sigma2
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        Self::new(self.prefactor, self.body.scale(c))
    }

    pub fn mul_xpoly(&self, p: &XPoly) -> Self {
        Self::new(self.prefactor, self.body.mul_xpoly(p))
    }

    pub fn mul_prefactor(&self, p: Prefactor) -> Self {
        Self::new(self.prefactor * p, self.body.clone())
    }

    /// `d/du [u^ρ (1−u)^σ B] = u^{ρ−1} (1−u)^{σ−1} [ρ(1−u)B − σuB + u(1−u)B']`,
    /// for the s₁ frame. The s frame base `−s` gives the same formula.
    pub fn derivative(&self) -> Self {
        let v = self.body.variable();
        let rho = PiScalar::frac(self.prefactor.rho2, 2);
        let sigma = PiScalar::frac(self.prefactor.sigma2, 2);
        let one_minus = Poly::from_i64s(&[1, -1]);
        let u = Poly::from_i64s(&[0, 1]);
        let u_one_minus = Poly::from_i64s(&[0, 1, -1]);
        let body = self
            .body
            .mul_xpoly(&one_minus)
            .scale(&rho)
            .sub(&self.body.mul_xpoly(&u).scale(&sigma))
            .add(&self.body.derivative().mul_xpoly(&u_one_minus));
        debug_assert_eq!(body.variable(), v);
        Self::new(self.prefactor * Prefactor::new(-2, -2, 0), body)
    }
}

impl fmt::Display for PrefactoredSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * ({})", self.prefactor.text(self.body.variable()), self.body)
    }
}

/// `prefactor · body / den`: the value of a rational-coefficient operator on
/// a prefactored series, with denominators cleared into `den`.
#[derive(Clone, Debug)]
pub struct Image {
    pub prefactor: Prefactor,
    pub body: FormalSeries,
    pub den: XPoly,
}

impl From<PrefactoredSeries> for Image {
    fn from(f: PrefactoredSeries) -> Self {
        Image { prefactor: f.prefactor, body: f.body, den: XPoly::one() }
    }
}

impl From<FormalSeries> for Image {
    fn from(f: FormalSeries) -> Self {
        Image { prefactor: Prefactor::ONE, body: f, den: XPoly::one() }
    }
}

/// Apply `op` to `f`: conjugate by the prefactor of f, clear denominators and
/// act on the body.
pub fn apply_to_prefactored(op: &DiffOperator, f: &PrefactoredSeries) -> Image {
    let ell = f.prefactor.log_derivative();
    let conj = if ell.is_zero() { op.clone() } else { op.conjugate_log(&ell) };
    let (polys, den) = clear_denominators(&conj);
    Image { prefactor: f.prefactor, body: apply_poly_op(&polys, &f.body), den }
}

/// Compare two images `lhs = κ·rhs` after moving the rational part of the
/// prefactor ratio and both denominators to polynomial multipliers.
/// `base0_sign` selects the frame base (see [`Prefactor::as_rf`]).
pub fn compare_images(lhs: &Image, rhs: &Image, kappa: &PiScalar, min_known: usize, base0_sign: i64) -> Comparison {
    let ratio = lhs.prefactor * rhs.prefactor.inv();
    if !ratio.is_rational() {
        return Comparison {
            status: Status::Fail,
            lambda: None,
            known: None,
            note: Some("the two sides carry prefactors that differ by a fractional power".into()),
        };
    }
    let r = ratio.as_rf(base0_sign).expect("rational prefactor ratio");
    // lhs.body · rhs.den · r = κ · rhs.body · lhs.den
    let left = lhs.body.mul_xpoly(&rhs.den.mul(r.num()));
    let right = rhs.body.mul_xpoly(&lhs.den.mul(r.den()));
    compare_scaled(&left, &right, kappa, min_known)
}

/// Rational coefficient of μₙ at `x^{2k}`.
pub fn mu_coefficient(n: i64, k: usize) -> Rational {
    let n = BigInt::from(n);
    let r = |v: BigInt| Rational::from_big(v, BigInt::one());
    match k {
        0 => Rational::from_i64(1),
        1 => r(-n),
        2 => Rational::from_big(n.clone() * (n - 10i64), BigInt::from(6)),
        _ => {
            let k_i = k as i64;
            let mut num = BigInt::from(2).pow(k as u32) * n.clone() * (n.clone() - ((2 * k_i - 1).pow(2) + 1));
            if k % 2 == 1 {
                num = -num;
            }
            for j in 1..=(k_i - 2) {
                num *= n.clone() - 2 * (1 + j);
            }
            Rational::from_big(num, factorial(2 * k))
        }
    }
}

/// Rational coefficient of νₙ at `x^{2k−1}`, k ≥ 1.
pub fn nu_coefficient(n: i64, k: usize) -> Rational {
    let n = BigInt::from(n);
    match k {
        0 => Rational::from_i64(0),
        1 => Rational::from_i64(1),
        2 => Rational::from_big(-(n - 5i64), BigInt::from(3)),
        _ => {
            let k_i = k as i64;
            let mut num = BigInt::from(2).pow(k as u32 - 1) * (n.clone() - ((2 * (k_i - 1)).pow(2) + 1));
            if k.is_multiple_of(2) {
                num = -num;
            }
            for j in 1..=(k_i - 2) {
                num *= n.clone() - 2 * (1 + j) + 1;
            }
            Rational::from_big(num, factorial(2 * k - 1))
        }
    }
}

fn factorial(m: usize) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// The even solution μₙ of the gauged ODE through order `order` in x.
pub fn mu_series(n: i64, order: usize) -> FormalSeries {
    let mut coeffs = vec![PiScalar::zero(); order + 1];
    for k in 0..=order / 2 {
        coeffs[2 * k] = PiScalar::rational(mu_coefficient(n, k));
    }
    FormalSeries::truncated(Variable::X, coeffs, order)
}

/// The odd solution νₙ of the gauged ODE through order `order` in x.
pub fn nu_series(n: i64, order: usize) -> FormalSeries {
    let mut coeffs = vec![PiScalar::zero(); order + 1];
    for k in 1..=order.div_ceil(2) {
        coeffs[2 * k - 1] = PiScalar::rational(nu_coefficient(n, k));
    }
    FormalSeries::truncated(Variable::X, coeffs, order)
}

/// Argument map of a hypergeometric series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArgumentMap {
    /// `c · t^k` in the given variable; c = 0 is the zero map.
    Monomial { variable: Variable, coeff: PiScalar, power: usize },
    /// `s₁/(2 − 2s₁)`.
    S1Ratio,
}

impl ArgumentMap {
    pub fn x_squared() -> Self {
        ArgumentMap::Monomial { variable: Variable::X, coeff: PiScalar::one(), power: 2 }
    }

    pub fn minus_half_s() -> Self {
        ArgumentMap::Monomial { variable: Variable::S, coeff: PiScalar::frac(-1, 2), power: 1 }
    }

    pub fn variable(&self) -> Variable {
        match self {
            ArgumentMap::Monomial { variable, .. } => *variable,
            ArgumentMap::S1Ratio => Variable::S1,
        }
    }

    /// The argument as a series known through `order`.
    pub fn series(&self, order: usize) -> FormalSeries {
        match self {
            ArgumentMap::Monomial { variable, coeff, power } => FormalSeries::monomial(*variable, coeff.clone(), *power),
            ArgumentMap::S1Ratio => {
                let mut coeffs = vec![PiScalar::frac(1, 2); order + 1];
                coeffs[0] = PiScalar::zero();
                FormalSeries::truncated(Variable::S1, coeffs, order)
            }
        }
    }

    fn valuation(&self) -> Option<usize> {
        match self {
            ArgumentMap::Monomial { coeff, power, .. } => (!coeff.is_zero()).then_some(*power),
            ArgumentMap::S1Ratio => Some(1),
        }
    }
}

/// `pFq(upper; lower; argument)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeomSpec {
    pub upper: Vec<PiScalar>,
    pub lower: Vec<PiScalar>,
    pub argument: ArgumentMap,
}

impl HypergeomSpec {
    pub fn new(upper: Vec<PiScalar>, lower: Vec<PiScalar>, argument: ArgumentMap) -> Self {
        HypergeomSpec { upper, lower, argument }
    }
}

/// Exact expansion of a generalized hypergeometric series through `order`,
/// from the term ratio `t_{k+1}/t_k = Π(a_i+k) / (Π(b_j+k) (k+1))`.
/// A terminating series over a polynomial argument is exact.
pub fn hypergeom_series(spec: &HypergeomSpec, order: usize) -> Result<FormalSeries> {
    let variable = spec.argument.variable();
    let Some(v) = spec.argument.valuation() else {
        return Ok(FormalSeries::one(variable));
    };
    let reach = order / v;
    let mut terms = vec![PiScalar::one()];
    let mut terminated = false;
    for k in 0..reach {
        let kk = PiScalar::int(k as i64);
        let num = spec.upper.iter().fold(PiScalar::one(), |acc, a| acc.mul(&a.add(&kk)));
        let t = terms[k].mul(&num);
        if t.is_zero() {
            terminated = true;
            break;
        }
        let den = spec.lower.iter().fold(PiScalar::int(k as i64 + 1), |acc, b| acc.mul(&b.add(&kk)));
        let Some(next) = t.div(&den) else {
            let bad = spec.lower.iter().find(|b| b.add(&kk).is_zero()).expect("a vanishing lower factor");
            return Err(Error::InadmissibleParameter(format_scalar(bad)));
        };
        terms.push(next);
    }
    if !terminated && terms.len() == reach + 1 {
        // the next term decides whether the polynomial is complete
        let kk = PiScalar::int(reach as i64);
        terminated = spec.upper.iter().any(|a| a.add(&kk).is_zero());
    }
    let outer = if terminated {
        FormalSeries::polynomial(variable, terms)
    } else {
        FormalSeries::truncated(variable, terms, reach)
    };
    let z = spec.argument.series(order);
    let result = outer.compose(&z, order)?;
    Ok(if result.is_exact() { result } else { result.truncate(order + 1) })
}

/// Derivative of the hypergeometric series with respect to its first upper
/// parameter. With `t_{k+1} = t_k r_k` and `r_k = (a₀+k) ρ_k`, the
/// derivative terms obey `d_{k+1} = d_k r_k + t_k ρ_k`.
pub fn hypergeom_upper_derivative(spec: &HypergeomSpec, order: usize) -> Result<FormalSeries> {
    let variable = spec.argument.variable();
    let Some(a0) = spec.upper.first() else {
        return Err(Error::Invalid("no upper parameter to differentiate".into()));
    };
    let Some(v) = spec.argument.valuation() else {
        return Ok(FormalSeries::zero(variable));
    };
    let reach = order / v;
    let mut t = PiScalar::one();
    let mut d = vec![PiScalar::zero()];
    for k in 0..reach {
        let kk = PiScalar::int(k as i64);
        let rest_num = spec.upper[1..].iter().fold(PiScalar::one(), |acc, a| acc.mul(&a.add(&kk)));
        let den = spec.lower.iter().fold(PiScalar::int(k as i64 + 1), |acc, b| acc.mul(&b.add(&kk)));
        let Some(rho) = rest_num.div(&den) else {
            let bad = spec.lower.iter().find(|b| b.add(&kk).is_zero()).expect("a vanishing lower factor");
            return Err(Error::InadmissibleParameter(format_scalar(bad)));
        };
        let r = rho.mul(&a0.add(&kk));
        d.push(d[k].mul(&r).add(&t.mul(&rho)));
        t = t.mul(&r);
    }
    let outer = FormalSeries::truncated(variable, d, reach);
    let z = spec.argument.series(order);
    Ok(outer.compose(&z, order)?.truncate(order + 1))
}

/// Series of an element without quadratures: `E^e = e^{e x²/2}`,
/// `F = erf x`, rational coefficients expanded about 0.
pub fn element_series(a: &AlgebraElement, order: usize) -> Result<FormalSeries> {
    let mut out = FormalSeries::zero(Variable::X);
    for (m, c) in a.terms() {
        if !m.ints.is_empty() {
            return Err(Error::Invalid("quadrature generators have no series here".into()));
        }
        let mut term = FormalSeries::from_rf(Variable::X, c, order)?;
        if m.e != 0 {
            term = term.mul(&exp_series(m.e, order));
        }
        if m.f > 0 {
            term = term.mul(&erf_series(order).pow(m.f));
        }
        out = out.add(&term.truncate(order + 1));
    }
    Ok(out.truncate(order + 1))
}

/// `e^{e x²/2}` through `order`.
pub fn exp_series(e: i32, order: usize) -> FormalSeries {
    let mut coeffs = vec![PiScalar::zero(); order + 1];
    let half = PiScalar::frac(e as i64, 2);
    let mut term = PiScalar::one();
    for k in 0..=order / 2 {
        if k > 0 {
            term = term.mul(&half).div(&PiScalar::int(k as i64)).expect("k ≠ 0");
        }
        coeffs[2 * k] = term.clone();
    }
    FormalSeries::truncated(Variable::X, coeffs, order)
}

/// `erf x = (2/√π) Σ (−1)^k x^{2k+1} / (k! (2k+1))` through `order`.
pub fn erf_series(order: usize) -> FormalSeries {
    let mut coeffs = vec![PiScalar::zero(); order + 1];
    let lead = PiScalar::int(2).div(&PiScalar::sqrt_pi()).expect("r ≠ 0");
    let mut fact = BigInt::one();
    for k in 0..=(order.saturating_sub(1)) / 2 {
        if 2 * k + 1 > order {
            break;
        }
        if k > 0 {
            fact *= BigInt::from(k);
        }
        let mut r = Rational::from_big(BigInt::one(), fact.clone() * BigInt::from(2 * k + 1));
        if k % 2 == 1 {
            r = r.neg();
        }
        coeffs[2 * k + 1] = lead.mul(&PiScalar::rational(r));
    }
    FormalSeries::truncated(Variable::X, coeffs, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> PiScalar {
        PiScalar::frac(n, d)
    }

    fn ints(cs: &[i64]) -> Vec<PiScalar> {
        cs.iter().map(|&c| PiScalar::int(c)).collect()
    }

    /// Coefficients from the gauged ODE recurrence
    /// `(m+2)(m+1) a_{m+2} = −(2m(m−1) − 10m + 2n) a_m − (4n − 4(m−2)) a_{m−2}`.
    fn ode_recurrence(n: i64, a0: i64, a1: i64, order: usize) -> Vec<PiScalar> {
        let mut a = vec![PiScalar::zero(); order + 1];
        a[0] = PiScalar::int(a0);
        a[1] = PiScalar::int(a1);
        for m in 0..order - 1 {
            let mi = m as i64;
            let mut rhs = a[m].mul(&PiScalar::int(-(2 * mi * (mi - 1) - 10 * mi + 2 * n)));
            if m >= 2 {
                rhs = rhs.sub(&a[m - 2].mul(&PiScalar::int(4 * n - 4 * (mi - 2))));
            }
            a[m + 2] = rhs.div(&PiScalar::int((mi + 2) * (mi + 1))).unwrap();
        }
        a
    }

    #[test]
    fn mu_nu_examples() {
        assert_eq!(mu_series(1, 4).coeffs(), &[q(1, 1), q(0, 1), q(-1, 1), q(0, 1), q(-3, 2)]);
        assert_eq!(nu_series(1, 3).coeffs(), &[q(0, 1), q(1, 1), q(0, 1), q(4, 3)]);
        assert!(mu_series(0, 20).sub(&FormalSeries::one(Variable::X)).vanishes());
    }

    #[test]
    fn sums_match_ode_recurrence() {
        for n in -6..=8 {
            let mu = mu_series(n, 24);
            let nu = nu_series(n, 24);
            assert_eq!(mu.coeffs(), ode_recurrence(n, 1, 0, 24).as_slice(), "mu {n}");
            assert_eq!(nu.coeffs(), ode_recurrence(n, 0, 1, 24).as_slice(), "nu {n}");
        }
    }

    #[test]
    fn precision_tracking() {
        let f = FormalSeries::truncated(Variable::X, ints(&[1, 2, 3]), 2);
        let x2 = FormalSeries::monomial(Variable::X, PiScalar::one(), 2);
        assert_eq!(f.mul(&x2).order(), Some(4));
        assert_eq!(f.derivative().order(), Some(1));
        assert_eq!(f.mul(&f).order(), Some(2));
        let g = FormalSeries::truncated(Variable::X, ints(&[0, 1, 5]), 2);
        // valuation 1 on g lets the product reach one order further
        assert_eq!(f.mul(&g).order(), Some(2));
        assert_eq!(g.mul(&g).order(), Some(3));
        assert!(x2.mul(&x2).is_exact());
    }

    #[test]
    fn reciprocal_and_composition() {
        // 1/(1 - t) = Σ t^k
        let one_minus = FormalSeries::polynomial(Variable::S1, ints(&[1, -1]));
        let geo = one_minus.reciprocal(6).unwrap();
        assert_eq!(geo.coeffs(), ints(&[1; 7]).as_slice());
        // (1 + t)^2 at t = u/(1-u)·... via composition with u + u²
        let outer = FormalSeries::polynomial(Variable::S, ints(&[1, 2, 1]));
        let inner = FormalSeries::truncated(Variable::S1, ints(&[0, 1, 1]), 5);
        let c = outer.compose(&inner, 5).unwrap();
        // 1 + 2(u+u²) + (u+u²)² = 1 + 2u + 3u² + 2u³ + u⁴
        assert_eq!(c.coeffs(), ints(&[1, 2, 3, 2, 1, 0]).as_slice());
        assert_eq!(c.order(), Some(5));
    }

    #[test]
    fn hypergeometric_examples() {
        let spec = HypergeomSpec::new(vec![q(-1, 2)], vec![q(1, 2)], ArgumentMap::x_squared());
        let f = hypergeom_series(&spec, 4).unwrap();
        assert_eq!(f.coeffs(), &[q(1, 1), q(0, 1), q(-1, 1), q(0, 1), q(-1, 6)]);
        let zero = ArgumentMap::Monomial { variable: Variable::X, coeff: PiScalar::zero(), power: 2 };
        let g = hypergeom_series(&HypergeomSpec::new(vec![q(3, 1)], vec![q(1, 2)], zero), 8).unwrap();
        assert_eq!(g, FormalSeries::one(Variable::X));
        let bad = HypergeomSpec::new(vec![q(1, 2)], vec![q(-1, 1)], ArgumentMap::x_squared());
        assert!(matches!(hypergeom_series(&bad, 8), Err(Error::InadmissibleParameter(_))));
        // terminating: 1F1(-1; 1/2; x²) = 1 - 2x²
        let t = hypergeom_series(&HypergeomSpec::new(vec![q(-1, 1)], vec![q(1, 2)], ArgumentMap::x_squared()), 10).unwrap();
        assert!(t.is_exact());
        assert_eq!(t.coeffs(), &[q(1, 1), q(0, 1), q(-2, 1)]);
    }

    #[test]
    fn parameter_derivative() {
        // ∂_a 1F1(a; 1; z) at a = 0 is Σ z^k / (k · k!)
        let spec = HypergeomSpec::new(vec![q(0, 1)], vec![q(1, 1)], ArgumentMap::x_squared());
        let d = hypergeom_upper_derivative(&spec, 6).unwrap();
        assert_eq!(d.coeffs(), &[q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(1, 4), q(0, 1), q(1, 18)]);
        // at a = -1, b = 1/2: 2z - (2/3)z² + ...
        let spec = HypergeomSpec::new(vec![q(-1, 1)], vec![q(1, 2)], ArgumentMap::x_squared());
        let d = hypergeom_upper_derivative(&spec, 4).unwrap();
        assert_eq!(d.coeffs(), &[q(0, 1), q(0, 1), q(2, 1), q(0, 1), q(-2, 3)]);
    }

    #[test]
    fn s1_argument_expansion() {
        // 1F1(1; 1; z) = e^z with z = s1/(2 - 2 s1): 1 + s1/2 + (3/8) s1² + ...
        let spec = HypergeomSpec::new(vec![q(1, 1)], vec![q(1, 1)], ArgumentMap::S1Ratio);
        let f = hypergeom_series(&spec, 3).unwrap();
        assert_eq!(f.coeff(0), Some(q(1, 1)));
        assert_eq!(f.coeff(1), Some(q(1, 2)));
        assert_eq!(f.coeff(2), Some(q(1, 2).add(&q(1, 8))));
        assert_eq!(f.order(), Some(3));
    }

    #[test]
    fn erf_and_exp() {
        let e = exp_series(2, 6);
        assert_eq!(e.coeffs(), &[q(1, 1), q(0, 1), q(1, 1), q(0, 1), q(1, 2), q(0, 1), q(1, 6)]);
        let f = erf_series(5);
        let two_over_r = PiScalar::int(2).div(&PiScalar::sqrt_pi()).unwrap();
        assert_eq!(f.coeff(1), Some(two_over_r.clone()));
        assert_eq!(f.coeff(3), Some(two_over_r.mul(&q(-1, 3))));
        assert_eq!(f.coeff(5), Some(two_over_r.mul(&q(1, 10))));
    }

    #[test]
    fn scaled_comparison_statuses() {
        let a = mu_series(3, 12);
        let pass = compare_scaled(&a.scale(&q(2, 1)), &a, &q(2, 1), 5);
        assert_eq!(pass.status, Status::Pass);
        let soft = compare_scaled(&a.scale(&q(3, 1)), &a, &q(2, 1), 5);
        assert_eq!(soft.status, Status::SoftMismatch);
        assert_eq!(soft.lambda, Some(q(3, 1)));
        let fail = compare_scaled(&nu_series(3, 12), &a, &q(2, 1), 5);
        assert_eq!(fail.status, Status::Fail);
        let short = compare_scaled(&a, &a, &q(1, 1), 20);
        assert_eq!(short.status, Status::Fail);
    }

    #[test]
    fn prefactored_derivative() {
        // d/du [u^{1/2}] = (1/2) u^{-1/2}
        let f = PrefactoredSeries::new(Prefactor::new(1, 0, 0), FormalSeries::one(Variable::S1));
        let d = f.derivative();
        let img: Image = d.into();
        let expected: Image = PrefactoredSeries::new(Prefactor::new(-1, 0, 0), FormalSeries::constant(Variable::S1, q(1, 2))).into();
        assert_eq!(compare_images(&img, &expected, &q(1, 1), 1, 1).status, Status::Pass);
    }

    #[test]
    fn operator_on_prefactored_series() {
        // (u D) u^{1/2} = (1/2) u^{1/2}
        let op = DiffOperator::from_coeffs(vec![RationalFunction::zero(), RationalFunction::x()]);
        let f = PrefactoredSeries::new(Prefactor::new(1, 0, 0), FormalSeries::truncated(Variable::S1, ints(&[1]), 6));
        let img = apply_to_prefactored(&op, &f);
        assert_eq!(compare_images(&img, &f.clone().into(), &q(1, 2), 1, 1).status, Status::Pass);
    }

    #[test]
    fn display_format() {
        assert_eq!(nu_series(1, 3).to_string(), "x, 3, [0, 1, 0, 4/3]");
        assert_eq!(FormalSeries::polynomial(Variable::S, ints(&[1, 2])).to_string(), "s, exact, [1, 2]");
    }
}
