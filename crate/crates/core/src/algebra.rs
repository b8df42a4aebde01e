//! The differential algebra holding every wavefunction: finite sums of
//! `R(x) · E^e · F^f · ∏ I^m` with E = e^{x²/2}, F = erf(x) and formal
//! antiderivatives I of elementary integrands `E^s · R(x)`.

use crate::error::{Error, Result};
use crate::field::{Field, Poly};
use crate::linalg;
use crate::ratfun::{RationalFunction, XPoly};
use crate::scalar::PiScalar;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Which family of states an antiderivative belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadFamily {
    Osc,
    Def,
}

impl QuadFamily {
    pub fn name(self) -> &'static str {
        match self {
            QuadFamily::Osc => "osc",
            QuadFamily::Def => "def",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadTag {
    pub family: QuadFamily,
    pub index: i64,
}

impl QuadTag {
    pub const BASE: QuadTag = QuadTag { family: QuadFamily::Osc, index: 0 };

    pub fn osc(index: i64) -> Self {
        QuadTag { family: QuadFamily::Osc, index }
    }

    pub fn def(index: i64) -> Self {
        QuadTag { family: QuadFamily::Def, index }
    }
}

/// `I = ∫ˣ E^e_shift · integrand`, with no additive constant.
/// Identity, ordering and hashing go by tag only.
#[derive(Clone, Debug)]
pub struct IntegralGen {
    pub tag: QuadTag,
    pub e_shift: i32,
    pub integrand: RationalFunction,
}

impl IntegralGen {
    /// Antiderivative of `1/u²` for an elementary `u = E^e · R`.
    pub fn inverse_square(tag: QuadTag, u: &AlgebraElement) -> Result<Arc<IntegralGen>> {
        let (e, r) = u.as_elementary_monomial().ok_or_else(|| {
            Error::Invalid(format!("I[{},{}]: seed is not a single elementary term", tag.family.name(), tag.index))
        })?;
        let r2 = r.mul(&r).inv().ok_or(Error::ZeroDivisor)?;
        Ok(Arc::new(IntegralGen { tag, e_shift: -2 * e, integrand: r2 }))
    }

    /// The base quadrature ∫ˣ e^{z²} dz.
    pub fn base() -> Arc<IntegralGen> {
        Arc::new(IntegralGen { tag: QuadTag::BASE, e_shift: 2, integrand: RationalFunction::one() })
    }
}

impl PartialEq for IntegralGen {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
    }
}
impl Eq for IntegralGen {}
impl PartialOrd for IntegralGen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for IntegralGen {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag.cmp(&other.tag)
    }
}
impl Hash for IntegralGen {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.tag.hash(state)
    }
}

/// `E^e · F^f · ∏ I^m` with the quadrature list sorted by tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub e: i32,
    pub f: u32,
    pub ints: Vec<(Arc<IntegralGen>, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn e_pow(e: i32) -> Self {
        Monomial { e, ..Self::default() }
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.f == 0 && self.ints.is_empty()
    }

    pub fn is_elementary(&self) -> bool {
        self.f == 0 && self.ints.is_empty()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut ints: BTreeMap<Arc<IntegralGen>, u32> = self.ints.iter().cloned().collect();
        for (g, m) in &rhs.ints {
            *ints.entry(g.clone()).or_insert(0) += m;
        }
        Monomial { e: self.e + rhs.e, f: self.f + rhs.f, ints: ints.into_iter().collect() }
    }

    fn with_int_power(&self, idx: usize, m: u32) -> Monomial {
        let mut out = self.clone();
        if m == 0 {
            out.ints.remove(idx);
        } else {
            out.ints[idx].1 = m;
        }
        out
    }

    pub fn int_power(&self, tag: QuadTag) -> u32 {
        self.ints.iter().find(|(g, _)| g.tag == tag).map_or(0, |(_, m)| *m)
    }
}

/// Finite sum of monomials with nonzero rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, RationalFunction>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rf(RationalFunction::one())
    }

    pub fn term(m: Monomial, c: RationalFunction) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn from_rf(c: RationalFunction) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn scalar(c: PiScalar) -> Self {
        Self::from_rf(RationalFunction::constant(c))
    }

    pub fn x() -> Self {
        Self::from_rf(RationalFunction::x())
    }

    /// `E^e`.
    pub fn e_pow(e: i32) -> Self {
        Self::term(Monomial::e_pow(e), RationalFunction::one())
    }

    /// The error function F = erf(x).
    pub fn erf() -> Self {
        Self::term(Monomial { f: 1, ..Monomial::default() }, RationalFunction::one())
    }

    pub fn integral(g: Arc<IntegralGen>) -> Self {
        Self::term(Monomial { ints: vec![(g, 1)], ..Monomial::default() }, RationalFunction::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&RationalFunction> {
        self.terms.get(m)
    }

    fn add_term(&mut self, m: Monomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        AlgebraElement { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.scale(c))).collect() }
    }

    pub fn scale_rf(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Exact derivative: x' = 1, E' = xE, F' = (2/√π)E⁻², I' = integrand.
    pub fn differentiate(&self) -> Self {
        let two_over_r = PiScalar::int(2).checked_div(&PiScalar::sqrt_pi()).expect("r ≠ 0");
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.derivative();
            if m.e != 0 {
                coeff = coeff.add(&c.mul(&RationalFunction::x()).scale(&PiScalar::int(m.e as i64)));
            }
            out.add_term(m.clone(), coeff);
            if m.f > 0 {
                let dm = Monomial { e: m.e - 2, f: m.f - 1, ints: m.ints.clone() };
                out.add_term(dm, c.scale(&two_over_r.mul(&PiScalar::int(m.f as i64))));
            }
            for (idx, (g, k)) in m.ints.iter().enumerate() {
                let mut dm = m.with_int_power(idx, k - 1);
                dm.e += g.e_shift;
                out.add_term(dm, c.mul(&g.integrand).scale(&PiScalar::int(*k as i64)));
            }
        }
        out
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.differentiate())
    }

    /// Constant value if the element is a constant.
    pub fn as_scalar(&self) -> Option<PiScalar> {
        match self.terms.len() {
            0 => Some(PiScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                if m.is_one() {
                    c.as_constant()
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// `(e, R)` if the element is `R · E^e`.
    pub fn as_elementary_monomial(&self) -> Option<(i32, RationalFunction)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        m.is_elementary().then(|| (m.e, c.clone()))
    }

    /// True when no F or quadrature generator occurs.
    pub fn is_elementary(&self) -> bool {
        self.terms.keys().all(Monomial::is_elementary)
    }

    /// Quadrature tags present in the element.
    pub fn quadrature_tags(&self) -> Vec<QuadTag> {
        let mut tags: Vec<QuadTag> =
            self.terms.keys().flat_map(|m| m.ints.iter().map(|(g, _)| g.tag)).collect();
        tags.sort();
        tags.dedup();
        tags
    }

    pub fn has_erf(&self) -> bool {
        self.terms.keys().any(|m| m.f > 0)
    }

    /// λ with `self = λ·b`, when such a constant exists.
    pub fn exact_divide(&self, b: &AlgebraElement) -> Result<Option<PiScalar>> {
        let Some((m0, c0)) = b.terms.iter().next() else {
            return Err(Error::ZeroDivisor);
        };
        if self.is_zero() {
            return Ok(Some(PiScalar::zero()));
        }
        let Some(ca) = self.terms.get(m0) else { return Ok(None) };
        let Some(lambda) = ca.div(c0).and_then(|q| q.as_constant()) else { return Ok(None) };
        Ok((*self == b.scale(&lambda)).then_some(lambda))
    }

    /// Replace every occurrence of the generator `tag` by `value`.
    pub fn substitute(&self, tag: QuadTag, value: &AlgebraElement) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            match m.ints.iter().position(|(g, _)| g.tag == tag) {
                None => out.add_term(m.clone(), c.clone()),
                Some(idx) => {
                    let k = m.ints[idx].1;
                    let rest = AlgebraElement::term(m.with_int_power(idx, 0), c.clone());
                    out = out.add(&rest.mul(&value.pow(k)));
                }
            }
        }
        out
    }

    /// Rewrite every quadrature other than the base ∫e^{x²} through the base
    /// quadrature or erf, using the closed forms of [`reduce_integral`].
    pub fn reduce_quadratures(&self) -> Result<Self> {
        let mut out = self.clone();
        loop {
            let gen = out
                .terms
                .keys()
                .flat_map(|m| m.ints.iter().map(|(g, _)| g.clone()))
                .find(|g| g.tag != QuadTag::BASE);
            let Some(g) = gen else { return Ok(out) };
            let closed = reduce_integral(&g)?;
            out = out.substitute(g.tag, &closed);
        }
    }

    /// Multiply by the inverse of an elementary element `R·E^e`.
    pub fn div_elementary(&self, e: i32, r: &RationalFunction) -> Result<Self> {
        let rinv = r.inv().ok_or(Error::ZeroDivisor)?;
        Ok(self.mul(&AlgebraElement::term(Monomial::e_pow(-e), rinv)))
    }
}

/// `W(u, v) = u v' - u' v`.
pub fn wronskian(u: &AlgebraElement, v: &AlgebraElement) -> AlgebraElement {
    u.mul(&v.differentiate()).sub(&u.differentiate().mul(v))
}

/// Closed form of a quadrature `∫ E^s R` with `s = ±2`:
/// `E^s · S(x) + c · B` where B is ∫e^{x²} for s = 2 and (√π/2)·erf for
/// s = -2, and S is rational with denominator gcd(den R, (den R)').
pub fn reduce_integral(g: &IntegralGen) -> Result<AlgebraElement> {
    let s = g.e_shift;
    if s != 2 && s != -2 {
        return Err(Error::Invalid(format!("quadrature with E-shift {s} has no closed form here")));
    }
    let n = g.integrand.num();
    let d = g.integrand.den();
    let gd = d.gcd(&d.derivative());
    let gd2 = gd.mul(&gd);
    let x = XPoly::var();
    let sx = Poly::monomial(PiScalar::int(s as i64), 1);
    // D(T'G - TG') + s x T D G + c D G² = N G²
    let deg_t = n.degree().unwrap_or(0).max(d.degree().unwrap_or(0)) + 2;
    let mut cols: Vec<XPoly> = Vec::with_capacity(deg_t + 2);
    for j in 0..=deg_t {
        let t = x.pow(j as u32);
        let col = d
            .mul(&t.derivative().mul(&gd).sub(&t.mul(&gd.derivative())))
            .add(&sx.mul(&t).mul(d).mul(&gd));
        cols.push(col);
    }
    cols.push(d.mul(&gd2));
    let target = n.mul(&gd2);
    let height = cols.iter().chain(std::iter::once(&target)).filter_map(Poly::degree).max().unwrap_or(0) + 1;
    let rows: Vec<Vec<PiScalar>> =
        (0..height).map(|k| cols.iter().map(|c| c.coeff(k)).collect()).collect();
    let rhs: Vec<PiScalar> = (0..height).map(|k| target.coeff(k)).collect();
    let sol = linalg::solve(rows, rhs).ok_or_else(|| {
        Error::Invalid(format!("quadrature I[{},{}] is not elementary over the base", g.tag.family.name(), g.tag.index))
    })?;
    let t = Poly::from_coeffs(sol[..=deg_t].to_vec());
    let c = sol[deg_t + 1].clone();
    let elem = AlgebraElement::term(Monomial::e_pow(s), RationalFunction::new(t, gd));
    let base = if s == 2 {
        AlgebraElement::integral(IntegralGen::base())
    } else {
        AlgebraElement::erf().scale(&PiScalar::sqrt_pi().mul(&PiScalar::frac(1, 2)))
    };
    Ok(elem.add(&base.scale(&c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite;

    fn e(k: i32) -> AlgebraElement {
        AlgebraElement::e_pow(k)
    }

    #[test]
    fn derivation_rules() {
        assert_eq!(e(1).differentiate(), AlgebraElement::x().mul(&e(1)));
        let two_over_r = PiScalar::int(2).checked_div(&PiScalar::sqrt_pi()).unwrap();
        assert_eq!(AlgebraElement::erf().differentiate(), e(-2).scale(&two_over_r));
        assert_eq!(AlgebraElement::integral(IntegralGen::base()).differentiate(), e(2));
    }

    #[test]
    fn arithmetic_cancels() {
        assert_eq!(e(1).mul(&e(-1)), AlgebraElement::one());
        let xf = AlgebraElement::x().mul(&AlgebraElement::erf());
        assert!(xf.sub(&xf).is_zero());
        let q = RationalFunction::from_i64s(&[1, 0, 2]);
        let a = e(-1).scale_rf(&q.inv().unwrap());
        let b = e(1).scale_rf(&q);
        assert_eq!(a.mul(&b), AlgebraElement::one());
        let ef = e(1).mul(&e(-1)).mul(&AlgebraElement::erf());
        assert_eq!(ef, AlgebraElement::erf());
    }

    #[test]
    fn wronskian_basics() {
        let phi0 = e(-1);
        assert!(wronskian(&phi0, &phi0).is_zero());
        let g = IntegralGen::inverse_square(QuadTag::osc(0), &phi0).unwrap();
        let tilde = phi0.mul(&AlgebraElement::integral(g));
        assert_eq!(wronskian(&tilde, &phi0).as_scalar(), Some(PiScalar::int(-1)));
        // different energies: nonconstant
        let phi1 = e(-1).scale_rf(&RationalFunction::poly(hermite(1).unwrap()));
        let w = wronskian(&phi0, &phi1);
        assert!(!w.differentiate().is_zero());
    }

    #[test]
    fn exact_divide_cases() {
        let a = e(-1).scale_rf(&RationalFunction::from_i64s(&[0, 2]));
        assert_eq!(a.scale(&PiScalar::int(6)).exact_divide(&a).unwrap(), Some(PiScalar::int(6)));
        assert_eq!(AlgebraElement::zero().exact_divide(&a).unwrap(), Some(PiScalar::zero()));
        assert_eq!(e(-1).exact_divide(&a).unwrap(), None);
        assert!(a.exact_divide(&AlgebraElement::zero()).is_err());
    }

    #[test]
    fn quadrature_reduction_preserves_derivative() {
        // ∫ e^{x²}/(4x²): -e^{x²}/(4x) + (1/2) ∫ e^{x²}
        let phi1 = e(-1).scale_rf(&RationalFunction::poly(hermite(1).unwrap()));
        let g = IntegralGen::inverse_square(QuadTag::osc(1), &phi1).unwrap();
        let closed = reduce_integral(&g).unwrap();
        assert_eq!(closed.differentiate(), e(2).scale_rf(&g.integrand));
        let expected = e(2)
            .scale_rf(&RationalFunction::ratio_i64(&[-1], &[0, 4]))
            .add(&AlgebraElement::integral(IntegralGen::base()).scale(&PiScalar::frac(1, 2)));
        assert_eq!(closed, expected);
    }
}
