//! The second-solution family αₙ: closed forms for n = 1, 2, the
//! normalizations M₁, M₂, M₃, and the ladder actions on αₙ checked both by
//! linearity over the μ/ν recurrences and by direct series application.

use crate::algebra::AlgebraElement;
use crate::catalog;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gauged::{check_image, comparison_record, recurrences, Kind};
use crate::operator::DiffOperator;
use crate::ratfun::RationalFunction;
use crate::report::{error_record, CheckRecord, Status};
use crate::scalar::{PiScalar, Rational};
use crate::series::{compare_scaled, element_series, FormalSeries, Variable};
use crate::states::eop_polynomial;
use crate::text::format_scalar;
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

pub const SUITE: &str = "alpha";

/// `Σ c · kind_m`, keyed by `(kind, m)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Combination {
    terms: BTreeMap<(u8, i64), PiScalar>,
}

fn kind_key(k: Kind) -> u8 {
    match k {
        Kind::Mu => 0,
        Kind::Nu => 1,
    }
}

fn key_kind(k: u8) -> Kind {
    if k == 0 {
        Kind::Mu
    } else {
        Kind::Nu
    }
}

impl Combination {
    pub fn single(c: PiScalar, kind: Kind, m: i64) -> Self {
        let mut out = Self::default();
        out.push(c, kind, m);
        out
    }

    pub fn push(&mut self, c: PiScalar, kind: Kind, m: i64) {
        let e = self.terms.entry((kind_key(kind), m)).or_insert_with(PiScalar::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&(kind_key(kind), m));
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&(k, m), c) in &rhs.terms {
            out.push(c.clone(), key_kind(k), m);
        }
        out
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        let mut out = Self::default();
        for (&(k, m), v) in &self.terms {
            out.push(v.mul(c), key_kind(k), m);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Kind, i64, &PiScalar)> {
        self.terms.iter().map(|(&(k, m), c)| (key_kind(k), m, c))
    }

    /// Series of the combination through `order`.
    pub fn series(&self, order: usize) -> FormalSeries {
        let mut out = FormalSeries::zero(Variable::X);
        for (kind, m, c) in self.terms() {
            out = out.add(&kind.series(m, order).scale(c));
        }
        if out.is_exact() {
            out = FormalSeries::truncated(Variable::X, out.coeffs().to_vec(), order);
        }
        out
    }

    /// The constant λ with `self = λ·rhs`, when one exists.
    pub fn ratio_to(&self, rhs: &Self) -> Option<PiScalar> {
        let Some((&key, c)) = rhs.terms.iter().next() else {
            return self.is_zero().then(PiScalar::zero);
        };
        let lambda = self.terms.get(&key).map_or(PiScalar::zero(), |v| v.div(c).expect("nonzero"));
        (*self == rhs.scale(&lambda)).then_some(lambda)
    }
}

impl std::fmt::Display for Combination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms().map(|(k, m, c)| format!("({}) {}_{}", format_scalar(c), k.name(), m)).collect();
        f.write_str(&parts.join(" + "))
    }
}

fn r() -> PiScalar {
    PiScalar::sqrt_pi()
}

/// αₙ as a combination of μ and ν: α₀ = μ₀, α₁ = −2√π μ₁ − 4ν₁,
/// α₂ = 4(μ₂ + 2√π ν₂), αₙ = −νₙ (odd n ≥ 3), αₙ = μₙ (even n ≥ 4).
pub fn alpha_combination(n: i64) -> Result<Combination> {
    let mut c = Combination::default();
    match n {
        _ if n < 0 => return Err(Error::Invalid(format!("alpha index {n}"))),
        0 => c.push(PiScalar::one(), Kind::Mu, 0),
        1 => {
            c.push(r().scale_int(-2), Kind::Mu, 1);
            c.push(PiScalar::int(-4), Kind::Nu, 1);
        }
        2 => {
            c.push(PiScalar::int(4), Kind::Mu, 2);
            c.push(r().scale_int(8), Kind::Nu, 2);
        }
        _ if n % 2 == 1 => c.push(PiScalar::int(-1), Kind::Nu, n),
        _ => c.push(PiScalar::one(), Kind::Mu, n),
    }
    Ok(c)
}

trait ScaleInt {
    fn scale_int(&self, k: i64) -> Self;
}

impl ScaleInt for PiScalar {
    fn scale_int(&self, k: i64) -> Self {
        self.mul(&PiScalar::int(k))
    }
}

/// Closed forms in the differential algebra:
/// α₁ = −8x − 2√π E²(1 − 2x²)(1 − F), α₂ = 4 + 8x² + 8√π x E²(1 − F).
pub fn alpha_closed(n: i64) -> Result<AlgebraElement> {
    let e2 = AlgebraElement::e_pow(2);
    let one_minus_f = AlgebraElement::one().sub(&AlgebraElement::erf());
    match n {
        1 => {
            let lin = AlgebraElement::from_rf(RationalFunction::from_i64s(&[0, -8]));
            let tail = e2.mul(&one_minus_f).scale_rf(&RationalFunction::from_i64s(&[1, 0, -2])).scale(&r().scale_int(-2));
            Ok(lin.add(&tail))
        }
        2 => {
            let poly = AlgebraElement::from_rf(RationalFunction::from_i64s(&[4, 0, 8]));
            let tail = e2.mul(&one_minus_f).scale_rf(&RationalFunction::x()).scale(&r().scale_int(8));
            Ok(poly.add(&tail))
        }
        _ => Err(Error::Invalid(format!("no closed form is listed for alpha_{n}"))),
    }
}

/// `(closed form when n ∈ {1, 2}, series through order)` for n ≥ 1; α₀ = 1.
pub fn alpha_build(n: i64, order: usize) -> Result<(Option<AlgebraElement>, FormalSeries)> {
    if n <= 0 {
        return Err(Error::Invalid(format!("alpha_build needs n ≥ 1, got {n}")));
    }
    let closed = if n <= 2 { Some(alpha_closed(n)?) } else { None };
    Ok((closed, alpha_combination(n)?.series(order)))
}

fn factorial(m: i64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// `M₁(n) = (−1)^{(n+1)/2} n! 2^{(n+1)/2} / (P(n) Π_{j=1}^{(n−3)/2} (n − 2(j+1) + 1))`
/// with `P(n) = (n−1)(n−2)`, for odd n ≥ 3.
pub fn m1(n: i64) -> Result<PiScalar> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Invalid(format!("M1 is defined for odd n ≥ 3, got {n}")));
    }
    let half = (n + 1) / 2;
    let mut num = factorial(n) * BigInt::from(2).pow(half as u32);
    if half % 2 == 1 {
        num = -num;
    }
    let mut den = BigInt::from((n - 1) * (n - 2));
    for j in 1..=(n - 3) / 2 {
        den *= BigInt::from(n - 2 * (j + 1) + 1);
    }
    Ok(PiScalar::rational(Rational::from_big(num, den)))
}

/// `Γ(k + 1/2)/√π` for integer k (negative allowed).
fn gamma_half_over_root_pi(k: i64) -> Rational {
    // Γ(1/2) = √π; Γ(z+1) = zΓ(z)
    let mut v = Rational::from_i64(1);
    if k >= 0 {
        for j in 0..k {
            v = v.mul(&Rational::new(2 * j + 1, 2));
        }
    } else {
        for j in (k..0).rev() {
            v = v.div(&Rational::new(2 * j + 1, 2)).expect("nonzero");
        }
    }
    v
}

/// `M₂(n) = (−1)^{(n+2)/2} 2^{n−1} π^{−1/2} Γ((n−1)/2)` for even n ∉ {2}, n ≥ 0.
pub fn m2(n: i64) -> Result<PiScalar> {
    if n < 0 || n % 2 == 1 || n == 2 {
        return Err(Error::Invalid(format!("M2 is defined for even n ≥ 0 other than 2, got {n}")));
    }
    let sign = if ((n + 2) / 2) % 2 == 0 { 1 } else { -1 };
    let g = gamma_half_over_root_pi((n - 2) / 2);
    let pow = PiScalar::int(2).pow((n - 1) as i32);
    Ok(PiScalar::rational(g).mul(&pow).mul(&PiScalar::int(sign)))
}

/// `M₃(n)`: −2, 2 at n = 1, 2; `−1/M₁(n)` for other odd n, `1/M₂(n)` for other even n.
pub fn m3(n: i64) -> Result<PiScalar> {
    match n {
        1 => Ok(PiScalar::int(-2)),
        2 => Ok(PiScalar::int(2)),
        _ if n % 2 == 1 => Ok(m1(n)?.inv().ok_or(Error::ZeroDivisor)?.neg()),
        _ => m2(n)?.inv().ok_or(Error::ZeroDivisor),
    }
}

/// One printed action `op αₙ = rhs`.
struct Action {
    op: &'static str,
    n: i64,
    rhs: Combination,
    anchor: &'static str,
    group: &'static str,
}

fn alpha(n: i64) -> Combination {
    alpha_combination(n).expect("n ≥ 0")
}

fn int(v: i64) -> PiScalar {
    PiScalar::int(v)
}

/// The printed list of actions, with the odd and even families taken up to
/// index `max_index`.
fn actions(max_index: i64) -> Vec<Action> {
    let mut out = vec![
        Action { op: "b~", n: 1, rhs: alpha(0).scale(&int(16)), anchor: "b~ alpha_1 = 16 alpha_0", group: "b~" },
        Action { op: "b~†", n: 1, rhs: alpha(2).scale(&int(-2)), anchor: "b~† alpha_1 = -2 alpha_2", group: "b~†" },
        Action { op: "b~", n: 2, rhs: alpha(1).scale(&int(8)), anchor: "b~ alpha_2 = 8 alpha_1", group: "b~" },
        Action { op: "b~†", n: 2, rhs: alpha(3).scale(&int(-96)), anchor: "b~† alpha_2 = -96 alpha_3", group: "b~†" },
        Action {
            op: "c~",
            n: 1,
            rhs: Combination::single(int(32), Kind::Mu, -2).add(&Combination::single(r().scale_int(-24), Kind::Nu, -2)),
            anchor: "c~ alpha_1 = 32 mu_{-2} - 24 sqrt(pi) nu_{-2}",
            group: "c~",
        },
        Action { op: "c~†", n: 1, rhs: alpha(4).scale(&int(-8)), anchor: "c~† alpha_1 = -8 alpha_4", group: "c~†" },
        Action {
            op: "c~",
            n: 2,
            rhs: Combination::single(r().scale_int(-48), Kind::Mu, -1).add(&Combination::single(int(64), Kind::Nu, -1)),
            anchor: "c~ alpha_2 = -48 sqrt(pi) mu_{-1} + 64 nu_{-1}",
            group: "c~",
        },
        Action { op: "c~†", n: 2, rhs: alpha(5).scale(&int(-80)), anchor: "c~† alpha_2 = -80 alpha_5", group: "c~†" },
        Action { op: "c~", n: 3, rhs: alpha(0).scale(&int(4)), anchor: "c~ alpha_3 = 4 alpha_0", group: "c~" },
    ];
    for n in (3..=max_index).filter(|n| n % 2 == 1) {
        out.push(Action { op: "b~", n, rhs: alpha(n - 1).scale(&int(6 - 2 * n)), anchor: "b~ alpha_n = (6 - 2n) alpha_{n-1}, n odd", group: "b~ odd" });
        out.push(Action { op: "b~†", n, rhs: alpha(n + 1).scale(&int(2 * n - 4)), anchor: "b~† alpha_n = (2n - 4) alpha_{n+1}, n odd", group: "b~† odd" });
        if n >= 5 {
            out.push(Action { op: "c~", n, rhs: alpha(n - 3).scale(&int(10 - 2 * n)), anchor: "c~ alpha_n = (10 - 2n) alpha_{n-3}, n = 5, 7, ...", group: "c~ odd" });
        }
        out.push(Action { op: "c~†", n, rhs: alpha(n + 3).scale(&int(2 * n - 4)), anchor: "c~† alpha_n = (2n - 4) alpha_{n+3}, n odd", group: "c~† odd" });
    }
    for n in (4..=max_index).filter(|n| n % 2 == 0) {
        out.push(Action { op: "b~", n, rhs: alpha(n - 1).scale(&int(4 * n * (n - 1))), anchor: "b~ alpha_n = 4n(n-1) alpha_{n-1}, n even", group: "b~ even" });
        out.push(Action { op: "b~†", n, rhs: alpha(n + 1).scale(&int(-4 * n * (n + 1))), anchor: "b~† alpha_n = -4n(n+1) alpha_{n+1}, n even", group: "b~† even" });
        out.push(Action { op: "c~", n, rhs: alpha(n - 3).scale(&int(4 * n * (n - 4))), anchor: "c~ alpha_n = 4n(n-4) alpha_{n-3}, n even", group: "c~ even" });
        out.push(Action { op: "c~†", n, rhs: alpha(n + 3).scale(&int(4 * (1 - n) * (n + 3))), anchor: "c~† alpha_n = 4(1-n)(n+3) alpha_{n+3}, n even", group: "c~† even" });
    }
    out
}

/// Image of a combination under a gauged ladder, by the printed μ/ν recurrences.
pub fn apply_by_linearity(op: &str, c: &Combination) -> Result<Combination> {
    let table = recurrences();
    let mut out = Combination::default();
    for (kind, m, coeff) in c.terms() {
        let rec = table
            .iter()
            .find(|r| r.op == op && r.src == kind)
            .ok_or_else(|| Error::UnknownOperator(op.to_string()))?;
        out.push(coeff.mul(&int((rec.kappa)(m))), rec.target(), m + rec.shift);
    }
    Ok(out)
}

fn lhs_series(n: i64, order: usize) -> Result<FormalSeries> {
    match n {
        1 | 2 => element_series(&alpha_closed(n)?, order),
        _ => Ok(alpha(n).series(order)),
    }
}

/// Every listed action, both ways. The record passes when both routes pass.
pub fn verify_alpha_actions(max_index: i64, order: usize) -> Vec<CheckRecord> {
    actions(max_index)
        .into_iter()
        .map(|a| {
            let id = format!("{} alpha_{}", a.op, a.n);
            let run = || -> Result<CheckRecord> {
                let lin = apply_by_linearity(a.op, &alpha(a.n))?;
                let lin_status = if lin == a.rhs {
                    Status::Pass
                } else if lin.ratio_to(&a.rhs).is_some() {
                    Status::SoftMismatch
                } else {
                    Status::Fail
                };
                let op = (*catalog::build(a.op)?).clone();
                let direct = check_image(&op, &lhs_series(a.n, order)?, &a.rhs.series(order), &PiScalar::one(), 1);
                let mut rec = comparison_record(SUITE, a.group, Some(a.n), id.clone(), a.anchor, a.rhs.to_string(), &direct);
                let status = direct.status.and(lin_status);
                if lin_status != Status::Pass {
                    rec = rec.recomputed(lin.to_string());
                }
                let note = format!(
                    "linearity {}, direct {}; {}",
                    lin_status,
                    direct.status,
                    rec.note.clone().unwrap_or_default()
                );
                Ok(rec.status(status).note(note))
            };
            run().unwrap_or_else(|e| error_record(SUITE, a.group, Some(a.n), id, &e))
        })
        .collect()
}

/// Closed forms solve the gauged ODE exactly and expand to the μ/ν
/// combinations; α₀ = 1; αₙ = M₃(n) Hₙ with Hₙ = M₁νₙ or M₂μₙ; the
/// polynomials Hₙ against the exceptional polynomials y_{n−3}.
pub fn verify_alpha_forms(max_index: i64, order: usize) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for n in [1, 2] {
        let id = format!("alpha_{n} closed form");
        let run = || -> Result<Vec<CheckRecord>> {
            let closed = alpha_closed(n)?;
            let h = (*catalog::build("H_gauged")?).clone().sub(&DiffOperator::int(2 * n));
            let residual = h.apply(&closed);
            let ode = CheckRecord::new(SUITE, "closed forms", Some(n), format!("{id} solves the ODE"), "alpha_n solves the gauged ODE")
                .status(Status::from_bool(residual.is_zero()))
                .expected("0")
                .recomputed(crate::text::format_element(&residual));
            let series = element_series(&closed, order)?;
            let combo = alpha(n);
            let cmp = compare_scaled(&series, &combo.series(order), &PiScalar::one(), 1);
            let anchor = if n == 1 {
                "alpha_1 = -8x - 2 e^{x^2} sqrt(pi) (1-2x^2)(1-Erf x) = -2 sqrt(pi) mu_1 - 4 nu_1"
            } else {
                "alpha_2 = 4 + 8x^2 + 8 sqrt(pi) x e^{x^2} (1-Erf x) = 4(mu_2 + 2 sqrt(pi) nu_2)"
            };
            let eq = comparison_record(SUITE, "closed forms", Some(n), format!("{id} expansion"), anchor, combo.to_string(), &cmp);
            Ok(vec![ode, eq])
        };
        match run() {
            Ok(v) => out.extend(v),
            Err(e) => out.push(error_record(SUITE, "closed forms", Some(n), id, &e)),
        }
    }
    let a0 = alpha(0).series(order);
    let cmp = compare_scaled(&a0, &FormalSeries::one(Variable::X), &PiScalar::one(), 1);
    out.push(comparison_record(SUITE, "closed forms", Some(0), "alpha_0".into(), "alpha_0 := mu_0 = 1", "1".into(), &cmp));
    for n in 3..=max_index {
        out.push(normalization_record(n, order));
    }
    out
}

fn normalization_record(n: i64, order: usize) -> CheckRecord {
    let id = format!("M normalization {n}");
    let anchor = "alpha_n = M_3(n) H_n, H_n = M_1(n) nu_n (n odd) or M_2(n) mu_n (n even)";
    let run = || -> Result<CheckRecord> {
        let (kind, m) = if n % 2 == 1 { (Kind::Nu, m1(n)?) } else { (Kind::Mu, m2(n)?) };
        let h = kind.series(n, order).scale(&m);
        let alpha_n = alpha(n).series(order);
        let via_m = h.scale(&m3(n)?);
        let same = compare_scaled(&via_m, &alpha_n, &PiScalar::one(), 1).status;
        // H_n is a polynomial; compare with y_{n-3}
        let y = eop_polynomial(n - 3)?;
        let y_series = FormalSeries::from_xpoly(Variable::X, y.num());
        let cmp = compare_scaled(&h, &y_series, &PiScalar::one(), 1);
        let ratio = match (&cmp.status, &cmp.lambda) {
            (Status::Fail, _) | (_, None) => "not proportional".to_string(),
            (_, Some(l)) => format_scalar(l),
        };
        let structural = cmp.status != Status::Fail;
        Ok(CheckRecord::new(SUITE, "normalizations", Some(n), id.clone(), anchor)
            .status(same.and(Status::from_bool(structural)))
            .expected(format!("M_3 H_{n} = alpha_{n}"))
            .recomputed(format!("H_{n} = ({ratio}) y_{}", n - 3))
            .note(format!("M_3(n) = {}", format_scalar(&m3(n)?))))
    };
    run().unwrap_or_else(|e| error_record(SUITE, "normalizations", Some(n), id, &e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_examples() {
        assert_eq!(alpha_combination(3).unwrap(), Combination::single(int(-1), Kind::Nu, 3));
        assert_eq!(alpha_combination(0).unwrap().series(6), FormalSeries::truncated(Variable::X, vec![int(1)], 6));
        let lin = apply_by_linearity("b~", &alpha(1)).unwrap();
        assert_eq!(lin, Combination::single(int(16), Kind::Mu, 0));
        let lin = apply_by_linearity("c~", &alpha(4)).unwrap();
        assert!(lin.is_zero());
        assert!(alpha_build(0, 8).is_err());
    }

    #[test]
    fn closed_form_of_alpha1_expands_correctly() {
        let s = element_series(&alpha_closed(1).unwrap(), 10).unwrap();
        let c = alpha(1).series(10);
        assert_eq!(compare_scaled(&s, &c, &PiScalar::one(), 11).status, Status::Pass);
    }

    #[test]
    fn normalization_constants() {
        assert_eq!(m1(3).unwrap(), int(12));
        assert_eq!(m2(4).unwrap(), int(-4));
        assert_eq!(m2(0).unwrap(), int(1));
        assert_eq!(m3(5).unwrap(), m1(5).unwrap().inv().unwrap().neg());
        assert!(m1(1).is_err());
    }

    #[test]
    fn every_action_passes_both_ways() {
        let recs = verify_alpha_actions(7, 14);
        for r in &recs {
            assert_eq!(r.status, Status::Pass, "{r}");
        }
    }
}
