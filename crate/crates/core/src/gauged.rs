//! The gauged ODE `f'' − (2x + 8x/(1+2x²)) f' + 2n f = 0`, its even and odd
//! series solutions μₙ, νₙ, their hypergeometric forms and the ladder
//! recurrences in the gauged frame.

use crate::catalog;
use crate::error::Result;
use crate::field::Field;
use crate::operator::DiffOperator;
use crate::report::{error_record, CheckRecord, Status};
use crate::scalar::PiScalar;
use crate::series::{
    apply_to_prefactored, compare_images, compare_scaled, hypergeom_series, mu_series, nu_series, ArgumentMap,
    Comparison, FormalSeries, HypergeomSpec, Image, PrefactoredSeries, Variable,
};
use crate::text::format_scalar;
use rayon::prelude::*;
use std::ops::RangeInclusive;

pub const SUITE: &str = "series";

/// Which of the two series solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Mu,
    Nu,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Mu => "mu",
            Kind::Nu => "nu",
        }
    }

    pub fn series(self, n: i64, order: usize) -> FormalSeries {
        match self {
            Kind::Mu => mu_series(n, order),
            Kind::Nu => nu_series(n, order),
        }
    }

    pub fn other(self) -> Kind {
        match self {
            Kind::Mu => Kind::Nu,
            Kind::Nu => Kind::Mu,
        }
    }
}

/// `op · src_n = κ(n) · target_{n+shift}`.
#[derive(Clone, Copy, Debug)]
pub struct Recurrence {
    pub op: &'static str,
    pub src: Kind,
    pub shift: i64,
    pub kappa: fn(i64) -> i64,
    pub anchor: &'static str,
}

impl Recurrence {
    pub fn target(&self) -> Kind {
        self.src.other()
    }
}

/// The eight printed recurrences of the gauged ladders.
pub fn recurrences() -> Vec<Recurrence> {
    vec![
        Recurrence { op: "b~", src: Kind::Mu, shift: -1, kappa: |n| 4 * n - 4 * n * n, anchor: "b~ mu_n = (4n - 4n^2) nu_{n-1}" },
        Recurrence { op: "b~", src: Kind::Nu, shift: -1, kappa: |n| 2 * n - 6, anchor: "b~ nu_n = (-6 + 2n) mu_{n-1}" },
        Recurrence { op: "b~†", src: Kind::Mu, shift: 1, kappa: |n| 4 * n + 4 * n * n, anchor: "b~† mu_n = (4n + 4n^2) nu_{n+1}" },
        Recurrence { op: "b~†", src: Kind::Nu, shift: 1, kappa: |n| 4 - 2 * n, anchor: "b~† nu_n = (4 - 2n) mu_{n+1}" },
        Recurrence { op: "c~", src: Kind::Mu, shift: -3, kappa: |n| 16 * n - 4 * n * n, anchor: "c~ mu_n = (16n - 4n^2) nu_{n-3}" },
        Recurrence { op: "c~", src: Kind::Nu, shift: -3, kappa: |n| 2 * n - 10, anchor: "c~ nu_n = (-10 + 2n) mu_{n-3}" },
        Recurrence { op: "c~†", src: Kind::Mu, shift: 3, kappa: |n| 4 * (n - 1) * (n + 3), anchor: "c~† mu_n = 4(n-1)(n+3) nu_{n+3}" },
        Recurrence { op: "c~†", src: Kind::Nu, shift: 3, kappa: |n| 4 - 2 * n, anchor: "c~† nu_n = (4 - 2n) mu_{n+3}" },
    ]
}

/// The printed zero modes: `(operator, kind, n)`.
pub fn zero_modes() -> Vec<(&'static str, Kind, i64)> {
    vec![
        ("b~", Kind::Mu, 0),
        ("b~", Kind::Mu, 1),
        ("b~", Kind::Nu, 3),
        ("b~†", Kind::Mu, 0),
        ("b~†", Kind::Mu, -1),
        ("b~†", Kind::Nu, 2),
    ]
}

/// Compare `op f` with `κ g` in the x frame, denominators cleared.
pub fn check_image(op: &DiffOperator, f: &FormalSeries, g: &FormalSeries, kappa: &PiScalar, min_known: usize) -> Comparison {
    let lhs = apply_to_prefactored(op, &PrefactoredSeries::plain(f.clone()));
    compare_images(&lhs, &Image::from(g.clone()), kappa, min_known, 1)
}

/// Turn a comparison into a check record.
pub fn comparison_record(
    suite: &str,
    group: &str,
    index: Option<i64>,
    id: String,
    anchor: &str,
    expected: String,
    cmp: &Comparison,
) -> CheckRecord {
    let mut rec = CheckRecord::new(suite, group, index, id, anchor).status(cmp.status).expected(expected);
    match (&cmp.status, &cmp.lambda) {
        (Status::SoftMismatch, Some(l)) => rec = rec.recomputed(format_scalar(l)),
        (Status::Fail, _) => rec = rec.recomputed("not proportional"),
        _ => {}
    }
    let order = format!("to order {}", cmp.order_text());
    rec.note(match &cmp.note {
        Some(n) => format!("{n}; {order}"),
        None => order,
    })
}

fn catalog_op(name: &str) -> Result<DiffOperator> {
    catalog::build(name).map(|op| (*op).clone())
}

/// Every recurrence with the third-order operator and its first-order form,
/// plus the zero modes, for n in `range` with series through `order`.
pub fn verify_gauged_recurrences(range: RangeInclusive<i64>, order: usize) -> Vec<CheckRecord> {
    let mut jobs: Vec<(Recurrence, i64, bool)> = Vec::new();
    for rec in recurrences() {
        for n in range.clone() {
            jobs.push((rec, n, false));
            jobs.push((rec, n, true));
        }
    }
    let mut out: Vec<CheckRecord> = jobs
        .par_iter()
        .map(|&(rec, n, first_order)| {
            let op_name = if first_order { format!("{}_n({n})", rec.op) } else { rec.op.to_string() };
            let group = if first_order { format!("{}_n", rec.op) } else { rec.op.to_string() };
            let id = format!("{} {}_{n}", group, rec.src.name());
            let op = match catalog_op(&op_name) {
                Ok(op) => op,
                Err(e) => return error_record(SUITE, &group, Some(n), id, &e),
            };
            let f = rec.src.series(n, order);
            let g = rec.target().series(n + rec.shift, order);
            let kappa = PiScalar::int((rec.kappa)(n));
            let cmp = check_image(&op, &f, &g, &kappa, 1);
            let expected = format!("{} {}_{}", format_scalar(&kappa), rec.target().name(), n + rec.shift);
            comparison_record(SUITE, &group, Some(n), id, rec.anchor, expected, &cmp)
        })
        .collect();
    for (op_name, kind, n) in zero_modes() {
        let group = format!("{op_name} zero modes");
        let id = format!("{op_name} {}_{n}", kind.name());
        let rec = match catalog_op(op_name) {
            Ok(op) => {
                let f = kind.series(n, order);
                let cmp = check_image(&op, &f, &FormalSeries::zero(Variable::X), &PiScalar::zero(), 1);
                let anchor = if op_name == "b~" { "zero modes mu_0, mu_1, nu_3" } else { "zero modes mu_0, mu_{-1}, nu_2" };
                comparison_record(SUITE, &group, Some(n), id, anchor, "0".into(), &cmp)
            }
            Err(e) => error_record(SUITE, &group, Some(n), id, &e),
        };
        out.push(rec);
    }
    out
}

/// μₙ and νₙ solve the gauged ODE.
pub fn verify_ode(range: RangeInclusive<i64>, order: usize) -> Vec<CheckRecord> {
    let h = match catalog_op("H_gauged") {
        Ok(h) => h,
        Err(e) => return vec![error_record(SUITE, "ode", None, "H_gauged", &e)],
    };
    let mut out = Vec::new();
    for n in range {
        let l = h.sub(&DiffOperator::int(2 * n));
        for kind in [Kind::Mu, Kind::Nu] {
            let cmp = check_image(&l, &kind.series(n, order), &FormalSeries::zero(Variable::X), &PiScalar::zero(), 1);
            let id = format!("ode {}_{n}", kind.name());
            out.push(comparison_record(SUITE, "ode", Some(n), id, "f'' - (2x + 8x/(1+2x^2)) f' + 2n f = 0", "0".into(), &cmp));
        }
    }
    out
}

fn q(n: i64, d: i64) -> PiScalar {
    PiScalar::frac(n, d)
}

fn f11(a: PiScalar, b: PiScalar, order: usize) -> Result<FormalSeries> {
    hypergeom_series(&HypergeomSpec::new(vec![a], vec![b], ArgumentMap::x_squared()), order)
}

fn xpow(c: PiScalar, k: usize) -> FormalSeries {
    FormalSeries::monomial(Variable::X, c, k)
}

fn xpoly(cs: &[PiScalar]) -> FormalSeries {
    FormalSeries::polynomial(Variable::X, cs.to_vec())
}

/// `μₙ = ₁F₁(−n/2; 1/2; x²) − (4/3) n x⁴ ₁F₁(2 − n/2; 5/2; x²)`.
pub fn mu_hypergeometric(n: i64, order: usize) -> Result<FormalSeries> {
    let a = f11(q(-n, 2), q(1, 2), order)?;
    let b = f11(q(4 - n, 2), q(5, 2), order)?;
    Ok(a.sub(&b.mul(&xpow(q(-4 * n, 3).neg(), 4))).truncate(order + 1))
}

/// `νₙ = (x + 2x³) ₁F₁(1/2 − n/2; 3/2; x²) + (2/3) x³ (−1 + 2x²) ₁F₁(3/2 − n/2; 5/2; x²)`.
pub fn nu_hypergeometric(n: i64, order: usize) -> Result<FormalSeries> {
    let a = f11(q(1 - n, 2), q(3, 2), order)?;
    let b = f11(q(3 - n, 2), q(5, 2), order)?;
    let pa = xpoly(&[q(0, 1), q(1, 1), q(0, 1), q(2, 1)]);
    let pb = xpoly(&[q(0, 1), q(0, 1), q(0, 1), q(-2, 3), q(0, 1), q(4, 3)]);
    Ok(a.mul(&pa).add(&b.mul(&pb)).truncate(order + 1))
}

/// The first printed μₙ form with a ₂F₂ term; finite for n ≠ 2.
pub fn mu_intermediate(n: i64, order: usize) -> Result<Option<FormalSeries>> {
    if n == 2 {
        return Ok(None);
    }
    let x2 = ArgumentMap::x_squared();
    let f_a = f11(q(2 - n, 2), q(3, 2), order)?;
    let f_b = f11(q(-n, 2), q(1, 2), order)?;
    let f22 = hypergeom_series(&HypergeomSpec::new(vec![q(2, 1), q(2 - n, 2)], vec![q(1, 1), q(3, 2)], x2), order)?;
    let poly = xpoly(&[
        PiScalar::int(-12 + 6 * n),
        q(0, 1),
        PiScalar::int(12 * n - 6 * n * n),
        q(0, 1),
        PiScalar::int(20 * n - 12 * n * n + n * n * n),
    ]);
    let bracket = poly
        .add(&f_a.mul(&xpow(PiScalar::int(24 * n), 2)))
        .sub(&f_b.scale(&PiScalar::int(6 * (n - 2))))
        .sub(&f22.mul(&xpow(PiScalar::int(24 * n), 2)));
    let head = xpoly(&[q(1, 1), q(0, 1), PiScalar::int(-n), q(0, 1), q(n * (n - 10), 6)]);
    let scale = q(-1, 6 * (n - 2));
    Ok(Some(head.add(&bracket.scale(&scale)).truncate(order + 1)))
}

/// The first printed νₙ form with ₂F₂ and ₃F₃ terms; finite for n ≠ 1.
pub fn nu_intermediate(n: i64, order: usize) -> Result<Option<FormalSeries>> {
    if n == 1 {
        return Ok(None);
    }
    let x2 = ArgumentMap::x_squared();
    let wide = order + 1;
    let f_a = f11(q(1 - n, 2), q(3, 2), wide)?;
    let f22 = hypergeom_series(&HypergeomSpec::new(vec![q(2, 1), q(1 - n, 2)], vec![q(1, 1), q(3, 2)], x2.clone()), wide)?;
    let f33 = hypergeom_series(
        &HypergeomSpec::new(vec![q(2, 1), q(2, 1), q(1 - n, 2)], vec![q(1, 1), q(1, 1), q(3, 2)], x2),
        wide,
    )?;
    let poly = xpoly(&[q(0, 1), q(0, 1), PiScalar::int(3 - 3 * n), q(0, 1), PiScalar::int(5 - 6 * n + n * n)]);
    let bracket = poly
        .add(&f_a.mul(&xpow(PiScalar::int(3 * n - 15), 2)))
        .add(&f22.mul(&xpow(PiScalar::int(24), 2)))
        .sub(&f33.mul(&xpow(PiScalar::int(12), 2)));
    // 1/(3(n−1)x) · bracket
    let divided = bracket.shift_down(1)?.scale(&q(1, 3 * (n - 1)));
    let head = xpoly(&[q(0, 1), q(1, 1), q(0, 1), q(5 - n, 3)]);
    Ok(Some(head.add(&divided).truncate(order + 1)))
}

/// Hypergeometric representations against the defining sums.
pub fn verify_hypergeometric(range: RangeInclusive<i64>, order: usize) -> Vec<CheckRecord> {
    type Builder = fn(i64, usize) -> Result<Option<FormalSeries>>;
    let forms: [(&str, Kind, &str, Builder); 4] = [
        ("mu 1F1", Kind::Mu, "mu_n = 1F1(-n/2,1/2,x^2) - (4/3) n x^4 1F1(2-n/2,5/2,x^2)", |n, o| {
            mu_hypergeometric(n, o).map(Some)
        }),
        ("nu 1F1", Kind::Nu, "nu_n = (x+2x^3) 1F1(1/2-n/2,3/2,x^2) + (2/3) x^3 (-1+2x^2) 1F1(3/2-n/2,5/2,x^2)", |n, o| {
            nu_hypergeometric(n, o).map(Some)
        }),
        ("mu 2F2", Kind::Mu, "mu_n with the 2F2({2,1-n/2},{1,3/2},x^2) form", mu_intermediate),
        ("nu 3F3", Kind::Nu, "nu_n with the 2F2 and 3F3({2,2,1/2-n/2},{1,1,3/2},x^2) form", nu_intermediate),
    ];
    let jobs: Vec<(usize, i64)> = (0..forms.len()).flat_map(|k| range.clone().map(move |n| (k, n))).collect();
    jobs.par_iter()
        .filter_map(|&(k, n)| {
            let (group, kind, anchor, build) = forms[k];
            let id = format!("{group} {}_{n}", kind.name());
            match build(n, order) {
                Ok(None) => None,
                Ok(Some(closed)) => {
                    let cmp = compare_scaled(&closed, &kind.series(n, order), &PiScalar::one(), order + 1);
                    Some(comparison_record(SUITE, group, Some(n), id, anchor, format!("{}_{n} sum", kind.name()), &cmp))
                }
                Err(e) => Some(error_record(SUITE, group, Some(n), id, &e)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(name: &str) -> DiffOperator {
        catalog_op(name).unwrap()
    }

    #[test]
    fn printed_examples() {
        let b = op("b~");
        let cmp = check_image(&b, &mu_series(2, 16), &nu_series(1, 16), &PiScalar::int(-8), 1);
        assert_eq!(cmp.status, Status::Pass);
        let zero = FormalSeries::zero(Variable::X);
        assert_eq!(check_image(&b, &nu_series(3, 16), &zero, &PiScalar::zero(), 1).status, Status::Pass);
        let cdag = op("c~†");
        let cmp = check_image(&cdag, &mu_series(4, 16), &nu_series(7, 16), &PiScalar::int(84), 1);
        assert_eq!(cmp.status, Status::Pass);
    }

    #[test]
    fn guaranteed_order_after_third_order_operator() {
        let cmp = check_image(&op("b~"), &mu_series(2, 24), &nu_series(1, 24), &PiScalar::int(-8), 1);
        assert_eq!(cmp.known, Some(22));
        assert_eq!(cmp.order_text(), "21");
    }

    #[test]
    fn wrong_coefficient_is_soft() {
        let cmp = check_image(&op("b~"), &mu_series(2, 16), &nu_series(1, 16), &PiScalar::int(8), 1);
        assert_eq!(cmp.status, Status::SoftMismatch);
        assert_eq!(cmp.lambda, Some(PiScalar::int(-8)));
    }

    #[test]
    fn hypergeometric_forms_agree() {
        for n in [-3, 0, 1, 2, 5] {
            assert_eq!(compare_scaled(&mu_hypergeometric(n, 16).unwrap(), &mu_series(n, 16), &PiScalar::one(), 17).status, Status::Pass);
            assert_eq!(compare_scaled(&nu_hypergeometric(n, 16).unwrap(), &nu_series(n, 16), &PiScalar::one(), 17).status, Status::Pass);
        }
        assert!(mu_intermediate(2, 10).unwrap().is_none());
        assert!(nu_intermediate(1, 10).unwrap().is_none());
    }

    #[test]
    fn ode_residuals_vanish() {
        assert!(verify_ode(-2..=2, 14).iter().all(|r| r.status == Status::Pass));
    }
}
