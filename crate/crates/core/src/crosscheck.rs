//! Consistency between constructions: the eop-normalized states against the
//! Darboux states, and the terminating gauged series against the physical
//! states divided by the gauge ψ₋₃.

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gauged::Kind;
use crate::ratfun::{RationalFunction, XPoly};
use crate::report::{error_record, CheckRecord, Status};
use crate::states::{def_state, eop_state};
use crate::text::{format_scalar, format_xpoly};
use std::ops::RangeInclusive;

pub const SUITE: &str = "crosscheck";

/// Degree bound used to decide that a series terminates.
const TAIL: usize = 12;

/// The gauged solution of matching parity: μₙ for even n, νₙ for odd n.
pub fn physical_kind(n: i64) -> Kind {
    if n.rem_euclid(2) == 0 {
        Kind::Mu
    } else {
        Kind::Nu
    }
}

/// The polynomial the series terminates to, if its coefficients vanish from
/// degree |n|+1 through |n|+1+TAIL.
pub fn terminating_polynomial(kind: Kind, n: i64) -> Option<XPoly> {
    let deg = n.unsigned_abs() as usize + 1;
    let f = kind.series(n, deg + TAIL);
    let cs = f.coeffs();
    if cs.iter().skip(deg).any(|c| !c.is_zero()) {
        return None;
    }
    Some(XPoly::from_coeffs(cs.iter().take(deg).cloned().collect()))
}

fn eop_record(n: i64) -> CheckRecord {
    let id = format!("eop state {n}");
    let group = "eop vs darboux";
    let run = || -> Result<CheckRecord> {
        let eop = eop_state(n)?;
        let dar = def_state(n)?;
        let lambda = eop.func.exact_divide(&dar.func)?;
        let rec = CheckRecord::new(SUITE, group, Some(n), id.clone(), "psi_n = E^-1 y_n / H2 is the Darboux state up to a constant")
            .expected("constant multiple of the Darboux state");
        Ok(match lambda {
            Some(l) if !l.is_zero() => rec.status(Status::Pass).recomputed(format!("eop = ({}) darboux", format_scalar(&l))),
            _ => rec.status(Status::Fail).recomputed("not a constant multiple"),
        })
    };
    run().unwrap_or_else(|e| error_record(SUITE, group, Some(n), id, &e))
}

fn polynomial_record(n: i64) -> CheckRecord {
    let kind = physical_kind(n);
    let id = format!("{}_{n} against psi_{}", kind.name(), n - 3);
    let group = "gauged polynomials";
    let anchor = "f_n = psi_{n-3} / psi_{-3} solves the gauged ODE";
    let run = || -> Result<CheckRecord> {
        let rec = CheckRecord::new(SUITE, group, Some(n), id.clone(), anchor);
        let physical = n == 0 || n >= 3;
        let poly = terminating_polynomial(kind, n);
        let Some(p) = poly else {
            return Ok(if physical {
                rec.status(Status::Fail).expected("a terminating series").recomputed("series does not terminate")
            } else {
                rec.status(Status::Pass)
                    .expected(format!("no polynomial solution; psi_{} is not a physical state", n - 3))
                    .recomputed("series does not terminate")
            });
        };
        if !physical {
            return Ok(rec
                .status(Status::Fail)
                .expected("no polynomial solution")
                .recomputed(format_xpoly(&p)));
        }
        let gauge = def_state(-3)?.func;
        let lifted = gauge.mul(&AlgebraElement::from_rf(RationalFunction::poly(p.clone())));
        let state = def_state(n - 3)?.func;
        let lambda = state.exact_divide(&lifted)?.ok_or_else(|| Error::Invalid("not proportional".into()));
        Ok(match lambda {
            Ok(l) if !l.is_zero() => rec
                .status(Status::Pass)
                .expected(format!("psi_{} / psi_-3 proportional to {}_{n}", n - 3, kind.name()))
                .recomputed(format!("psi_{} = ({}) psi_-3 {}_{n}", n - 3, format_scalar(&l), kind.name()))
                .note(format!("{}_{n} = {}", kind.name(), format_xpoly(&p))),
            _ => rec
                .status(Status::Fail)
                .expected(format!("psi_{} / psi_-3 proportional to {}_{n}", n - 3, kind.name()))
                .recomputed("not proportional"),
        })
    };
    run().unwrap_or_else(|e| error_record(SUITE, group, Some(n), id, &e))
}

/// eop against Darboux states for n = −3 and n in `eop_range` (n ≥ 0), and
/// the gauged series against the physical states for n in `poly_range`.
pub fn verify_crosscheck(eop_range: RangeInclusive<i64>, poly_range: RangeInclusive<i64>) -> Vec<CheckRecord> {
    let mut out = vec![eop_record(-3)];
    out.extend(eop_range.filter(|&n| n >= 0).map(eop_record));
    out.extend(poly_range.filter(|&n| n >= 0).map(polynomial_record));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminating_examples() {
        assert_eq!(terminating_polynomial(Kind::Mu, 4), Some(XPoly::from_i64s(&[1, 0, -4, 0, -4])));
        assert!(terminating_polynomial(Kind::Mu, 2).is_none());
        assert!(terminating_polynomial(Kind::Nu, 1).is_none());
    }

    #[test]
    fn all_pass() {
        for r in verify_crosscheck(0..=10, 0..=8) {
            assert_eq!(r.status, Status::Pass, "{r}");
        }
    }
}
