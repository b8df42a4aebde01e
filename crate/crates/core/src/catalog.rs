//! The fixed catalog of named operators: oscillator, deformed Hamiltonian,
//! supercharges, third-order ladders and their gauged forms.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::operator::DiffOperator;
use crate::ratfun::RationalFunction;
use crate::scalar::PiScalar;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Every fixed catalog name, in display order.
pub const NAMES: &[&str] = &[
    "H_o", "a", "a†", "H", "A", "A†", "A1", "A1†", "A2", "A2†", "b", "b†", "c", "c†", "B", "B†", "b~", "c~",
    "b~†", "c~†", "H_gauged",
];

fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::ratio_i64(num, den)
}

fn mult(f: RationalFunction) -> DiffOperator {
    DiffOperator::multiplication(f)
}

/// `±D + w(x)`.
fn first_order(sign: i64, w: RationalFunction) -> DiffOperator {
    DiffOperator::d().scale(&PiScalar::int(sign)).add(&mult(w))
}

/// `1 + 2x²`.
pub fn h2() -> RationalFunction {
    RationalFunction::from_i64s(&[1, 0, 2])
}

/// Logarithmic derivative of ψ₋₃ = e^{-x²/2}/(1+2x²): `-x - 4x/(1+2x²)`.
pub fn gauge_log_derivative() -> RationalFunction {
    RationalFunction::x().neg().sub(&rf(&[0, 4], &[1, 0, 2]))
}

fn build_fixed(name: &str) -> Result<DiffOperator> {
    let x = RationalFunction::x;
    let d2 = DiffOperator::d().compose(&DiffOperator::d());
    let w_a = x().neg().sub(&rf(&[0, 4], &[1, 0, 2]));
    let inv_x = rf(&[1], &[0, 1]);
    let w_a2 = x().add(&inv_x).sub(&rf(&[0, 4], &[1, 0, 2]));
    Ok(match name {
        "H_o" => d2.neg().add(&mult(RationalFunction::from_i64s(&[0, 0, 1]))),
        "a" => first_order(1, x()),
        "a†" => first_order(-1, x()),
        "H" => {
            let v = RationalFunction::from_i64s(&[0, 0, 1])
                .sub(&rf(&[16], &[1, 0, 4, 0, 4]))
                .add(&rf(&[8], &[1, 0, 2]));
            d2.neg().add(&mult(v))
        }
        "A" => first_order(1, w_a),
        "A†" => first_order(-1, w_a),
        "A1" => first_order(1, x().sub(&inv_x)),
        "A1†" => first_order(-1, x().sub(&inv_x)),
        "A2" => first_order(1, w_a2),
        "A2†" => first_order(-1, w_a2),
        "b" => get("A")?.compose(&get("a")?).compose(&get("A†")?),
        "b†" => get("A")?.compose(&get("a†")?).compose(&get("A†")?),
        "c" => get("A2")?.compose(&get("A1")?).compose(&get("A†")?),
        "c†" => get("A")?.compose(&get("A1†")?).compose(&get("A2†")?),
        "B" => get("b")?.pow(3),
        "B†" => get("b†")?.pow(3),
        "b~" => get("b")?.conjugate_log(&gauge_log_derivative()),
        "c~" => get("c")?.conjugate_log(&gauge_log_derivative()),
        "b~†" => get("b†")?.conjugate_log(&gauge_log_derivative()),
        "c~†" => get("c†")?.conjugate_log(&gauge_log_derivative()),
        "H_gauged" => get("H")?.add(&DiffOperator::int(3)).conjugate_log(&gauge_log_derivative()),
        _ => return Err(Error::UnknownOperator(name.to_string())),
    })
}

fn cache() -> &'static Mutex<HashMap<String, Arc<DiffOperator>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<DiffOperator>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn get(name: &str) -> Result<DiffOperator> {
    build(name).map(|op| (*op).clone())
}

/// Build a catalog operator. Fixed names are memoized; parameterized names
/// `b~_n(k)`, `c~_n(k)`, `b~†_n(k)`, `c~†_n(k)` are built per integer `k`.
pub fn build(name: &str) -> Result<Arc<DiffOperator>> {
    if let Some(op) = cache().lock().expect("catalog cache poisoned").get(name) {
        return Ok(op.clone());
    }
    let op = Arc::new(match parse_parameterized(name) {
        Some((base, n)) => first_order_form(base, n)?,
        None => build_fixed(name)?,
    });
    cache().lock().expect("catalog cache poisoned").insert(name.to_string(), op.clone());
    Ok(op)
}

fn parse_parameterized(name: &str) -> Option<(&str, i64)> {
    let (base, rest) = name.split_once("_n(")?;
    let n = rest.strip_suffix(')')?.trim().parse().ok()?;
    Some((base, n))
}

/// The first-order form of a gauged ladder on the eigenspace `H_gauged = 2n`:
/// the right remainder of the third-order operator modulo `H_gauged - 2n`.
pub fn first_order_form(base: &str, n: i64) -> Result<DiffOperator> {
    if !matches!(base, "b~" | "c~" | "b~†" | "c~†") {
        return Err(Error::UnknownOperator(format!("{base}_n({n})")));
    }
    let full = build(base)?;
    let modulus = build("H_gauged")?.sub(&DiffOperator::int(2 * n));
    Ok(full.right_div_rem(&modulus).1)
}

/// The gauged lowering operators as printed, before any conjugation.
pub fn displayed(name: &str) -> Result<DiffOperator> {
    let one_plus = h2();
    let sq = one_plus.mul(&one_plus);
    let x = RationalFunction::x();
    let d = |k: usize| {
        let mut v = vec![RationalFunction::zero(); k + 1];
        v[k] = RationalFunction::one();
        DiffOperator::from_coeffs(v)
    };
    match name {
        "b~" => {
            let c2 = x.scale(&PiScalar::int(2)).add(&rf(&[0, 12], &[1, 0, 2]));
            let c1 = RationalFunction::int(-4)
                .add(&RationalFunction::int(24).div(&sq).expect("nonzero"))
                .sub(&rf(&[16], &[1, 0, 2]));
            Ok(d(3).neg().add(&d(2).premul(&c2)).add(&d(1).premul(&c1)))
        }
        "c~" => {
            let c2 = rf(&[0, 12], &[1, 0, 2]);
            let c1 = RationalFunction::from_i64s(&[0, 0, -48]).div(&sq).expect("nonzero");
            Ok(d(3).neg().add(&d(2).premul(&c2)).add(&d(1).premul(&c1)))
        }
        "b~_n" | "c~_n" => Err(Error::Invalid("use displayed_first_order".into())),
        _ => Err(Error::UnknownOperator(name.to_string())),
    }
}

/// The printed first-order forms `b~_n`, `c~_n`.
pub fn displayed_first_order(base: &str, n: i64) -> Result<DiffOperator> {
    let sq = h2().mul(&h2());
    let c0;
    let c1;
    match base {
        "b~" => {
            c0 = rf(&[0, -8 * n], &[1, 0, 2]);
            c1 = RationalFunction::from_i64s(&[2 * (n - 3), 0, 8 * n, 0, 8 * (n - 1)]).div(&sq).expect("nonzero");
        }
        "c~" => {
            c0 = RationalFunction::from_i64s(&[0, -4 * n, 0, 0, 0, 16 * n]).div(&sq).expect("nonzero");
            c1 = RationalFunction::from_i64s(&[2 * (n - 5), 0, 4 * (2 * n - 5), 0, 8 * (n - 5), 0, -16])
                .div(&sq)
                .expect("nonzero");
        }
        _ => return Err(Error::UnknownOperator(format!("{base}_n({n})"))),
    }
    Ok(DiffOperator::from_coeffs(vec![c0, c1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(name: &str) -> DiffOperator {
        (*build(name).unwrap()).clone()
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(matches!(build("d"), Err(Error::UnknownOperator(_))));
    }

    #[test]
    fn supercharge_factorization() {
        let h = op("H");
        assert_eq!(op("A").compose(&op("A†")), h.add(&DiffOperator::int(3)));
    }

    #[test]
    fn gauged_hamiltonian_form() {
        // -D² + (2x + 8x/(1+2x²)) D
        let c1 = RationalFunction::from_i64s(&[0, 2]).add(&rf(&[0, 8], &[1, 0, 2]));
        let expected = DiffOperator::from_coeffs(vec![RationalFunction::zero(), c1, RationalFunction::int(-1)]);
        assert_eq!(op("H_gauged"), expected);
    }

    #[test]
    fn gauged_ladders_match_display() {
        assert_eq!(op("b~"), displayed("b~").unwrap());
        assert_eq!(op("c~"), displayed("c~").unwrap());
    }

    #[test]
    fn first_order_forms_match_display() {
        for n in -4..8 {
            assert_eq!(first_order_form("b~", n).unwrap(), displayed_first_order("b~", n).unwrap(), "b~ n={n}");
            assert_eq!(first_order_form("c~", n).unwrap(), displayed_first_order("c~", n).unwrap(), "c~ n={n}");
        }
    }
}
