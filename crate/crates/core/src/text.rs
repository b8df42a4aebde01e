//! Canonical text forms and a recursive-descent parser for the same grammar.
//!
//! Constants print with integers cleared, `i` for the imaginary unit and
//! `sqrt(pi)` for √π: `(-2*sqrt(pi) + 4*i)/3`. Algebra elements print as a
//! sum of `(num)/(den) * E^e * F^f * I[fam,p]^m` terms in canonical order.

use crate::algebra::{AlgebraElement, Monomial, QuadFamily, QuadTag};
use crate::error::{Error, Result};
use crate::field::{Field, Poly};
use crate::operator::DiffOperator;
use crate::ratfun::{RationalFunction, XPoly};
use crate::scalar::{GaussRational, PiScalar, Rational};
use crate::states;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

/// `c * f1 * f2 ...` with unit coefficients elided.
fn scaled(c: &BigInt, factors: &[String]) -> String {
    if factors.is_empty() {
        return c.to_string();
    }
    let body = factors.join("*");
    if c.is_one() {
        body
    } else if *c == -BigInt::one() {
        format!("-{body}")
    } else {
        format!("{c}*{body}")
    }
}

fn sqrt_pi_power(k: usize) -> Option<String> {
    match k {
        0 => None,
        1 => Some("sqrt(pi)".into()),
        _ => Some(format!("sqrt(pi)^{k}")),
    }
}

fn lcm_of_denominators<'a>(cs: impl IntoIterator<Item = &'a GaussRational>) -> BigInt {
    cs.into_iter().fold(BigInt::one(), |acc, g| acc.lcm(&g.denom_lcm()))
}

fn scale_gauss_poly(p: &Poly<GaussRational>, l: &BigInt) -> Poly<GaussRational> {
    let f = GaussRational::real(Rational::from_big(l.clone(), BigInt::one()));
    p.scale(&f)
}

/// Terms of a polynomial in √π with Gaussian-integer coefficients,
/// highest power first.
fn gauss_poly_terms(p: &Poly<GaussRational>) -> Vec<String> {
    let mut terms = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        let r = sqrt_pi_power(k);
        if !c.re.is_zero() {
            terms.push(scaled(c.re.numer(), &r.iter().cloned().collect::<Vec<_>>()));
        }
        if !c.im.is_zero() {
            let mut fs = vec!["i".to_string()];
            fs.extend(r.iter().cloned());
            terms.push(scaled(c.im.numer(), &fs));
        }
    }
    terms
}

/// Canonical text of a constant.
pub fn format_scalar(c: &PiScalar) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let l = lcm_of_denominators(c.num().coeffs().iter().chain(c.den().coeffs()));
    let num = scale_gauss_poly(c.num(), &l);
    let den = scale_gauss_poly(c.den(), &l);
    let nterms = gauss_poly_terms(&num);
    let ntext = join_terms(&nterms);
    if den.is_constant() {
        let d = den.coeff(0).re.numer().clone();
        if d.is_one() {
            return ntext;
        }
        return if nterms.len() == 1 { format!("{ntext}/{d}") } else { format!("({ntext})/{d}") };
    }
    format!("({ntext})/({})", join_terms(&gauss_poly_terms(&den)))
}

fn is_atomic(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    !body.contains([' ', '/', '-', '+'])
}

fn x_power(k: usize) -> Option<String> {
    match k {
        0 => None,
        1 => Some("x".into()),
        _ => Some(format!("x^{k}")),
    }
}

/// Terms of a polynomial in x, lowest degree first.
fn xpoly_terms(p: &XPoly) -> Vec<String> {
    let mut terms = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let ct = format_scalar(c);
        let term = match x_power(k) {
            None => ct,
            Some(xp) if ct == "1" => xp,
            Some(xp) if ct == "-1" => format!("-{xp}"),
            Some(xp) if is_atomic(&ct) => format!("{ct}*{xp}"),
            Some(xp) => format!("({ct})*{xp}"),
        };
        terms.push(term);
    }
    terms
}

pub fn format_xpoly(p: &XPoly) -> String {
    join_terms(&xpoly_terms(p))
}

/// `(num)` or `(num)/(den)`, clearing Gaussian-rational denominators when no
/// coefficient has √π in its denominator.
pub fn format_rf(f: &RationalFunction) -> String {
    let mut num = f.num().clone();
    let mut den = f.den().clone();
    let all: Vec<&PiScalar> = num.coeffs().iter().chain(den.coeffs()).collect();
    if !den.is_one() && all.iter().all(|c| c.den().is_one()) {
        let l = all.iter().fold(BigInt::one(), |acc, c| acc.lcm(&lcm_of_denominators(c.num().coeffs())));
        let lc = PiScalar::rational(Rational::from_big(l, BigInt::one()));
        num = num.scale(&lc);
        den = den.scale(&lc);
    }
    if den.is_one() {
        format!("({})", format_xpoly(&num))
    } else {
        format!("({})/({})", format_xpoly(&num), format_xpoly(&den))
    }
}

fn format_monomial_factors(m: &Monomial) -> Vec<String> {
    let mut fs = Vec::new();
    match m.e {
        0 => {}
        1 => fs.push("E".into()),
        e => fs.push(format!("E^{e}")),
    }
    match m.f {
        0 => {}
        1 => fs.push("F".into()),
        f => fs.push(format!("F^{f}")),
    }
    for (g, k) in &m.ints {
        let base = format!("I[{},{}]", g.tag.family.name(), g.tag.index);
        fs.push(if *k == 1 { base } else { format!("{base}^{k}") });
    }
    fs
}

/// Canonical text of an algebra element.
pub fn format_element(a: &AlgebraElement) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = a
        .terms()
        .map(|(m, c)| {
            let mut parts = vec![format_rf(c)];
            parts.extend(format_monomial_factors(m));
            parts.join(" * ")
        })
        .collect();
    terms.join(" + ")
}

/// `[a0] + [a1]*D + ...`.
pub fn format_operator(p: &DiffOperator) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| match j {
            0 => format_rf(c),
            1 => format!("{}*D", format_rf(c)),
            _ => format!("{}*D^{j}", format_rf(c)),
        })
        .collect();
    terms.join(" + ")
}

fn latex_xpoly(p: &XPoly) -> String {
    let terms: Vec<String> = xpoly_terms(p)
        .into_iter()
        .map(|t| t.replace("sqrt(pi)", "@").replace('*', " ").replace('i', "\\imath").replace('@', "\\sqrt{\\pi}"))
        .collect();
    let s = join_terms(&terms);
    // x^10 -> x^{10}
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(ch) = chars.next() {
        out.push(ch);
        if ch == '^' {
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit() || **d == '-') {
                digits.push(*d);
                chars.next();
            }
            out.push_str(&format!("{{{digits}}}"));
        }
    }
    out
}

/// LaTeX rendering with E = e^{x²/2} written out.
pub fn latex_element(a: &AlgebraElement) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = a
        .terms()
        .map(|(m, c)| {
            let mut parts = Vec::new();
            match m.e {
                0 => {}
                1 => parts.push("e^{\\frac{1}{2}x^{2}}".to_string()),
                -1 => parts.push("e^{-\\frac{1}{2}x^{2}}".to_string()),
                e if e % 2 == 0 => parts.push(format!("e^{{{}x^{{2}}}}", if e == 2 { "".into() } else if e == -2 { "-".into() } else { (e / 2).to_string() })),
                e => parts.push(format!("e^{{\\frac{{{e}}}{{2}}x^{{2}}}}")),
            }
            let rf = if c.is_poly() {
                if c.num().coeffs().len() > 1 && !parts.is_empty() {
                    format!("\\left({}\\right)", latex_xpoly(c.num()))
                } else {
                    latex_xpoly(c.num())
                }
            } else {
                format!("\\frac{{{}}}{{{}}}", latex_xpoly(c.num()), latex_xpoly(c.den()))
            };
            if rf != "1" || parts.is_empty() {
                parts.insert(0, rf);
            }
            if m.f > 0 {
                parts.push(if m.f == 1 { "\\operatorname{erf}(x)".into() } else { format!("\\operatorname{{erf}}(x)^{{{}}}", m.f) });
            }
            for (g, k) in &m.ints {
                let base = format!("\\mathcal{{I}}_{{{},{}}}", g.tag.family.name(), g.tag.index);
                parts.push(if *k == 1 { base } else { format!("{base}^{{{k}}}") });
            }
            parts.join(" ")
        })
        .collect();
    join_terms(&terms)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<BigInt>().or_else(|_| self.err("expected an integer"))
    }

    fn small_int(&mut self) -> Result<i64> {
        let v = self.integer()?;
        i64::try_from(v).or_else(|_| self.err("exponent out of range"))
    }

    fn expr(&mut self) -> Result<AlgebraElement> {
        let mut acc = if self.eat("-") { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat("+") {
                acc = acc.add(&self.term()?);
            } else if self.eat("-") {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.unary()?;
        loop {
            if self.eat("*") {
                acc = acc.mul(&self.unary()?);
            } else if self.eat("/") {
                let d = self.unary()?;
                acc = self.divide(&acc, &d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn divide(&self, a: &AlgebraElement, d: &AlgebraElement) -> Result<AlgebraElement> {
        match d.as_elementary_monomial() {
            Some((e, r)) => a.div_elementary(e, &r),
            None if d.is_zero() => Err(Error::ZeroDivisor),
            None => self.err("divisor must be a single elementary term"),
        }
    }

    fn unary(&mut self) -> Result<AlgebraElement> {
        if self.eat("-") {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat("^") {
            let k = self.small_int()?;
            if k >= 0 {
                return Ok(base.pow(k as u32));
            }
            let inv = self.divide(&AlgebraElement::one(), &base)?;
            return Ok(inv.pow(k.unsigned_abs() as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<AlgebraElement> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(AlgebraElement::scalar(PiScalar::rational(Rational::from_big(n, BigInt::one()))))
            }
            Some(_) => {
                if self.eat("sqrt(pi)") {
                    Ok(AlgebraElement::scalar(PiScalar::sqrt_pi()))
                } else if self.eat("pi") {
                    let r = PiScalar::sqrt_pi();
                    Ok(AlgebraElement::scalar(r.mul(&r)))
                } else if self.eat("I[") {
                    let family = if self.eat("osc") {
                        QuadFamily::Osc
                    } else if self.eat("def") {
                        QuadFamily::Def
                    } else {
                        return self.err("expected quadrature family `osc` or `def`");
                    };
                    self.expect(",")?;
                    let index = self.small_int()?;
                    self.expect("]")?;
                    let g = states::quadrature(QuadTag { family, index })?;
                    Ok(AlgebraElement::integral(g))
                } else if self.eat("i") {
                    Ok(AlgebraElement::scalar(PiScalar::i()))
                } else if self.eat("x") {
                    Ok(AlgebraElement::x())
                } else if self.eat("E") {
                    Ok(AlgebraElement::e_pow(1))
                } else if self.eat("F") {
                    Ok(AlgebraElement::erf())
                } else {
                    self.err("unexpected character")
                }
            }
        }
    }
}

/// Parse an algebra element from its text form (any expression in the
/// grammar, not only canonical output).
pub fn parse_element(src: &str) -> Result<AlgebraElement> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_scalar(src: &str) -> Result<PiScalar> {
    parse_element(src)?
        .as_scalar()
        .ok_or(Error::Parse { pos: 0, msg: format!("`{src}` is not a constant") })
}

pub fn parse_rf(src: &str) -> Result<RationalFunction> {
    let e = parse_element(src)?;
    match e.as_elementary_monomial() {
        Some((0, r)) => Ok(r),
        None if e.is_zero() => Ok(RationalFunction::zero()),
        _ => Err(Error::Parse { pos: 0, msg: format!("`{src}` is not a rational function") }),
    }
}

impl std::fmt::Display for PiScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_scalar(self))
    }
}

impl std::fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_element(self))
    }
}

impl std::fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_operator(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_formats() {
        let r = PiScalar::sqrt_pi();
        let v = r.mul(&PiScalar::int(-2)).add(&PiScalar::i().mul(&PiScalar::int(4))).div(&PiScalar::int(3)).unwrap();
        assert_eq!(format_scalar(&v), "(-2*sqrt(pi) + 4*i)/3");
        assert_eq!(format_scalar(&PiScalar::frac(1, 12)), "1/12");
        assert_eq!(format_scalar(&PiScalar::i().neg().div(&PiScalar::int(12)).unwrap()), "-i/12");
        assert_eq!(format_scalar(&PiScalar::int(2).div(&r).unwrap()), "(2)/(sqrt(pi))");
        assert_eq!(format_scalar(&r.mul(&r)), "sqrt(pi)^2");
    }

    #[test]
    fn scalar_round_trip() {
        let r = PiScalar::sqrt_pi();
        let samples = [
            PiScalar::frac(-7, 3),
            PiScalar::i().mul(&r).add(&PiScalar::frac(1, 2)),
            PiScalar::int(3).div(&r.add(&PiScalar::i())).unwrap(),
            r.mul(&r).sub(&PiScalar::frac(5, 4)).div(&r.sub(&PiScalar::int(2))).unwrap(),
        ];
        for s in samples {
            assert_eq!(parse_scalar(&format_scalar(&s)).unwrap(), s, "{}", format_scalar(&s));
        }
    }

    #[test]
    fn element_round_trip() {
        let q = RationalFunction::ratio_i64(&[0, 1], &[1, 0, 2]);
        let a = AlgebraElement::e_pow(-1)
            .scale_rf(&q)
            .add(&AlgebraElement::erf().mul(&AlgebraElement::e_pow(1)).scale(&PiScalar::sqrt_pi()))
            .add(&AlgebraElement::integral(crate::algebra::IntegralGen::base()).scale(&PiScalar::i()));
        let text = format_element(&a);
        assert_eq!(parse_element(&text).unwrap(), a, "{text}");
    }

    #[test]
    fn singlet_shape() {
        let psi = AlgebraElement::e_pow(-1).scale_rf(&RationalFunction::ratio_i64(&[1], &[1, 0, 2]));
        assert_eq!(format_element(&psi), "(1)/(1 + 2*x^2) * E^-1");
    }

    #[test]
    fn parse_errors() {
        assert!(parse_element("(x + 1").is_err());
        assert!(parse_element("x / (x + E)").is_err());
        assert!(parse_element("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }
}
