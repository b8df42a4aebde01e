//! Operator identities: a small prefix expression language over catalog
//! names, the shipped identity list, and the power-commutator families.

use crate::catalog;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::operator::DiffOperator;
use crate::report::{CheckRecord, Status};
use crate::scalar::{PiScalar, Rational};
use crate::text;
use std::fmt;

const DATA: &str = include_str!("../data/identities.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Heisenberg,
    Intertwine,
    Factorize,
    Commutator,
    PowerCommutator,
    Mixed,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Heisenberg => "heisenberg",
            Category::Intertwine => "intertwine",
            Category::Factorize => "factorize",
            Category::Commutator => "commutator",
            Category::PowerCommutator => "power-commutator",
            Category::Mixed => "mixed",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "heisenberg" => Category::Heisenberg,
            "intertwine" => Category::Intertwine,
            "factorize" => Category::Factorize,
            "commutator" => Category::Commutator,
            "power-commutator" => Category::PowerCommutator,
            "mixed" => Category::Mixed,
            _ => return Err(Error::Invalid(format!("unknown identity category `{s}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Num(Rational),
    Add(Vec<Expr>),
    Sub(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Comm(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn name(s: &str) -> Self {
        Expr::Name(s.to_string())
    }

    pub fn int(v: i64) -> Self {
        Expr::Num(Rational::from_i64(v))
    }

    /// Build the operator by evaluating the tree bottom-up.
    pub fn build(&self) -> Result<DiffOperator> {
        Ok(match self {
            Expr::Name(n) => (*catalog::build(n)?).clone(),
            Expr::Num(q) => DiffOperator::scalar(PiScalar::rational(q.clone())),
            Expr::Add(xs) => xs.iter().try_fold(DiffOperator::zero(), |acc, e| Ok::<_, Error>(acc.add(&e.build()?)))?,
            Expr::Sub(xs) => match xs.as_slice() {
                [x] => x.build()?.neg(),
                [first, rest @ ..] => {
                    rest.iter().try_fold(first.build()?, |acc, e| Ok::<_, Error>(acc.sub(&e.build()?)))?
                }
                [] => DiffOperator::zero(),
            },
            Expr::Mul(xs) => {
                xs.iter().try_fold(DiffOperator::identity(), |acc, e| Ok::<_, Error>(acc.compose(&e.build()?)))?
            }
            Expr::Pow(x, k) => x.build()?.pow(*k),
            Expr::Comm(p, q) => p.build()?.commutator(&q.build()?),
        })
    }

    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let e = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse { pos, msg: format!("trailing input in `{src}`") });
        }
        Ok(e)
    }
}

fn tokenize(src: &str) -> Vec<String> {
    src.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(str::to_string).collect()
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<Expr> {
    let tok = tokens.get(*pos).ok_or(Error::Parse { pos: *pos, msg: "unexpected end".into() })?;
    *pos += 1;
    if tok != "(" {
        return Ok(parse_atom(tok));
    }
    let head = tokens.get(*pos).ok_or(Error::Parse { pos: *pos, msg: "missing operator".into() })?.clone();
    *pos += 1;
    let mut args = Vec::new();
    while tokens.get(*pos).is_some_and(|t| t != ")") {
        args.push(parse_expr(tokens, pos)?);
    }
    if tokens.get(*pos).is_none() {
        return Err(Error::Parse { pos: *pos, msg: "unbalanced parenthesis".into() });
    }
    *pos += 1;
    let bad = |msg: &str| Error::Parse { pos: *pos, msg: format!("`{head}`: {msg}") };
    Ok(match head.as_str() {
        "+" => Expr::Add(args),
        "-" => Expr::Sub(args),
        "*" => Expr::Mul(args),
        "^" => {
            let [base, Expr::Num(k)] = <[Expr; 2]>::try_from(args).map_err(|_| bad("expects two arguments"))? else {
                return Err(bad("exponent must be a literal"));
            };
            let k = k.to_i64().and_then(|k| u32::try_from(k).ok()).ok_or_else(|| bad("exponent must be a natural number"))?;
            Expr::Pow(Box::new(base), k)
        }
        "comm" => {
            let [p, q] = <[Expr; 2]>::try_from(args).map_err(|_| bad("expects two arguments"))?;
            Expr::Comm(Box::new(p), Box::new(q))
        }
        _ => return Err(bad("unknown operator")),
    })
}

fn parse_atom(tok: &str) -> Expr {
    let num = match tok.split_once('/') {
        Some((n, d)) => n.parse::<i64>().ok().zip(d.parse::<i64>().ok().filter(|&d| d != 0)).map(|(n, d)| Rational::new(n, d)),
        None => tok.parse::<i64>().ok().map(Rational::from_i64),
    };
    match num {
        Some(q) => Expr::Num(q),
        None => Expr::Name(tok.to_string()),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, xs: &[Expr]| {
            write!(f, "({head}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        };
        match self {
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Add(xs) => list(f, "+", xs),
            Expr::Sub(xs) => list(f, "-", xs),
            Expr::Mul(xs) => list(f, "*", xs),
            Expr::Pow(x, k) => write!(f, "(^ {x} {k})"),
            Expr::Comm(p, q) => write!(f, "(comm {p} {q})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorIdentity {
    pub name: String,
    pub category: Category,
    pub lhs: Expr,
    pub rhs: Expr,
}

/// Result of checking one identity.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub name: String,
    pub category: Category,
    pub pass: bool,
    pub lhs_order: Option<usize>,
    pub rhs_order: Option<usize>,
    /// `lhs - rhs` when it is not the zero operator.
    pub residual: Option<DiffOperator>,
}

/// Parse identity records `name | category | lhs | rhs`; `#` starts a comment line.
pub fn parse_identities(src: &str) -> Result<Vec<OperatorIdentity>> {
    let mut out = Vec::new();
    for (lineno, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [name, cat, lhs, rhs] = fields.as_slice() else {
            return Err(Error::Parse { pos: lineno + 1, msg: "expected four `|`-separated fields".into() });
        };
        out.push(OperatorIdentity {
            name: name.to_string(),
            category: Category::parse(cat)?,
            lhs: Expr::parse(lhs)?,
            rhs: Expr::parse(rhs)?,
        });
    }
    Ok(out)
}

/// The shipped identity list.
pub fn standard_identities() -> Vec<OperatorIdentity> {
    parse_identities(DATA).expect("shipped identity file parses")
}

pub fn verify_identity(id: &OperatorIdentity) -> Result<IdentityReport> {
    let lhs = id.lhs.build()?;
    let rhs = id.rhs.build()?;
    Ok(report(id.name.clone(), id.category, &lhs, &rhs))
}

fn report(name: String, category: Category, lhs: &DiffOperator, rhs: &DiffOperator) -> IdentityReport {
    let residual = lhs.sub(rhs);
    IdentityReport {
        name,
        category,
        pass: residual.is_zero(),
        lhs_order: lhs.order(),
        rhs_order: rhs.order(),
        residual: (!residual.is_zero()).then_some(residual),
    }
}

/// Coefficients of `op` as a polynomial in `h` (lowest first), when it is one.
pub fn h_polynomial(op: &DiffOperator, h: &DiffOperator) -> Option<Vec<PiScalar>> {
    let mut cs = Vec::new();
    let mut rest = op.clone();
    while !rest.is_zero() {
        let (q, r) = rest.right_div_rem(h);
        if r.order().is_some_and(|k| k > 0) {
            return None;
        }
        cs.push(r.coeff(0).as_constant()?);
        rest = q;
    }
    Some(cs)
}

/// `c_k H^k + ... + c_0`, highest power first.
pub fn h_poly_text(cs: &[PiScalar]) -> String {
    let terms: Vec<String> = cs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => format!("({c})"),
            1 => format!("({c})H"),
            _ => format!("({c})H^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Check one identity as a report record. Two polynomials in `H` that differ
/// only in their coefficients are a soft mismatch.
pub fn identity_record(id: &OperatorIdentity) -> CheckRecord {
    let record = CheckRecord::new("operators", id.category.name(), None, id.name.clone(), format!("{} = {}", id.lhs, id.rhs));
    let (lhs, rhs) = match (id.lhs.build(), id.rhs.build()) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return record.status(Status::Fail).note(e.to_string()),
    };
    let residual = lhs.sub(&rhs);
    if residual.is_zero() {
        return record;
    }
    let h = (*catalog::build("H").expect("catalog operator")).clone();
    match (h_polynomial(&lhs, &h), h_polynomial(&rhs, &h)) {
        (Some(l), Some(r)) => record
            .status(Status::SoftMismatch)
            .expected(h_poly_text(&r))
            .recomputed(h_poly_text(&l))
            .note("both sides are polynomials in H; coefficients differ"),
        _ => record.status(Status::Fail).recomputed(format!("residual {}", text::format_operator(&residual))),
    }
}

/// Records for the shipped identity list.
pub fn verify_identities() -> Vec<CheckRecord> {
    standard_identities().iter().map(identity_record).collect()
}

/// Records for both power-commutator identities of each family for `1..=max_n`.
pub fn verify_power_commutators(max_n: u32) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for family in [LadderFamily::B, LadderFamily::C] {
        for n in 1..=max_n {
            let group = family.lower();
            match power_commutator_check(family, n) {
                Ok(reports) => out.extend(reports.into_iter().map(|r| {
                    let mut rec = CheckRecord::new("power-commutators", group, Some(n as i64), r.name, power_anchor(family))
                        .status(Status::from_bool(r.pass));
                    if let Some(res) = r.residual {
                        rec = rec.recomputed(format!("residual {}", text::format_operator(&res)));
                    }
                    rec
                })),
                Err(e) => out.push(crate::report::error_record("power-commutators", group, Some(n as i64), "", &e)),
            }
        }
    }
    out
}

fn power_anchor(family: LadderFamily) -> &'static str {
    match family {
        LadderFamily::B => "[b,(b†)^n] = (b†)^(n-1)(6nH^2 + 4n(1+3n)H + 2n(-9+2n+4n^2)); [b†,b^n] = b^(n-1)(-6nH^2 + 4n(-7+3n)H - 2n(7-14n+4n^2))",
        LadderFamily::C => "[c,(c†)^n] = (c†)^(n-1)(18nH^2 + 108n(n-1)H + 6n(-1-54n+36n^2)); [c†,c^n] = c^(n-1)(-18nH^2 + 108n(n-1)H - 6n(-1-54n+36n^2))",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderFamily {
    B,
    C,
}

impl LadderFamily {
    pub fn lower(self) -> &'static str {
        match self {
            LadderFamily::B => "b",
            LadderFamily::C => "c",
        }
    }

    pub fn raise(self) -> &'static str {
        match self {
            LadderFamily::B => "b†",
            LadderFamily::C => "c†",
        }
    }
}

/// Coefficients (constant, H, H²) of the polynomial factor in
/// `[L, (L†)^n] = (L†)^{n-1} p(H)` and `[L†, L^n] = L^{n-1} q(H)`.
pub fn power_commutator_polys(family: LadderFamily, n: i64) -> ([i64; 3], [i64; 3]) {
    match family {
        LadderFamily::B => (
            [2 * n * (-9 + 2 * n + 4 * n * n), 4 * n * (1 + 3 * n), 6 * n],
            [-2 * n * (7 - 14 * n + 4 * n * n), 4 * n * (-7 + 3 * n), -6 * n],
        ),
        LadderFamily::C => (
            [6 * n * (-1 - 54 * n + 36 * n * n), 108 * n * (n - 1), 18 * n],
            [-6 * n * (-1 - 54 * n + 36 * n * n), 108 * n * (n - 1), -18 * n],
        ),
    }
}

/// Check both power-commutator identities of a family at one `n` by direct
/// composition. `n = 0` gives zero on both sides.
pub fn power_commutator_check(family: LadderFamily, n: u32) -> Result<[IdentityReport; 2]> {
    let lower = catalog::build(family.lower())?;
    let raise = catalog::build(family.raise())?;
    let h = catalog::build("H")?;
    let (p, q) = power_commutator_polys(family, n as i64);
    let poly = |cs: [i64; 3]| h.poly_in(&cs.map(PiScalar::int));
    let (l, r) = (family.lower(), family.raise());
    let name_up = format!("[{l},({r})^n]=({r})^(n-1)p(H) n={n}");
    let name_down = format!("[{r},{l}^n]={l}^(n-1)q(H) n={n}");
    if n == 0 {
        let z = DiffOperator::zero();
        return Ok([
            report(name_up, Category::PowerCommutator, &lower.commutator(&DiffOperator::identity()), &z),
            report(name_down, Category::PowerCommutator, &raise.commutator(&DiffOperator::identity()), &z),
        ]);
    }
    let raise_pow = raise.pow(n - 1);
    let lower_pow = lower.pow(n - 1);
    let up_lhs = lower.commutator(&raise_pow.compose(&raise));
    let up_rhs = raise_pow.compose(&poly(p));
    let down_lhs = raise.commutator(&lower_pow.compose(&lower));
    let down_rhs = lower_pow.compose(&poly(q));
    Ok([
        report(name_up, Category::PowerCommutator, &up_lhs, &up_rhs),
        report(name_down, Category::PowerCommutator, &down_lhs, &down_rhs),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_round_trip() {
        let src = "(- (* a a†) (* a† a) (^ H 2) 3/4)";
        let e = Expr::parse(src).unwrap();
        assert_eq!(e.to_string(), src);
        assert!(Expr::parse("(^ H x)").is_err());
        assert!(Expr::parse("(+ a").is_err());
    }

    #[test]
    fn heisenberg_and_supercharges() {
        for id in standard_identities() {
            if matches!(id.category, Category::Heisenberg | Category::Intertwine) {
                let r = verify_identity(&id).unwrap();
                assert!(r.pass, "{} residual {:?}", r.name, r.residual);
            }
        }
    }

    #[test]
    fn perturbed_identity_fails_with_residual() {
        let id = OperatorIdentity {
            name: "[H,b]=-3b".into(),
            category: Category::Commutator,
            lhs: Expr::parse("(comm H b)").unwrap(),
            rhs: Expr::parse("(* -3 b)").unwrap(),
        };
        let r = verify_identity(&id).unwrap();
        assert!(!r.pass);
        assert_eq!(r.residual.unwrap(), (*catalog::build("b").unwrap()).clone());
    }

    #[test]
    fn h_polynomial_of_factorization() {
        let h = (*catalog::build("H").expect("catalog operator")).clone();
        let bbd = catalog::build("b").unwrap().compose(&catalog::build("b†").unwrap());
        // (H-1)(H+3)(H+5) = H^3 + 7H^2 + 7H - 15
        assert_eq!(h_polynomial(&bbd, &h).unwrap(), [-15, 7, 7, 1].map(PiScalar::int).to_vec());
        assert!(h_polynomial(&catalog::build("b").unwrap(), &h).is_none());
    }

    #[test]
    fn mixed_relations() {
        let recs = verify_identities();
        let by_name = |n: &str| recs.iter().find(|r| r.id == n).unwrap();
        assert_eq!(by_name("mixed b³c†").status, Status::Pass);
        let printed = by_name("mixed c(b†)³");
        assert_eq!(printed.status, Status::SoftMismatch);
        assert_eq!(
            printed.recomputed.as_deref(),
            Some("(-1)H^6 + (-24)H^5 + (-205)H^4 + (-720)H^3 + (-739)H^2 + (744)H + (945)")
        );
        assert_eq!(by_name("mixed c(b†)³=b³c†").status, Status::Pass);
        assert_eq!(by_name("mixed (b†)³c").status, Status::Pass);
        assert_eq!(by_name("mixed c†b³").status, Status::Pass);
    }

    #[test]
    fn power_commutator_first_cases() {
        for fam in [LadderFamily::B, LadderFamily::C] {
            for n in 0..=2 {
                for r in power_commutator_check(fam, n).unwrap() {
                    assert!(r.pass, "{}", r.name);
                }
            }
        }
        // n = 1: 6H² + 16H - 6 and 18H² - 114
        assert_eq!(power_commutator_polys(LadderFamily::B, 1).0, [-6, 16, 6]);
        assert_eq!(power_commutator_polys(LadderFamily::C, 1).0, [-114, 0, 18]);
    }
}
