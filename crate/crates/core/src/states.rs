//! Oscillator and deformed-oscillator states, their second solutions, and
//! the closed exceptional-Hermite form.

use crate::algebra::{AlgebraElement, IntegralGen, QuadFamily, QuadTag};
use crate::catalog;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermite::{hermite, hermite_imaginary, pseudo_hermite};
use crate::operator::DiffOperator;
use crate::ratfun::RationalFunction;
use crate::scalar::PiScalar;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Osc,
    OscTilde,
    Def,
    DefTilde,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Osc => "osc",
            Family::OscTilde => "osc-tilde",
            Family::Def => "def",
            Family::DefTilde => "def-tilde",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "osc" => Family::Osc,
            "osc-tilde" => Family::OscTilde,
            "def" => Family::Def,
            "def-tilde" => Family::DefTilde,
            _ => return Err(Error::BadLabel(format!("unknown family `{s}`"))),
        })
    }

    pub fn is_tilde(self) -> bool {
        matches!(self, Family::OscTilde | Family::DefTilde)
    }

    pub fn is_deformed(self) -> bool {
        matches!(self, Family::Def | Family::DefTilde)
    }

    /// The partner family at the same energy.
    pub fn partner(self) -> Family {
        match self {
            Family::Osc => Family::OscTilde,
            Family::OscTilde => Family::Osc,
            Family::Def => Family::DefTilde,
            Family::DefTilde => Family::Def,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Darboux,
    Rodrigues,
    Eop,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::Darboux => "darboux",
            Normalization::Rodrigues => "rodrigues",
            Normalization::Eop => "eop",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "darboux" => Normalization::Darboux,
            "rodrigues" => Normalization::Rodrigues,
            "eop" => Normalization::Eop,
            _ => return Err(Error::BadLabel(format!("unknown normalization `{s}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct StateLabel {
    pub family: Family,
    pub index: i64,
}

impl StateLabel {
    pub fn new(family: Family, index: i64) -> Self {
        StateLabel { family, index }
    }

    pub fn def(index: i64) -> Self {
        Self::new(Family::Def, index)
    }

    pub fn def_tilde(index: i64) -> Self {
        Self::new(Family::DefTilde, index)
    }

    /// 2n+1 for oscillator families, 2n+3 for deformed ones.
    pub fn energy(&self) -> i64 {
        if self.family.is_deformed() {
            2 * self.index + 3
        } else {
            2 * self.index + 1
        }
    }

    pub fn partner(&self) -> Self {
        Self::new(self.family.partner(), self.index)
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.family {
            Family::Osc => "phi",
            Family::OscTilde => "phit",
            Family::Def => "psi",
            Family::DefTilde => "psit",
        };
        write!(f, "{sym}({})", self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub label: StateLabel,
    pub func: AlgebraElement,
    pub normalization: Normalization,
    /// How the state was produced, e.g. `A·phi(2)` or `b†·psi(0)`.
    pub provenance: String,
}

impl State {
    pub fn energy(&self) -> i64 {
        self.label.energy()
    }

    /// `(H - E) f`, with `H_o` for oscillator families.
    pub fn eigen_residual(&self) -> Result<AlgebraElement> {
        let h = if self.label.family.is_deformed() { catalog::build("H")? } else { catalog::build("H_o")? };
        let shifted = h.sub(&DiffOperator::int(self.energy()));
        Ok(shifted.apply(&self.func))
    }
}

/// φ_p: `E⁻¹ H_p` for p ≥ 0 and `E·H_m(ix)` with m = -p-1 for p ≤ -1.
pub fn osc_fn(p: i64) -> AlgebraElement {
    if p >= 0 {
        AlgebraElement::e_pow(-1).scale_rf(&RationalFunction::poly(hermite(p).expect("p ≥ 0")))
    } else {
        AlgebraElement::e_pow(1).scale_rf(&RationalFunction::poly(hermite_imaginary(-p - 1).expect("m ≥ 0")))
    }
}

/// ψ₋₃ = e^{-x²/2}/(1+2x²), the kernel of A†.
pub fn singlet_fn() -> AlgebraElement {
    AlgebraElement::e_pow(-1).scale_rf(&catalog::h2().inv().expect("nonzero"))
}

/// The antiderivative of the inverse square of the seed state for `tag`:
/// φ_p for `osc`, ψ₋₃ for `def` (only index -3).
pub fn quadrature(tag: QuadTag) -> Result<Arc<IntegralGen>> {
    if tag == QuadTag::BASE {
        return Ok(IntegralGen::base());
    }
    match tag.family {
        QuadFamily::Osc => IntegralGen::inverse_square(tag, &osc_fn(tag.index)),
        QuadFamily::Def if tag.index == -3 => IntegralGen::inverse_square(tag, &singlet_fn()),
        QuadFamily::Def => Err(Error::BadLabel(format!("I[def,{}]", tag.index))),
    }
}

type Cache = Mutex<HashMap<StateLabel, Arc<AlgebraElement>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Darboux-normalized function for a label; memoized.
pub fn darboux_fn(label: StateLabel) -> Result<Arc<AlgebraElement>> {
    if let Some(f) = cache().lock().expect("state cache poisoned").get(&label) {
        return Ok(f.clone());
    }
    let p = label.index;
    let f = match label.family {
        Family::Osc => osc_fn(p),
        Family::OscTilde => {
            let g = quadrature(QuadTag::osc(p))?;
            osc_fn(p).mul(&AlgebraElement::integral(g)).reduce_quadratures()?
        }
        Family::Def if p == -3 => singlet_fn(),
        Family::Def => catalog::build("A")?.apply(&osc_fn(p)),
        Family::DefTilde if p == -3 => {
            let g = quadrature(QuadTag::def(-3))?;
            singlet_fn().mul(&AlgebraElement::integral(g)).reduce_quadratures()?
        }
        Family::DefTilde => catalog::build("A")?.apply(&*darboux_fn(StateLabel::new(Family::OscTilde, p))?),
    };
    let f = Arc::new(f);
    cache().lock().expect("state cache poisoned").insert(label, f.clone());
    Ok(f)
}

fn provenance(label: StateLabel) -> String {
    let p = label.index;
    match label.family {
        Family::Osc if p >= 0 => format!("E^-1*H_{p}"),
        Family::Osc => format!("E*H_{}(ix)", -p - 1),
        Family::OscTilde => format!("phi({p})*I[osc,{p}]"),
        Family::Def if p == -3 => "ker A†".into(),
        Family::Def => format!("A·phi({p})"),
        Family::DefTilde if p == -3 => "psi(-3)*I[def,-3]".into(),
        Family::DefTilde => format!("A·phit({p})"),
    }
}

fn darboux_state(label: StateLabel) -> Result<State> {
    Ok(State {
        label,
        func: (*darboux_fn(label)?).clone(),
        normalization: Normalization::Darboux,
        provenance: provenance(label),
    })
}

pub fn osc_state(p: i64) -> Result<State> {
    darboux_state(StateLabel::new(Family::Osc, p))
}

pub fn osc_tilde_state(p: i64) -> Result<State> {
    darboux_state(StateLabel::new(Family::OscTilde, p))
}

pub fn def_state(p: i64) -> Result<State> {
    darboux_state(StateLabel::def(p))
}

pub fn def_tilde_state(p: i64) -> Result<State> {
    darboux_state(StateLabel::def_tilde(p))
}

/// y_n = -ℋ₂H_{n+1} - 4ℋ₁H_n for n ≥ 0, y₋₃ = 1.
pub fn eop_polynomial(n: i64) -> Result<RationalFunction> {
    if n == -3 {
        return Ok(RationalFunction::one());
    }
    if n < 0 {
        return Err(Error::BadLabel(format!("eop index {n}")));
    }
    let h1 = pseudo_hermite(1)?;
    let h2 = pseudo_hermite(2)?;
    let y = h2.mul(&hermite(n + 1)?).add(&h1.mul(&hermite(n)?).scale(&PiScalar::int(4))).neg();
    Ok(RationalFunction::poly(y))
}

/// `E⁻¹ y_n / ℋ₂` for n = -3 or n ≥ 0.
pub fn eop_state(n: i64) -> Result<State> {
    let h2 = RationalFunction::poly(pseudo_hermite(2)?);
    let f = eop_polynomial(n)?.div(&h2).expect("nonzero");
    Ok(State {
        label: StateLabel::def(n),
        func: AlgebraElement::e_pow(-1).scale_rf(&f),
        normalization: Normalization::Eop,
        provenance: format!("E^-1*y_{n}/H2"),
    })
}

/// Ladder word applied to a seed, with its provenance text.
fn ladder_word(op: &str, k: i64, seed: StateLabel) -> Result<(AlgebraElement, String)> {
    let l = catalog::build(op)?;
    let mut f = (*darboux_fn(seed)?).clone();
    for _ in 0..k {
        f = l.apply(&f);
    }
    let provenance = match k {
        0 => seed.to_string(),
        1 => format!("{op}·{seed}"),
        _ => format!("({op})^{k}·{seed}"),
    };
    Ok((f, provenance))
}

/// Any state by label and normalization. Rodrigues normalization follows the
/// b-type generation rules: `psi(n) = (b†)^n psi(0)` for n ≥ 0,
/// `psi(-1) = b† psi(-2)`, `psi(-4-n) = b^n psi(-4)`, seeds at -2, -3, -4, and
/// `psit(n) = (b†)^n psit(0)` for n ≥ 0.
pub fn build_state(label: StateLabel, norm: Normalization) -> Result<State> {
    let n = label.index;
    let word = match (norm, label.family) {
        (Normalization::Darboux, _) => return darboux_state(label),
        (Normalization::Eop, Family::Def) => return eop_state(n),
        (Normalization::Rodrigues, Family::Def) => match n {
            0.. => ladder_word("b†", n, StateLabel::def(0))?,
            -1 => ladder_word("b†", 1, StateLabel::def(-2))?,
            -4..=-2 => ladder_word("b", 0, label)?,
            _ => ladder_word("b", -4 - n, StateLabel::def(-4))?,
        },
        (Normalization::Rodrigues, Family::DefTilde) if n >= 0 => ladder_word("b†", n, StateLabel::def_tilde(0))?,
        _ => return Err(Error::BadLabel(format!("{label} has no {} normalization", norm.name()))),
    };
    Ok(State { label, func: word.0, normalization: norm, provenance: word.1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::wronskian;

    fn scalar(a: &AlgebraElement) -> PiScalar {
        a.as_scalar().expect("constant")
    }

    #[test]
    fn oscillator_examples() {
        let phi0 = osc_state(0).unwrap();
        assert_eq!(phi0.func, AlgebraElement::e_pow(-1));
        assert_eq!(phi0.energy(), 1);
        let phi1 = osc_state(1).unwrap();
        let a = catalog::build("a").unwrap();
        assert_eq!(a.apply(&phi1.func), phi0.func.scale(&PiScalar::int(2)));
        let phim1 = osc_state(-1).unwrap();
        assert_eq!(phim1.func, AlgebraElement::e_pow(1));
        assert_eq!(phim1.energy(), -1);
    }

    #[test]
    fn eigen_equations() {
        for p in -6..=6 {
            for fam in [Family::Osc, Family::OscTilde, Family::Def, Family::DefTilde] {
                let s = darboux_state(StateLabel::new(fam, p)).unwrap();
                assert!(!s.func.is_zero(), "{}", s.label);
                assert!(s.eigen_residual().unwrap().is_zero(), "{}", s.label);
            }
        }
    }

    #[test]
    fn wronskians_are_constants() {
        let w = wronskian(&osc_tilde_state(0).unwrap().func, &osc_state(0).unwrap().func);
        assert_eq!(scalar(&w), PiScalar::int(-1));
        let w = wronskian(&def_tilde_state(-3).unwrap().func, &def_state(-3).unwrap().func);
        assert_eq!(scalar(&w), PiScalar::int(-1));
        // W(Aφ̃₀, Aφ₀) = (E_osc + 5) W(φ̃₀, φ₀) = -6
        let w = wronskian(&def_tilde_state(0).unwrap().func, &def_state(0).unwrap().func);
        assert_eq!(scalar(&w), PiScalar::int(-6));
        for p in -8..=8 {
            let w = wronskian(&def_state(p).unwrap().func, &def_tilde_state(p).unwrap().func);
            let c = w.as_scalar().unwrap_or_else(|| panic!("nonconstant at {p}"));
            assert!(!c.is_zero());
        }
    }

    #[test]
    fn tilde_states_are_independent() {
        for p in [-4, 0, 1, 3] {
            let t = osc_tilde_state(p).unwrap();
            assert_eq!(t.func.exact_divide(&osc_state(p).unwrap().func).unwrap(), None);
        }
    }

    #[test]
    fn exact_divide_distinguishes_states() {
        let psi1 = def_state(1).unwrap().func;
        let psi2 = def_state(2).unwrap().func;
        assert_eq!(psi1.scale(&PiScalar::int(6)).exact_divide(&psi1).unwrap(), Some(PiScalar::int(6)));
        assert_eq!(psi2.exact_divide(&psi1).unwrap(), None);
    }

    #[test]
    fn eop_matches_darboux() {
        assert_eq!(
            eop_polynomial(0).unwrap(),
            RationalFunction::from_i64s(&[0, -12, 0, -8])
        );
        for n in std::iter::once(-3).chain(0..=10) {
            let c = eop_state(n).unwrap().func.exact_divide(&def_state(n).unwrap().func).unwrap();
            assert!(c.is_some_and(|c| !c.is_zero()), "n={n}");
        }
    }

    #[test]
    fn singlet_annihilation() {
        let psi = def_state(-3).unwrap().func;
        for name in ["b", "b†", "c"] {
            assert!(catalog::build(name).unwrap().apply(&psi).is_zero(), "{name}");
        }
        assert!(!catalog::build("c†").unwrap().apply(&psi).is_zero());
    }

    #[test]
    fn rodrigues_normalization() {
        let s = build_state(StateLabel::def(1), Normalization::Rodrigues).unwrap();
        assert_eq!(s.provenance, "b†·psi(0)");
        let d = darboux_fn(StateLabel::def(1)).unwrap();
        assert_eq!(s.func.exact_divide(&d).unwrap(), Some(PiScalar::int(6)));
        for n in -8..=6 {
            let s = build_state(StateLabel::def(n), Normalization::Rodrigues).unwrap();
            assert!(s.eigen_residual().unwrap().is_zero(), "psi({n})");
            assert!(!s.func.is_zero());
        }
        assert!(build_state(StateLabel::def_tilde(-2), Normalization::Rodrigues).is_err());
    }
}
