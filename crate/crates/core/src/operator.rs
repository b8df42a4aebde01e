//! Linear differential operators `Σ a_j(x) D^j` with rational coefficients.

use crate::algebra::AlgebraElement;
use crate::field::Field;
use crate::ratfun::RationalFunction;
use crate::scalar::PiScalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DiffOperator {
    coeffs: Vec<RationalFunction>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::multiplication(RationalFunction::one())
    }

    pub fn scalar(c: PiScalar) -> Self {
        Self::multiplication(RationalFunction::constant(c))
    }

    pub fn int(v: i64) -> Self {
        Self::scalar(PiScalar::int(v))
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: RationalFunction) -> Self {
        Self::from_coeffs(vec![f])
    }

    /// d/dx.
    pub fn d() -> Self {
        Self::from_coeffs(vec![RationalFunction::zero(), RationalFunction::one()])
    }

    /// `Σ coeffs[j] D^j`, trailing zeros dropped.
    pub fn from_coeffs(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> RationalFunction {
        self.coeffs.get(j).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// Order; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs((0..n).map(|j| self.coeff(j).add(&rhs.coeff(j))).collect())
    }

    pub fn neg(&self) -> Self {
        DiffOperator { coeffs: self.coeffs.iter().map(RationalFunction::neg).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// Left multiplication by a function: `f · P`.
    pub fn premul(&self, f: &RationalFunction) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.mul(f)).collect())
    }

    /// `self ∘ rhs`, expanded with `D^i q = Σ_k C(i,k) q^{(k)} D^{i-k}`.
    pub fn compose(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let p = self.coeffs.len() - 1;
        let q = rhs.coeffs.len() - 1;
        // derivs[j][k] = q_j^{(k)}
        let derivs: Vec<Vec<RationalFunction>> = rhs
            .coeffs
            .iter()
            .map(|qj| {
                let mut v = Vec::with_capacity(p + 1);
                let mut cur = qj.clone();
                for _ in 0..=p {
                    let next = cur.derivative();
                    v.push(cur);
                    if next.is_zero() {
                        break;
                    }
                    cur = next;
                }
                v
            })
            .collect();
        // terms[idx] collects (C(i,k) p_i, q_j^{(k)}) with i - k + j = idx
        let mut terms: Vec<Vec<(RationalFunction, &RationalFunction)>> = vec![Vec::new(); p + q + 1];
        for (i, pi) in self.coeffs.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            let mut binom = 1i64;
            for k in 0..=i {
                if k > 0 {
                    binom = binom * (i - k + 1) as i64 / k as i64;
                }
                let pik = pi.scale(&PiScalar::int(binom));
                for (j, dq) in derivs.iter().enumerate() {
                    let Some(qd) = dq.get(k) else { continue };
                    if !qd.is_zero() {
                        terms[i - k + j].push((pik.clone(), qd));
                    }
                }
            }
        }
        let out = terms
            .iter()
            .map(|ts| RationalFunction::sum_of_products(ts.iter().map(|(a, b)| (a, *b))))
            .collect();
        Self::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// `[P, Q] = PQ - QP`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.compose(rhs).sub(&rhs.compose(self))
    }

    pub fn apply(&self, f: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        let mut deriv = f.clone();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                deriv = deriv.differentiate();
            }
            if !a.is_zero() {
                out = out.add(&deriv.scale_rf(a));
            }
        }
        out
    }

    pub fn apply_rf(&self, f: &RationalFunction) -> RationalFunction {
        let mut out = RationalFunction::zero();
        let mut deriv = f.clone();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                deriv = deriv.derivative();
            }
            out = out.add(&a.mul(&deriv));
        }
        out
    }

    /// `g⁻¹ ∘ P ∘ g` for a gauge function with logarithmic derivative `ell`:
    /// every D becomes `D + ell`.
    pub fn conjugate_log(&self, ell: &RationalFunction) -> Self {
        let shifted = Self::from_coeffs(vec![ell.clone(), RationalFunction::one()]);
        let mut out = Self::zero();
        let mut power = Self::identity();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                power = shifted.compose(&power);
            }
            out = out.add(&power.premul(a));
        }
        out
    }

    /// Right Euclidean division `self = Q ∘ m + R` with `order(R) < order(m)`.
    pub fn right_div_rem(&self, m: &Self) -> (Self, Self) {
        let mo = m.order().expect("division by the zero operator");
        let lead_inv = m.coeffs[mo].inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while let Some(k) = rem.order() {
            if k < mo {
                break;
            }
            let mut qc = vec![RationalFunction::zero(); k - mo + 1];
            qc[k - mo] = rem.coeffs[k].mul(&lead_inv);
            let term = Self::from_coeffs(qc);
            rem = rem.sub(&term.compose(m));
            quo = quo.add(&term);
            debug_assert!(rem.order().is_none_or(|r| r < k));
        }
        (quo, rem)
    }

    /// `Σ c_k P^k` for constants `c_k` (lowest first), by Horner.
    pub fn poly_in(&self, cs: &[PiScalar]) -> Self {
        cs.iter().rev().fold(Self::zero(), |acc, c| acc.compose(self).add(&Self::scalar(c.clone())))
    }

    /// `Π (P - r_k)`.
    pub fn product_of_shifts(&self, roots: &[i64]) -> Self {
        roots.iter().fold(Self::identity(), |acc, &r| acc.compose(&self.sub(&Self::int(r))))
    }
}
