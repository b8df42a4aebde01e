//! Shared inputs for the criterion benchmarks.

use exherm::catalog;
use exherm::states::{def_state, State};
use exherm::{AlgebraElement, DiffOperator};

/// The `b`-type lowering and raising operators.
pub fn ladder_pair() -> (DiffOperator, DiffOperator) {
    let b = catalog::build("b").expect("catalog operator");
    let bd = catalog::build("b†").expect("catalog operator");
    ((*b).clone(), (*bd).clone())
}

/// Deformed-oscillator state `psi(n)` in Darboux normalization.
pub fn state(n: i64) -> State {
    def_state(n).expect("constructible state")
}

/// A pair of independent solutions at the same energy: `psi(n)` and its
/// partner `psit(n)`.
pub fn solution_pair(n: i64) -> (AlgebraElement, AlgebraElement) {
    let tilde = exherm::states::def_tilde_state(n).expect("constructible state");
    (state(n).func, tilde.func)
}
