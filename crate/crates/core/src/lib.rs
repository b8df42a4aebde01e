//! Exact computer algebra for the X₂ exceptional-Hermite deformed oscillator:
//! constants over ℚ(i)(√π), a differential algebra of wavefunctions,
//! rational-coefficient differential operators, ladder actions on the
//! 2-chain of states, truncated series solutions, and verification suites.

pub mod algebra;
pub mod alpha;
pub mod catalog;
pub mod chain;
pub mod crosscheck;
pub mod emit;
pub mod error;
pub mod field;
pub mod frame;
pub mod gauged;
pub mod hermite;
pub mod heun;
pub mod identity;
pub mod linalg;
pub mod operator;
pub mod ratfun;
pub mod report;
pub mod rodrigues;
pub mod scalar;
pub mod series;
pub mod states;
pub mod text;
pub mod verify;

pub use algebra::{AlgebraElement, IntegralGen, Monomial, QuadFamily, QuadTag};
pub use error::{Error, Result};
pub use field::{Field, Poly};
pub use operator::DiffOperator;
pub use ratfun::{RationalFunction, XPoly};
pub use scalar::{GaussRational, PiScalar, Rational, ScalarError};
pub use report::{CheckRecord, Status, Summary};
pub use verify::{run_suite, Suite, SuiteConfig, VerificationReport};
