//! Decision procedures for orderability of one-relator groups on two
//! generators whose relator has zero exponent sum in `t`.

pub mod freegroup;
pub mod gtcert;
pub mod intlinalg;
mod jsonint;
pub mod poly;
pub mod relator;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type IntPolynomial = poly::Poly<BigInt>;
pub type RatPolynomial = poly::Poly<BigRational>;
pub type IntMatrix = intlinalg::Matrix<BigInt>;

pub use freegroup::{parse_word, Gen, Word};
pub use intlinalg::Matrix;
pub use poly::{parse_poly, Poly};
pub use relator::{FactorForm, Orientation, SevenForm, WordClass};
pub mod verdict;
pub use verdict::{analyze, AnalyzeOptions, Outcome, Verdict, VerdictError};
