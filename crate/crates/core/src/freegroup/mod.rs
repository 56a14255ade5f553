//! Words in the free group on `x` and `t`.
//!
//! A [`Word`] is stored as a run-length list of generator powers and is kept
//! freely reduced at all times, so two words are equal in the free group iff
//! they compare equal structurally.

mod basis;
mod parse;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use basis::{substitute, zero_t_weight, BasisChange, BasisError, Elementary};
pub use parse::{parse_word, SyntaxError};

/// One of the two free generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "t")]
    T,
}

impl Gen {
    pub fn other(self) -> Gen {
        match self {
            Gen::X => Gen::T,
            Gen::T => Gen::X,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::X => "x",
            Gen::T => "t",
        })
    }
}

/// A freely reduced element of F(x, t).
///
/// Invariant: adjacent runs have distinct generators and every exponent is
/// nonzero. The empty run list is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    runs: Vec<(Gen, BigInt)>,
}

/// Freely reduce an arbitrary sequence of generator powers.
pub fn free_reduce<I>(runs: I) -> Word
where
    I: IntoIterator<Item = (Gen, BigInt)>,
{
    let mut out = Word::identity();
    for (g, e) in runs {
        out.push_run(g, e);
    }
    out
}

impl Word {
    pub fn identity() -> Self {
        Word { runs: Vec::new() }
    }

    pub fn gen_pow(g: Gen, e: impl Into<BigInt>) -> Self {
        let mut w = Word::identity();
        w.push_run(g, e.into());
        w
    }

    pub fn x() -> Self {
        Word::gen_pow(Gen::X, 1)
    }

    pub fn t() -> Self {
        Word::gen_pow(Gen::T, 1)
    }

    pub fn x_pow(e: impl Into<BigInt>) -> Self {
        Word::gen_pow(Gen::X, e)
    }

    pub fn t_pow(e: impl Into<BigInt>) -> Self {
        Word::gen_pow(Gen::T, e)
    }

    /// Build from runs, reducing as needed.
    pub fn from_runs<I>(runs: I) -> Self
    where
        I: IntoIterator<Item = (Gen, BigInt)>,
    {
        free_reduce(runs)
    }

    pub fn runs(&self) -> &[(Gen, BigInt)] {
        &self.runs
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters (sum of absolute exponents).
    pub fn letter_len(&self) -> BigInt {
        self.runs.iter().map(|(_, e)| e.abs()).sum()
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.runs.iter().any(|(h, _)| *h == g)
    }

    fn push_run(&mut self, g: Gen, e: BigInt) {
        if e.is_zero() {
            return;
        }
        match self.runs.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if f.is_zero() {
                    self.runs.pop();
                }
            }
            _ => self.runs.push((g, e)),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for (g, e) in &other.runs {
            out.push_run(*g, e.clone());
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word {
            runs: self.runs.iter().rev().map(|(g, e)| (*g, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `self^by = by^{-1} · self · by`.
    pub fn conj(&self, by: &Word) -> Word {
        by.inverse().mul(self).mul(by)
    }

    /// `[a, b] = a^{-1} b^{-1} a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    pub fn product<'a, I>(words: I) -> Word
    where
        I: IntoIterator<Item = &'a Word>,
    {
        words
            .into_iter()
            .fold(Word::identity(), |acc, w| acc.mul(w))
    }

    pub fn exponent_sum(&self, g: Gen) -> BigInt {
        self.runs
            .iter()
            .filter(|(h, _)| *h == g)
            .map(|(_, e)| e.clone())
            .sum()
    }

    /// Letter-level cyclic reduction: returns `(core, c)` with
    /// `self = c^{-1} · core · c` and the first and last letters of `core`
    /// not mutually inverse.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut runs = self.runs.clone();
        // Conjugator pieces, innermost first.
        let mut pieces: Vec<(Gen, BigInt)> = Vec::new();
        while runs.len() >= 2 {
            let (g0, a) = runs[0].clone();
            let (g1, b) = runs[runs.len() - 1].clone();
            if g0 != g1 || a.signum() == b.signum() {
                break;
            }
            let s = if a.abs() < b.abs() { -&a } else { b.clone() };
            // self = g^{-s} · inner · g^{s}
            runs[0].1 += &s;
            let last = runs.len() - 1;
            runs[last].1 -= &s;
            if runs[last].1.is_zero() {
                runs.pop();
            }
            if runs[0].1.is_zero() {
                runs.remove(0);
            }
            pieces.push((g0, s));
            // Removing an end run can expose two equal-generator runs only if
            // the whole word collapsed, which free reduction already rules out.
        }
        let core = free_reduce(runs);
        let conj = free_reduce(pieces.into_iter().rev());
        (core, conj)
    }

    /// Run-level cyclic reduction: like [`Word::cyclic_reduce`] but also
    /// rotates so that the first and last runs use different generators
    /// (or the core is a single run). Returns `(core, c)` with
    /// `self = c^{-1} · core · c`.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let (core, c) = self.cyclic_reduce();
        let n = core.runs.len();
        if n >= 3 && core.runs[0].0 == core.runs[n - 1].0 {
            // core = g^a · R, and R g^a = g^{-a} · core · g^a
            let (g, a) = core.runs[0].clone();
            let rotated = free_reduce(
                core.runs[1..]
                    .iter()
                    .cloned()
                    .chain(std::iter::once((g, a.clone()))),
            );
            let r = Word::gen_pow(g, a);
            // self = c^{-1} r rotated r^{-1} c  =  (r^{-1} c)^{-1} rotated (r^{-1} c)
            return (rotated, r.inverse().mul(&c));
        }
        (core, c)
    }

    /// If `self` is a proper power `v^k` (`k >= 2`, maximal) returns `(v, k)`.
    pub fn proper_power(&self) -> Result<Option<(Word, BigInt)>, IdentityInput> {
        if self.is_identity() {
            return Err(IdentityInput);
        }
        let (core, c) = self.cyclic_core();
        let n = core.runs.len();
        if n == 1 {
            let (g, e) = &core.runs[0];
            let k = e.abs();
            if k <= BigInt::one() {
                return Ok(None);
            }
            let root = Word::gen_pow(*g, e.signum()).conj(&c);
            return Ok(Some((root, k)));
        }
        for p in 1..n {
            if n % p != 0 {
                continue;
            }
            if (p..n).all(|i| core.runs[i] == core.runs[i - p]) {
                let root = Word {
                    runs: core.runs[..p].to_vec(),
                }
                .conj(&c);
                return Ok(Some((root, BigInt::from(n / p))));
            }
        }
        Ok(None)
    }

    /// Returns `q` with `q^{-1} · self · q == other`, if the two words are
    /// conjugate in F.
    pub fn conjugator_to(&self, other: &Word) -> Option<Word> {
        let (a, qa) = self.cyclic_core();
        let (b, qb) = other.cyclic_core();
        if a.runs.len() != b.runs.len() {
            return None;
        }
        let n = a.runs.len();
        if n <= 1 {
            return (a == b).then(|| qa.inverse().mul(&qb));
        }
        // a = P S and b = S P = P^{-1} a P
        for k in 0..n {
            if (0..n).all(|i| a.runs[(i + k) % n] == b.runs[i]) {
                let p = Word {
                    runs: a.runs[..k].to_vec(),
                };
                return Some(qa.inverse().mul(&p).mul(&qb));
            }
        }
        None
    }
}

/// Error for operations that are undefined on the identity word.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("operation undefined on the identity word")]
pub struct IdentityInput;

/// Maximal proper-power decomposition, `None` when `w` is indivisible.
pub fn is_proper_power(w: &Word) -> Result<Option<(Word, BigInt)>, IdentityInput> {
    w.proper_power()
}

pub fn exponent_sum(w: &Word, g: Gen) -> BigInt {
    w.exponent_sum(g)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if e.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_word(&s).map_err(serde::de::Error::custom)
    }
}
