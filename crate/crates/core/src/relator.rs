//! Relators with zero t-weight written as products of conjugates
//! `x^{m_1 t^{d_1}} ... x^{m_r t^{d_r}}`, their spectrum and polynomial.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::freegroup::{BasisChange, Elementary, Gen, Word};
use crate::jsonint::Wrap;
use crate::{IntPolynomial, Poly};

/// Largest `d - e` for which a dense polynomial is built.
pub const MAX_SPAN: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelatorError {
    #[error("relator does not lie in the normal closure of x (t-exponent sum is {0})")]
    NotInN(BigInt),
    #[error("relator is empty")]
    EmptyRelator,
    #[error("t-exponent prefix or degree span too large to handle")]
    DegreeOutOfRange,
    #[error("relator lies in N' so A_w is undefined")]
    InDerivedSubgroup,
    #[error("no orientation of the relator is principal with positive degree")]
    NotPrincipal,
    #[error("principal form has degree zero")]
    DegreeZero,
}

/// Canonical list of factors `(m_i, d_i)`: adjacent degrees differ, no `m_i` is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FactorForm {
    factors: Vec<(BigInt, i64)>,
}

impl FactorForm {
    pub fn new<I: IntoIterator<Item = (BigInt, i64)>>(raw: I) -> Self {
        let mut factors: Vec<(BigInt, i64)> = Vec::new();
        for (m, d) in raw {
            if m.is_zero() {
                continue;
            }
            match factors.last_mut() {
                Some((m0, d0)) if *d0 == d => {
                    *m0 += m;
                    if m0.is_zero() {
                        factors.pop();
                    }
                }
                _ => factors.push((m, d)),
            }
        }
        FactorForm { factors }
    }

    pub fn from_small(raw: &[(i64, i64)]) -> Self {
        FactorForm::new(raw.iter().map(|&(m, d)| (BigInt::from(m), d)))
    }

    pub fn factors(&self) -> &[(BigInt, i64)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `∏ x^{m_i t^{d_i}}` as a freely reduced word.
    pub fn to_word(&self) -> Word {
        let mut out = Word::identity();
        for (m, d) in &self.factors {
            out = out.mul(&Word::x_pow(m.clone()).conj(&Word::t_pow(*d)));
        }
        out
    }

    /// Degrees shifted by `k`, i.e. the factor form of `w^{t^k}`.
    pub fn shifted(&self, k: i64) -> FactorForm {
        FactorForm {
            factors: self.factors.iter().map(|(m, d)| (m.clone(), d + k)).collect(),
        }
    }

    /// Sum of the `m_i` at each degree.
    pub fn degree_sums(&self) -> BTreeMap<i64, BigInt> {
        let mut sums: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (m, d) in &self.factors {
            *sums.entry(*d).or_default() += m;
        }
        sums
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.factors.iter().map(|f| f.1).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.factors.iter().map(|f| f.1).max()
    }
}

impl fmt::Display for FactorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (m, d)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match *d {
                0 => write!(f, "x^{{{m}}}")?,
                1 => write!(f, "x^{{{m}t}}")?,
                d => write!(f, "x^{{{m}t^{d}}}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for FactorForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.factors.len()))?;
        for (m, d) in &self.factors {
            seq.serialize_element(&(Wrap(m), d))?;
        }
        seq.end()
    }
}

/// Scan with the running t-prefix `p`; each run `x^m` seen at prefix `p`
/// is the factor `x^{m t^{-p}}`.
pub fn conjugate_factorization(w: &Word) -> Result<FactorForm, RelatorError> {
    if w.is_identity() {
        return Err(RelatorError::EmptyRelator);
    }
    let st = w.exponent_sum(Gen::T);
    if !st.is_zero() {
        return Err(RelatorError::NotInN(st));
    }
    let mut p = BigInt::zero();
    let mut raw = Vec::new();
    for (g, e) in w.runs() {
        match g {
            Gen::T => p += e,
            Gen::X => {
                let d = (-&p).to_i64().ok_or(RelatorError::DegreeOutOfRange)?;
                raw.push((e.clone(), d));
            }
        }
    }
    Ok(FactorForm::new(raw))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    /// Degree ↦ indices of the factors at that degree.
    pub tau: BTreeMap<i64, Vec<usize>>,
    pub s: BTreeSet<i64>,
    pub e: Option<i64>,
    pub d: Option<i64>,
    pub in_derived: bool,
}

pub fn spectrum(f: &FactorForm) -> Spectrum {
    let mut tau: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, (_, d)) in f.factors.iter().enumerate() {
        tau.entry(*d).or_default().push(i);
    }
    let s: BTreeSet<i64> = f
        .degree_sums()
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(d, _)| d)
        .collect();
    Spectrum {
        tau,
        e: s.first().copied(),
        d: s.last().copied(),
        in_derived: s.is_empty(),
        s,
    }
}

/// `A_w(X) = Σ m_i X^{d_i - e}`.
pub fn alexander_poly(f: &FactorForm) -> Result<IntPolynomial, RelatorError> {
    let sp = spectrum(f);
    let (Some(e), Some(d)) = (sp.e, sp.d) else {
        return Err(RelatorError::InDerivedSubgroup);
    };
    if d - e > MAX_SPAN {
        return Err(RelatorError::DegreeOutOfRange);
    }
    let mut coeffs = vec![BigInt::zero(); (d - e + 1) as usize];
    for (deg, m) in f.degree_sums() {
        if (e..=d).contains(&deg) {
            coeffs[(deg - e) as usize] += m;
        }
    }
    Ok(Poly::new(coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct WordClass {
    pub in_n: bool,
    pub in_derived: bool,
    pub tidy: bool,
    pub principal: bool,
    pub monic: bool,
}

pub fn classify(f: &FactorForm) -> WordClass {
    let sp = spectrum(f);
    let mut c = WordClass {
        in_n: true,
        in_derived: sp.in_derived,
        ..WordClass::default()
    };
    let (Some(e), Some(d)) = (sp.e, sp.d) else {
        return c;
    };
    c.tidy = f.factors.iter().all(|(_, k)| (e..=d).contains(k));
    let top = &sp.tau[&d];
    c.principal = c.tidy && top.len() == 1;
    c.monic = c.principal && f.factors[top[0]].0.is_one();
    c
}

/// One of the eight presentations `φ(w)^{±1}` with `φ` composed of
/// `x ↦ x^{-1}` and `t ↦ t^{-1}`; all define isomorphic groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Orientation {
    pub invert: bool,
    pub flip_t: bool,
    pub flip_x: bool,
}

impl Orientation {
    /// Fixed enumeration order.
    pub const ALL: [Orientation; 8] = [
        Orientation::new(false, false, false),
        Orientation::new(true, false, false),
        Orientation::new(false, false, true),
        Orientation::new(true, false, true),
        Orientation::new(false, true, false),
        Orientation::new(true, true, false),
        Orientation::new(false, true, true),
        Orientation::new(true, true, true),
    ];

    pub const fn new(invert: bool, flip_t: bool, flip_x: bool) -> Self {
        Orientation {
            invert,
            flip_t,
            flip_x,
        }
    }

    /// The automorphism part `φ`, an involution.
    pub fn automorphism(&self) -> BasisChange {
        let mut steps = Vec::new();
        if self.flip_t {
            steps.push(Elementary::InvertT);
        }
        if self.flip_x {
            steps.push(Elementary::InvertX);
        }
        BasisChange::new(steps)
    }

    pub fn apply(&self, w: &Word) -> Word {
        let img = self.automorphism().apply(w);
        if self.invert {
            img.inverse()
        } else {
            img
        }
    }

    /// Effect on `A_w`: sign flips for inversion and `x ↦ x^{-1}`, coefficient
    /// reversal for `t ↦ t^{-1}`.
    pub fn apply_poly(&self, p: &IntPolynomial) -> IntPolynomial {
        let mut q = if self.flip_t { p.reversed() } else { p.clone() };
        if self.invert != self.flip_x {
            q = -&q;
        }
        q
    }

    pub fn tag(&self) -> String {
        let mut parts = Vec::new();
        if self.flip_t {
            parts.push("ft");
        }
        if self.invert {
            parts.push("inv");
        }
        if self.flip_x {
            parts.push("fx");
        }
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl Serialize for Orientation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn orientation_orbit(w: &Word) -> Vec<(Word, Orientation)> {
    Orientation::ALL.iter().map(|o| (o.apply(w), *o)).collect()
}

/// `w = u(x, x^t, ..., x^{t^{d-1}}) · x^{-m t^d}` up to conjugation, a cyclic
/// permutation and the orientation `orientation`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SevenForm {
    /// `u` written in `x, t`; its factor form uses degrees `0..d`.
    pub u: Word,
    pub u_factors: FactorForm,
    #[serde(with = "crate::jsonint")]
    pub m: BigInt,
    pub d: usize,
    /// `a_0 .. a_d`, with `a_d = -m`.
    #[serde(with = "crate::jsonint::vec")]
    pub a: Vec<BigInt>,
    pub orientation: Orientation,
    /// The member was conjugated by `t^{shift}`.
    pub shift: i64,
}

impl SevenForm {
    /// `u · x^{-m t^d}`, a cyclic permutation of a conjugate of the chosen
    /// orbit member.
    pub fn word(&self) -> Word {
        self.u
            .mul(&Word::x_pow(-&self.m).conj(&Word::t_pow(self.d as i64)))
    }
}

fn seven_form_of(core: &Word, o: Orientation) -> Result<Option<SevenForm>, RelatorError> {
    let member = o.apply(core);
    let ff = conjugate_factorization(&member)?;
    let cls = classify(&ff);
    if !cls.principal {
        return Ok(None);
    }
    let sp = spectrum(&ff);
    let (e, d) = (sp.e.unwrap(), sp.d.unwrap());
    let top = sp.tau[&d][0];
    let m_top = &ff.factors[top].0;
    if !m_top.is_negative() {
        return Ok(None);
    }
    if d == e {
        return Err(RelatorError::DegreeZero);
    }
    if d - e > MAX_SPAN {
        return Err(RelatorError::DegreeOutOfRange);
    }
    let shifted = ff.shifted(-e);
    let n = shifted.factors.len();
    let rest = (top + 1..n).chain(0..top).map(|i| shifted.factors[i].clone());
    let u_factors = FactorForm::new(rest);
    let deg = (d - e) as usize;
    let mut a = vec![BigInt::zero(); deg + 1];
    for (k, m) in shifted.degree_sums() {
        a[k as usize] += m;
    }
    Ok(Some(SevenForm {
        u: u_factors.to_word(),
        u_factors,
        m: -m_top,
        d: deg,
        a,
        orientation: o,
        shift: -e,
    }))
}

/// Every orbit member that is principal with negative top factor, in orbit
/// order. Computed on the cyclic core, so conjugates of `w` give the same list.
pub fn seven_normal_forms(w: &Word) -> Result<Vec<SevenForm>, RelatorError> {
    let (core, _) = w.cyclic_core();
    conjugate_factorization(&core)?;
    let mut out = Vec::new();
    let mut degree_zero = false;
    for o in Orientation::ALL {
        match seven_form_of(&core, o) {
            Ok(Some(sf)) => out.push(sf),
            Ok(None) => {}
            Err(RelatorError::DegreeZero) => degree_zero = true,
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() && degree_zero {
        return Err(RelatorError::DegreeZero);
    }
    Ok(out)
}

/// First qualifying orbit member.
pub fn seven_normal_form(w: &Word) -> Result<SevenForm, RelatorError> {
    seven_normal_forms(w)?
        .into_iter()
        .next()
        .ok_or(RelatorError::NotPrincipal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn ff(v: &[(i64, i64)]) -> FactorForm {
        FactorForm::from_small(v)
    }

    fn p(c: &[i64]) -> IntPolynomial {
        Poly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    const KNOT: &str = "c(x^-3,t) x^2 c(x^2,t^2)";

    #[test]
    fn factorizations() {
        assert_eq!(conjugate_factorization(&w("k(x,t)")).unwrap(), ff(&[(-1, 0), (1, 1)]));
        assert_eq!(
            conjugate_factorization(&w(KNOT)).unwrap(),
            ff(&[(-3, 1), (2, 0), (2, 2)])
        );
        assert_eq!(
            conjugate_factorization(&w("c(x,t^3) x^-1")).unwrap(),
            ff(&[(1, 3), (-1, 0)])
        );
        assert_eq!(
            conjugate_factorization(&w("x t")),
            Err(RelatorError::NotInN(1.into()))
        );
        assert_eq!(
            conjugate_factorization(&Word::identity()),
            Err(RelatorError::EmptyRelator)
        );
        let f = conjugate_factorization(&w(KNOT)).unwrap();
        assert_eq!(f.to_word(), w(KNOT));
    }

    #[test]
    fn spectra() {
        let sp = spectrum(&ff(&[(-3, 1), (2, 0), (2, 2)]));
        assert_eq!(sp.s, BTreeSet::from([0, 1, 2]));
        assert_eq!((sp.e, sp.d), (Some(0), Some(2)));

        let sp = spectrum(&ff(&[(-2, 0), (2, 3)]));
        assert_eq!(sp.s, BTreeSet::from([0, 3]));

        let stray = w("t x t^-1 x t x^-1 t^-1");
        let f = conjugate_factorization(&stray).unwrap();
        assert_eq!(f, ff(&[(1, -1), (1, 0), (-1, -1)]));
        let sp = spectrum(&f);
        assert!(sp.tau.contains_key(&-1));
        assert_eq!(sp.s, BTreeSet::from([0]));
        assert_eq!((sp.e, sp.d), (Some(0), Some(0)));

        assert!(spectrum(&conjugate_factorization(&w("k(x,c(x,t))")).unwrap()).in_derived);
    }

    #[test]
    fn polynomials() {
        let a = |s: &str| alexander_poly(&conjugate_factorization(&w(s)).unwrap()).unwrap();
        assert_eq!(a(KNOT), p(&[2, -3, 2]));
        // (x^t x^m)^t (x^t x^m)^n with m = 2, n = 3
        assert_eq!(a("c(c(x,t) x^2, t) (c(x,t) x^2)^3"), p(&[6, 5, 1]));
        assert_eq!(a("x^3 c(x,t)^-2"), p(&[3, -2]));
        assert_eq!(a("k(x^2,t^3)"), p(&[-2, 0, 0, 2]));
        assert_eq!(
            alexander_poly(&conjugate_factorization(&w("k(x,c(x,t))")).unwrap()),
            Err(RelatorError::InDerivedSubgroup)
        );
    }

    #[test]
    fn classes() {
        let c = classify(&conjugate_factorization(&w(KNOT)).unwrap());
        assert!(c.tidy && c.principal && !c.monic);
        let c = classify(&conjugate_factorization(&w("x c(x^-3,t) c(x,t^2)")).unwrap());
        assert!(c.monic);
        let c = classify(&conjugate_factorization(&w("t x t^-1 x t x^-1 t^-1")).unwrap());
        assert!(!c.tidy && !c.principal);
        let c = classify(&conjugate_factorization(&w("k(x,c(x,t))")).unwrap());
        assert!(c.in_derived && !c.tidy);
        // two factors at the top degree
        let c = classify(&ff(&[(1, 1), (1, 0), (1, 1)]));
        assert!(c.tidy && !c.principal);
    }

    #[test]
    fn orbit() {
        let orbit = orientation_orbit(&w(KNOT));
        assert_eq!(orbit.len(), 8);
        assert_eq!(orbit[0].0, w(KNOT));
        assert_eq!(orbit[1].1.tag(), "inv");
        assert_eq!(
            conjugate_factorization(&orbit[1].0).unwrap(),
            ff(&[(-2, 2), (-2, 0), (3, 1)])
        );
        let a = p(&[2, -3, 2]);
        for (m, o) in &orbit {
            let got = alexander_poly(&conjugate_factorization(m).unwrap()).unwrap();
            assert_eq!(got, o.apply_poly(&a), "{o}");
        }
        let tags: Vec<String> = orbit.iter().map(|(_, o)| o.tag()).collect();
        assert_eq!(
            tags,
            ["id", "inv", "fx", "inv+fx", "ft", "ft+inv", "ft+fx", "ft+inv+fx"]
        );
    }

    #[test]
    fn seven_forms() {
        let sf = seven_normal_form(&w(KNOT)).unwrap();
        assert_eq!(sf.orientation.tag(), "inv");
        assert_eq!((sf.m.clone(), sf.d), (BigInt::from(2), 2));
        assert_eq!(sf.a, [-2, 3, -2].map(BigInt::from));
        assert_eq!(sf.u, w("x^-2 c(x^3,t)"));

        let sf = seven_normal_form(&w("x c(x^-3,t) c(x,t^2)")).unwrap();
        assert_eq!(sf.a, [-1, 3, -1].map(BigInt::from));
        assert_eq!(sf.m, BigInt::one());

        let sf = seven_normal_form(&w("x^-2 c(x^5,t) c(x^-2,t^2)")).unwrap();
        assert_eq!(sf.orientation.tag(), "id");
        assert_eq!(sf.a, [-2, 5, -2].map(BigInt::from));

        assert_eq!(
            seven_normal_form(&w("x c(x,t) x c(x,t)")),
            Err(RelatorError::NotPrincipal)
        );
        assert_eq!(seven_normal_form(&w("x^3")), Err(RelatorError::DegreeZero));
    }

    #[test]
    fn seven_form_reconstructs_an_orbit_member() {
        for s in [KNOT, "x c(x^-3,t) c(x,t^2)", "t^2 x^-1 t^-1 x^4 t^-1 x^2"] {
            for sf in seven_normal_forms(&w(s)).unwrap() {
                let member = sf.orientation.apply(&w(s));
                assert!(member.conjugator_to(&sf.word()).is_some(), "{s} {}", sf.orientation);
            }
        }
    }
}
