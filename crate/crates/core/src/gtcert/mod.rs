//! Generalized-torsion certificates: identities in the free group of the
//! form `∏ g^{c_i} = ∏ (w^{s_j})^{e_j}`.

mod family;
mod search;

use serde::Serialize;

use crate::freegroup::{BasisChange, Word};

pub use family::{family_certificates, Family};
pub use search::{bounded_search, default_candidates, SearchBounds, SearchHit, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GtError {
    #[error("certificate has an empty left-hand side")]
    EmptyLhs,
    #[error("search space of about {needed} attempts exceeds the budget of {budget}")]
    BoundsTooLarge { needed: u128, budget: u64 },
}

/// `lhs` lists `(c, s)` for the factor `(g^s)^c`; `rhs` lists `(e, s)` for
/// `(w^s)^e`. The certificate claims `∏ lhs = ∏ rhs` in the free group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GtCertificate {
    pub g: Word,
    pub lhs: Vec<(Word, i8)>,
    pub rhs: Vec<(Word, i8)>,
    /// Why `g ≠ 1` in the one-relator group, or the caveat that it is assumed.
    pub assumption: String,
}

fn product_of_conjugates(base: &Word, factors: &[(Word, i8)]) -> Word {
    let inv = base.inverse();
    let mut out = Word::identity();
    for (c, s) in factors {
        let b = if *s < 0 { &inv } else { base };
        out = out.mul(&b.conj(c));
    }
    out
}

impl GtCertificate {
    pub fn lhs_product(&self) -> Word {
        product_of_conjugates(&self.g, &self.lhs)
    }

    pub fn rhs_product(&self, w: &Word) -> Word {
        product_of_conjugates(w, &self.rhs)
    }

    /// Apply an automorphism of F to every word; the identity is preserved
    /// and `w` becomes `bc(w)`.
    pub fn transport(&self, bc: &BasisChange) -> GtCertificate {
        GtCertificate {
            g: bc.apply(&self.g),
            lhs: self.lhs.iter().map(|(c, s)| (bc.apply(c), *s)).collect(),
            rhs: self.rhs.iter().map(|(c, s)| (bc.apply(c), *s)).collect(),
            assumption: self.assumption.clone(),
        }
    }
}

/// Checks the identity by free reduction, that every lhs sign is `+1`, and
/// that `g` is not the identity of F.
pub fn verify_certificate(c: &GtCertificate, w: &Word) -> Result<bool, GtError> {
    if c.lhs.is_empty() {
        return Err(GtError::EmptyLhs);
    }
    if c.g.is_identity() || c.lhs.iter().any(|(_, s)| *s != 1) {
        return Ok(false);
    }
    Ok(c.lhs_product() == c.rhs_product(w))
}

/// `[x^m, t^n]` as a product of `m·n` conjugates of `[x, t]`, from
/// `[ab, c] = [a, c]^b [b, c]` and `[a, bc] = [a, c] [a, b]^c`:
/// `[x^m, t^n] = ∏_{i=m-1..0} ∏_{j=0..n-1} [x, t]^{t^j x^i}`.
pub fn commutator_expansion(m: u64, n: u64) -> GtCertificate {
    assert!(m >= 1 && n >= 1, "commutator_expansion needs m, n >= 1");
    let mut lhs = Vec::new();
    for i in (0..m).rev() {
        for j in 0..n {
            lhs.push((Word::t_pow(j).mul(&Word::x_pow(i)), 1));
        }
    }
    GtCertificate {
        g: Word::commutator(&Word::x(), &Word::t()),
        lhs,
        rhs: vec![(Word::identity(), 1)],
        assumption: format!(
            "[x,t] != 1 in G: G = <x,t | [x^{m},t^{n}]> is non-abelian when mn > 1"
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn telescope3() -> GtCertificate {
        GtCertificate {
            g: w("c(x,t) x^-1"),
            lhs: vec![(w("t^2"), 1), (w("t"), 1), (w("1"), 1)],
            rhs: vec![(w("1"), 1)],
            assumption: String::new(),
        }
    }

    #[test]
    fn verification() {
        let rel = w("c(x,t^3) x^-1");
        assert_eq!(verify_certificate(&telescope3(), &rel), Ok(true));

        let mut flipped = telescope3();
        flipped.rhs[0].1 = -1;
        assert_eq!(verify_certificate(&flipped, &rel), Ok(false));

        let trivial = GtCertificate {
            g: rel.clone(),
            lhs: vec![(Word::identity(), 1)],
            rhs: vec![(Word::identity(), 1)],
            assumption: String::new(),
        };
        assert_eq!(verify_certificate(&trivial, &rel), Ok(true));

        let mut empty = telescope3();
        empty.lhs.clear();
        assert_eq!(verify_certificate(&empty, &rel), Err(GtError::EmptyLhs));

        let mut neg = telescope3();
        neg.lhs[0].1 = -1;
        assert_eq!(verify_certificate(&neg, &rel), Ok(false));
    }

    #[test]
    fn commutator_expansions() {
        assert_eq!(commutator_expansion(1, 1).lhs, vec![(Word::identity(), 1)]);
        assert_eq!(
            commutator_expansion(2, 1).lhs,
            vec![(w("x"), 1), (Word::identity(), 1)]
        );
        for m in 1..=4u64 {
            for n in 1..=4u64 {
                let c = commutator_expansion(m, n);
                assert_eq!(c.lhs.len() as u64, m * n);
                let rel = Word::commutator(&Word::x_pow(m), &Word::t_pow(n));
                assert_eq!(verify_certificate(&c, &rel), Ok(true), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn transport_preserves_validity() {
        let rel = w("c(x,t^3) x^-1");
        let bc = BasisChange::new(vec![
            crate::freegroup::Elementary::XTimesTPow(2.into()),
            crate::freegroup::Elementary::Swap,
        ]);
        let c = telescope3().transport(&bc);
        assert_eq!(verify_certificate(&c, &bc.apply(&rel)), Ok(true));
    }
}
