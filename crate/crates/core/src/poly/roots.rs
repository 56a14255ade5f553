//! Exact real-root predicates for integer polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Bound, SturmChain};
use crate::{IntPolynomial, RatPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("the zero polynomial has no root structure")]
    ZeroPolynomial,
    #[error("polynomial vanishes at the origin")]
    ZeroAtOrigin,
    #[error("empty interval: lower endpoint must be below the upper endpoint")]
    InvalidRange,
}

fn nonzero(p: &IntPolynomial) -> Result<(), PolyError> {
    if p.is_zero() {
        Err(PolyError::ZeroPolynomial)
    } else {
        Ok(())
    }
}

fn nonzero_at_origin(p: &IntPolynomial) -> Result<(), PolyError> {
    nonzero(p)?;
    if p.coeff(0).is_zero() {
        Err(PolyError::ZeroAtOrigin)
    } else {
        Ok(())
    }
}

/// `p / gcd(p, p')`, primitive with positive leading coefficient.
pub fn squarefree_part(p: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    nonzero(p)?;
    let q = p.to_rational();
    let g = q.gcd(&q.derivative());
    Ok(q.div_rem(&g).0.to_primitive_int())
}

/// Yun's algorithm: `p = c · ∏ q_i^i` with each `q_i` squarefree, primitive,
/// pairwise coprime. Returns the nonconstant `(q_i, i)`.
pub fn squarefree_decomposition(
    p: &IntPolynomial,
) -> Result<Vec<(IntPolynomial, usize)>, PolyError> {
    nonzero(p)?;
    let f = p.to_rational();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let mut d = &df.div_rem(&a0).0 - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        let c = d.div_rem(&a).0;
        b = b.div_rem(&a).0;
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.to_primitive_int(), i));
        }
        i += 1;
    }
    Ok(out)
}

/// `1 + max_{i<n} |a_i| / |a_n|`; every complex root has modulus strictly
/// below it.
pub fn cauchy_bound(p: &IntPolynomial) -> Result<BigRational, PolyError> {
    nonzero(p)?;
    let n = p.degree().unwrap();
    let lead = p.coeff(n).abs();
    let max = p.coeffs()[..n]
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(BigInt::zero);
    Ok(BigRational::one() + BigRational::new(max, lead))
}

fn sturm_of(p: &IntPolynomial) -> Result<SturmChain<BigRational>, PolyError> {
    let sf: RatPolynomial = squarefree_part(p)?.to_rational();
    Ok(SturmChain::new(&sf))
}

fn bound_lt(lo: &Bound<BigRational>, hi: &Bound<BigRational>) -> bool {
    match (lo, hi) {
        (Bound::Finite(a), Bound::Finite(b)) => a < b,
        (Bound::PosInf, _) | (_, Bound::NegInf) => false,
        _ => true,
    }
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn count_real_roots_in(
    p: &IntPolynomial,
    lo: &Bound<BigRational>,
    hi: &Bound<BigRational>,
) -> Result<usize, PolyError> {
    nonzero(p)?;
    if !bound_lt(lo, hi) {
        return Err(PolyError::InvalidRange);
    }
    Ok(sturm_of(p)?.count_between(lo, hi))
}

fn positive_root_count(p: &IntPolynomial) -> Result<usize, PolyError> {
    let b = cauchy_bound(p)?;
    count_real_roots_in(
        p,
        &Bound::Finite(BigRational::zero()),
        &Bound::Finite(b),
    )
}

/// Does `p` have a root in `(0, ∞)`?
pub fn has_positive_real_root(p: &IntPolynomial) -> Result<bool, PolyError> {
    nonzero_at_origin(p)?;
    Ok(positive_root_count(p)? >= 1)
}

/// Are all complex roots of `p` (with multiplicity) positive reals?
///
/// A nonzero constant has no roots and passes vacuously.
pub fn all_roots_real_positive(p: &IntPolynomial) -> Result<bool, PolyError> {
    nonzero_at_origin(p)?;
    for (q, _) in squarefree_decomposition(p)? {
        if positive_root_count(&q)? != q.degree().unwrap() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    fn p(c: &[i64]) -> IntPolynomial {
        Poly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&p(&[1, -2, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(squarefree_part(&p(&[2, -3, 2])).unwrap(), p(&[2, -3, 2]));
        assert_eq!(squarefree_part(&p(&[-1, 0, 0, 1])).unwrap(), p(&[-1, 0, 0, 1]));
        assert_eq!(squarefree_part(&p(&[])), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn yun_decomposition() {
        // (X-1)^3 (X+2)^2 (X^2+1)
        let f = &(&(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-1, 1]))
            * &(&(&p(&[2, 1]) * &p(&[2, 1])) * &p(&[1, 0, 1]));
        let dec = squarefree_decomposition(&f).unwrap();
        assert_eq!(
            dec,
            vec![(p(&[1, 0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]
        );
    }

    #[test]
    fn root_counts() {
        let pos = |c: &[i64]| {
            count_real_roots_in(&p(c), &Bound::Finite(BigRational::zero()), &Bound::PosInf).unwrap()
        };
        assert_eq!(pos(&[2, -3, 2]), 0);
        assert_eq!(pos(&[1, -3, 1]), 2);
        assert_eq!(pos(&[-1, 0, 0, 1]), 1);
        assert_eq!(
            count_real_roots_in(&p(&[1, -3, 1]), &Bound::PosInf, &Bound::NegInf),
            Err(PolyError::InvalidRange)
        );
    }

    #[test]
    fn positivity_predicates() {
        assert!(!has_positive_real_root(&p(&[2, -3, 2])).unwrap());
        assert!(!has_positive_real_root(&p(&[1, -5, 9, -5, 1])).unwrap());
        assert!(has_positive_real_root(&p(&[-1, 0, 0, 1])).unwrap());
        assert_eq!(has_positive_real_root(&p(&[0, 1])), Err(PolyError::ZeroAtOrigin));

        assert!(all_roots_real_positive(&p(&[1, -3, 1])).unwrap());
        assert!(all_roots_real_positive(&p(&[1, -2, 1])).unwrap());
        assert!(!all_roots_real_positive(&p(&[-1, 0, 0, 1])).unwrap());
        assert!(all_roots_real_positive(&p(&[2, -5, 2])).unwrap());
        assert!(all_roots_real_positive(&p(&[-2, 5, -2])).unwrap());
    }

    #[test]
    fn cauchy_bounds() {
        assert_eq!(cauchy_bound(&p(&[1, -3, 1])).unwrap(), q(4, 1));
        assert_eq!(cauchy_bound(&p(&[2, -3, 2])).unwrap(), q(5, 2));
        assert_eq!(cauchy_bound(&p(&[-1, 1])).unwrap(), q(2, 1));
    }
}
