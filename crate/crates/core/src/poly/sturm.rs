use num_traits::{FromPrimitive, Num, Signed};

use super::Poly;

/// An interval endpoint on the extended real line.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound<T> {
    NegInf,
    Finite(T),
    PosInf,
}

/// Sturm chain `p_0, p_0', -rem(p_0, p_0'), ...` of a squarefree polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain<T> {
    chain: Vec<Poly<T>>,
}

impl<T> SturmChain<T>
where
    T: Clone + Num + Signed + PartialOrd + FromPrimitive,
{
    /// `p` is expected to be squarefree and nonzero.
    pub fn new(p: &Poly<T>) -> Self {
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let prev = chain.last().unwrap();
            let (_, r) = prev.div_rem(&next);
            chain.push(next);
            next = -&r;
        }
        SturmChain { chain }
    }

    pub fn polys(&self) -> &[Poly<T>] {
        &self.chain
    }

    fn sign_at(p: &Poly<T>, at: &Bound<T>) -> i8 {
        let s = match at {
            Bound::Finite(x) => p.eval(x),
            Bound::PosInf => p.leading().cloned().unwrap_or_else(T::zero),
            Bound::NegInf => {
                let l = p.leading().cloned().unwrap_or_else(T::zero);
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -l
                } else {
                    l
                }
            }
        };
        if s.is_positive() {
            1
        } else if s.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Sign variations along the chain at `at`, zeros dropped.
    pub fn variations(&self, at: &Bound<T>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = Self::sign_at(p, at);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    ///
    /// Dropping zeros makes the variation count at a root equal its value
    /// just to the right, so endpoint roots need no perturbation.
    pub fn count_between(&self, lo: &Bound<T>, hi: &Bound<T>) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rp(c: &[i64]) -> Poly<BigRational> {
        Poly::new(c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    fn fin(n: i64) -> Bound<BigRational> {
        Bound::Finite(BigRational::from_integer(n.into()))
    }

    #[test]
    fn counts_on_half_open_intervals() {
        // (X - 1)(X - 2)(X + 3)
        let s = SturmChain::new(&rp(&[6, -7, 0, 1]));
        assert_eq!(s.count_between(&Bound::NegInf, &Bound::PosInf), 3);
        assert_eq!(s.count_between(&fin(0), &Bound::PosInf), 2);
        assert_eq!(s.count_between(&fin(1), &fin(2)), 1);
        assert_eq!(s.count_between(&fin(0), &fin(1)), 1);
        assert_eq!(s.count_between(&fin(-3), &fin(1)), 1);
        assert_eq!(s.count_between(&fin(-4), &fin(-3)), 1);
    }

    #[test]
    fn chain_ends_in_constant() {
        let s = SturmChain::new(&rp(&[1, -3, 1]));
        assert_eq!(s.polys().last().unwrap().degree(), Some(0));
    }

    #[test]
    fn works_over_floats() {
        let p: Poly<f64> = Poly::new(vec![-2.0, 0.0, 1.0]);
        let s = SturmChain::new(&p);
        assert_eq!(s.count_between(&Bound::Finite(0.0), &Bound::PosInf), 1);
    }
}
