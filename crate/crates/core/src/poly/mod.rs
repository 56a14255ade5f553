//! Dense univariate polynomials over a generic coefficient type.
//!
//! Coefficients are stored constant term first with trailing zeros trimmed,
//! so the zero polynomial has an empty coefficient list.

mod parse;
mod roots;
mod sturm;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

pub use parse::{parse_poly, PolyParseError};
pub use roots::{
    all_roots_real_positive, cauchy_bound, count_real_roots_in, has_positive_real_root,
    squarefree_decomposition, squarefree_part, PolyError,
};
pub use sturm::{Bound, SturmChain};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Zero> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c·X^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Coefficient list reversed: `X^deg · p(1/X)` when `p(0) != 0`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T> Poly<T>
where
    T: Clone + Zero + Mul<Output = T> + Add<Output = T>,
{
    /// Horner evaluation.
    pub fn eval(&self, at: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * at.clone() + c.clone())
    }
}

impl<T: Clone + Zero + FromPrimitive + Mul<Output = T>> Poly<T> {
    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("degree fits"))
                .collect(),
        )
    }
}

impl<T: Clone + Num> Poly<T> {
    /// Division with remainder over a field.
    ///
    /// Panics on division by the zero polynomial.
    pub fn div_rem(&self, d: &Poly<T>) -> (Poly<T>, Poly<T>) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Scale to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                self.map(|c| c.clone() / l.clone())
            }
        }
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, other: &Poly<T>) -> Poly<T> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<T: Clone + Zero + Add<Output = T>> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeff(i) + rhs.coeff(i))
                .collect(),
        )
    }
}

impl<T: Clone + Zero + Neg<Output = T>> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        self.map(|c| -c.clone())
    }
}

impl<T: Clone + Zero + Sub<Output = T>> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeff(i) - rhs.coeff(i))
                .collect(),
        )
    }
}

impl<T: Clone + Zero + Add<Output = T> + Mul<Output = T>> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Clone + Integer + Signed> Poly<T> {
    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        self.map(|c| c.clone() / g.clone())
    }
}

impl Poly<BigInt> {
    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}

impl Poly<BigRational> {
    /// Clear denominators and return the primitive integer polynomial with
    /// positive leading coefficient.
    pub fn to_primitive_int(&self) -> Poly<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }
}

/// Rendered as in `2*X^2-3*X+2`.
impl<T: fmt::Display + Clone + Zero + Signed> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let unit = a.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntPolynomial;

    fn p(c: &[i64]) -> IntPolynomial {
        Poly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a + &b, p(&[0, 2]));
        assert_eq!(&a - &a, Poly::zero());
        assert_eq!(p(&[2, -3, 2]).derivative(), p(&[-3, 4]));
        assert_eq!(p(&[2, -3, 2]).eval(&BigInt::from(2)), BigInt::from(4));
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
    }

    #[test]
    fn division_over_rationals() {
        let f = p(&[-1, 0, 0, 1]).to_rational();
        let g = p(&[-1, 1]).to_rational();
        let (q, r) = f.div_rem(&g);
        assert_eq!(q.to_primitive_int(), p(&[1, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&f.derivative()).degree(), Some(0));
    }

    #[test]
    fn primitive_parts() {
        assert_eq!(p(&[-4, 6, -2]).primitive_part(), p(&[2, -3, 1]));
        assert_eq!(p(&[-4, 6, -2]).content(), BigInt::from(2));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[2, -3, 2]).to_string(), "2*X^2-3*X+2");
        assert_eq!(p(&[1, -5, 9, -5, 1]).to_string(), "X^4-5*X^3+9*X^2-5*X+1");
        assert_eq!(p(&[-1, 0, 0, 1]).to_string(), "X^3-1");
        assert_eq!(p(&[0, -1]).to_string(), "-X");
        assert_eq!(p(&[]).to_string(), "0");
    }
}
