use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Poly;
use crate::IntPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polynomial syntax error at position {pos}: {msg}")]
pub struct PolyParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parse an integer polynomial in `X`, e.g. `2*X^2-3*X+2`.
///
/// Terms are `c`, `c*X`, `c*X^k`, `X^k` with optional sign; repeated powers
/// are summed. Whitespace is ignored.
pub fn parse_poly(text: &str) -> Result<IntPolynomial, PolyParseError> {
    let src: Vec<(usize, u8)> = text
        .bytes()
        .enumerate()
        .filter(|(_, b)| !b.is_ascii_whitespace())
        .collect();
    let end = text.len();
    let mut i = 0;
    let mut coeffs: Vec<BigInt> = Vec::new();
    let err = |i: usize, msg: &str| PolyParseError {
        pos: src.get(i).map_or(end, |&(p, _)| p),
        msg: msg.to_string(),
    };
    let digits = |i: &mut usize| -> Option<String> {
        let start = *i;
        while *i < src.len() && src[*i].1.is_ascii_digit() {
            *i += 1;
        }
        (start < *i).then(|| src[start..*i].iter().map(|&(_, b)| b as char).collect())
    };
    if src.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut first = true;
    while i < src.len() {
        let mut negative = false;
        match src[i].1 {
            b'+' | b'-' => {
                negative = src[i].1 == b'-';
                i += 1;
            }
            _ if !first => return Err(err(i, "expected '+' or '-'")),
            _ => {}
        }
        first = false;
        let mut coeff = match digits(&mut i) {
            Some(d) => d.parse::<BigInt>().expect("digits"),
            None => BigInt::one(),
        };
        let had_coeff = i > 0 && src[i - 1].1.is_ascii_digit();
        let mut power = 0usize;
        if i < src.len() && src[i].1 == b'*' {
            if !had_coeff {
                return Err(err(i, "unexpected '*'"));
            }
            i += 1;
            if i >= src.len() || !matches!(src[i].1, b'X' | b'x') {
                return Err(err(i, "expected 'X' after '*'"));
            }
        }
        if i < src.len() && matches!(src[i].1, b'X' | b'x') {
            i += 1;
            power = 1;
            if i < src.len() && src[i].1 == b'^' {
                i += 1;
                power = digits(&mut i)
                    .ok_or_else(|| err(i, "expected exponent"))?
                    .parse()
                    .map_err(|_| err(i, "exponent too large"))?;
            }
        } else if !had_coeff {
            return Err(err(i, "expected a term"));
        }
        if negative {
            coeff = -coeff;
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += coeff;
    }
    Ok(Poly::new(coeffs))
}
