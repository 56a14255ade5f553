//! Checkable hypotheses of the positive criteria, and the commuting-powers
//! pattern `(x^{f(t)})^n (x^{t^d})^{-m}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use super::{BCheck, Check, ConditionReport};
use crate::freegroup::{is_proper_power, Word};
use crate::intlinalg::{condition_c_prime, prime_factorize, rj_all_ones, LinAlgError};
use crate::relator::{alexander_poly, conjugate_factorization, Orientation, SevenForm};

/// Direct Smith-form checks of `R_j` stop once a single `j` would need more
/// determinants than this.
pub const MAX_MINORS_PER_J: u128 = 2_000_000;

fn gcd_all(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// `gcd(a_0..a_{d-1}) = 1` and `m ∤ a_{d-1}`; `a` holds `a_0 .. a_{d-1}`.
pub fn theorem_d_conditions(a: &[BigInt], m: &BigInt) -> ConditionReport {
    let g = gcd_all(a);
    let last = a.last().cloned().unwrap_or_default();
    ConditionReport {
        gcd_condition: Check::eval(g.is_one(), json!({ "gcd": g.to_string() })),
        divisibility_condition: Check::eval(
            !last.is_multiple_of(m),
            json!({ "a_d_minus_1": last.to_string(), "m": m.to_string() }),
        ),
        ..ConditionReport::default()
    }
}

/// Condition (b) cannot be decided in general. The abelianization argument
/// rules out a proper-power `u(x_1..x_d)` unless some prime divides every
/// `a_0 .. a_{d-1}`, and rules out a conjugate in `F_0` unless `m | a_{d-1}`.
pub fn condition_b(a: &[BigInt], m: &BigInt) -> (BCheck, serde_json::Value) {
    let g = gcd_all(a);
    let unresolved: Vec<String> = prime_factorize(&g).into_iter().map(|(p, _)| p.to_string()).collect();
    let m_divides = a.last().is_some_and(|l| l.is_multiple_of(m));
    let status = if unresolved.is_empty() && !m_divides && !g.is_zero() {
        BCheck::SufficientCriterionPassed
    } else {
        BCheck::Undetermined
    };
    let witness = json!({
        "gcd": g.to_string(),
        "unresolved_primes": unresolved,
        "m_divides_a_d_minus_1": m_divides,
    });
    (status, witness)
}

fn binom(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Conditions (a), (c)′ and the sufficient criterion for (b), plus direct
/// Smith-form checks of `R_j` for `j = 0..=jmax` as corroboration.
pub fn corollary_68_report(sf: &SevenForm, jmax: usize) -> Result<ConditionReport, LinAlgError> {
    let lower = &sf.a[..sf.d];
    let indivisible = match is_proper_power(&sf.u) {
        Ok(None) => Check::eval(true, json!({ "u": sf.u.to_string() })),
        Ok(Some((root, k))) => Check::eval(
            false,
            json!({ "u": sf.u.to_string(), "root": root.to_string(), "k": k.to_string() }),
        ),
        Err(_) => Check::eval(false, json!({ "u": "1" })),
    };
    let cp = condition_c_prime(lower, &sf.m);
    let (b, b_witness) = condition_b(lower, &sf.m);

    let mut checked = None;
    let mut first_fail = None;
    for j in 0..=jmax {
        let cols = (sf.d + j + 1) as u128;
        if binom(cols, j as u128 + 1) > MAX_MINORS_PER_J {
            break;
        }
        if !rj_all_ones(&sf.a, j)? && first_fail.is_none() {
            first_fail = Some(j);
        }
        checked = Some(j);
    }
    let snf = match checked {
        None => Check::NotEvaluated,
        Some(_) => Check::eval(first_fail.is_none(), json!({ "first_failing_j": first_fail })),
    };
    Ok(ConditionReport {
        indivisible_u: indivisible,
        c_prime: Check::eval(cp.ok, serde_json::to_value(&cp).unwrap()),
        condition_b: b,
        condition_b_witness: Some(b_witness),
        snf_unit_diagonal: snf,
        snf_checked_up_to_j: checked,
        ..ConditionReport::default()
    })
}

/// A match of `(x^{f(t)})^n (x^{t^d})^{-m}` with `f` primitive of degree
/// `< d` and coprime `m, n ≥ 2`, up to orientation and conjugacy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerPattern {
    pub orientation: Orientation,
    #[serde(with = "crate::jsonint")]
    pub m: BigInt,
    #[serde(with = "crate::jsonint")]
    pub n: BigInt,
    pub d: usize,
    /// `b_0 .. b_{d-1}`
    #[serde(with = "crate::jsonint::vec")]
    pub f: Vec<BigInt>,
    /// The pattern word, conjugate to the oriented relator.
    pub word: Word,
}

const MAX_PATTERN_POWER: i64 = 256;

pub fn match_power_pattern(w: &Word) -> Option<PowerPattern> {
    for o in Orientation::ALL {
        let member = o.apply(w);
        let Ok(ff) = conjugate_factorization(&member) else {
            continue;
        };
        let Ok(a) = alexander_poly(&ff) else {
            continue;
        };
        let Some(d) = a.degree().filter(|&d| d >= 1) else {
            continue;
        };
        let m = -a.coeff(d);
        let lower = &a.coeffs()[..d];
        let n = gcd_all(lower);
        let two = BigInt::from(2);
        if m < two || n < two || !m.gcd(&n).is_one() {
            continue;
        }
        let (Some(ni), Some(mi)) = (n.to_i64(), m.to_i64()) else {
            continue;
        };
        if ni > MAX_PATTERN_POWER || mi > MAX_PATTERN_POWER {
            continue;
        }
        let f: Vec<BigInt> = lower.iter().map(|c| c / &n).collect();
        let v = Word::product(
            &f.iter()
                .enumerate()
                .map(|(i, b)| Word::x_pow(b.clone()).conj(&Word::t_pow(i as i64)))
                .collect::<Vec<_>>(),
        );
        let word = v
            .pow(ni)
            .mul(&Word::x_pow(-&m).conj(&Word::t_pow(d as i64)));
        if member.conjugator_to(&word).is_some() {
            return Some(PowerPattern {
                orientation: o,
                m,
                n,
                d,
                f,
                word,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_word;

    fn v(a: &[i64]) -> Vec<BigInt> {
        a.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn holds(c: &Check) -> Option<bool> {
        match c {
            Check::NotEvaluated => None,
            Check::Evaluated { holds, .. } => Some(*holds),
        }
    }

    #[test]
    fn theorem_d() {
        let r = theorem_d_conditions(&v(&[-2, 5]), &2.into());
        assert_eq!((holds(&r.gcd_condition), holds(&r.divisibility_condition)), (Some(true), Some(true)));
        let r = theorem_d_conditions(&v(&[-2, 3]), &2.into());
        assert_eq!((holds(&r.gcd_condition), holds(&r.divisibility_condition)), (Some(true), Some(true)));
        let r = theorem_d_conditions(&v(&[-2, 4]), &2.into());
        assert_eq!(holds(&r.gcd_condition), Some(false));
        assert_eq!(holds(&r.divisibility_condition), Some(false));
        assert_eq!(holds(&r.tidy), None);
    }

    #[test]
    fn corollary_report_for_knot() {
        let sf = crate::relator::seven_normal_form(&parse_word("c(x^-3,t) x^2 c(x^2,t^2)").unwrap())
            .unwrap();
        let r = corollary_68_report(&sf, 4).unwrap();
        assert_eq!(holds(&r.indivisible_u), Some(true));
        assert_eq!(holds(&r.c_prime), Some(true));
        assert_eq!(r.condition_b, BCheck::SufficientCriterionPassed);
        assert_eq!(r.snf_checked_up_to_j, Some(4));
        assert_eq!(holds(&r.snf_unit_diagonal), Some(true));
    }

    #[test]
    fn corollary_report_failures() {
        let sq = parse_word("(x c(x,t))^2").unwrap();
        let sf = SevenForm {
            u_factors: conjugate_factorization(&sq).unwrap(),
            u: sq,
            m: 3.into(),
            d: 2,
            a: v(&[2, 2, -3]),
            orientation: Orientation::default(),
            shift: 0,
        };
        let r = corollary_68_report(&sf, 2).unwrap();
        assert_eq!(holds(&r.indivisible_u), Some(false));

        let sf = SevenForm {
            a: v(&[-2, 4, -2]),
            m: 2.into(),
            ..sf
        };
        let r = corollary_68_report(&sf, 2).unwrap();
        assert_eq!(holds(&r.c_prime), Some(false));
        assert_eq!(r.condition_b, BCheck::Undetermined);
        assert_eq!(holds(&r.snf_unit_diagonal), Some(false));
    }

    #[test]
    fn power_pattern() {
        let w = |s: &str| parse_word(s).unwrap();
        let p = match_power_pattern(&w("x^3 c(x,t)^-2")).unwrap();
        assert_eq!((p.m, p.n), (2.into(), 3.into()));
        assert!(match_power_pattern(&w("x^2 c(x,t)^-3")).is_some());
        assert!(match_power_pattern(&w("(x c(x^2,t))^3 c(x,t^2)^-2")).is_some());
        assert!(match_power_pattern(&w("x^2 c(x,t)^-4")).is_none());
        assert!(match_power_pattern(&w("c(x^-3,t) x^2 c(x^2,t^2)")).is_none());
        // same polynomial, different word
        assert!(match_power_pattern(&w("x c(x,t)^-2 x^2")).is_some());
        assert!(match_power_pattern(&w("x c(x,t)^-1 x^2 c(x,t)^-1")).is_none());
    }
}
