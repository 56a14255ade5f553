//! Exhaustive search for short certificates `∏ g^{c_i} = ∏ (w^{s_j})^{e_j}`.
//!
//! A candidate left-hand side is first filtered in the abelianization of N:
//! writing `ab(v)` for the Laurent polynomial of `v ∈ N`, we need
//! `ab(g) · Σ X^{σ_t(c_i)} = ab(w) · R`, and `R` then fixes the signs and
//! t-shifts of the right-hand factors.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{verify_certificate, GtCertificate, GtError};
use crate::freegroup::{Gen, Word};
use crate::relator::conjugate_factorization;
use crate::{IntPolynomial, Poly};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_factors: usize,
    pub max_conj_len: usize,
    /// Cap on verification attempts.
    pub budget: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_factors: 4,
            max_conj_len: 3,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    pub certificate: GtCertificate,
    /// Index of `g` in the candidate list.
    pub candidate: usize,
    pub attempts: u64,
}

const LETTERS: [(Gen, i64); 4] = [(Gen::X, 1), (Gen::X, -1), (Gen::T, 1), (Gen::T, -1)];

/// Freely reduced letter sequences of length `<= len`, by length and then
/// lexicographically with `x < x^-1 < t < t^-1`.
fn reduced_letter_words(len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..4 {
                if w.last().is_some_and(|&p| p ^ 1 == l) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn letters_to_word(ls: &[usize]) -> Word {
    Word::from_runs(ls.iter().map(|&l| (LETTERS[l].0, BigInt::from(LETTERS[l].1))))
}

fn conjugator_pool(len: usize) -> Vec<Word> {
    reduced_letter_words(len).iter().map(|w| letters_to_word(w)).collect()
}

/// Cyclically reduced words of length 1..=4 with t-exponent sum zero, one per
/// class under cyclic permutation and inversion.
pub fn default_candidates() -> Vec<Word> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for w in reduced_letter_words(4) {
        if w.is_empty() || (w.len() > 1 && w[0] ^ 1 == w[w.len() - 1]) {
            continue;
        }
        let st: i64 = w.iter().map(|&l| if l >= 2 { LETTERS[l].1 } else { 0 }).sum();
        if st != 0 {
            continue;
        }
        let inv: Vec<usize> = w.iter().rev().map(|&l| l ^ 1).collect();
        let key = (0..w.len())
            .flat_map(|r| {
                let mut a = w.clone();
                a.rotate_left(r);
                let mut b = inv.clone();
                b.rotate_left(r);
                [a, b]
            })
            .min()
            .unwrap();
        if seen.insert(key) {
            out.push(letters_to_word(&w));
        }
    }
    out
}

/// `X^low · p` with `p(0) ≠ 0`, or zero.
#[derive(Debug, Clone, PartialEq)]
struct Laurent {
    low: i64,
    p: IntPolynomial,
}

impl Laurent {
    fn from_map(m: &BTreeMap<i64, BigInt>) -> Laurent {
        let nz: Vec<_> = m.iter().filter(|(_, c)| !c.is_zero()).collect();
        let Some((&low, _)) = nz.first() else {
            return Laurent {
                low: 0,
                p: Poly::zero(),
            };
        };
        let high = *nz.last().unwrap().0;
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (d, c) in nz {
            coeffs[(d - low) as usize] = c.clone();
        }
        Laurent {
            low,
            p: Poly::new(coeffs),
        }
    }

    fn of_word(v: &Word) -> Option<Laurent> {
        let ff = conjugate_factorization(v).ok()?;
        Some(Laurent::from_map(&ff.degree_sums()))
    }

    fn shifts(shifts: &[i64]) -> Laurent {
        let mut m = BTreeMap::new();
        for &s in shifts {
            *m.entry(s).or_insert_with(BigInt::zero) += 1;
        }
        Laurent::from_map(&m)
    }

    fn mul(&self, o: &Laurent) -> Laurent {
        Laurent {
            low: self.low + o.low,
            p: &self.p * &o.p,
        }
    }

    /// Exact quotient in `Z[X, X^-1]`, if any.
    fn div(&self, o: &Laurent) -> Option<Laurent> {
        let (q, r) = self.p.to_rational().div_rem(&o.p.to_rational());
        if !r.is_zero() || q.coeffs().iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(Laurent {
            low: self.low - o.low,
            p: q.map(|c| c.to_integer()),
        })
    }

    fn terms(&self) -> Vec<(i64, BigInt)> {
        self.p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.low + i as i64, c.clone()))
            .collect()
    }
}

// Nondecreasing k-tuples from `vals`.
fn multisets(vals: &[i64], k: usize) -> Vec<Vec<i64>> {
    fn go(vals: &[i64], k: usize, start: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..vals.len() {
            cur.push(vals[i]);
            go(vals, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(vals, k, 0, &mut Vec::new(), &mut out);
    out
}

// Distinct orderings of a sorted list.
fn permutations<T: Clone + Ord>(items: &[T]) -> Vec<Vec<T>> {
    let mut v = items.to_vec();
    v.sort();
    let mut out = vec![v.clone()];
    loop {
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            return out;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
}

struct Pool {
    words: Vec<Word>,
    lens: Vec<usize>,
    shifts: Vec<i64>,
    by_shift: BTreeMap<i64, Vec<usize>>,
}

impl Pool {
    fn new(len: usize) -> Pool {
        let words = conjugator_pool(len);
        let lens = words
            .iter()
            .map(|w| w.letter_len().to_usize().unwrap())
            .collect();
        let shifts: Vec<i64> = words
            .iter()
            .map(|w| w.exponent_sum(Gen::T).to_i64().unwrap())
            .collect();
        let mut by_shift: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, s) in shifts.iter().enumerate() {
            by_shift.entry(*s).or_default().push(i);
        }
        Pool {
            words,
            lens,
            shifts,
            by_shift,
        }
    }

    /// Index tuples whose t-shifts follow one of `patterns`, with their total
    /// length, sorted by length and then lexicographically.
    fn sequences(&self, patterns: &[Vec<i64>]) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for pat in patterns {
            let mut partial: Vec<Vec<usize>> = vec![vec![]];
            for s in pat {
                let choices = self.by_shift.get(s).map(Vec::as_slice).unwrap_or(&[]);
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        choices.iter().map(move |&c| {
                            let mut q = p.clone();
                            q.push(c);
                            q
                        })
                    })
                    .collect();
            }
            out.extend(
                partial
                    .into_iter()
                    .map(|seq| (seq.iter().map(|&i| self.lens[i]).sum(), seq)),
            );
        }
        out.sort();
        out.dedup();
        out
    }

    fn count(&self, patterns: &[Vec<i64>]) -> u128 {
        patterns
            .iter()
            .map(|pat| {
                pat.iter()
                    .map(|s| self.by_shift.get(s).map_or(0, Vec::len) as u128)
                    .product::<u128>()
            })
            .sum()
    }
}

/// Search products of at most `max_factors` conjugates of each candidate `g`
/// (conjugators of length `<= max_conj_len`) equal in F to a product of at
/// most `max_factors` conjugates of `w^{±1}`. Right-hand sides are limited
/// to those whose abelian image is forced by the left, so products with
/// cancelling pairs of `w`-conjugates are not explored.
///
/// Enumeration order: candidate, number of lhs factors, total conjugator
/// length, conjugator indices; the first verified certificate wins.
pub fn bounded_search(
    w: &Word,
    candidates: &[Word],
    bounds: SearchBounds,
) -> Result<Option<SearchHit>, GtError> {
    let pool = Pool::new(bounds.max_conj_len);
    let size = (pool.words.len() as u128).saturating_pow(bounds.max_factors as u32);
    if size > bounds.budget as u128 {
        return Err(GtError::BoundsTooLarge {
            needed: size,
            budget: bounds.budget,
        });
    }
    let Some(ab_w) = Laurent::of_word(w) else {
        return Ok(None);
    };
    let shifts: Vec<i64> = pool.by_shift.keys().copied().collect();
    let mut attempts: u64 = 0;
    let charge = |n: u128, attempts: &mut u64| -> Result<(), GtError> {
        let total = *attempts as u128 + n;
        if total > bounds.budget as u128 {
            return Err(GtError::BoundsTooLarge {
                needed: total,
                budget: bounds.budget,
            });
        }
        *attempts = total as u64;
        Ok(())
    };

    for (ci, g) in candidates.iter().enumerate() {
        if g.is_identity() || !g.exponent_sum(Gen::T).is_zero() {
            continue;
        }
        let ab_g = Laurent::of_word(g).expect("t-weight zero");
        for k in 1..=bounds.max_factors {
            // (lhs shift multiset, rhs (shift, sign) multiset)
            let mut plans: Vec<(Vec<i64>, Vec<(i64, i8)>)> = Vec::new();
            for ms in multisets(&shifts, k) {
                let lhs_ab = ab_g.mul(&Laurent::shifts(&ms));
                let rhs_terms: Vec<Vec<(i64, i8)>> = if ab_w.p.is_zero() {
                    if !lhs_ab.p.is_zero() {
                        continue;
                    }
                    (1..=bounds.max_factors)
                        .flat_map(|r| multisets(&shifts, r))
                        .flat_map(|sh| {
                            let r = sh.len();
                            (0..1u32 << r).map(move |mask| {
                                sh.iter()
                                    .enumerate()
                                    .map(|(i, &s)| (s, if mask >> i & 1 == 1 { -1 } else { 1 }))
                                    .collect()
                            })
                        })
                        .collect()
                } else {
                    let Some(r) = lhs_ab.div(&ab_w) else {
                        continue;
                    };
                    let mut terms = Vec::new();
                    for (d, c) in r.terms() {
                        let n = c.abs().to_usize().unwrap_or(usize::MAX);
                        if n > bounds.max_factors {
                            terms.clear();
                            break;
                        }
                        let s = if c.is_negative() { -1 } else { 1 };
                        terms.extend(std::iter::repeat_n((d, s), n));
                    }
                    if terms.is_empty() || terms.len() > bounds.max_factors {
                        continue;
                    }
                    vec![terms]
                };
                for t in rhs_terms {
                    plans.push((ms.clone(), t));
                }
            }
            if plans.is_empty() {
                continue;
            }

            let lhs_patterns: Vec<Vec<i64>> = {
                let mut v: Vec<Vec<i64>> = plans
                    .iter()
                    .flat_map(|(ms, _)| permutations(ms))
                    .collect();
                v.sort();
                v.dedup();
                v
            };
            charge(pool.count(&lhs_patterns), &mut attempts)?;
            let lhs_list: Vec<(usize, Vec<usize>, Vec<i64>)> = pool
                .sequences(&lhs_patterns)
                .into_iter()
                .map(|(c, seq)| {
                    let mut ms: Vec<i64> = seq.iter().map(|&i| pool.shifts[i]).collect();
                    ms.sort();
                    (c, seq, ms)
                })
                .collect();
            // rhs choices per lhs shift multiset: (cost, [(pool index, sign)])
            let mut rhs_options: BTreeMap<Vec<i64>, Vec<(usize, Vec<(usize, i8)>)>> =
                BTreeMap::new();
            for (ms, terms) in &plans {
                for order in permutations(terms) {
                    let pattern: Vec<i64> = order.iter().map(|t| t.0).collect();
                    for (c, rseq) in pool.sequences(std::slice::from_ref(&pattern)) {
                        let signed = rseq.iter().zip(&order).map(|(&i, t)| (i, t.1)).collect();
                        rhs_options.entry(ms.clone()).or_default().push((c, signed));
                    }
                }
            }
            for v in rhs_options.values_mut() {
                v.sort();
            }
            let max_lhs = lhs_list.iter().map(|e| e.0).max().unwrap_or(0);
            let max_rhs = rhs_options.values().flatten().map(|e| e.0).max().unwrap_or(0);
            let mut targets: Vec<Option<Word>> = vec![None; lhs_list.len()];
            // Cheapest total conjugator length first.
            for total in 0..=max_lhs + max_rhs {
                for (li, (lc, seq, ms)) in lhs_list.iter().enumerate() {
                    if *lc > total {
                        break;
                    }
                    let Some(opts) = rhs_options.get(ms) else {
                        continue;
                    };
                    for (_, rseq) in opts.iter().filter(|(rc, _)| lc + rc == total) {
                        charge(1, &mut attempts)?;
                        let cert = GtCertificate {
                            g: g.clone(),
                            lhs: seq.iter().map(|&i| (pool.words[i].clone(), 1)).collect(),
                            rhs: rseq.iter().map(|&(i, s)| (pool.words[i].clone(), s)).collect(),
                            assumption: "conditional on g != 1 in G".into(),
                        };
                        let target = targets[li].get_or_insert_with(|| cert.lhs_product());
                        if cert.rhs_product(w) == *target && verify_certificate(&cert, w) == Ok(true)
                        {
                            return Ok(Some(SearchHit {
                                certificate: cert,
                                candidate: ci,
                                attempts,
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn pool_shape() {
        let p = conjugator_pool(3);
        assert_eq!(p.len(), 53);
        assert_eq!(p[0], Word::identity());
        assert_eq!(&p[1..5], &[w("x"), w("x^-1"), w("t"), w("t^-1")]);
        assert_eq!(p[5], w("x^2"));
    }

    #[test]
    fn candidates_are_canonical() {
        let c = default_candidates();
        assert_eq!(c[0], w("x"));
        assert!(c.contains(&w("x t x^-1 t^-1")));
        assert!(!c.contains(&w("x^-1 t^-1 x t")));
        assert!(c.iter().all(|v| v.exponent_sum(Gen::T).is_zero()));
        assert!(!c.contains(&w("x^-1")));
    }

    #[test]
    fn finds_two_factor_telescope() {
        let rel = w("c(x,t^2) x^-1");
        let hit = bounded_search(&rel, &[w("c(x,t) x^-1")], SearchBounds::default())
            .unwrap()
            .unwrap();
        let c = &hit.certificate;
        assert_eq!(c.lhs, vec![(w("t"), 1), (Word::identity(), 1)]);
        assert_eq!(c.rhs, vec![(Word::identity(), 1)]);
        assert_eq!(verify_certificate(c, &rel), Ok(true));
    }

    #[test]
    fn trivial_certificate() {
        let rel = w("k(x,t)");
        let hit = bounded_search(&rel, &[rel.clone()], SearchBounds::default())
            .unwrap()
            .unwrap();
        assert_eq!(hit.certificate.lhs, vec![(Word::identity(), 1)]);
    }

    #[test]
    fn knot_relator_has_no_short_certificate() {
        let rel = w("c(x^-3,t) x^2 c(x^2,t^2)");
        let got = bounded_search(&rel, &default_candidates(), SearchBounds::default()).unwrap();
        assert_eq!(got, None);
    }

    #[test]
    fn budget_is_enforced() {
        let rel = w("k(x,t)");
        let b = SearchBounds {
            max_factors: 5,
            ..SearchBounds::default()
        };
        assert!(matches!(
            bounded_search(&rel, &[rel.clone()], b),
            Err(GtError::BoundsTooLarge { .. })
        ));
    }
}
