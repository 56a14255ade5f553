use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{Gen, Word};

/// An elementary Nielsen-type substitution on F(x, t).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "op", content = "k", rename_all = "snake_case")]
pub enum Elementary {
    /// x ↦ x·t^k
    XTimesTPow(#[serde(with = "crate::jsonint")] BigInt),
    /// t ↦ t·x^k
    TTimesXPow(#[serde(with = "crate::jsonint")] BigInt),
    Swap,
    InvertX,
    InvertT,
}

impl Elementary {
    pub fn inverse(&self) -> Elementary {
        match self {
            Elementary::XTimesTPow(k) => Elementary::XTimesTPow(-k),
            Elementary::TTimesXPow(k) => Elementary::TTimesXPow(-k),
            other => other.clone(),
        }
    }

    fn image(&self, g: Gen) -> Word {
        match (self, g) {
            (Elementary::XTimesTPow(k), Gen::X) => Word::x().mul(&Word::t_pow(k.clone())),
            (Elementary::TTimesXPow(k), Gen::T) => Word::t().mul(&Word::x_pow(k.clone())),
            (Elementary::Swap, g) => Word::gen_pow(g.other(), 1),
            (Elementary::InvertX, Gen::X) => Word::x_pow(-1),
            (Elementary::InvertT, Gen::T) => Word::t_pow(-1),
            (_, g) => Word::gen_pow(g, 1),
        }
    }

    /// Image of `w` under this substitution.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for (g, e) in w.runs() {
            let img = self.image(*g);
            match img.runs() {
                [(h, a)] => out = out.mul(&Word::gen_pow(*h, a * e)),
                _ => {
                    let k = i64::try_from(e).expect("exponent of a two-letter image fits in i64");
                    out = out.mul(&img.pow(k));
                }
            }
        }
        out
    }

    // (σ_x, σ_t) ↦ weights of the image
    fn act_on_weights(&self, sx: &BigInt, st: &BigInt) -> (BigInt, BigInt) {
        match self {
            Elementary::XTimesTPow(k) => (sx.clone(), st + k * sx),
            Elementary::TTimesXPow(k) => (sx + k * st, st.clone()),
            Elementary::Swap => (st.clone(), sx.clone()),
            Elementary::InvertX => (-sx, st.clone()),
            Elementary::InvertT => (sx.clone(), -st),
        }
    }

    fn sort_key(&self) -> (u8, Option<&BigInt>) {
        match self {
            Elementary::XTimesTPow(k) => (0, Some(k)),
            Elementary::TTimesXPow(k) => (1, Some(k)),
            Elementary::Swap => (2, None),
            Elementary::InvertX => (3, None),
            Elementary::InvertT => (4, None),
        }
    }
}

/// A composite automorphism: the steps are applied to the word in order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct BasisChange {
    pub steps: Vec<Elementary>,
}

impl BasisChange {
    pub fn new(steps: Vec<Elementary>) -> Self {
        BasisChange { steps }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange {
            steps: self.steps.iter().rev().map(Elementary::inverse).collect(),
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        self.steps.iter().fold(w.clone(), |acc, s| s.apply(&acc))
    }

    fn cmp_preference(&self, other: &BasisChange) -> Ordering {
        self.steps.len().cmp(&other.steps.len()).then_with(|| {
            let a = self.steps.iter().map(Elementary::sort_key);
            let b = other.steps.iter().map(Elementary::sort_key);
            a.cmp(b)
        })
    }
}

/// The image of `w` under `bc`, freely reduced.
pub fn substitute(w: &Word, bc: &BasisChange) -> Word {
    bc.apply(w)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasisError {
    #[error("relator is the identity")]
    IdentityInput,
    #[error("relator has no occurrence of x after the change of generators")]
    Degenerate,
}

/// Change generators so the relator has t-exponent-sum zero.
///
/// Runs the Euclidean algorithm on the weight vector `(σ_x, σ_t)` with
/// nearest-integer quotients, trying both starting directions, and keeps the
/// shortest step list (ties: smallest `k` values).
pub fn zero_t_weight(w: &Word) -> Result<(Word, BasisChange), BasisError> {
    if w.is_identity() {
        return Err(BasisError::IdentityInput);
    }
    let sx = w.exponent_sum(Gen::X);
    let st = w.exponent_sum(Gen::T);
    let bc = euclid_plan(&sx, &st);
    let image = bc.apply(w);
    if !image.contains(Gen::X) {
        return Err(BasisError::Degenerate);
    }
    Ok((image, bc))
}

fn euclid_plan(sx: &BigInt, st: &BigInt) -> BasisChange {
    let mut candidates = Vec::new();
    for reduce_t_first in [true, false] {
        plan_from(sx.clone(), st.clone(), reduce_t_first, Vec::new(), &mut candidates);
    }
    candidates
        .into_iter()
        .min_by(|a, b| a.cmp_preference(b))
        .expect("at least one plan")
}

/// Quotients `k` minimizing `|num + k·den|`; more than one only on exact ties.
fn nearest_quotients(num: &BigInt, den: &BigInt) -> Vec<BigInt> {
    let (q, _) = num.div_mod_floor(den);
    let mut best: Vec<BigInt> = Vec::new();
    let mut best_abs: Option<BigInt> = None;
    for k in [-&q, -&q - 1, -&q + 1] {
        let r = (num + &k * den).abs();
        match &best_abs {
            Some(b) if r > *b => {}
            Some(b) if r == *b => best.push(k),
            _ => {
                best_abs = Some(r);
                best = vec![k];
            }
        }
    }
    best.sort();
    best.dedup();
    best
}

fn plan_from(
    sx: BigInt,
    st: BigInt,
    reduce_t: bool,
    steps: Vec<Elementary>,
    out: &mut Vec<BasisChange>,
) {
    if st.is_zero() {
        out.push(BasisChange::new(steps));
        return;
    }
    if sx.is_zero() {
        let mut steps = steps;
        steps.push(Elementary::Swap);
        out.push(BasisChange::new(steps));
        return;
    }
    let (num, den) = if reduce_t { (&st, &sx) } else { (&sx, &st) };
    for k in nearest_quotients(num, den) {
        if k.is_zero() {
            // Already reduced in this direction; the other direction then
            // always has a nonzero quotient, so this cannot loop.
            plan_from(sx.clone(), st.clone(), !reduce_t, steps.clone(), out);
            continue;
        }
        let step = if reduce_t {
            Elementary::XTimesTPow(k)
        } else {
            Elementary::TTimesXPow(k)
        };
        let (nx, nt) = step.act_on_weights(&sx, &st);
        let mut next = steps.clone();
        next.push(step);
        plan_from(nx, nt, !reduce_t, next, out);
    }
}
