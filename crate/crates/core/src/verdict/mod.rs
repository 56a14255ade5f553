//! The decision engine: runs every applicable criterion on a relator and
//! returns a justified outcome.

mod conditions;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::freegroup::{zero_t_weight, BasisChange, BasisError, Gen, Word};
use crate::gtcert::{
    bounded_search, default_candidates, family_certificates, verify_certificate, Family, GtError,
    SearchBounds,
};
use crate::intlinalg::LinAlgError;
use crate::poly::{all_roots_real_positive, has_positive_real_root};
use crate::relator::{
    alexander_poly, classify, conjugate_factorization, seven_normal_forms, Orientation,
    RelatorError, SevenForm, WordClass,
};
use crate::IntPolynomial;

pub use conditions::{
    condition_b, corollary_68_report, match_power_pattern, theorem_d_conditions, PowerPattern,
    MAX_MINORS_PER_J,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    BiOrderable,
    NotBiOrderable,
    Inconclusive,
    Unsupported,
}

impl Outcome {
    pub fn is_decided(self) -> bool {
        matches!(self, Outcome::BiOrderable | Outcome::NotBiOrderable)
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Outcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "BiOrderable" => Ok(Outcome::BiOrderable),
            "NotBiOrderable" => Ok(Outcome::NotBiOrderable),
            "Inconclusive" => Ok(Outcome::Inconclusive),
            "Unsupported" => Ok(Outcome::Unsupported),
            _ => Err(format!("unknown outcome {s:?}")),
        }
    }
}

/// Result of one checker; `NotEvaluated` when the checker did not run.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Check {
    #[default]
    NotEvaluated,
    Evaluated { holds: bool, witness: Value },
}

impl Check {
    pub fn eval(holds: bool, witness: Value) -> Check {
        Check::Evaluated { holds, witness }
    }

    pub fn holds(&self) -> Option<bool> {
        match self {
            Check::NotEvaluated => None,
            Check::Evaluated { holds, .. } => Some(*holds),
        }
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Check::NotEvaluated => s.serialize_str("not-evaluated"),
            Check::Evaluated { holds, witness } => {
                json!({ "holds": holds, "witness": witness }).serialize(s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BCheck {
    #[default]
    NotEvaluated,
    SufficientCriterionPassed,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ConditionReport {
    pub tidy: Check,
    pub principal: Check,
    pub monic: Check,
    pub has_positive_real_root: Check,
    pub all_roots_real_positive: Check,
    pub gcd_condition: Check,
    pub divisibility_condition: Check,
    pub c_prime: Check,
    pub indivisible_u: Check,
    pub condition_b: BCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_b_witness: Option<Value>,
    pub snf_unit_diagonal: Check,
    pub snf_checked_up_to_j: Option<usize>,
}

impl ConditionReport {
    fn absorb(&mut self, other: ConditionReport) {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if other.$f != Default::default() {
                    self.$f = other.$f;
                }
            )*};
        }
        take!(
            tidy,
            principal,
            monic,
            has_positive_real_root,
            all_roots_real_positive,
            gcd_condition,
            divisibility_condition,
            c_prime,
            indivisible_u,
            condition_b,
            condition_b_witness,
            snf_unit_diagonal,
            snf_checked_up_to_j
        );
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Justification {
    pub rule: String,
    pub citation: String,
    pub evidence: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trail {
    /// Generator change making the t-exponent sum zero.
    pub basis_change: BasisChange,
    /// The relator after the change of generators.
    pub normalized: Word,
    /// Cyclic core of `normalized`, which every rule reads.
    pub core: Word,
    /// Orbit member the reported conditions were read from.
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub relator: Word,
    #[serde(serialize_with = "ser_poly")]
    pub polynomial: Option<IntPolynomial>,
    pub classification: Option<WordClass>,
    pub normalization_trail: Option<Trail>,
    pub justifications: Vec<Justification>,
    pub condition_report: ConditionReport,
    /// Why no criterion applied (Inconclusive / Unsupported).
    pub reasons: Vec<String>,
    /// Search results that were found but carry no nontriviality argument.
    pub notes: Vec<String>,
    pub knot: bool,
}

fn ser_poly<S: Serializer>(p: &Option<IntPolynomial>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        None => s.serialize_none(),
        Some(p) => {
            let coeffs: Vec<Value> = p
                .coeffs()
                .iter()
                .map(|c| serde_json::to_value(crate::jsonint::Wrap(c)).unwrap())
                .collect();
            json!({ "text": p.to_string(), "coeffs": coeffs }).serialize(s)
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerdictError {
    #[error("internal inconsistency: positive rules {positive:?} and negative rules {negative:?} both fired")]
    InternalInconsistency {
        positive: Vec<String>,
        negative: Vec<String>,
    },
    #[error(transparent)]
    Search(#[from] GtError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Relator(#[from] RelatorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Largest `j` for which `R_j` is checked directly.
    pub jmax: usize,
    /// Run the bounded certificate search with these bounds.
    pub gt_search: Option<SearchBounds>,
    pub knot: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            jmax: 8,
            gt_search: None,
            knot: false,
        }
    }
}

fn citation(rule: &str, knot: bool) -> &'static str {
    match (rule, knot) {
        ("theorem-a", false) => "Theorem A",
        ("theorem-a", true) => "Corollary 2.6(1)",
        ("theorem-c", false) => "Theorem C",
        ("theorem-c", true) => "Corollary 2.6(2)",
        ("theorem-d", false) => "Theorem D",
        ("theorem-d", true) => "Corollary 2.6(3)",
        ("theorem-7.3", _) => "Theorem 7.3 via Corollary 6.8",
        ("commuting-powers", _) => "Example 2.2",
        ("gt-search", _) => "generalized torsion element",
        _ => "",
    }
}

fn family_citation(f: &Family) -> &'static str {
    match f {
        Family::Commutator { .. } => "Example 2.1",
        Family::QuadraticPower { .. } | Family::QuadraticCommutator { .. } => "Example 2.3",
        Family::Telescope { k: 2 } => "Example 2.3",
        Family::Telescope { .. } => "Example 2.4",
    }
}

struct Builder {
    relator: Word,
    knot: bool,
    polynomial: Option<IntPolynomial>,
    classification: Option<WordClass>,
    trail: Option<Trail>,
    negative: Vec<Justification>,
    positive: Vec<Justification>,
    report: ConditionReport,
    reasons: Vec<String>,
    notes: Vec<String>,
}

impl Builder {
    fn just(&self, rule: &str, evidence: Value) -> Justification {
        Justification {
            rule: rule.into(),
            citation: citation(rule, self.knot).into(),
            evidence,
        }
    }

    fn stop(self, outcome: Outcome, reason: &str) -> Verdict {
        Verdict {
            outcome,
            relator: self.relator,
            polynomial: self.polynomial,
            classification: self.classification,
            normalization_trail: self.trail,
            justifications: Vec::new(),
            condition_report: self.report,
            reasons: vec![reason.into()],
            notes: self.notes,
            knot: self.knot,
        }
    }

    fn finish(self) -> Result<Verdict, VerdictError> {
        let rules = |v: &[Justification]| v.iter().map(|j| j.rule.clone()).collect::<Vec<_>>();
        let (outcome, justifications, reasons) = match (self.negative.is_empty(), self.positive.is_empty()) {
            (false, false) => {
                return Err(VerdictError::InternalInconsistency {
                    positive: rules(&self.positive),
                    negative: rules(&self.negative),
                })
            }
            (false, true) => (Outcome::NotBiOrderable, self.negative, Vec::new()),
            (true, false) => (Outcome::BiOrderable, self.positive, Vec::new()),
            (true, true) => (Outcome::Inconclusive, Vec::new(), self.reasons),
        };
        Ok(Verdict {
            outcome,
            relator: self.relator,
            polynomial: self.polynomial,
            classification: self.classification,
            normalization_trail: self.trail,
            justifications,
            condition_report: self.report,
            reasons,
            notes: self.notes,
            knot: self.knot,
        })
    }
}

/// First failing Theorem D hypothesis for a seven-form, if any.
fn theorem_d_failure(r: &ConditionReport) -> Option<&'static str> {
    if r.gcd_condition.holds() != Some(true) {
        Some("gcd(a_0..a_{d-1}) != 1")
    } else if r.divisibility_condition.holds() != Some(true) {
        Some("m divides a_{d-1}")
    } else {
        None
    }
}

fn corollary_failure(r: &ConditionReport) -> Option<&'static str> {
    if r.indivisible_u.holds() != Some(true) {
        Some("(a) u is a proper power")
    } else if r.c_prime.holds() != Some(true) {
        Some("(c)' some prime of m divides every a_k")
    } else if r.condition_b != BCheck::SufficientCriterionPassed {
        Some("(b) not established by the abelianization criterion")
    } else {
        None
    }
}

fn sf_evidence(sf: &SevenForm) -> Value {
    json!({
        "orientation": sf.orientation,
        "u": sf.u,
        "m": crate::jsonint::Wrap(&sf.m),
        "a": sf.a.iter().map(|a| serde_json::to_value(crate::jsonint::Wrap(a)).unwrap()).collect::<Vec<_>>(),
    })
}

/// Decide bi-orderability of `<x, t | relator>` where the criteria apply.
pub fn analyze(relator: &Word, options: &AnalyzeOptions) -> Result<Verdict, VerdictError> {
    let mut b = Builder {
        relator: relator.clone(),
        knot: options.knot,
        polynomial: None,
        classification: None,
        trail: None,
        negative: Vec::new(),
        positive: Vec::new(),
        report: ConditionReport::default(),
        reasons: Vec::new(),
        notes: Vec::new(),
    };

    // normalization
    let (normalized, bc) = match zero_t_weight(relator) {
        Ok(r) => r,
        Err(BasisError::IdentityInput) => return Ok(b.stop(Outcome::Unsupported, "empty relator")),
        Err(BasisError::Degenerate) => {
            return Ok(b.stop(Outcome::Unsupported, "relator is a power of t after normalization"))
        }
    };
    let (core, _) = normalized.cyclic_core();
    b.trail = Some(Trail {
        basis_change: bc.clone(),
        normalized: normalized.clone(),
        core: core.clone(),
        orientation: Orientation::default(),
    });
    if !core.contains(Gen::X) {
        return Ok(b.stop(Outcome::Unsupported, "relator has no x occurrence after normalization"));
    }
    if !core.contains(Gen::T) {
        return Ok(b.stop(Outcome::Unsupported, "relator has no t occurrence after normalization"));
    }

    let ff = conjugate_factorization(&core)?;
    let class = classify(&ff);
    b.classification = Some(class);
    if class.in_derived {
        return Ok(b.stop(Outcome::Inconclusive, "A_w undefined: relator in N′"));
    }
    let a = alexander_poly(&ff)?;
    b.polynomial = Some(a.clone());

    // orbit-level shape conditions
    let mut principal = Vec::new();
    let mut monic = Vec::new();
    for o in Orientation::ALL {
        let c = classify(&conjugate_factorization(&o.apply(&core))?);
        if c.principal {
            principal.push(o.tag());
        }
        if c.monic {
            monic.push(o.tag());
        }
    }
    let has_pos = has_positive_real_root(&a).expect("A_w(0) != 0 when S is nonempty");
    let all_pos = all_roots_real_positive(&a).expect("A_w(0) != 0 when S is nonempty");
    b.report.tidy = Check::eval(
        class.tidy,
        json!({ "degrees": [ff.min_degree(), ff.max_degree()] }),
    );
    b.report.principal = Check::eval(!principal.is_empty(), json!({ "orientations": principal }));
    b.report.monic = Check::eval(!monic.is_empty(), json!({ "orientations": monic }));
    b.report.has_positive_real_root = Check::eval(has_pos, json!({ "polynomial": a.to_string() }));
    b.report.all_roots_real_positive = Check::eval(all_pos, json!({ "polynomial": a.to_string() }));

    // negative rules
    if class.tidy && !has_pos {
        let j = b.just("theorem-a", json!({ "polynomial": a.to_string(), "tidy": true }));
        b.negative.push(j);
    } else if !class.tidy {
        b.reasons.push("Theorem A: relator is not tidy".into());
    } else {
        b.reasons.push("Theorem A: A_w has a positive real root".into());
    }

    let back = bc.inverse();
    let families = family_certificates(&normalized);
    for (cert, fam) in &families {
        let cert = cert.transport(&back);
        if verify_certificate(&cert, relator) != Ok(true) {
            return Err(VerdictError::InternalInconsistency {
                positive: Vec::new(),
                negative: vec![format!("certificate for {fam:?} failed to transport")],
            });
        }
        b.negative.push(Justification {
            rule: "family-certificate".into(),
            citation: family_citation(fam).into(),
            evidence: json!({ "family": fam, "certificate": cert }),
        });
    }
    if families.is_empty() {
        b.reasons.push("certificate families: no known family matches".into());
    }

    match match_power_pattern(&normalized) {
        Some(p) => {
            let j = b.just("commuting-powers", serde_json::to_value(&p).unwrap());
            b.negative.push(j);
        }
        None => b.reasons.push(
            "Example 2.2: relator is not (x^{f(t)})^n (x^{t^d})^{-m} with coprime m, n >= 2".into(),
        ),
    }

    // positive rules
    let forms = match seven_normal_forms(&core) {
        Ok(f) => f,
        Err(RelatorError::DegreeZero | RelatorError::NotPrincipal) => Vec::new(),
        Err(e) => return Err(e.into()),
    };

    if !monic.is_empty() && all_pos {
        let j = b.just(
            "theorem-c",
            json!({ "polynomial": a.to_string(), "orientation": monic[0] }),
        );
        b.positive.push(j);
    } else if monic.is_empty() {
        b.reasons.push("Theorem C: no orientation of the relator is monic".into());
    } else {
        b.reasons.push("Theorem C: not all roots of A_w are real and positive".into());
    }

    let mut d_reports = Vec::new();
    for sf in &forms {
        d_reports.push(theorem_d_conditions(&sf.a[..sf.d], &sf.m));
    }
    let d_pass = d_reports.iter().position(|r| theorem_d_failure(r).is_none());
    let mut c_reports = Vec::new();
    for sf in &forms {
        c_reports.push(corollary_68_report(sf, options.jmax)?);
    }
    let c_pass = c_reports.iter().position(|r| corollary_failure(r).is_none());

    if let Some(i) = d_pass.or(c_pass).or(if forms.is_empty() { None } else { Some(0) }) {
        b.report.absorb(d_reports[i].clone());
        b.report.absorb(c_reports[i].clone());
        if let Some(t) = b.trail.as_mut() {
            t.orientation = forms[i].orientation;
        }
    }

    if forms.is_empty() {
        b.reasons.push("Theorem D: no orientation is principal with negative top coefficient".into());
        b.reasons.push("Theorem 7.3: no orientation is principal with negative top coefficient".into());
    } else if !all_pos {
        b.reasons.push("Theorem D: not all roots of A_w are real and positive".into());
        b.reasons.push("Theorem 7.3: not all roots of A_w are real and positive".into());
    } else if b.positive.is_empty() {
        match d_pass {
            Some(i) => {
                let j = b.just("theorem-d", sf_evidence(&forms[i]));
                b.positive.push(j);
            }
            None => {
                let why = theorem_d_failure(&d_reports[0]).unwrap();
                b.reasons.push(format!("Theorem D: {why}"));
                match c_pass {
                    Some(i) => {
                        let j = b.just("theorem-7.3", sf_evidence(&forms[i]));
                        b.positive.push(j);
                    }
                    None => {
                        let why = corollary_failure(&c_reports[0]).unwrap();
                        b.reasons.push(format!("Theorem 7.3: {why}"));
                    }
                }
            }
        }
    }

    // optional search
    if let Some(bounds) = options.gt_search {
        if let Some(hit) = bounded_search(&normalized, &default_candidates(), bounds)? {
            let cert = hit.certificate.transport(&back);
            let g_core = hit.certificate.g.cyclic_core().0;
            let window = conjugate_factorization(&g_core)
                .ok()
                .and_then(|f| Some(f.max_degree()? - f.min_degree()?));
            let span = ff.max_degree().unwrap() - ff.min_degree().unwrap();
            match window {
                Some(wd) if wd < span => {
                    let mut cert = cert;
                    cert.assumption = format!(
                        "g != 1 in G: g involves x-conjugates spanning {} < {} degrees (Freiheitssatz)",
                        wd + 1,
                        span + 1
                    );
                    let j = b.just(
                        "gt-search",
                        json!({ "certificate": cert, "attempts": hit.attempts }),
                    );
                    b.negative.push(j);
                }
                _ => b.notes.push(format!(
                    "search found {} with a product of conjugates equal to a product of relator conjugates, but g != 1 in G is not established",
                    hit.certificate.g
                )),
            }
        } else {
            b.reasons.push("bounded search: no certificate within bounds".into());
        }
    }

    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_word;

    fn run(s: &str) -> Verdict {
        analyze(&parse_word(s).unwrap(), &AnalyzeOptions::default()).unwrap()
    }

    fn rules(v: &Verdict) -> Vec<&str> {
        v.justifications.iter().map(|j| j.rule.as_str()).collect()
    }

    #[test]
    fn knot_5_2() {
        let w = parse_word("c(x^-3,t) x^2 c(x^2,t^2)").unwrap();
        let v = analyze(&w, &AnalyzeOptions { knot: true, ..Default::default() }).unwrap();
        assert_eq!(v.outcome, Outcome::NotBiOrderable);
        assert_eq!(v.polynomial.as_ref().unwrap().to_string(), "2*X^2-3*X+2");
        assert_eq!(v.justifications[0].citation, "Corollary 2.6(1)");
        assert_eq!(v.condition_report.condition_b, BCheck::SufficientCriterionPassed);
    }

    #[test]
    fn positives() {
        let v = run("x c(x^-3,t) c(x,t^2)");
        assert_eq!((v.outcome, rules(&v)), (Outcome::BiOrderable, vec!["theorem-c"]));
        let v = run("x^-2 c(x^5,t) c(x^-2,t^2)");
        assert_eq!((v.outcome, rules(&v)), (Outcome::BiOrderable, vec!["theorem-d"]));
        assert_eq!(v.condition_report.has_positive_real_root.holds(), Some(true));
    }

    #[test]
    fn negatives() {
        let v = run("c(x,t^3) x^-1");
        assert_eq!(v.outcome, Outcome::NotBiOrderable);
        assert!(rules(&v).contains(&"family-certificate"));
        let v = run("x^3 c(x,t)^-2");
        assert_eq!((v.outcome, rules(&v)), (Outcome::NotBiOrderable, vec!["commuting-powers"]));
    }

    #[test]
    fn inconclusive_and_unsupported() {
        let v = run("x c(x,t) c(x^-3,t^2) c(x,t^3)");
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.reasons.iter().any(|r| r.starts_with("Theorem C")));
        let v = run("k(x, c(x,t))");
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.reasons[0].contains("N′"));
        assert_eq!(run("t^3").outcome, Outcome::Unsupported);
        assert_eq!(run("x^2").outcome, Outcome::Unsupported);
        assert_eq!(run("1").outcome, Outcome::Unsupported);
    }

    #[test]
    fn certificates_refer_to_the_input() {
        // t-weight nonzero, so the basis change is nontrivial
        let w = parse_word("t c(x,t^3) x^-1 t^-1 x t").unwrap();
        let v = analyze(&w, &AnalyzeOptions::default()).unwrap();
        assert!(!v.normalization_trail.as_ref().unwrap().basis_change.is_empty());
        for j in &v.justifications {
            assert!(!j.citation.is_empty());
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(run("c(x^-3,t) x^2 c(x^2,t^2)")).unwrap();
        for k in ["outcome", "polynomial", "classification", "normalization_trail", "justifications", "condition_report"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["condition_report"]["snf_checked_up_to_j"], 8);
        assert_eq!(v["polynomial"]["coeffs"], json!([2, -3, 2]));
    }
}
