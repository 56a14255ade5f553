use std::collections::HashSet;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use orderlab::gtcert::{SearchBounds, DEFAULT_BUDGET};
use orderlab::intlinalg::{build_rj, minors_gcd, rj_all_ones, smith_normal_form};
use orderlab::poly::{all_roots_real_positive, has_positive_real_root};
use orderlab::verdict::{Check, Verdict};
use orderlab::{analyze, parse_poly, parse_word, AnalyzeOptions, Outcome};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

const BUNDLED: &str = include_str!("../corpus/bundled.jsonl");

#[derive(Parser)]
#[command(name = "orderlab", version, about = "Bi-orderability of two-generator one-relator groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze one relator in x, t.
    Analyze {
        /// Relator, e.g. "c(x^-3,t) x^2 c(x^2,t^2)".
        #[arg(allow_hyphen_values = true)]
        relator: Option<String>,
        /// Read the relator from a file ("-" for stdin).
        #[arg(long, conflicts_with = "relator")]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// The group is a knot group; cite the knot-group corollary.
        #[arg(long)]
        knot: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Analyze a JSON-lines corpus; one result per line on stdout.
    Batch {
        /// Corpus file ("-" for stdin).
        #[arg(required_unless_present = "corpus")]
        path: Option<PathBuf>,
        /// Use the bundled corpus.
        #[arg(long, conflicts_with = "path")]
        corpus: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Root predicates for an integer polynomial in X.
    Poly {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        positive_roots: bool,
        #[arg(long)]
        all_real_positive: bool,
    },
    /// Smith normal form of R_j for weights a_0..a_d.
    Snf {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<BigInt>,
        #[arg(long, default_value_t = 0)]
        j: usize,
    },
}

#[derive(Args, Clone, Copy)]
struct RunArgs {
    /// Check R_j directly for j = 0..=JMAX.
    #[arg(long, default_value_t = 8)]
    jmax: usize,
    /// Run the bounded certificate search.
    #[arg(long)]
    gt_search: bool,
    #[arg(long, default_value_t = 4)]
    gt_max_factors: usize,
    #[arg(long, default_value_t = 3)]
    gt_max_conj: usize,
}

impl RunArgs {
    fn options(&self, knot: bool) -> Result<AnalyzeOptions> {
        let budget = match std::env::var("ORDERLAB_BUDGET") {
            Ok(s) => s.trim().parse().context("ORDERLAB_BUDGET is not an integer")?,
            Err(_) => DEFAULT_BUDGET,
        };
        Ok(AnalyzeOptions {
            jmax: self.jmax,
            gt_search: self.gt_search.then_some(SearchBounds {
                max_factors: self.gt_max_factors,
                max_conj_len: self.gt_max_conj,
                budget,
            }),
            knot,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Deserialize)]
struct CorpusEntry {
    name: String,
    relator: String,
    #[serde(default)]
    knot: bool,
    #[serde(default, deserialize_with = "de_outcome")]
    expected: Option<Outcome>,
}

fn de_outcome<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Outcome>, D::Error> {
    let s: Option<String> = Option::deserialize(d)?;
    s.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
}

#[derive(Serialize)]
struct BatchLine {
    line: usize,
    name: Option<String>,
    expected: Option<Outcome>,
    outcome: Option<Outcome>,
    #[serde(rename = "match")]
    matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn exit_code(o: Outcome) -> u8 {
    match o {
        Outcome::BiOrderable | Outcome::NotBiOrderable => 0,
        Outcome::Inconclusive => 2,
        Outcome::Unsupported => 3,
    }
}

fn read_source(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn check_text(c: &Check) -> String {
    match c {
        Check::NotEvaluated => "not evaluated".into(),
        Check::Evaluated { holds, witness } => format!("{holds}  {witness}"),
    }
}

fn print_text(v: &Verdict, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "relator:   {}", v.relator)?;
    if let Some(t) = &v.normalization_trail {
        if !t.basis_change.is_empty() {
            writeln!(out, "normalized: {}  via {:?}", t.normalized, t.basis_change.steps)?;
        }
        writeln!(out, "core:      {}  (orientation {})", t.core, t.orientation)?;
    }
    if let Some(p) = &v.polynomial {
        writeln!(out, "A_w:       {p}")?;
    }
    if let Some(c) = &v.classification {
        writeln!(
            out,
            "shape:     tidy={} principal={} monic={}",
            c.tidy, c.principal, c.monic
        )?;
    }
    writeln!(out, "outcome:   {}", v.outcome)?;
    for j in &v.justifications {
        writeln!(out, "  by {} [{}]: {}", j.citation, j.rule, j.evidence)?;
    }
    for r in &v.reasons {
        writeln!(out, "  - {r}")?;
    }
    for n in &v.notes {
        writeln!(out, "  note: {n}")?;
    }
    let r = &v.condition_report;
    writeln!(out, "conditions:")?;
    for (name, c) in [
        ("tidy", &r.tidy),
        ("principal", &r.principal),
        ("monic", &r.monic),
        ("positive real root", &r.has_positive_real_root),
        ("all roots real positive", &r.all_roots_real_positive),
        ("gcd condition", &r.gcd_condition),
        ("divisibility condition", &r.divisibility_condition),
        ("(c)'", &r.c_prime),
        ("u indivisible", &r.indivisible_u),
        ("R_j unit diagonal", &r.snf_unit_diagonal),
    ] {
        writeln!(out, "  {name:<24} {}", check_text(c))?;
    }
    writeln!(out, "  {:<24} {:?}", "(b)", r.condition_b)?;
    Ok(())
}

fn cmd_analyze(
    relator: Option<String>,
    file: Option<PathBuf>,
    format: Format,
    knot: bool,
    run: RunArgs,
) -> Result<u8> {
    let text = match (relator, file) {
        (Some(r), _) => r,
        (None, Some(f)) => read_source(&f)?,
        (None, None) => bail!("give a relator or --file"),
    };
    let w = parse_word(text.trim()).map_err(|e| anyhow::anyhow!("{e}"))?;
    let v = analyze(&w, &run.options(knot)?)?;
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?,
        Format::Text => print_text(&v, &mut out)?,
    }
    Ok(exit_code(v.outcome))
}

fn run_entry(line: usize, text: &str, options: &AnalyzeOptions) -> BatchLine {
    let mut out = BatchLine {
        line,
        name: None,
        expected: None,
        outcome: None,
        matches: None,
        verdict: None,
        error: None,
    };
    let entry: CorpusEntry = match serde_json::from_str(text) {
        Ok(e) => e,
        Err(e) => {
            out.error = Some(format!("bad corpus line: {e}"));
            return out;
        }
    };
    out.name = Some(entry.name);
    out.expected = entry.expected;
    let opts = AnalyzeOptions {
        knot: entry.knot,
        ..*options
    };
    let result = parse_word(&entry.relator)
        .map_err(|e| e.to_string())
        .and_then(|w| analyze(&w, &opts).map_err(|e| e.to_string()));
    match result {
        Ok(v) => {
            out.outcome = Some(v.outcome);
            out.matches = entry.expected.map(|e| e == v.outcome);
            out.verdict = Some(v);
        }
        Err(e) => {
            out.matches = entry.expected.map(|_| false);
            out.error = Some(e);
        }
    }
    out
}

fn cmd_batch(path: Option<PathBuf>, corpus: bool, run: RunArgs) -> Result<u8> {
    let text = if corpus {
        BUNDLED.to_string()
    } else {
        read_source(path.as_ref().expect("clap requires a path"))?
    };
    let options = run.options(false)?;
    let lines: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.to_string()))
        .collect();
    let mut results: Vec<BatchLine> = lines
        .par_iter()
        .map(|(i, l)| run_entry(*i, l, &options))
        .collect();

    let mut seen = HashSet::new();
    for r in &mut results {
        if let Some(n) = &r.name {
            if !seen.insert(n.clone()) && r.error.is_none() {
                r.error = Some(format!("duplicate entry name {n:?}"));
                r.matches = r.expected.map(|_| false);
            }
        }
    }

    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let mut failures = 0;
    for r in &results {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
        let status = match (r.matches, &r.error) {
            (Some(true), _) => "ok",
            (Some(false), _) => "MISMATCH",
            (None, Some(_)) => "error",
            (None, None) => "-",
        };
        if r.matches == Some(false) || (r.name.is_none() && r.error.is_some()) {
            failures += 1;
        }
        let show = |o: Option<Outcome>| o.map_or("-".to_string(), |o| o.to_string());
        writeln!(
            err,
            "{:>4}  {:<32} {:<15} {:<15} {}",
            r.line,
            r.name.as_deref().unwrap_or("?"),
            show(r.expected),
            show(r.outcome),
            status
        )?;
    }
    writeln!(err, "{} entries, {} failing", results.len(), failures)?;
    Ok(if failures == 0 { 0 } else { 1 })
}

fn cmd_poly(text: &str, positive: bool, all_pos: bool) -> Result<u8> {
    let p = parse_poly(text).map_err(|e| anyhow::anyhow!("{e}"))?;
    let both = !positive && !all_pos;
    println!("polynomial: {p}");
    if positive || both {
        println!("has_positive_real_root: {}", has_positive_real_root(&p)?);
    }
    if all_pos || both {
        println!("all_roots_real_positive: {}", all_roots_real_positive(&p)?);
    }
    Ok(0)
}

fn cmd_snf(weights: &[BigInt], j: usize) -> Result<u8> {
    let r = build_rj(weights, j)?;
    let (_, diag) = smith_normal_form(&r);
    let g = minors_gcd(&r, j + 1)?;
    let ones = rj_all_ones(weights, j)?;
    println!("R_{j} =\n{r}");
    println!(
        "{}",
        json!({
            "smith_diagonal": diag.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "minors_gcd": g.to_string(),
            "all_ones": ones,
        })
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Analyze {
            relator,
            file,
            format,
            knot,
            run,
        } => cmd_analyze(relator, file, format, knot, run),
        Cmd::Batch { path, corpus, run } => cmd_batch(path, corpus, run),
        Cmd::Poly {
            poly,
            positive_roots,
            all_real_positive,
        } => cmd_poly(&poly, positive_roots, all_real_positive),
        Cmd::Snf { weights, j } => cmd_snf(&weights, j),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

