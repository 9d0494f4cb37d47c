//! `regdissect`: certificate-emitting front end.
//!
//! Exit codes: 0 success, 1 input error, 2 failure certificate.

mod report;
mod spec;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dissect_core::corpus::CORPUS;
use dissect_core::dissector::{dissect_auto, factorial_dissection_decision, verify_dissection};
use dissect_core::error::SeparationError;
use dissect_core::grammar::DEFAULT_ENUMERATION_CAP;
use dissect_core::hierarchy::{level_bound, normalize, ClassExpr};
use dissect_core::language::{Builtin, LanguageHandle};
use dissect_core::separation::{iseparate, CoveringPair};
use serde::Serialize;

use report::{DissectDocument, FactorialDocument, HierarchyDocument, RunConfig, SeparateDocument};

#[derive(Parser)]
#[command(name = "regdissect", version, about = "Synthesize and verify regular dissectors for infinite languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Length bound N for enumeration.
    #[arg(long, global = true, default_value_t = 400)]
    max_len: usize,

    /// Threshold θ each side must reach.
    #[arg(long, global = true, default_value_t = 20)]
    threshold: usize,

    /// Growth window as a fraction of N.
    #[arg(long, global = true, default_value_t = 0.25)]
    window_fraction: f64,

    /// Largest modulus tried by the symbol-count strategy.
    #[arg(long, global = true, default_value_t = 8)]
    moduli: usize,

    /// Enumeration cap on the number of members.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Args)]
struct LanguageArgs {
    /// Grammar file.
    #[arg(long, conflicts_with_all = ["builtin", "expr"])]
    grammar: Option<PathBuf>,
    /// Builtin language name.
    #[arg(long, conflicts_with = "expr")]
    builtin: Option<String>,
    /// Composite spec, e.g. `diff(corpus:l1, grammar:b.cfg)`.
    #[arg(long)]
    expr: Option<String>,
}

impl LanguageArgs {
    fn spec(&self) -> Option<String> {
        if let Some(p) = &self.grammar {
            return Some(format!("grammar:{}", p.display()));
        }
        if let Some(b) = &self.builtin {
            return Some(format!("builtin:{b}"));
        }
        self.expr.clone()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search for a dissecting DFA and emit a certificate.
    Dissect {
        #[command(flatten)]
        language: LanguageArgs,
    },
    /// Check a given DFA, or re-check a certificate file.
    Verify {
        #[command(flatten)]
        language: LanguageArgs,
        #[arg(long, conflicts_with = "certificate")]
        dfa: Option<PathBuf>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Build an i-separator for a covering pair.
    Separate {
        #[arg(long)]
        cover: String,
        #[arg(long)]
        inner: String,
    },
    /// Level bound for a class expression.
    Hierarchy { expression: String },
    /// Exact decision for a unary C given by triples (a, b, k), one per line.
    Factorial { triples: PathBuf },
    /// Bundled grammars and builtins.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
}

struct Output {
    format: Format,
    out: Option<PathBuf>,
}

impl Output {
    fn emit<T: Serialize>(&self, doc: &T, human: String, summary: &str) -> Result<()> {
        let text = match self.format {
            Format::Human => human,
            Format::Structured => serde_json::to_string_pretty(doc)? + "\n",
        };
        match &self.out {
            Some(path) => {
                report::write_atomic(path, &text)?;
                println!("{summary}");
            }
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let config = RunConfig {
        max_len: cli.max_len,
        threshold: cli.threshold,
        window_fraction: cli.window_fraction,
        symbol_moduli: cli.moduli,
        cap: cli.cap,
    };
    let output = Output {
        format: cli.format,
        out: cli.out,
    };
    match cli.command {
        Command::Dissect { language } => {
            config.validate()?;
            let spec = language.spec().ok_or_else(|| anyhow!("one of --grammar, --builtin, --expr is required"))?;
            let handle = spec::parse(&spec)?.with_cap(config.cap);
            let certificate = dissect_auto(&handle, &config.dissect_config());
            finish_dissect(&output, "dissect", spec, config, &handle, certificate)
        }
        Command::Verify {
            language,
            dfa,
            certificate,
        } => {
            if let Some(path) = certificate {
                return reverify(&output, &path, language.spec());
            }
            config.validate()?;
            let spec = language.spec().ok_or_else(|| anyhow!("one of --grammar, --builtin, --expr is required"))?;
            let dfa = dfa.ok_or_else(|| anyhow!("verify needs --dfa or --certificate"))?;
            let handle = spec::parse(&spec)?.with_cap(config.cap);
            let witness = spec::load_dfa(&dfa)?;
            let mut certificate = verify_dissection(&handle, &witness, &config.dissect_config())?;
            certificate.strategy = format!("given ({})", dfa.display());
            finish_dissect(&output, "verify", spec, config, &handle, certificate)
        }
        Command::Separate { cover, inner } => {
            config.validate()?;
            separate(&output, config, cover, inner)
        }
        Command::Hierarchy { expression } => hierarchy(&output, expression),
        Command::Factorial { triples } => factorial(&output, &triples),
        Command::Corpus { action: CorpusAction::List } => {
            for e in CORPUS {
                println!("{:<34} {}", format!("corpus:{}", e.name), e.description);
            }
            for b in Builtin::ALL {
                println!("{:<34} {}", format!("builtin:{}", b.name()), b.description());
            }
            Ok(0)
        }
    }
}

fn finish_dissect(
    output: &Output,
    command: &str,
    spec: String,
    config: RunConfig,
    handle: &LanguageHandle,
    certificate: dissect_core::DissectionCertificate,
) -> Result<u8> {
    let code = if certificate.is_verified() { 0 } else { 2 };
    let human = report::certificate(&certificate);
    let (c_in, c_out) = certificate.final_counts();
    let summary = format!(
        "{}: {} via {} (c_in {c_in}, c_out {c_out})",
        handle.name(),
        if code == 0 { "verified-at-N" } else { "failed" },
        certificate.strategy
    );
    let doc = DissectDocument {
        command: command.into(),
        spec,
        config,
        language: handle.describe(),
        certificate,
    };
    output.emit(&doc, human, &summary)?;
    Ok(code)
}

/// Re-runs the counts behind a stored certificate and compares them.
fn reverify(output: &Output, path: &PathBuf, spec_override: Option<String>) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let doc: DissectDocument = serde_json::from_str(&text).with_context(|| format!("malformed certificate {}", path.display()))?;
    let spec = spec_override.unwrap_or_else(|| doc.spec.clone());
    let handle = spec::parse(&spec)?.with_cap(doc.config.cap);
    let cfg = doc.config.dissect_config();
    let fresh = match &doc.certificate.witness {
        Some(w) => {
            let mut c = verify_dissection(&handle, w, &cfg)?;
            c.strategy = doc.certificate.strategy.clone();
            c.notes = doc.certificate.notes.clone();
            c.attempts = doc.certificate.attempts.clone();
            c
        }
        None => dissect_auto(&handle, &cfg),
    };
    let same = fresh.checkpoints == doc.certificate.checkpoints
        && fresh.verdict == doc.certificate.verdict
        && fresh.witness == doc.certificate.witness;
    if !same {
        eprintln!("certificate {} does not reproduce", path.display());
    }
    let code = if same && fresh.is_verified() { 0 } else { 2 };
    let doc = DissectDocument {
        command: "verify".into(),
        spec,
        config: doc.config,
        language: handle.describe(),
        certificate: fresh,
    };
    let human = format!("reproduced: {same}\n{}", report::certificate(&doc.certificate));
    output.emit(&doc, human, &format!("reproduced: {same}"))?;
    Ok(code)
}

fn separate(output: &Output, config: RunConfig, cover: String, inner: String) -> Result<u8> {
    let a = spec::parse(&cover)?.with_cap(config.cap);
    let b = spec::parse(&inner)?.with_cap(config.cap);
    let pair = CoveringPair::new(a, b)?;
    let mut doc = SeparateDocument {
        command: "separate".into(),
        cover,
        inner,
        config,
        holds: false,
        failure: None,
        report: None,
        margin_certificate: None,
    };
    match iseparate(&pair, &config.dissect_config()) {
        Ok(sep) => {
            doc.holds = sep.report.separation.holds;
            doc.report = Some(sep.report);
        }
        Err(SeparationError::StrategyFailed(cert)) => {
            doc.failure = Some("the margin A − B could not be dissected".into());
            doc.margin_certificate = Some(*cert);
        }
        Err(e @ SeparationError::CoverCheckFailed(_)) => doc.failure = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }
    let summary = match &doc.failure {
        Some(f) => format!("separation failed: {f}"),
        None => format!("separation {}", if doc.holds { "holds" } else { "fails" }),
    };
    output.emit(&doc, report::separation(&doc), &summary)?;
    Ok(if doc.holds { 0 } else { 2 })
}

fn hierarchy(output: &Output, expression: String) -> Result<u8> {
    let e = ClassExpr::parse(&expression)?;
    let mut doc = HierarchyDocument {
        command: "hierarchy".into(),
        expression: e.to_string(),
        bound: None,
        normal_form: None,
        failure: None,
    };
    match level_bound(&e) {
        Ok(b) => {
            doc.normal_form = normalize(&e).ok().map(|n| n.to_string());
            doc.bound = Some(b);
        }
        Err(err) => doc.failure = Some(err.to_string()),
    }
    let summary = match &doc.bound {
        Some(b) => b.level.to_string(),
        None => "no bound".into(),
    };
    let code = if doc.bound.is_some() { 0 } else { 2 };
    output.emit(&doc, report::hierarchy(&doc), &summary)?;
    Ok(code)
}

fn parse_triples(text: &str) -> Result<Vec<(u64, u64, u64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<u64> = line
            .split(|c: char| c == ',' || c.is_whitespace() || "()[]".contains(c))
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u64>().with_context(|| format!("line {}: bad number {s:?}", i + 1)))
            .collect::<Result<_>>()?;
        match nums.as_slice() {
            &[a, b, k] => out.push((a, b, k)),
            _ => bail!("line {}: expected three numbers a, b, k", i + 1),
        }
    }
    Ok(out)
}

fn factorial(output: &Output, path: &PathBuf) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let triples = parse_triples(&text)?;
    let outcome = factorial_dissection_decision(&triples)?;
    let summary = outcome.summary();
    let doc = FactorialDocument {
        command: "factorial".into(),
        triples,
        outcome,
        summary: summary.clone(),
    };
    output.emit(&doc, report::factorial(&doc), &summary)?;
    Ok(0)
}
