use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use dissect_core::dissector::{DissectConfig, DissectionCertificate, FactorialOutcome};
use dissect_core::hierarchy::LevelBound;
use dissect_core::language::HandleDescription;
use dissect_core::separation::{SeparationCheck, SeparationReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub max_len: usize,
    pub threshold: usize,
    pub window_fraction: f64,
    pub symbol_moduli: usize,
    pub cap: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_len < 4 * self.threshold {
            anyhow::bail!("--max-len {} must be at least 4 × --threshold {}", self.max_len, self.threshold);
        }
        if !(self.window_fraction > 0.0 && self.window_fraction <= 0.5) {
            anyhow::bail!("--window-fraction must lie in (0, 1/2], got {}", self.window_fraction);
        }
        Ok(())
    }

    pub fn dissect_config(&self) -> DissectConfig {
        let mut cfg = DissectConfig::new(self.max_len, self.threshold).with_window_fraction(self.window_fraction);
        cfg.symbol_moduli = self.symbol_moduli;
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissectDocument {
    pub command: String,
    pub spec: String,
    pub config: RunConfig,
    pub language: HandleDescription,
    pub certificate: DissectionCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparateDocument {
    pub command: String,
    pub cover: String,
    pub inner: String,
    pub config: RunConfig,
    pub holds: bool,
    pub failure: Option<String>,
    pub report: Option<SeparationReport>,
    /// The failed margin dissection, when that is why no separator was built.
    pub margin_certificate: Option<DissectionCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyDocument {
    pub command: String,
    pub expression: String,
    pub bound: Option<LevelBound>,
    pub normal_form: Option<String>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorialDocument {
    pub command: String,
    pub triples: Vec<(u64, u64, u64)>,
    pub outcome: FactorialOutcome,
    pub summary: String,
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn certificate(cert: &DissectionCertificate) -> String {
    let mut s = String::new();
    let verdict = if cert.is_verified() { "verified-at-N" } else { "failed" };
    let _ = writeln!(s, "language: {}", cert.language);
    let _ = writeln!(s, "strategy: {}", cert.strategy);
    let _ = writeln!(
        s,
        "verdict: {verdict} (N = {}, threshold = {}, window = {})",
        cert.max_len, cert.threshold, cert.window
    );
    if let Some(w) = &cert.witness {
        let _ = writeln!(s, "witness: DFA with {} states over {}", w.num_states(), w.alphabet());
    }
    let _ = writeln!(s, "{:>8} {:>10} {:>10}", "n", "c_in", "c_out");
    for c in &cert.checkpoints {
        let _ = writeln!(s, "{:>8} {:>10} {:>10}", c.length, c.c_in, c.c_out);
    }
    for n in &cert.notes {
        let _ = writeln!(s, "note: {n}");
    }
    if !cert.is_verified() && !cert.attempts.is_empty() {
        let _ = writeln!(s, "attempts: {}", cert.attempts.len());
        for a in cert.attempts.iter().take(12) {
            let reason = a.reason.as_deref().map(|r| format!(" ({r})")).unwrap_or_default();
            let _ = writeln!(s, "  {}: c_in {} c_out {}{reason}", a.strategy, a.c_in, a.c_out);
        }
        if cert.attempts.len() > 12 {
            let _ = writeln!(s, "  ... {} more", cert.attempts.len() - 12);
        }
    }
    s
}

fn check(name: &str, c: &SeparationCheck) -> String {
    let mut s = format!("{name}: {}\n", if c.holds { "holds" } else { "fails" });
    for v in &c.violations {
        let _ = writeln!(s, "  {} fails at {:?}", v.relation, v.witness);
    }
    for m in &c.margins {
        let _ = writeln!(s, "  |{}| = {} ({} in the final window)", m.margin, m.count, m.recent);
    }
    s
}

pub fn separation(doc: &SeparateDocument) -> String {
    let mut s = format!("cover: {}\ninner: {}\n", doc.cover, doc.inner);
    if let Some(f) = &doc.failure {
        let _ = writeln!(s, "failed: {f}");
    }
    if let Some(r) = &doc.report {
        s += &check("i-cover", &r.cover_check);
        s += "margin dissection:\n";
        for line in certificate(&r.dissection).lines() {
            let _ = writeln!(s, "  {line}");
        }
        let _ = writeln!(s, "separator: {}", serde_json::to_string(&r.separator).unwrap_or_default());
        s += &check("i-separation", &r.separation);
    }
    if let Some(c) = &doc.margin_certificate {
        s += "margin dissection:\n";
        for line in certificate(c).lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    s
}

pub fn hierarchy(doc: &HierarchyDocument) -> String {
    let mut s = format!("expression: {}\n", doc.expression);
    match &doc.bound {
        Some(b) => {
            let _ = writeln!(s, "level bound: {}", b.level);
            if let Some(n) = &doc.normal_form {
                let _ = writeln!(s, "normal form: {n}");
            }
            if b.grounded {
                s += "note: uses the degenerate grounding F_{0,·} = level 0\n";
            }
            for step in &b.derivation {
                let _ = writeln!(s, "  {step}");
            }
        }
        None => {
            let _ = writeln!(s, "no bound: {}", doc.failure.as_deref().unwrap_or("not derived"));
        }
    }
    s
}

pub fn factorial(doc: &FactorialDocument) -> String {
    let mut s = format!("{}\n", doc.summary);
    let _ = writeln!(s, "every m! with m ≥ {} lies on the cofinite side", doc.outcome.stable_from);
    if !doc.outcome.finite_side_lengths.is_empty() {
        let list: Vec<String> = doc.outcome.finite_side_lengths.iter().map(u128::to_string).collect();
        let _ = writeln!(s, "finite side lengths: {}", list.join(", "));
    }
    s
}
