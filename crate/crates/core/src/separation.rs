//! Covering pairs and separators `E = B ∪ (A ∩ C)` built from dissections
//! of the margin `A − B`.

use serde::{Deserialize, Serialize};

use crate::automata::Dfa;
use crate::dissector::{dissect_auto, DissectConfig, DissectionCertificate};
use crate::error::{AutomatonError, SeparationError};
use crate::grammar::Enumeration;
use crate::language::{HandleDescription, LanguageHandle};

/// `A` claimed to cover `B` with an infinite margin.
#[derive(Debug, Clone)]
pub struct CoveringPair {
    cover: LanguageHandle,
    inner: LanguageHandle,
}

impl CoveringPair {
    pub fn new(cover: LanguageHandle, inner: LanguageHandle) -> Result<Self, AutomatonError> {
        if cover.alphabet() != inner.alphabet() {
            return Err(AutomatonError::AlphabetMismatch {
                left: cover.alphabet().symbols().to_vec(),
                right: inner.alphabet().symbols().to_vec(),
            });
        }
        Ok(Self { cover, inner })
    }

    pub fn cover(&self) -> &LanguageHandle {
        &self.cover
    }

    pub fn inner(&self) -> &LanguageHandle {
        &self.inner
    }

    /// `D = A − B`.
    pub fn margin(&self) -> LanguageHandle {
        let name = format!("{} − {}", self.cover.name(), self.inner.name());
        self.cover.difference(&self.inner).expect("alphabets checked").with_name(name)
    }
}

/// A failed inclusion, with the shortest offending string found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionViolation {
    pub relation: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginCount {
    pub margin: String,
    pub count: usize,
    /// Members with length in `(N − window, N]`.
    pub recent: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationCheck {
    pub holds: bool,
    pub max_len: usize,
    pub threshold: usize,
    pub window: usize,
    pub violations: Vec<InclusionViolation>,
    pub margins: Vec<MarginCount>,
    pub truncated: bool,
}

impl SeparationCheck {
    fn new(cfg: &DissectConfig) -> Self {
        Self {
            holds: true,
            max_len: cfg.max_len,
            threshold: cfg.threshold,
            window: cfg.window,
            violations: Vec::new(),
            margins: Vec::new(),
            truncated: false,
        }
    }

    fn subset(&mut self, relation: &str, left: &Enumeration, right: &LanguageHandle) {
        self.truncated |= left.truncated;
        if let Some(w) = left.iter().find(|w| !right.member(w)) {
            self.holds = false;
            self.violations.push(InclusionViolation {
                relation: relation.into(),
                witness: w.clone(),
            });
        }
    }

    fn margin(&mut self, name: &str, outer: &Enumeration, inner: &LanguageHandle, cfg: &DissectConfig) {
        self.truncated |= outer.truncated;
        let start = cfg.max_len.saturating_sub(cfg.window) + usize::from(cfg.window <= cfg.max_len);
        let mut count = 0;
        let mut recent = 0;
        for (n, words) in outer.by_length.iter().enumerate() {
            let k = words.iter().filter(|w| !inner.member(w)).count();
            count += k;
            if n >= start {
                recent += k;
            }
        }
        let holds = !outer.truncated && count >= cfg.threshold && recent > 0;
        self.holds &= holds;
        self.margins.push(MarginCount {
            margin: name.into(),
            count,
            recent,
            holds,
        });
    }
}

/// Whether `B ⊆ A` on all members up to `N` and `A − B` reaches the threshold
/// with growth in the final window.
pub fn check_icover(pair: &CoveringPair, cfg: &DissectConfig) -> SeparationCheck {
    let mut check = SeparationCheck::new(cfg);
    let b = pair.inner.enumerate(cfg.max_len);
    check.subset("B ⊆ A", &b, &pair.cover);
    let a = pair.cover.enumerate(cfg.max_len);
    check.margin("A − B", &a, &pair.inner, cfg);
    check
}

/// `E = B ∪ (A ∩ C)` as a lazy composite.
pub fn build_separator(pair: &CoveringPair, c: &Dfa) -> Result<LanguageHandle, AutomatonError> {
    let restricted = pair.cover.intersect_dfa(c)?;
    let name = format!("{} ∪ ({} ∩ C)", pair.inner.name(), pair.cover.name());
    Ok(pair.inner.union(&restricted)?.with_name(name))
}

/// Checks `B ⊆ E ⊆ A` exactly on members up to `N`, and that both `A − E`
/// and `E − B` reach the threshold with growth.
pub fn verify_iseparation(
    pair: &CoveringPair,
    e: &LanguageHandle,
    cfg: &DissectConfig,
) -> Result<SeparationCheck, AutomatonError> {
    if e.alphabet() != pair.cover.alphabet() {
        return Err(AutomatonError::AlphabetMismatch {
            left: pair.cover.alphabet().symbols().to_vec(),
            right: e.alphabet().symbols().to_vec(),
        });
    }
    let mut check = SeparationCheck::new(cfg);
    let b = pair.inner.enumerate(cfg.max_len);
    let sep = e.enumerate(cfg.max_len);
    let a = pair.cover.enumerate(cfg.max_len);
    check.subset("B ⊆ E", &b, e);
    check.subset("E ⊆ A", &sep, &pair.cover);
    check.margin("A − E", &a, e, cfg);
    check.margin("E − B", &sep, &pair.inner, cfg);
    Ok(check)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub cover: HandleDescription,
    pub inner: HandleDescription,
    pub witness: Dfa,
    pub separator: HandleDescription,
    pub cover_check: SeparationCheck,
    pub dissection: DissectionCertificate,
    pub separation: SeparationCheck,
}

pub struct Separation {
    pub separator: LanguageHandle,
    pub report: SeparationReport,
}

/// Dissects the margin `A − B` and builds the separator from the witness.
pub fn iseparate(pair: &CoveringPair, cfg: &DissectConfig) -> Result<Separation, SeparationError> {
    let cover_check = check_icover(pair, cfg);
    if !cover_check.holds {
        let reason = match cover_check.violations.first() {
            Some(v) => format!("{} fails at {:?}", v.relation, v.witness),
            None => {
                let m = &cover_check.margins[0];
                format!("margin A − B has {} members up to {}, {} in the final window", m.count, cfg.max_len, m.recent)
            }
        };
        return Err(SeparationError::CoverCheckFailed(reason));
    }
    let dissection = dissect_auto(&pair.margin(), cfg);
    let witness = match &dissection.witness {
        Some(w) if dissection.is_verified() => w.clone(),
        _ => return Err(SeparationError::StrategyFailed(Box::new(dissection))),
    };
    let separator = build_separator(pair, &witness)?;
    let separation = verify_iseparation(pair, &separator, cfg)?;
    Ok(Separation {
        report: SeparationReport {
            cover: pair.cover.describe(),
            inner: pair.inner.describe(),
            witness,
            separator: separator.describe(),
            cover_check,
            dissection,
            separation,
        },
        separator,
    })
}
