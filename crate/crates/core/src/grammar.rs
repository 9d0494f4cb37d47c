//! Context-free grammars: parsing, CYK membership, enumeration by length,
//! exact length spectra and empirical inference of ultimately periodic
//! length sets.
//!
//! The file format is one rule per line, `Name -> body | body`, with
//! whitespace-separated tokens. Tokens starting with an uppercase ASCII
//! letter are nonterminals, `ε` is the empty body, any other token is a
//! single-character terminal (quote it, `'A'`, to use an uppercase letter).
//! `#` starts a comment and a line starting with `|` continues the
//! previous rule.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::GrammarError;
use crate::upsets::{truncated_minkowski, UltimatelyPeriodicSet};

/// Default cap on the number of strings produced by an enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Terminal(char),
    Nonterminal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextFreeGrammar {
    nonterminals: Vec<String>,
    terminals: Alphabet,
    /// Bodies per nonterminal, indexed like `nonterminals`.
    productions: Vec<Vec<Vec<Symbol>>>,
    start: usize,
    removed: Vec<String>,
}

impl ContextFreeGrammar {
    pub fn parse(text: &str) -> Result<Self, GrammarError> {
        let mut order: Vec<String> = Vec::new();
        let mut rules: BTreeMap<String, Vec<(usize, Vec<String>)>> = BTreeMap::new();
        let mut current: Option<String> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = if let Some(rest) = line.strip_prefix('|') {
                let lhs = current.clone().ok_or_else(|| GrammarError::Syntax {
                    line: line_no,
                    message: "continuation line without a preceding rule".into(),
                })?;
                (lhs, rest)
            } else {
                let (lhs, rhs) = line.split_once("->").ok_or_else(|| GrammarError::Syntax {
                    line: line_no,
                    message: "expected `Nonterminal -> body`".into(),
                })?;
                let lhs = lhs.trim();
                if !is_nonterminal_token(lhs) {
                    return Err(GrammarError::Syntax {
                        line: line_no,
                        message: format!("left-hand side {lhs:?} is not a nonterminal"),
                    });
                }
                (lhs.to_string(), rhs)
            };
            if !rules.contains_key(&lhs) {
                order.push(lhs.clone());
            }
            let entry = rules.entry(lhs.clone()).or_default();
            for body in rhs.split('|') {
                let tokens: Vec<String> = body.split_whitespace().map(str::to_string).collect();
                if tokens.is_empty() {
                    return Err(GrammarError::Syntax {
                        line: line_no,
                        message: "empty alternative (write ε for the empty body)".into(),
                    });
                }
                entry.push((line_no, tokens));
            }
            current = Some(lhs);
        }
        if order.is_empty() {
            return Err(GrammarError::Syntax {
                line: 0,
                message: "no rules".into(),
            });
        }

        let index: HashMap<&str, usize> = order.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut productions = vec![Vec::new(); order.len()];
        let mut terminals = BTreeSet::new();
        for (name, bodies) in &rules {
            let lhs = index[name.as_str()];
            for (line, tokens) in bodies {
                let mut body = Vec::new();
                if tokens.len() == 1 && is_epsilon(&tokens[0]) {
                    productions[lhs].push(body);
                    continue;
                }
                for tok in tokens {
                    if is_epsilon(tok) {
                        return Err(GrammarError::Syntax {
                            line: *line,
                            message: "ε must stand alone in an alternative".into(),
                        });
                    }
                    if is_nonterminal_token(tok) {
                        let id = *index.get(tok.as_str()).ok_or_else(|| GrammarError::UndefinedSymbol {
                            line: *line,
                            symbol: tok.clone(),
                        })?;
                        body.push(Symbol::Nonterminal(id));
                    } else {
                        let c = terminal_char(tok).ok_or_else(|| GrammarError::Syntax {
                            line: *line,
                            message: format!("terminal {tok:?} must be a single character"),
                        })?;
                        terminals.insert(c);
                        body.push(Symbol::Terminal(c));
                    }
                }
                productions[lhs].push(body);
            }
        }
        let mut g = Self {
            nonterminals: order,
            terminals: Alphabet::new(terminals),
            productions,
            start: 0,
            removed: Vec::new(),
        };
        g.reduce()?;
        Ok(g)
    }

    /// Drops non-productive, then unreachable, nonterminals.
    fn reduce(&mut self) -> Result<(), GrammarError> {
        let n = self.nonterminals.len();
        let mut productive = vec![false; n];
        loop {
            let mut changed = false;
            for a in 0..n {
                if !productive[a]
                    && self.productions[a].iter().any(|body| {
                        body.iter().all(|s| match s {
                            Symbol::Terminal(_) => true,
                            Symbol::Nonterminal(b) => productive[*b],
                        })
                    })
                {
                    productive[a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !productive[self.start] {
            return Err(GrammarError::EmptyLanguage(self.nonterminals[self.start].clone()));
        }
        let uses_only_productive = |body: &Vec<Symbol>| {
            body.iter().all(|s| match s {
                Symbol::Terminal(_) => true,
                Symbol::Nonterminal(b) => productive[*b],
            })
        };
        let mut reachable = vec![false; n];
        reachable[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(a) = stack.pop() {
            for body in self.productions[a].iter().filter(|b| uses_only_productive(b)) {
                for s in body {
                    if let Symbol::Nonterminal(b) = s {
                        if !reachable[*b] {
                            reachable[*b] = true;
                            stack.push(*b);
                        }
                    }
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&a| productive[a] && reachable[a]).collect();
        let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        self.removed = (0..n)
            .filter(|a| !remap.contains_key(a))
            .map(|a| self.nonterminals[a].clone())
            .collect();
        let mut terminals = BTreeSet::new();
        let productions: Vec<Vec<Vec<Symbol>>> = keep
            .iter()
            .map(|&a| {
                self.productions[a]
                    .iter()
                    .filter(|b| uses_only_productive(b))
                    .map(|body| {
                        body.iter()
                            .map(|s| match *s {
                                Symbol::Terminal(c) => {
                                    terminals.insert(c);
                                    Symbol::Terminal(c)
                                }
                                Symbol::Nonterminal(b) => Symbol::Nonterminal(remap[&b]),
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        self.nonterminals = keep.iter().map(|&a| self.nonterminals[a].clone()).collect();
        self.productions = productions;
        self.start = remap[&self.start];
        self.terminals = Alphabet::new(terminals);
        Ok(())
    }

    pub fn terminals(&self) -> &Alphabet {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn start_symbol(&self) -> &str {
        &self.nonterminals[self.start]
    }

    /// Nonterminals dropped as non-productive or unreachable while parsing.
    pub fn removed(&self) -> &[String] {
        &self.removed
    }

    pub fn num_productions(&self) -> usize {
        self.productions.iter().map(Vec::len).sum()
    }

    /// CYK membership.
    pub fn member(&self, w: &str) -> Result<bool, GrammarError> {
        if let Some(c) = w.chars().find(|&c| !self.terminals.contains(c)) {
            return Err(GrammarError::UnknownSymbol(c));
        }
        Ok(self.to_cnf().recognizes(&w.chars().collect::<Vec<_>>()))
    }

    /// `result[n]` iff some member has length `n`, for `n ≤ max`.
    pub fn length_spectrum(&self, max: usize) -> Vec<bool> {
        let n = self.nonterminals.len();
        let mut sets = vec![vec![false; max + 1]; n];
        let unit = {
            let mut v = vec![false; max + 1];
            if max >= 1 {
                v[1] = true;
            }
            v
        };
        let mut empty_word = vec![false; max + 1];
        empty_word[0] = true;
        loop {
            let mut changed = false;
            for a in 0..n {
                for body in &self.productions[a] {
                    let mut acc = empty_word.clone();
                    for s in body {
                        let part = match s {
                            Symbol::Terminal(_) => &unit,
                            Symbol::Nonterminal(b) => &sets[*b],
                        };
                        acc = truncated_minkowski(&acc, part, max);
                    }
                    for (i, bit) in acc.into_iter().enumerate() {
                        if bit && !sets[a][i] {
                            sets[a][i] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        sets.swap_remove(self.start)
    }

    /// All members of length at most `max`, shortest first.
    pub fn enumerate(&self, max: usize, cap: usize) -> Enumeration {
        self.to_cnf().enumerate(max, cap)
    }

    pub fn to_cnf(&self) -> CnfGrammar {
        CnfGrammar::from_grammar(self)
    }
}

impl fmt::Display for ContextFreeGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, bodies) in self.productions.iter().enumerate() {
            let alts: Vec<String> = bodies
                .iter()
                .map(|body| {
                    if body.is_empty() {
                        return "ε".to_string();
                    }
                    body.iter()
                        .map(|s| match s {
                            Symbol::Terminal(c) if c.is_ascii_uppercase() => format!("'{c}'"),
                            Symbol::Terminal(c) => c.to_string(),
                            Symbol::Nonterminal(b) => self.nonterminals[*b].clone(),
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            writeln!(f, "{} -> {}", self.nonterminals[a], alts.join(" | "))?;
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    // a quoted '#' is a terminal, a bare one starts a comment
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'#' && !(i > 0 && bytes[i - 1] == b'\'' && bytes.get(i + 1) == Some(&b'\'')) {
            return &line[..i];
        }
        i += 1;
    }
    line
}

fn is_epsilon(tok: &str) -> bool {
    tok == "ε"
}

fn is_nonterminal_token(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn terminal_char(tok: &str) -> Option<char> {
    let chars: Vec<char> = tok.chars().collect();
    match chars.as_slice() {
        [c] => Some(*c),
        ['\'', c, '\''] => Some(*c),
        _ => None,
    }
}

/// Chomsky normal form used internally for CYK and enumeration.
#[derive(Debug, Clone)]
pub struct CnfGrammar {
    num_nonterminals: usize,
    start: usize,
    nullable_start: bool,
    terminal_rules: Vec<(usize, char)>,
    binary_rules: Vec<(usize, usize, usize)>,
}

impl CnfGrammar {
    fn from_grammar(g: &ContextFreeGrammar) -> Self {
        let n = g.nonterminals.len();
        let mut nullable = vec![false; n];
        loop {
            let mut changed = false;
            for a in 0..n {
                if !nullable[a]
                    && g.productions[a].iter().any(|body| {
                        body.iter()
                            .all(|s| matches!(s, Symbol::Nonterminal(b) if nullable[*b]))
                    })
                {
                    nullable[a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        // ε-free bodies: every way of dropping nullable occurrences
        let mut bodies: Vec<BTreeSet<Vec<Symbol>>> = vec![BTreeSet::new(); n];
        for a in 0..n {
            for body in &g.productions[a] {
                let mut variants: Vec<Vec<Symbol>> = vec![Vec::new()];
                for s in body {
                    let mut next = Vec::with_capacity(variants.len() * 2);
                    for v in &variants {
                        let mut with = v.clone();
                        with.push(*s);
                        next.push(with);
                        if matches!(s, Symbol::Nonterminal(b) if nullable[*b]) {
                            next.push(v.clone());
                        }
                    }
                    variants = next;
                }
                bodies[a].extend(variants.into_iter().filter(|v| !v.is_empty()));
            }
        }

        // unit closure: units[a] = nonterminals b with a ⇒* b by unit rules
        let mut units: Vec<BTreeSet<usize>> = (0..n).map(|a| [a].into_iter().collect()).collect();
        loop {
            let mut changed = false;
            for a in 0..n {
                let reach: Vec<usize> = units[a].iter().copied().collect();
                for b in reach {
                    for body in &bodies[b] {
                        if let [Symbol::Nonterminal(c)] = body.as_slice() {
                            changed |= units[a].insert(*c);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let mut next_id = n;
        let mut terminal_rules = BTreeSet::new();
        let mut binary_rules = BTreeSet::new();
        let mut term_nt: BTreeMap<char, usize> = BTreeMap::new();
        let mut pair_nt: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for a in 0..n {
            let bodies_a: BTreeSet<&Vec<Symbol>> = units[a]
                .iter()
                .flat_map(|&b| bodies[b].iter())
                .filter(|body| !matches!(body.as_slice(), [Symbol::Nonterminal(_)]))
                .collect();
            for body in bodies_a {
                if let [Symbol::Terminal(c)] = body.as_slice() {
                    terminal_rules.insert((a, *c));
                    continue;
                }
                let mut ids: Vec<usize> = body
                    .iter()
                    .map(|s| match *s {
                        Symbol::Nonterminal(b) => b,
                        Symbol::Terminal(c) => *term_nt.entry(c).or_insert_with(|| {
                            next_id += 1;
                            next_id - 1
                        }),
                    })
                    .collect();
                // right-fold long bodies into fresh pair nonterminals
                while ids.len() > 2 {
                    let y = ids.pop().expect("len > 2");
                    let x = ids.pop().expect("len > 2");
                    let id = *pair_nt.entry((x, y)).or_insert_with(|| {
                        next_id += 1;
                        next_id - 1
                    });
                    ids.push(id);
                }
                binary_rules.insert((a, ids[0], ids[1]));
            }
        }
        for (&c, &id) in &term_nt {
            terminal_rules.insert((id, c));
        }
        for (&(x, y), &id) in &pair_nt {
            binary_rules.insert((id, x, y));
        }
        Self {
            num_nonterminals: next_id,
            start: g.start,
            nullable_start: nullable[g.start],
            terminal_rules: terminal_rules.into_iter().collect(),
            binary_rules: binary_rules.into_iter().collect(),
        }
    }

    pub fn recognizes(&self, w: &[char]) -> bool {
        let n = w.len();
        if n == 0 {
            return self.nullable_start;
        }
        let nt = self.num_nonterminals;
        let words = nt.div_ceil(64);
        // cell (i, len) covers w[i..i+len]
        let cell = |i: usize, len: usize| (len - 1) * n + i;
        let mut table = vec![0u64; n * n * words];
        let mut nonempty = vec![false; n * n];
        let set = |table: &mut Vec<u64>, c: usize, a: usize| table[c * words + a / 64] |= 1 << (a % 64);
        let has = |table: &Vec<u64>, c: usize, a: usize| table[c * words + a / 64] & (1 << (a % 64)) != 0;
        for (i, &ch) in w.iter().enumerate() {
            for &(a, c) in &self.terminal_rules {
                if c == ch {
                    set(&mut table, cell(i, 1), a);
                    nonempty[cell(i, 1)] = true;
                }
            }
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let target = cell(i, len);
                for k in 1..len {
                    let left = cell(i, k);
                    let right = cell(i + k, len - k);
                    if !nonempty[left] || !nonempty[right] {
                        continue;
                    }
                    for &(a, b, c) in &self.binary_rules {
                        if has(&table, left, b) && has(&table, right, c) {
                            set(&mut table, target, a);
                            nonempty[target] = true;
                        }
                    }
                }
            }
        }
        has(&table, cell(0, n), self.start)
    }

    /// Bottom-up enumeration by length. If a length would push the total
    /// past `cap`, enumeration stops and the result covers the shorter
    /// lengths only.
    pub fn enumerate(&self, max: usize, cap: usize) -> Enumeration {
        let nt = self.num_nonterminals;
        // tables[len][a]: sorted distinct strings of length len derived from a
        let mut tables: Vec<Vec<Vec<String>>> = vec![vec![Vec::new(); nt]];
        let mut by_length = vec![if self.nullable_start { vec![String::new()] } else { Vec::new() }];
        let mut total = by_length[0].len();
        for len in 1..=max {
            let mut layer: Vec<HashSet<String>> = vec![HashSet::new(); nt];
            if len == 1 {
                for &(a, c) in &self.terminal_rules {
                    layer[a].insert(c.to_string());
                }
            }
            let mut overflow = false;
            'rules: for &(a, b, c) in &self.binary_rules {
                for k in 1..len {
                    let lefts = &tables[k][b];
                    let rights = &tables[len - k][c];
                    if lefts.is_empty() || rights.is_empty() {
                        continue;
                    }
                    for l in lefts {
                        for r in rights {
                            let mut s = String::with_capacity(l.len() + r.len());
                            s.push_str(l);
                            s.push_str(r);
                            layer[a].insert(s);
                        }
                    }
                    if layer[a].len() > cap {
                        overflow = true;
                        break 'rules;
                    }
                }
            }
            if overflow || total + layer[self.start].len() > cap {
                return Enumeration {
                    max_len: max,
                    by_length,
                    truncated: true,
                };
            }
            let layer: Vec<Vec<String>> = layer
                .into_iter()
                .map(|set| {
                    let mut v: Vec<String> = set.into_iter().collect();
                    v.sort();
                    v
                })
                .collect();
            total += layer[self.start].len();
            by_length.push(layer[self.start].clone());
            tables.push(layer);
        }
        Enumeration {
            max_len: max,
            by_length,
            truncated: false,
        }
    }
}

/// Members of a language grouped by length.
///
/// `by_length[n]` lists the members of length `n`. When `truncated` is set
/// the listing stops early and covers lengths `0..by_length.len()` only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub max_len: usize,
    pub by_length: Vec<Vec<String>>,
    pub truncated: bool,
}

impl Enumeration {
    /// Largest length for which the listing is complete.
    pub fn complete_len(&self) -> usize {
        self.by_length.len().saturating_sub(1)
    }

    pub fn count(&self) -> usize {
        self.by_length.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.by_length.iter().flatten()
    }

    /// Which lengths `0..=max_len` occur.
    pub fn census(&self) -> Vec<bool> {
        (0..=self.max_len)
            .map(|n| self.by_length.get(n).is_some_and(|v| !v.is_empty()))
            .collect()
    }
}

/// A length set recovered from a finite spectrum, trusted only up to `verified_to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferredUpset {
    pub set: UltimatelyPeriodicSet,
    pub verified_to: usize,
    pub confidence: String,
}

/// Finds the smallest period `q ≤ N/4`, then the smallest threshold `t`
/// with `t + 3q ≤ N`, such that `spectrum` is `q`-periodic on `[t, N]`.
pub fn infer_upset(spectrum: &[bool], max: usize) -> Result<InferredUpset, GrammarError> {
    if max < 4 || spectrum.len() <= max {
        return Err(GrammarError::DegenerateBound(max));
    }
    let s = &spectrum[..=max];
    for q in 1..=max / 4 {
        let t = (0..=max - q)
            .rev()
            .find(|&n| s[n] != s[n + q])
            .map_or(0, |n| n + 1);
        if t + 3 * q <= max {
            let set = UltimatelyPeriodicSet::from_predicate(t, q, |n| s[n]);
            return Ok(InferredUpset {
                set,
                verified_to: max,
                confidence: format!("empirical: verified to {max}"),
            });
        }
    }
    Err(GrammarError::InferenceFailed {
        max_len: max,
        max_period: max / 4,
    })
}

/// Parameters of the constant-growth property: every member of length
/// `≥ p` is a shorter member's length plus some `c ∈ K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantGrowthWitness {
    pub p: usize,
    pub k: BTreeSet<usize>,
}

impl ConstantGrowthWitness {
    pub fn new(p: usize, k: impl IntoIterator<Item = usize>) -> Result<Self, GrammarError> {
        let k: BTreeSet<usize> = k.into_iter().collect();
        if p == 0 || k.is_empty() || k.contains(&0) {
            return Err(GrammarError::Syntax {
                line: 0,
                message: "constant-growth witness needs p > 0 and a nonempty K ⊆ ℕ⁺".into(),
            });
        }
        Ok(Self { p, k })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthVerdict {
    pub holds: bool,
    pub checked_to: usize,
    /// First member length with no predecessor at distance in `K`.
    pub first_violation: Option<usize>,
}

/// Checks constant growth against a length spectrum `0..=max`.
pub fn check_constant_growth(spectrum: &[bool], witness: &ConstantGrowthWitness, max: usize) -> GrowthVerdict {
    let first_violation = (witness.p..=max.min(spectrum.len().saturating_sub(1)))
        .filter(|&n| spectrum[n])
        .find(|&n| !witness.k.iter().any(|&c| c <= n && spectrum[n - c]));
    GrowthVerdict {
        holds: first_violation.is_none(),
        checked_to: max,
        first_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const L1: &str = "S -> 0 S 1 | ε";
    const SS: &str = "S -> S S | a a";

    #[test]
    fn parses_corpus_shapes() {
        let g = ContextFreeGrammar::parse(L1).unwrap();
        assert_eq!(g.terminals().symbols(), &['0', '1']);
        assert_eq!(g.num_productions(), 2);
        let g = ContextFreeGrammar::parse(SS).unwrap();
        assert_eq!(g.start_symbol(), "S");
        assert_eq!(g.terminals().symbols(), &['a']);
    }

    #[test]
    fn undefined_symbol_reported_with_line() {
        let err = ContextFreeGrammar::parse("# header\nS -> A").unwrap_err();
        assert_eq!(
            err,
            GrammarError::UndefinedSymbol {
                line: 2,
                symbol: "A".into()
            }
        );
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(ContextFreeGrammar::parse("S => a"), Err(GrammarError::Syntax { line: 1, .. })));
        assert!(matches!(ContextFreeGrammar::parse("S -> ab"), Err(GrammarError::Syntax { .. })));
        assert!(matches!(ContextFreeGrammar::parse("S -> a |"), Err(GrammarError::Syntax { .. })));
        assert!(matches!(ContextFreeGrammar::parse(""), Err(GrammarError::Syntax { .. })));
    }

    #[test]
    fn empty_language_detected() {
        let err = ContextFreeGrammar::parse("S -> a S").unwrap_err();
        assert_eq!(err, GrammarError::EmptyLanguage("S".into()));
    }

    #[test]
    fn removes_useless_symbols() {
        let g = ContextFreeGrammar::parse("S -> a | B\nB -> b B\nC -> c").unwrap();
        assert_eq!(g.nonterminals(), &["S".to_string()]);
        assert_eq!(g.removed(), &["B".to_string(), "C".to_string()]);
        assert_eq!(g.terminals().symbols(), &['a']);
    }

    #[test]
    fn continuation_and_quoted_terminals() {
        let g = ContextFreeGrammar::parse("S -> 'A' S\n  | '#' # comment\n").unwrap();
        assert!(g.member("AA#").unwrap());
        assert!(!g.member("A").unwrap());
    }

    #[test]
    fn cyk_membership() {
        let g = ContextFreeGrammar::parse(L1).unwrap();
        assert!(g.member("0011").unwrap());
        assert!(g.member("").unwrap());
        assert!(!g.member("0101").unwrap());
        assert_eq!(g.member("012"), Err(GrammarError::UnknownSymbol('2')));
    }

    #[test]
    fn spectrum_examples() {
        let g = ContextFreeGrammar::parse(L1).unwrap();
        let s = g.length_spectrum(10);
        let expected: Vec<bool> = (0..=10).map(|n| n % 2 == 0).collect();
        assert_eq!(s, expected);

        // oracle: derivations of S -> S S | a a only build a^{2k}, k ≥ 1
        let g = ContextFreeGrammar::parse(SS).unwrap();
        let mut brute = vec![false; 13];
        let mut frontier = vec![2usize];
        while let Some(n) = frontier.pop() {
            if n <= 12 && !brute[n] {
                brute[n] = true;
                let known: Vec<usize> = (0..=12).filter(|&m| brute[m]).collect();
                frontier.extend(known.iter().map(|m| m + n));
            }
        }
        assert_eq!(g.length_spectrum(12), brute);
    }

    #[test]
    fn spectrum_of_unproductive_branch_is_ignored() {
        let g = ContextFreeGrammar::parse("S -> a a | X\nX -> X b").unwrap();
        let s = g.length_spectrum(6);
        assert_eq!(s, vec![false, false, true, false, false, false, false]);
    }

    #[test]
    fn enumeration_matches_spectrum() {
        for text in [L1, SS, "S -> ( S ) S | ε", "S -> a S b S | b S a S | ε"] {
            let g = ContextFreeGrammar::parse(text).unwrap();
            let e = g.enumerate(12, DEFAULT_ENUMERATION_CAP);
            assert!(!e.truncated);
            assert_eq!(e.census(), g.length_spectrum(12), "{text}");
            for w in e.iter() {
                assert!(g.member(w).unwrap(), "{w}");
            }
        }
    }

    #[test]
    fn enumeration_truncates_at_cap() {
        let g = ContextFreeGrammar::parse("S -> a S | b S | ε").unwrap();
        let e = g.enumerate(10, 100);
        assert!(e.truncated);
        assert_eq!(e.complete_len(), 5); // 63 strings up to length 5, 127 up to 6
        assert_eq!(e.count(), 63);
    }

    #[test]
    fn infer_examples() {
        let spectrum: Vec<bool> = (0..=200).map(|n| n % 2 == 0).collect();
        let inf = infer_upset(&spectrum, 200).unwrap();
        assert_eq!((inf.set.period(), inf.set.threshold()), (2, 0));
        assert_eq!(inf.set.residues(), &[0].into());
        assert_eq!(inf.confidence, "empirical: verified to 200");

        let all = vec![true; 50];
        assert_eq!(infer_upset(&all, 49).unwrap().set, UltimatelyPeriodicSet::naturals());
        assert_eq!(infer_upset(&all, 3), Err(GrammarError::DegenerateBound(3)));
    }

    #[test]
    fn infer_fails_on_factorial_gaps() {
        let mut spectrum = vec![false; 10_081];
        let mut f = 1usize;
        for m in 1..=7 {
            f *= m;
            spectrum[2 * f] = true;
        }
        assert!(spectrum[10_080]);
        assert!(matches!(infer_upset(&spectrum, 10_080), Err(GrammarError::InferenceFailed { .. })));
    }

    #[test]
    fn constant_growth_examples() {
        let l1: Vec<bool> = (0..=100).map(|n| n % 2 == 0).collect();
        let w = ConstantGrowthWitness::new(3, [2]).unwrap();
        assert!(check_constant_growth(&l1, &w, 100).holds);

        let g = ContextFreeGrammar::parse(SS).unwrap();
        assert!(check_constant_growth(&g.length_spectrum(60), &w, 60).holds);

        let mut fact = vec![false; 721];
        for n in [1, 2, 6, 24, 120, 720] {
            fact[n] = true;
        }
        let w = ConstantGrowthWitness::new(2, 1..=10).unwrap();
        let v = check_constant_growth(&fact, &w, 720);
        assert!(!v.holds);
        // 24 - c for c ≤ 10 lands in 14..=23, which holds no factorial
        assert_eq!(v.first_violation, Some(24));
    }
}
