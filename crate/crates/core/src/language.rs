//! A uniform interface over grammar-backed, builtin and composite languages.
//!
//! Every handle answers `member(x)` and `enumerate(N)`; the latter lists
//! exactly the members of length at most `N` (unless the enumeration cap is
//! hit, which is reported).

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::automata::Dfa;
use crate::error::{AutomatonError, GrammarError};
use crate::grammar::{ContextFreeGrammar, Enumeration, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `{0^{n!}}`
    FactorialUnary,
    /// `{w^{n!} : w ∈ {a,b}²}`
    FactorialWords,
    /// `{(ab^n)^n}`
    AbPower,
    /// `{0^{n!}1^{n!}}`
    Semilin2Counterexample,
    /// `{1^n0^n} ∪ {0^{n!}1^{n!}}`
    L2Union,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [
        Builtin::FactorialUnary,
        Builtin::FactorialWords,
        Builtin::AbPower,
        Builtin::Semilin2Counterexample,
        Builtin::L2Union,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::FactorialUnary => "factorial_unary",
            Builtin::FactorialWords => "factorial_words",
            Builtin::AbPower => "ab_power",
            Builtin::Semilin2Counterexample => "semilin2_counterexample",
            Builtin::L2Union => "l2_union",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Builtin::FactorialUnary => "{0^(n!) : n ≥ 0}",
            Builtin::FactorialWords => "{w^(n!) : w ∈ {a,b}^2, n ≥ 0}",
            Builtin::AbPower => "{(a b^n)^n : n ≥ 0}",
            Builtin::Semilin2Counterexample => "{0^(n!) 1^(n!) : n ≥ 0}",
            Builtin::L2Union => "{1^n 0^n} ∪ {0^(n!) 1^(n!)}",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, GrammarError> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| GrammarError::UnknownBuiltin(name.to_string()))
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            Builtin::FactorialUnary => Alphabet::new(['0']),
            Builtin::FactorialWords | Builtin::AbPower => Alphabet::new(['a', 'b']),
            Builtin::Semilin2Counterexample | Builtin::L2Union => Alphabet::new(['0', '1']),
        }
    }

    fn member(self, x: &str) -> bool {
        match self {
            Builtin::FactorialUnary => x.chars().all(|c| c == '0') && is_factorial(x.len()),
            Builtin::FactorialWords => {
                let b = x.as_bytes();
                b.len() >= 2
                    && b.len() % 2 == 0
                    && b.iter().all(|&c| c == b'a' || c == b'b')
                    && b.chunks(2).all(|ch| ch == &b[..2])
                    && is_factorial(b.len() / 2)
            }
            Builtin::AbPower => {
                let n = (0..).find(|n| n * (n + 1) >= x.len()).expect("unbounded range");
                n * (n + 1) == x.len() && x == ab_power_word(n)
            }
            Builtin::Semilin2Counterexample => {
                let n = x.len() / 2;
                x.len() % 2 == 0 && is_factorial(n) && x == format!("{}{}", "0".repeat(n), "1".repeat(n))
            }
            Builtin::L2Union => {
                let n = x.len() / 2;
                Builtin::Semilin2Counterexample.member(x)
                    || (x.len() % 2 == 0 && x == format!("{}{}", "1".repeat(n), "0".repeat(n)))
            }
        }
    }

    fn members_up_to(self, max: usize) -> Vec<String> {
        let factorials: Vec<usize> = factorials_up_to(max);
        match self {
            Builtin::FactorialUnary => factorials.iter().map(|&f| "0".repeat(f)).collect(),
            Builtin::FactorialWords => factorials
                .iter()
                .filter(|&&f| 2 * f <= max)
                .flat_map(|&f| ["aa", "ab", "ba", "bb"].map(|w| w.repeat(f)))
                .collect(),
            Builtin::AbPower => (0..)
                .take_while(|n| n * (n + 1) <= max)
                .map(ab_power_word)
                .collect(),
            Builtin::Semilin2Counterexample => factorials
                .iter()
                .filter(|&&f| 2 * f <= max)
                .map(|&f| format!("{}{}", "0".repeat(f), "1".repeat(f)))
                .collect(),
            Builtin::L2Union => {
                let mut v = Builtin::Semilin2Counterexample.members_up_to(max);
                v.extend((0..=max / 2).map(|n| format!("{}{}", "1".repeat(n), "0".repeat(n))));
                v
            }
        }
    }
}

fn ab_power_word(n: usize) -> String {
    format!("a{}", "b".repeat(n)).repeat(n)
}

/// Distinct values `n!` that are at most `max` (so `1` appears once).
pub fn factorials_up_to(max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = 1usize;
    let mut m = 1usize;
    while f <= max {
        out.push(f);
        m += 1;
        match f.checked_mul(m) {
            Some(next) => f = next,
            None => break,
        }
    }
    out
}

fn is_factorial(n: usize) -> bool {
    let mut f = 1usize;
    let mut m = 1usize;
    while f < n {
        m += 1;
        match f.checked_mul(m) {
            Some(next) => f = next,
            None => return false,
        }
    }
    f == n
}

/// Structural description of a handle, used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HandleDescription {
    Grammar { name: String, rules: String },
    Builtin { name: String, language: String },
    Intersect { language: Box<HandleDescription>, dfa: Dfa },
    Union { left: Box<HandleDescription>, right: Box<HandleDescription> },
    Difference { left: Box<HandleDescription>, right: Box<HandleDescription> },
    Reverse { language: Box<HandleDescription> },
}

enum Node {
    Grammar {
        name: String,
        grammar: ContextFreeGrammar,
        cache: Mutex<Option<Arc<MemberCache>>>,
    },
    Builtin(Builtin),
    Intersect(LanguageHandle, Dfa),
    Union(LanguageHandle, LanguageHandle),
    Difference(LanguageHandle, LanguageHandle),
    Reverse(LanguageHandle),
}

struct MemberCache {
    enumeration: Enumeration,
    set: HashSet<String>,
}

/// Cheaply clonable handle to a language.
#[derive(Clone)]
pub struct LanguageHandle {
    node: Arc<Node>,
    alphabet: Alphabet,
    name: Arc<str>,
    cap: usize,
}

impl fmt::Debug for LanguageHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguageHandle")
            .field("name", &self.name)
            .field("alphabet", &self.alphabet)
            .finish()
    }
}

impl LanguageHandle {
    pub fn grammar(name: impl Into<String>, grammar: ContextFreeGrammar) -> Self {
        let name = name.into();
        Self {
            alphabet: grammar.terminals().clone(),
            name: name.clone().into(),
            node: Arc::new(Node::Grammar {
                name,
                grammar,
                cache: Mutex::new(None),
            }),
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn parse_grammar(name: impl Into<String>, text: &str) -> Result<Self, GrammarError> {
        Ok(Self::grammar(name, ContextFreeGrammar::parse(text)?))
    }

    pub fn builtin(b: Builtin) -> Self {
        Self {
            alphabet: b.alphabet(),
            name: b.name().into(),
            node: Arc::new(Node::Builtin(b)),
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    fn check(&self, other: &Alphabet) -> Result<(), AutomatonError> {
        if &self.alphabet != other {
            return Err(AutomatonError::AlphabetMismatch {
                left: self.alphabet.symbols().to_vec(),
                right: other.symbols().to_vec(),
            });
        }
        Ok(())
    }

    fn composite(node: Node, alphabet: Alphabet, name: String, cap: usize) -> Self {
        Self {
            node: Arc::new(node),
            alphabet,
            name: name.into(),
            cap,
        }
    }

    pub fn intersect_dfa(&self, dfa: &Dfa) -> Result<Self, AutomatonError> {
        self.check(dfa.alphabet())?;
        Ok(Self::composite(
            Node::Intersect(self.clone(), dfa.clone()),
            self.alphabet.clone(),
            format!("({} ∩ C)", self.name),
            self.cap,
        ))
    }

    pub fn union(&self, other: &Self) -> Result<Self, AutomatonError> {
        self.check(&other.alphabet)?;
        Ok(Self::composite(
            Node::Union(self.clone(), other.clone()),
            self.alphabet.clone(),
            format!("({} ∪ {})", self.name, other.name),
            self.cap.min(other.cap),
        ))
    }

    pub fn difference(&self, other: &Self) -> Result<Self, AutomatonError> {
        self.check(&other.alphabet)?;
        Ok(Self::composite(
            Node::Difference(self.clone(), other.clone()),
            self.alphabet.clone(),
            format!("({} − {})", self.name, other.name),
            self.cap.min(other.cap),
        ))
    }

    pub fn reverse(&self) -> Self {
        Self::composite(
            Node::Reverse(self.clone()),
            self.alphabet.clone(),
            format!("rev({})", self.name),
            self.cap,
        )
    }

    /// Same language with a different enumeration cap.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into().into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn describe(&self) -> HandleDescription {
        match &*self.node {
            Node::Grammar { name, grammar, .. } => HandleDescription::Grammar {
                name: name.clone(),
                rules: grammar.to_string(),
            },
            Node::Builtin(b) => HandleDescription::Builtin {
                name: b.name().to_string(),
                language: b.description().to_string(),
            },
            Node::Intersect(h, d) => HandleDescription::Intersect {
                language: Box::new(h.describe()),
                dfa: d.clone(),
            },
            Node::Union(a, b) => HandleDescription::Union {
                left: Box::new(a.describe()),
                right: Box::new(b.describe()),
            },
            Node::Difference(a, b) => HandleDescription::Difference {
                left: Box::new(a.describe()),
                right: Box::new(b.describe()),
            },
            Node::Reverse(h) => HandleDescription::Reverse {
                language: Box::new(h.describe()),
            },
        }
    }

    pub fn member(&self, x: &str) -> bool {
        if !x.chars().all(|c| self.alphabet.contains(c)) {
            return false;
        }
        match &*self.node {
            Node::Grammar { grammar, cache, .. } => {
                let cached = cache.lock().expect("cache lock").clone();
                match cached {
                    Some(c) if x.len() <= c.enumeration.complete_len() => c.set.contains(x),
                    _ => grammar.member(x).unwrap_or(false),
                }
            }
            Node::Builtin(b) => b.member(x),
            Node::Intersect(h, d) => d.accepts(x) && h.member(x),
            Node::Union(a, b) => a.member(x) || b.member(x),
            Node::Difference(a, b) => a.member(x) && !b.member(x),
            Node::Reverse(h) => h.member(&x.chars().rev().collect::<String>()),
        }
    }

    /// Members of length at most `max`, grouped by length and sorted.
    pub fn enumerate(&self, max: usize) -> Enumeration {
        match &*self.node {
            Node::Grammar { grammar, cache, .. } => {
                {
                    let guard = cache.lock().expect("cache lock");
                    if let Some(c) = guard.as_ref() {
                        if c.enumeration.max_len >= max && !c.enumeration.truncated {
                            return restrict(&c.enumeration, max);
                        }
                    }
                }
                let e = grammar.enumerate(max, self.cap);
                let set = e.iter().cloned().collect();
                *cache.lock().expect("cache lock") = Some(Arc::new(MemberCache {
                    enumeration: e.clone(),
                    set,
                }));
                e
            }
            Node::Builtin(b) => {
                let mut by_length = vec![Vec::new(); max + 1];
                for w in b.members_up_to(max) {
                    by_length[w.len()].push(w);
                }
                finish(max, by_length, false, self.cap)
            }
            Node::Intersect(h, d) => filter(h.enumerate(max), |w| d.accepts(w)),
            Node::Difference(a, b) => {
                let left = a.enumerate(max);
                // warm the right-hand cache before filtering
                let right = b.enumerate(left.complete_len());
                let mut out = filter(left, |w| !b.member(w));
                out.truncated |= right.truncated && out.complete_len() > right.complete_len();
                out
            }
            Node::Union(a, b) => {
                let (x, y) = (a.enumerate(max), b.enumerate(max));
                let complete = x.complete_len().min(y.complete_len());
                let mut by_length = vec![Vec::new(); complete + 1];
                for (n, slot) in by_length.iter_mut().enumerate() {
                    let mut v: Vec<String> = x.by_length[n].iter().chain(&y.by_length[n]).cloned().collect();
                    v.sort();
                    v.dedup();
                    *slot = v;
                }
                finish(max, by_length, x.truncated || y.truncated, self.cap)
            }
            Node::Reverse(h) => {
                let e = h.enumerate(max);
                let by_length = e
                    .by_length
                    .into_iter()
                    .map(|v| {
                        let mut v: Vec<String> = v.into_iter().map(|w| w.chars().rev().collect()).collect();
                        v.sort();
                        v
                    })
                    .collect();
                finish(max, by_length, e.truncated, self.cap)
            }
        }
    }

    /// Which lengths `0..=max` occur. Grammar handles use the length fixpoint
    /// and never enumerate.
    pub fn length_spectrum(&self, max: usize) -> Vec<bool> {
        match &*self.node {
            Node::Grammar { grammar, .. } => grammar.length_spectrum(max),
            Node::Reverse(h) => h.length_spectrum(max),
            Node::Union(a, b) => a
                .length_spectrum(max)
                .into_iter()
                .zip(b.length_spectrum(max))
                .map(|(x, y)| x || y)
                .collect(),
            _ => self.enumerate(max).census(),
        }
    }
}

fn restrict(e: &Enumeration, max: usize) -> Enumeration {
    Enumeration {
        max_len: max,
        by_length: e.by_length[..=max].to_vec(),
        truncated: false,
    }
}

fn filter(e: Enumeration, keep: impl Fn(&str) -> bool) -> Enumeration {
    Enumeration {
        max_len: e.max_len,
        by_length: e
            .by_length
            .into_iter()
            .map(|v| v.into_iter().filter(|w| keep(w)).collect())
            .collect(),
        truncated: e.truncated,
    }
}

fn finish(max: usize, mut by_length: Vec<Vec<String>>, truncated: bool, cap: usize) -> Enumeration {
    let mut total = 0;
    for n in 0..by_length.len() {
        total += by_length[n].len();
        if total > cap {
            by_length.truncate(n);
            return Enumeration {
                max_len: max,
                by_length,
                truncated: true,
            };
        }
    }
    Enumeration {
        max_len: max,
        by_length,
        truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l1() -> LanguageHandle {
        LanguageHandle::parse_grammar("l1", "S -> 0 S 1 | ε").unwrap()
    }

    #[test]
    fn factorial_helpers() {
        assert_eq!(factorials_up_to(720), vec![1, 2, 6, 24, 120, 720]);
        assert!(is_factorial(5040) && !is_factorial(5041) && !is_factorial(0));
    }

    #[test]
    fn builtin_membership_agrees_with_enumeration() {
        for b in Builtin::ALL {
            let h = LanguageHandle::builtin(b);
            let listed: HashSet<String> = h.enumerate(14).iter().cloned().collect();
            for w in h.alphabet().strings_up_to(14) {
                assert_eq!(h.member(&w), listed.contains(&w), "{} {w}", b.name());
            }
        }
    }

    #[test]
    fn builtin_member_examples() {
        let h = LanguageHandle::builtin(Builtin::AbPower);
        assert!(h.member(""));
        assert!(h.member("abbabb"));
        assert!(!h.member("abab"));
        let h = LanguageHandle::builtin(Builtin::FactorialWords);
        assert!(h.member(&"ba".repeat(24)));
        assert!(!h.member(&"ba".repeat(12)));
        assert!(h.member("bb"));
        let h = LanguageHandle::builtin(Builtin::L2Union);
        assert!(h.member("1100") && h.member("") && h.member("01") && h.member(&format!("{}{}", "0".repeat(6), "1".repeat(6))));
        assert!(!h.member("000111"));
        assert_eq!(Builtin::from_name("nope"), Err(GrammarError::UnknownBuiltin("nope".into())));
    }

    #[test]
    fn composite_semantics() {
        let a = l1();
        let b = LanguageHandle::parse_grammar("even", "S -> 0 0 S 1 1 | ε").unwrap();
        let d = a.difference(&b).unwrap();
        let odd: Vec<usize> = d.enumerate(20).iter().map(|w| w.len() / 2).collect();
        assert_eq!(odd, vec![1, 3, 5, 7, 9]);
        let u = b.union(&LanguageHandle::builtin(Builtin::L2Union)).unwrap();
        let e = u.enumerate(8);
        assert_eq!(e.by_length[4], vec!["0011".to_string(), "1100".to_string()]);
        let r = a.reverse();
        assert!(r.member("1100") && !r.member("0011"));
        let dfa = Dfa::length_modulus(4, 0, a.alphabet()).unwrap();
        let i = a.intersect_dfa(&dfa).unwrap();
        assert_eq!(i.enumerate(12).count(), 4);
        assert!(a.union(&LanguageHandle::builtin(Builtin::AbPower)).is_err());
    }

    #[test]
    fn grammar_cache_serves_membership() {
        let a = l1();
        assert!(a.member("000111"));
        a.enumerate(10);
        assert!(a.member("0011") && !a.member("0101"));
        // beyond the cached bound CYK takes over
        assert!(a.member(&format!("{}{}", "0".repeat(8), "1".repeat(8))));
    }

    #[test]
    fn composite_cap_truncates() {
        let all = LanguageHandle::parse_grammar("all", "S -> 0 S | 1 S | ε").unwrap();
        let e = all.reverse().with_cap(10).enumerate(6);
        assert!(e.truncated);
        assert_eq!(e.complete_len(), 2);
    }
}
