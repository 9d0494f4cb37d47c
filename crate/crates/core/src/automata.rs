//! Deterministic finite automata used as dissection witnesses.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::AutomatonError;
use crate::upsets::UltimatelyPeriodicSet;

/// A complete DFA. `transitions[state][i]` is the successor on the `i`-th
/// symbol of the (sorted) alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDfa", into = "RawDfa")]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    transitions: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawDfa {
    alphabet: Alphabet,
    states: usize,
    start: usize,
    accepting: Vec<usize>,
    transitions: Vec<Vec<usize>>,
}

impl TryFrom<RawDfa> for Dfa {
    type Error = AutomatonError;

    fn try_from(raw: RawDfa) -> Result<Self, Self::Error> {
        if raw.transitions.len() != raw.states {
            return Err(AutomatonError::Malformed(format!(
                "{} transition rows for {} states",
                raw.transitions.len(),
                raw.states
            )));
        }
        let mut accepting = vec![false; raw.states];
        for s in raw.accepting {
            *accepting
                .get_mut(s)
                .ok_or_else(|| AutomatonError::Malformed(format!("accepting state {s} out of range")))? = true;
        }
        Dfa::new(raw.alphabet, raw.start, accepting, raw.transitions)
    }
}

impl From<Dfa> for RawDfa {
    fn from(d: Dfa) -> Self {
        RawDfa {
            states: d.transitions.len(),
            accepting: (0..d.accepting.len()).filter(|&s| d.accepting[s]).collect(),
            alphabet: d.alphabet,
            start: d.start,
            transitions: d.transitions,
        }
    }
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        start: usize,
        accepting: Vec<bool>,
        transitions: Vec<Vec<usize>>,
    ) -> Result<Self, AutomatonError> {
        let n = transitions.len();
        if n == 0 {
            return Err(AutomatonError::Malformed("no states".into()));
        }
        if start >= n {
            return Err(AutomatonError::Malformed(format!("start state {start} out of range")));
        }
        if accepting.len() != n {
            return Err(AutomatonError::Malformed("accepting vector has wrong length".into()));
        }
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(AutomatonError::Malformed(format!("state {s} is missing transitions")));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(AutomatonError::Malformed(format!("state {s} moves to unknown state {t}")));
            }
        }
        Ok(Self {
            alphabet,
            start,
            accepting,
            transitions,
        })
    }

    /// A DFA whose moves ignore the symbol read.
    fn counter(alphabet: &Alphabet, accepting: Vec<bool>, next: impl Fn(usize) -> usize) -> Self {
        let transitions = (0..accepting.len())
            .map(|s| vec![next(s); alphabet.len()])
            .collect();
        Self {
            alphabet: alphabet.clone(),
            start: 0,
            accepting,
            transitions,
        }
    }

    /// Accepts `x` iff `|x| ≡ r (mod m)`.
    pub fn length_modulus(m: usize, r: usize, alphabet: &Alphabet) -> Result<Self, AutomatonError> {
        if r >= m {
            return Err(AutomatonError::BadResidue {
                residue: r,
                modulus: m,
            });
        }
        let accepting = (0..m).map(|s| s == r).collect();
        Ok(Self::counter(alphabet, accepting, |s| (s + 1) % m))
    }

    /// Accepts nonempty strings starting with `sigma`.
    pub fn prefix(sigma: char, alphabet: &Alphabet) -> Result<Self, AutomatonError> {
        let target = alphabet
            .index_of(sigma)
            .ok_or(AutomatonError::UnknownSymbol(sigma))?;
        // 0 = start, 1 = accept sink, 2 = reject sink
        let first = (0..alphabet.len())
            .map(|i| if i == target { 1 } else { 2 })
            .collect();
        Ok(Self {
            alphabet: alphabet.clone(),
            start: 0,
            accepting: vec![false, true, false],
            transitions: vec![first, vec![1; alphabet.len()], vec![2; alphabet.len()]],
        })
    }

    /// Accepts `x` iff `#_sigma(x) ≡ r (mod m)`.
    pub fn symbol_count_modulus(
        sigma: char,
        m: usize,
        r: usize,
        alphabet: &Alphabet,
    ) -> Result<Self, AutomatonError> {
        if r >= m {
            return Err(AutomatonError::BadResidue {
                residue: r,
                modulus: m,
            });
        }
        let target = alphabet
            .index_of(sigma)
            .ok_or(AutomatonError::UnknownSymbol(sigma))?;
        let transitions = (0..m)
            .map(|s| {
                (0..alphabet.len())
                    .map(|i| if i == target { (s + 1) % m } else { s })
                    .collect()
            })
            .collect();
        Ok(Self {
            alphabet: alphabet.clone(),
            start: 0,
            accepting: (0..m).map(|s| s == r).collect(),
            transitions,
        })
    }

    /// Accepts `w` iff `|w| ∈ lengths`, with `t + q` states.
    pub fn upset_length(lengths: &UltimatelyPeriodicSet, alphabet: &Alphabet) -> Self {
        let t = lengths.threshold();
        let q = lengths.period();
        let accepting = (0..t + q).map(|s| lengths.contains(s)).collect();
        Self::counter(alphabet, accepting, |s| if s + 1 < t + q { s + 1 } else { t })
    }

    /// Accepts every string.
    pub fn universal(alphabet: &Alphabet) -> Self {
        Self::counter(alphabet, vec![true], |_| 0)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn step(&self, state: usize, c: char) -> Result<usize, AutomatonError> {
        let i = self
            .alphabet
            .index_of(c)
            .ok_or(AutomatonError::UnknownSymbol(c))?;
        Ok(self.transitions[state][i])
    }

    pub fn run(&self, x: &str) -> Result<bool, AutomatonError> {
        let mut s = self.start;
        for c in x.chars() {
            s = self.step(s, c)?;
        }
        Ok(self.accepting[s])
    }

    /// Membership for strings already known to be over the alphabet;
    /// foreign symbols reject.
    pub fn accepts(&self, x: &str) -> bool {
        self.run(x).unwrap_or(false)
    }

    pub fn complement(&self) -> Self {
        Self {
            accepting: self.accepting.iter().map(|a| !a).collect(),
            ..self.clone()
        }
    }

    fn check_alphabet(&self, other: &Self) -> Result<(), AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch {
                left: self.alphabet.symbols().to_vec(),
                right: other.alphabet.symbols().to_vec(),
            });
        }
        Ok(())
    }

    /// Reachable product automaton with acceptance combined by `op`.
    pub fn product(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self, AutomatonError> {
        self.check_alphabet(other)?;
        let mut index = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        index.insert((self.start, other.start), 0usize);
        let mut queue = VecDeque::from([0usize]);
        let mut transitions: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(id) = queue.pop_front() {
            let (a, b) = pairs[id];
            let mut row = Vec::with_capacity(self.alphabet.len());
            for i in 0..self.alphabet.len() {
                let next = (self.transitions[a][i], other.transitions[b][i]);
                let nid = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    transitions.push(Vec::new());
                    queue.push_back(pairs.len() - 1);
                    pairs.len() - 1
                });
                row.push(nid);
            }
            transitions[id] = row;
        }
        let accepting = pairs
            .iter()
            .map(|&(a, b)| op(self.accepting[a], other.accepting[b]))
            .collect();
        Ok(Self {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting,
            transitions,
        })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, AutomatonError> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Self) -> Result<Self, AutomatonError> {
        self.product(other, |a, b| a || b)
    }

    /// Exact emptiness by reachability.
    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(s) = stack.pop() {
            if self.accepting[s] {
                return false;
            }
            for &t in &self.transitions[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        true
    }

    /// `result[n]` is true iff some accepted string has length `n`, for `n ≤ max`.
    pub fn length_spectrum(&self, max: usize) -> Vec<bool> {
        let mut layer = vec![false; self.num_states()];
        layer[self.start] = true;
        let mut out = Vec::with_capacity(max + 1);
        for n in 0..=max {
            out.push((0..layer.len()).any(|s| layer[s] && self.accepting[s]));
            if n == max {
                break;
            }
            let mut next = vec![false; layer.len()];
            for s in (0..layer.len()).filter(|&s| layer[s]) {
                for &t in &self.transitions[s] {
                    next[t] = true;
                }
            }
            layer = next;
        }
        out
    }
}
