//! Level bounds for class expressions over the Boolean hierarchy of
//! bounded context-free languages.
//!
//! Only the identities below are used:
//!
//! * R1 `BCFL_{2k} = BCFL_{2k−2} ∨ BCFL₂` for `k ≥ 2`
//! * R2 `co-BCFL_{2k+1} = BCFL_{2k−1} ∨ BCFL₂`
//! * R3 `BCFL_{2k−2} ∧ co-BCFL = BCFL_{2k−2}`, only as the lemma behind R1
//! * R4 `BCFL ∨ BCFL = BCFL`
//! * R5 De Morgan and distribution
//! * R6 `BCFL_{2a} ∨ BCFL_{2b} ⊆ BCFL_{2(a+b)}`
//! * R7 `F_{1,1} = BCFL₂`, `F_{2,1} ⊆ BCFL₄`, `G_{2,2} ⊆ BCFL₄`
//! * R8 `BCFL_{2k−1} ⊆ BCFL_{2k}`
//!
//! together with the definitions `BCFL_{2k} = BCFL_{2k−1} ∧ co-BCFL` and
//! `BCFL_{2k+1} = BCFL_{2k} ∨ BCFL`. Even-to-odd inclusion is never assumed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::HierarchyError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassExpr {
    /// `BCFL_k`, with `BCFL_1 = BCFL`.
    Atom(usize),
    And(Box<ClassExpr>, Box<ClassExpr>),
    Or(Box<ClassExpr>, Box<ClassExpr>),
    Minus(Box<ClassExpr>, Box<ClassExpr>),
    Co(Box<ClassExpr>),
}

impl ClassExpr {
    pub fn atom(k: usize) -> Result<Self, HierarchyError> {
        if k == 0 {
            return Err(HierarchyError::IllFormed("level must be at least 1".into()));
        }
        Ok(ClassExpr::Atom(k))
    }

    pub fn and(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn minus(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::Minus(Box::new(a), Box::new(b))
    }

    pub fn co(a: ClassExpr) -> Self {
        ClassExpr::Co(Box::new(a))
    }

    /// `⋁_{i=1}^{l} BCFL₂`, left-nested.
    pub fn join_of_bcfl2(l: usize) -> Self {
        assert!(l >= 1);
        (1..l).fold(ClassExpr::Atom(2), |acc, _| ClassExpr::or(acc, ClassExpr::Atom(2)))
    }

    pub fn depth(&self) -> usize {
        match self {
            ClassExpr::Atom(_) => 0,
            ClassExpr::Co(a) => 1 + a.depth(),
            ClassExpr::And(a, b) | ClassExpr::Or(a, b) | ClassExpr::Minus(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn is_well_formed(&self) -> bool {
        match self {
            ClassExpr::Atom(k) => *k >= 1,
            ClassExpr::Co(a) => a.is_well_formed(),
            ClassExpr::And(a, b) | ClassExpr::Or(a, b) | ClassExpr::Minus(a, b) => a.is_well_formed() && b.is_well_formed(),
        }
    }

    /// Parses `BCFL`, `BCFL_k`, `&`, `|`, `-`, `co(...)` and parentheses.
    /// Precedence from loosest: `|`, `&`, `-`; all left-associative.
    pub fn parse(input: &str) -> Result<Self, HierarchyError> {
        let tokens = tokenize(input)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(HierarchyError::IllFormed(format!("unexpected {:?}", p.tokens[p.pos])));
        }
        Ok(e)
    }

    fn precedence(&self) -> u8 {
        match self {
            ClassExpr::Or(..) => 1,
            ClassExpr::And(..) => 2,
            ClassExpr::Minus(..) => 3,
            ClassExpr::Atom(_) | ClassExpr::Co(_) => 4,
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &ClassExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            ClassExpr::Atom(1) => write!(f, "BCFL"),
            ClassExpr::Atom(k) => write!(f, "BCFL_{k}"),
            ClassExpr::Co(a) => write!(f, "co({a})"),
            ClassExpr::And(a, b) | ClassExpr::Or(a, b) | ClassExpr::Minus(a, b) => {
                let (op, p) = match self {
                    ClassExpr::And(..) => ("&", 2),
                    ClassExpr::Or(..) => ("|", 1),
                    _ => ("-", 3),
                };
                child(f, a, p)?;
                write!(f, " {op} ")?;
                child(f, b, p + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(usize),
    Co,
    Open,
    Close,
    And,
    Or,
    Minus,
}

fn tokenize(input: &str) -> Result<Vec<Token>, HierarchyError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '(' => (out.push(Token::Open), i += 1).1,
            ')' => (out.push(Token::Close), i += 1).1,
            '&' | '∧' => (out.push(Token::And), i += 1).1,
            '|' | '∨' => (out.push(Token::Or), i += 1).1,
            '-' | '−' => (out.push(Token::Minus), i += 1).1,
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                match word.as_str() {
                    "co" => out.push(Token::Co),
                    "BCFL" => out.push(Token::Atom(1)),
                    w => {
                        let k = w
                            .strip_prefix("BCFL_")
                            .and_then(|d| d.parse::<usize>().ok())
                            .ok_or_else(|| HierarchyError::IllFormed(format!("unknown word {w:?}")))?;
                        if k == 0 {
                            return Err(HierarchyError::IllFormed("level must be at least 1".into()));
                        }
                        out.push(Token::Atom(k));
                    }
                }
            }
            _ => return Err(HierarchyError::IllFormed(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn eat(&mut self, t: &Token) -> bool {
        if self.tokens.get(self.pos) == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<ClassExpr, HierarchyError> {
        let mut e = self.and()?;
        while self.eat(&Token::Or) {
            e = ClassExpr::or(e, self.and()?);
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<ClassExpr, HierarchyError> {
        let mut e = self.minus()?;
        while self.eat(&Token::And) {
            e = ClassExpr::and(e, self.minus()?);
        }
        Ok(e)
    }

    fn minus(&mut self) -> Result<ClassExpr, HierarchyError> {
        let mut e = self.unary()?;
        while self.eat(&Token::Minus) {
            e = ClassExpr::minus(e, self.unary()?);
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<ClassExpr, HierarchyError> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| HierarchyError::IllFormed("unexpected end of expression".into()))?;
        self.pos += 1;
        match t {
            Token::Atom(k) => Ok(ClassExpr::Atom(k)),
            Token::Co => {
                if !self.eat(&Token::Open) {
                    return Err(HierarchyError::IllFormed("co must be followed by (".into()));
                }
                let e = self.or()?;
                self.close()?;
                Ok(ClassExpr::co(e))
            }
            Token::Open => {
                let e = self.or()?;
                self.close()?;
                Ok(e)
            }
            other => Err(HierarchyError::IllFormed(format!("unexpected {other:?}"))),
        }
    }

    fn close(&mut self) -> Result<(), HierarchyError> {
        if self.eat(&Token::Close) {
            Ok(())
        } else {
            Err(HierarchyError::IllFormed("missing )".into()))
        }
    }
}

/// Bounds above this are reported as not derived.
pub const MAX_LEVEL: usize = 1 << 40;

/// Largest join [`normalize`] materializes.
pub const MAX_JOIN_TERMS: usize = 1024;

fn pad(k: usize) -> usize {
    k.saturating_add(k % 2)
}

/// Exact join: `BCFL_{2a+r} ∨ BCFL_{2b+s} = BCFL_{2(a+b)+max(r,s)}` by the
/// definitions, R1 and R4.
fn join_level(x: usize, y: usize) -> usize {
    (x / 2).saturating_add(y / 2).saturating_mul(2).saturating_add((x % 2).max(y % 2))
}

/// The level `k` with `e = BCFL_k`, when the definitions, R1, R2 and R4
/// establish it as an equality.
pub fn exact_level(e: &ClassExpr) -> Option<usize> {
    match e {
        ClassExpr::Atom(k) => Some(*k),
        ClassExpr::Or(a, b) => Some(join_level(exact_level(a)?, exact_level(b)?)),
        ClassExpr::Minus(a, b) => odd_minus_bcfl(exact_level(a)?, exact_level(b)?),
        ClassExpr::And(a, b) => match (&**a, &**b) {
            (x, ClassExpr::Co(y)) | (ClassExpr::Co(y), x) => odd_minus_bcfl(exact_level(x)?, exact_level(y)?),
            _ => None,
        },
        ClassExpr::Co(a) => match exact_level(a)? {
            // R2, with the right side joined exactly
            k if k >= 3 && k % 2 == 1 => Some(join_level(k - 2, 2)),
            _ => None,
        },
    }
}

fn odd_minus_bcfl(x: usize, y: usize) -> Option<usize> {
    (x % 2 == 1 && y == 1).then_some(x + 1)
}

/// Whether the engine derives `a = b` as an equality of classes.
pub fn derives_equal(a: &ClassExpr, b: &ClassExpr) -> bool {
    matches!((exact_level(a), exact_level(b)), (Some(x), Some(y)) if x == y)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBound {
    /// Even level `2ℓ` with `e ⊆ BCFL_{2ℓ}`.
    pub level: usize,
    pub derivation: Vec<String>,
    /// Set when a degenerate recursion call `F_{0,·}` was grounded at level 0.
    pub grounded: bool,
}

/// `F_{i,j} = BCFL_i − BCFL_j ⊆ BCFL_{difference_bound(i,j)}`.
pub fn difference_bound(i: usize, j: usize) -> usize {
    difference_derivation(i, j).0
}

/// Unrolls the recursion on `(2k, 2m+1)`:
///
/// * `f(k, 0) = 4k` since `F_{2k,1} = F_{2k−2,1} ∨ F_{2,1}` by R1 and distribution
/// * `f(0, ·) = 0`, the grounded degenerate case
/// * `f(k, m) = f(k−1, m−1) + f(1, m−1) + 4k`
///
/// With `f(1, m) = 4 + 4m` the `n = min(k, m)` recursive steps sum to
/// `4n(k + m − n + 1)`. Saturates at `usize::MAX`.
fn difference_derivation(i: usize, j: usize) -> (usize, bool) {
    assert!(i >= 1 && j >= 1, "levels start at 1");
    if (i, j) == (1, 1) {
        return (2, false);
    }
    // R8 on both sides: BCFL_i grows to even, BCFL_j shrinks to odd
    let k = (i as u128 + 1) / 2;
    let m = (j as u128 - 1) / 2;
    let n = k.min(m);
    let grounded = m >= 2 || (n >= 1 && k == n);
    let total = (k + m - n + 1)
        .checked_mul(4 * n)
        .and_then(|steps| steps.checked_add(4 * (k - n)))
        .and_then(|t| usize::try_from(t).ok());
    (total.unwrap_or(usize::MAX), grounded)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Literal {
    Pos(usize),
    Neg(usize),
}

/// Disjunctive normal form over literals; subexpressions with an exact
/// level become single literals.
fn dnf(e: &ClassExpr, negate: bool) -> Vec<Vec<Literal>> {
    if let Some(k) = exact_level(e) {
        return vec![vec![if negate { Literal::Neg(k) } else { Literal::Pos(k) }]];
    }
    let cross = |x: Vec<Vec<Literal>>, y: Vec<Vec<Literal>>| {
        let mut out = Vec::new();
        for a in &x {
            for b in &y {
                out.push(a.iter().chain(b).copied().collect());
            }
        }
        out
    };
    match (e, negate) {
        (ClassExpr::Atom(_), _) => unreachable!("atoms have exact levels"),
        (ClassExpr::Co(a), n) => dnf(a, !n),
        (ClassExpr::Or(a, b), false) => [dnf(a, false), dnf(b, false)].concat(),
        (ClassExpr::And(a, b), false) => cross(dnf(a, false), dnf(b, false)),
        (ClassExpr::Minus(a, b), false) => cross(dnf(a, false), dnf(b, true)),
        (ClassExpr::Or(a, b), true) => cross(dnf(a, true), dnf(b, true)),
        (ClassExpr::And(a, b), true) => [dnf(a, true), dnf(b, true)].concat(),
        (ClassExpr::Minus(a, b), true) => [dnf(a, true), dnf(b, false)].concat(),
    }
}

fn show(lits: &[Literal]) -> String {
    lits.iter()
        .map(|l| match l {
            Literal::Pos(k) => format!("BCFL_{k}"),
            Literal::Neg(k) => format!("co-BCFL_{k}"),
        })
        .collect::<Vec<_>>()
        .join(" ∧ ")
}

fn conjunct_bound(lits: &[Literal], trace: &mut Vec<String>) -> Option<(usize, bool)> {
    let pos: Vec<usize> = lits.iter().filter_map(|l| if let Literal::Pos(k) = l { Some(*k) } else { None }).collect();
    let neg: Vec<usize> = lits.iter().filter_map(|l| if let Literal::Neg(k) = l { Some(*k) } else { None }).collect();
    // De Morgan: ⋀ co-BCFL_j = co(⋁ BCFL_j), joined exactly
    let neg = neg.into_iter().reduce(join_level);
    let pos_level = match pos.as_slice() {
        [] => None,
        [k] => Some(*k),
        [first, rest @ ..] => {
            // distribution over ⋁ BCFL₂ with G_{2,2} ⊆ BCFL₄ per pair
            let mut level = pad(*first);
            for &k in rest {
                let next = (level / 2).checked_mul(pad(k) / 2)?.checked_mul(4).filter(|&n| n <= MAX_LEVEL)?;
                trace.push(format!("R5,R7: BCFL_{level} ∧ BCFL_{k} ⊆ BCFL_{next}"));
                level = next;
            }
            Some(level)
        }
    };
    match (pos_level, neg) {
        (None, None) => None,
        (Some(p), None) => {
            if p % 2 == 1 {
                trace.push(format!("R8: BCFL_{p} ⊆ BCFL_{}", p + 1));
            }
            Some((pad(p), false))
        }
        (Some(p), Some(j)) => {
            let (level, grounded) = difference_derivation(p, j);
            if level > MAX_LEVEL {
                return None;
            }
            trace.push(format!("F_{{{p},{j}}} ⊆ BCFL_{level}{}", if grounded { " (grounded)" } else { "" }));
            Some((level, grounded))
        }
        (None, Some(j)) if j >= 3 && j % 2 == 1 => {
            let level = pad(j - 2) + 2;
            trace.push(format!("R2: co-BCFL_{j} = BCFL_{} ∨ BCFL_2 ⊆ BCFL_{level}", j - 2));
            Some((level, false))
        }
        (None, Some(j)) => {
            trace.push(format!("no rule bounds co-BCFL_{j}"));
            None
        }
    }
}

/// Smallest even level the rules derive as an upper bound for `e`.
pub fn level_bound(e: &ClassExpr) -> Result<LevelBound, HierarchyError> {
    if !e.is_well_formed() {
        return Err(HierarchyError::IllFormed(e.to_string()));
    }
    let exact = exact_level(e).map(|k| {
        let mut derivation = Vec::new();
        if !matches!(e, ClassExpr::Atom(_)) {
            derivation.push(format!("{e} = BCFL_{k}"));
        }
        if k % 2 == 1 {
            derivation.push(format!("R8: BCFL_{k} ⊆ BCFL_{}", k + 1));
        }
        if pad(k) >= 4 && pad(k) / 2 <= MAX_JOIN_TERMS {
            derivation.push(format!("R1: BCFL_{} = {}", pad(k), ClassExpr::join_of_bcfl2(pad(k) / 2)));
        }
        LevelBound {
            level: pad(k),
            derivation,
            grounded: false,
        }
    });
    let mut trace = Vec::new();
    let mut total = 0;
    let mut grounded = false;
    let mut derived = true;
    let terms = dnf(e, false);
    for conj in &terms {
        trace.push(format!("term {}", show(conj)));
        match conjunct_bound(conj, &mut trace) {
            Some((level, g)) if level <= MAX_LEVEL - total => {
                total += level;
                grounded |= g;
            }
            Some(_) => {
                trace.push(format!("bound exceeds {MAX_LEVEL}"));
                derived = false;
                break;
            }
            None => {
                derived = false;
                break;
            }
        }
    }
    if terms.len() > 1 && derived {
        trace.push(format!("R6: join of {} terms ⊆ BCFL_{total}", terms.len()));
    }
    let from_terms = derived.then_some(LevelBound {
        level: total,
        derivation: trace,
        grounded,
    });
    match (exact, from_terms) {
        (Some(a), Some(b)) => Ok(if b.level < a.level { b } else { a }),
        (Some(a), None) | (None, Some(a)) => Ok(a),
        (None, None) => Err(HierarchyError::NoBoundDerived(e.to_string())),
    }
}

/// Rewrites `e` to `⋁_{i=1}^{ℓ} BCFL₂` with `2ℓ = level_bound(e)`.
pub fn normalize(e: &ClassExpr) -> Result<ClassExpr, HierarchyError> {
    let bound = level_bound(e)?;
    if bound.level / 2 > MAX_JOIN_TERMS {
        return Err(HierarchyError::JoinTooLarge {
            level: bound.level,
            limit: MAX_JOIN_TERMS,
        });
    }
    Ok(ClassExpr::join_of_bcfl2(bound.level / 2))
}
