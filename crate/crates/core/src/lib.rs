//! Regular-language dissection: ultimately periodic length sets, semi-linear
//! sets, DFAs, grammars, and certificate-producing dissectors, separators and
//! hierarchy bounds built on them.

pub mod alphabet;
pub mod automata;
pub mod corpus;
pub mod dissector;
pub mod error;
pub mod grammar;
pub mod hierarchy;
pub mod language;
pub mod semilinear;
pub mod separation;
pub mod upsets;

pub use alphabet::Alphabet;
pub use automata::Dfa;
pub use dissector::{DissectConfig, DissectionCertificate, Verdict};
pub use grammar::ContextFreeGrammar;
pub use hierarchy::ClassExpr;
pub use language::{Builtin, LanguageHandle};
pub use semilinear::{LinearSet, SemiLinearSet};
pub use upsets::{ArithmeticProgression, UltimatelyPeriodicSet};
