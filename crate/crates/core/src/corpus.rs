//! Bundled example grammars.

use crate::error::GrammarError;
use crate::language::LanguageHandle;

pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub text: &'static str,
    /// A corpus language known to contain this one.
    pub contained_in: Option<&'static str>,
}

impl CorpusEntry {
    pub fn handle(&self) -> Result<LanguageHandle, GrammarError> {
        LanguageHandle::parse_grammar(self.name, self.text)
    }
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "l1",
        description: "0^n 1^n",
        text: include_str!("../corpus/l1.cfg"),
        contained_in: Some("zero_star_one_star"),
    },
    CorpusEntry {
        name: "l1_even",
        description: "0^n 1^n, n even",
        text: include_str!("../corpus/l1_even.cfg"),
        contained_in: Some("l1"),
    },
    CorpusEntry {
        name: "l1_rev",
        description: "1^n 0^n",
        text: include_str!("../corpus/l1_rev.cfg"),
        contained_in: None,
    },
    CorpusEntry {
        name: "ss_aa",
        description: "S -> SS | aa",
        text: include_str!("../corpus/ss_aa.cfg"),
        contained_in: Some("a_star"),
    },
    CorpusEntry {
        name: "dyck",
        description: "balanced parentheses",
        text: include_str!("../corpus/dyck.cfg"),
        contained_in: None,
    },
    CorpusEntry {
        name: "a_star",
        description: "a*",
        text: include_str!("../corpus/a_star.cfg"),
        contained_in: None,
    },
    CorpusEntry {
        name: "zero_star_one_star",
        description: "0* 1*",
        text: include_str!("../corpus/zero_star_one_star.cfg"),
        contained_in: None,
    },
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}
