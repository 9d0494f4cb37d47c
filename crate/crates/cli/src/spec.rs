//! Language specs on the command line.
//!
//! ```text
//! spec := builtin:NAME | grammar:PATH | corpus:NAME
//!       | union(spec, spec) | diff(spec, spec) | inter(spec, dfa:PATH) | rev(spec)
//! ```

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use dissect_core::automata::Dfa;
use dissect_core::corpus;
use dissect_core::language::{Builtin, LanguageHandle};

pub fn load_grammar(path: &Path) -> Result<LanguageHandle> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read grammar {}", path.display()))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("grammar");
    LanguageHandle::parse_grammar(name, &text).with_context(|| format!("in {}", path.display()))
}

pub fn load_dfa(path: &Path) -> Result<Dfa> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read automaton {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed automaton in {}", path.display()))
}

pub fn parse(spec: &str) -> Result<LanguageHandle> {
    let mut p = SpecParser { src: spec, pos: 0 };
    let h = p.language()?;
    p.skip_ws();
    if p.pos != spec.len() {
        bail!("trailing input in spec at byte {}: {:?}", p.pos, &spec[p.pos..]);
    }
    Ok(h)
}

struct SpecParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> SpecParser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            bail!("expected {c:?} at byte {} of spec", self.pos)
        }
    }

    /// Text up to the next `,` or `)` at nesting depth zero.
    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find([',', ')']).unwrap_or(rest.len());
        self.pos += end;
        rest[..end].trim_end()
    }

    fn language(&mut self) -> Result<LanguageHandle> {
        self.skip_ws();
        for (func, arity) in [("union", 2), ("diff", 2), ("inter", 2), ("rev", 1)] {
            let open = format!("{func}(");
            if !self.rest().starts_with(&open) {
                continue;
            }
            self.pos += open.len();
            let first = self.language()?;
            let out = match (func, arity) {
                ("rev", _) => first.reverse(),
                ("inter", _) => {
                    self.expect(',')?;
                    let w = self.word();
                    let path = w.strip_prefix("dfa:").ok_or_else(|| anyhow!("inter needs dfa:PATH, got {w:?}"))?;
                    first.intersect_dfa(&load_dfa(Path::new(path))?)?
                }
                _ => {
                    self.expect(',')?;
                    let second = self.language()?;
                    if func == "union" {
                        first.union(&second)?
                    } else {
                        first.difference(&second)?
                    }
                }
            };
            self.expect(')')?;
            return Ok(out);
        }
        let w = self.word();
        let (kind, arg) = w.split_once(':').ok_or_else(|| anyhow!("unrecognized language spec {w:?}"))?;
        match kind {
            "builtin" => Ok(LanguageHandle::builtin(Builtin::from_name(arg)?)),
            "grammar" => load_grammar(Path::new(arg)),
            "corpus" => {
                let entry = corpus::find(arg).ok_or_else(|| anyhow!("no corpus grammar named {arg:?}"))?;
                Ok(entry.handle()?)
            }
            _ => bail!("unknown spec kind {kind:?}"),
        }
    }
}
