//! Fixture corpus: entry files with expected values, and seeded random
//! divides.
//!
//! An entry is a DIV1 file. Lines starting with `#@` carry metadata that the
//! divide parser sees as comments:
//!
//! ```text
//! #@ expect c2 5 paper
//! #@ expect jminus -6 derived
//! #@ skip j2
//! #@ script
//! #@ st + gain 0:1
//! #@   iso 1 mark
//! ```
//!
//! Each expectation names a quantity and an integer value, tagged with where
//! the value comes from.
//! The lines after `#@ script` up to the end of the metadata form a
//! reduction script. Indentation after the single space following `#@`
//! marks sub-scripts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::divide::{validate, Divide};
use crate::word::{parse_divide, DivideWord, Event, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Paper,
    Derived,
    Trivial,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "paper",
            Provenance::Derived => "derived",
            Provenance::Trivial => "trivial",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub value: i64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub source: String,
    pub word: DivideWord,
    /// Reduction script text, if the entry ships one.
    pub script: Option<String>,
    pub expected: BTreeMap<String, Expected>,
    pub skip: Vec<String>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: line {line}: {msg}")]
    Meta { path: String, line: usize, msg: String },
}

impl CorpusEntry {
    pub fn parse(path: &str, source: &str) -> Result<Self, CorpusError> {
        let word = parse_divide(source).map_err(|e| CorpusError::Parse { path: path.into(), source: e })?;
        let mut expected = BTreeMap::new();
        let mut skip = Vec::new();
        let mut script: Option<String> = None;
        for (n, line) in source.lines().enumerate() {
            let Some(meta) = line.strip_prefix("#@") else { continue };
            let err = |msg: &str| CorpusError::Meta { path: path.into(), line: n + 1, msg: msg.into() };
            if let Some(s) = script.as_mut() {
                s.push_str(meta.strip_prefix(' ').unwrap_or(meta).trim_end());
                s.push('\n');
                continue;
            }
            let toks: Vec<&str> = meta.split_whitespace().collect();
            match toks.as_slice() {
                ["expect", key, value, prov] => {
                    let value = value.parse().map_err(|_| err("expected an integer value"))?;
                    let provenance = match *prov {
                        "paper" => Provenance::Paper,
                        "derived" => Provenance::Derived,
                        "trivial" => Provenance::Trivial,
                        _ => return Err(err("provenance must be paper, derived or trivial")),
                    };
                    expected.insert(key.to_string(), Expected { value, provenance });
                }
                ["skip", what] => skip.push(what.to_string()),
                ["script"] => script = Some(String::new()),
                [] => {}
                _ => return Err(err("unknown metadata line")),
            }
        }
        Ok(CorpusEntry { name: word.name.clone(), source: source.into(), word, script, expected, skip })
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let p = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CorpusError::Io { path: p.clone(), source: e })?;
        Self::parse(&p, &text)
    }

    pub fn skips(&self, what: &str) -> bool {
        self.skip.iter().any(|s| s == what)
    }
}

/// A file name with its parsed entry or the reason it failed to parse.
pub type Loaded = (String, Result<CorpusEntry, CorpusError>);

/// All `.div` files of a directory, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<Loaded>, CorpusError> {
    let io = |e| CorpusError::Io { path: dir.display().to_string(), source: e };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "div"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), CorpusEntry::load(&p)))
        .collect())
}

/// Shape of random divides.
#[derive(Debug, Clone, Copy)]
pub struct RandomParams {
    pub branches: usize,
    pub max_events: usize,
    pub max_strands: u32,
    pub max_delta: usize,
}

/// A random connected divide with the requested number of branches, or `None` if the
/// sampler did not hit one within its attempt budget.
pub fn random_divide(rng: &mut impl Rng, p: RandomParams, name: &str) -> Option<Divide> {
    for _ in 0..10_000 {
        let left = rng.gen_range(0..=p.branches.min(p.max_strands as usize) as u32);
        let mut c = left;
        let mut events = Vec::new();
        let len = rng.gen_range(1..=p.max_events);
        for _ in 0..len {
            let mut options = Vec::new();
            if c + 2 <= p.max_strands {
                options.extend((1..=c + 1).map(Event::Birth));
            }
            if c >= 2 {
                options.extend((1..c).map(Event::Death));
                for i in 1..c {
                    // Crossings are weighted up so that small words still
                    // carry double points.
                    options.extend([Event::Cross(i); 2]);
                }
            }
            if options.is_empty() {
                break;
            }
            let e = options[rng.gen_range(0..options.len())];
            c = (c as i64 + e.delta_count()) as u32;
            events.push(e);
        }
        if left + c == 0 {
            continue;
        }
        let word = DivideWord::new(name.to_string(), left, events).ok()?;
        let Ok(d) = validate(&word) else { continue };
        if d.branch_count() == p.branches && d.is_connected() && d.delta >= 1 && d.delta <= p.max_delta {
            return Some(d);
        }
    }
    None
}

/// `count` distinct random divides from a fixed seed.
pub fn random_family(seed: u64, count: usize, p: RandomParams, prefix: &str) -> Vec<Divide> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Divide> = Vec::new();
    let mut guard = 0;
    while out.len() < count && guard < 100 * count {
        guard += 1;
        let name = format!("{prefix}{:02}", out.len());
        if let Some(d) = random_divide(&mut rng, p, &name) {
            if out.iter().all(|o| o.word.compact() != d.word.compact()) {
                out.push(d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metadata_round_trip() {
        let src = "#@ expect c2 5 paper\n#@ skip j2\ndivide t\nleft 1\nevents:\nb 2\nx 1\nd 2\nright 1\nend\n#@ script\n#@   tri 1\n";
        let e = CorpusEntry::parse("t.div", src).unwrap();
        assert_eq!(e.expected["c2"], Expected { value: 5, provenance: Provenance::Paper });
        assert!(e.skips("j2"));
        assert_eq!(e.script.as_deref(), Some("  tri 1\n"));
    }

    #[test]
    fn bad_metadata_names_line() {
        let src = "divide t\nleft 1\nevents:\nright 1\nend\n#@ expect c2 five paper\n";
        let err = CorpusEntry::parse("t.div", src).unwrap_err();
        assert!(err.to_string().contains("line 6"), "{err}");
    }

    #[test]
    fn random_divides_are_seeded() {
        let p = RandomParams { branches: 1, max_events: 8, max_strands: 4, max_delta: 4 };
        let a = random_family(7, 5, p, "r");
        let b = random_family(7, 5, p, "r");
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|d| d.branch_count() == 1));
    }
}
