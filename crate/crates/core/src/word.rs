//! Morse words: the column-by-column encoding of a divide in a rectangle.
//!
//! A word is swept left to right. Between two consecutive events every strand
//! is horizontal; heights are 1-based and counted bottom to top. The DIV1
//! text format is a line-oriented serialization of a word:
//!
//! ```text
//! divide curl
//! left 1
//! events:
//! b 2
//! x 1
//! d 2
//! right 1
//! end
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// One column of a Morse word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Event {
    /// A left-facing turn `⊂` creating two adjacent strands at `pos`, `pos + 1`.
    Birth(u32),
    /// A right-facing turn `⊃` joining strands `pos` and `pos + 1`.
    Death(u32),
    /// A transverse double point between strands `pos` and `pos + 1`.
    Cross(u32),
}

impl Event {
    pub fn pos(self) -> u32 {
        match self {
            Event::Birth(p) | Event::Death(p) | Event::Cross(p) => p,
        }
    }

    /// Change in the number of strands across this column.
    pub fn delta_count(self) -> i64 {
        match self {
            Event::Birth(_) => 2,
            Event::Death(_) => -2,
            Event::Cross(_) => 0,
        }
    }

    pub fn is_cross(self) -> bool {
        matches!(self, Event::Cross(_))
    }

    pub(crate) fn with_pos(self, pos: u32) -> Event {
        match self {
            Event::Birth(_) => Event::Birth(pos),
            Event::Death(_) => Event::Death(pos),
            Event::Cross(_) => Event::Cross(pos),
        }
    }

    /// The top-bottom mirror of this event in a column with `count` strands
    /// on its left side.
    pub(crate) fn mirrored(self, count: u32) -> Event {
        match self {
            Event::Birth(p) => Event::Birth(count + 2 - p),
            Event::Death(p) => Event::Death(count - p),
            Event::Cross(p) => Event::Cross(count - p),
        }
    }

    fn letter(self) -> char {
        match self {
            Event::Birth(_) => 'b',
            Event::Death(_) => 'd',
            Event::Cross(_) => 'x',
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.letter(), self.pos())
    }
}

/// Why an event cannot be applied to the strands present at its column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("event {index} ({event}) needs {needed} strands but only {available} are present")]
    Underflow {
        index: usize,
        event: Event,
        needed: u32,
        available: u32,
    },
    #[error("event {index} ({event}) is out of range for {available} strands")]
    OutOfRange {
        index: usize,
        event: Event,
        available: u32,
    },
    #[error("word ends with {actual} strands but declares right {declared}")]
    RightMismatch { declared: u32, actual: u32 },
}

/// A structurally well-formed Morse word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivideWord {
    pub name: String,
    pub left: u32,
    pub events: Vec<Event>,
    pub right: u32,
}

impl DivideWord {
    /// Builds a word and checks strand counts. `right` is inferred.
    pub fn new(name: impl Into<String>, left: u32, events: Vec<Event>) -> Result<Self, WordError> {
        let counts = strand_counts(left, &events)?;
        Ok(DivideWord {
            name: name.into(),
            left,
            right: *counts.last().unwrap(),
            events,
        })
    }

    /// Number of strands in each gap; `counts()[g]` is the gap left of column `g`.
    pub fn counts(&self) -> Vec<u32> {
        strand_counts(self.left, &self.events).expect("validated word")
    }

    pub fn crossings(&self) -> usize {
        self.events.iter().filter(|e| e.is_cross()).count()
    }

    /// The word of the left-right reflected layout.
    pub fn reversed(&self) -> DivideWord {
        let events = self
            .events
            .iter()
            .rev()
            .map(|&e| match e {
                Event::Birth(p) => Event::Death(p),
                Event::Death(p) => Event::Birth(p),
                x => x,
            })
            .collect();
        DivideWord {
            name: format!("{}-reversed", self.name),
            left: self.right,
            events,
            right: self.left,
        }
    }

    /// The word of the top-bottom reflected layout.
    pub fn mirrored(&self) -> DivideWord {
        let counts = self.counts();
        let events = self
            .events
            .iter()
            .zip(&counts)
            .map(|(e, &c)| e.mirrored(c))
            .collect();
        DivideWord {
            name: format!("{}-mirror", self.name),
            left: self.left,
            events,
            right: self.right,
        }
    }

    /// Compact one-line form, e.g. `left 1 / b 2; x 1; d 2 / right 1`.
    pub fn compact(&self) -> String {
        let body: Vec<String> = self.events.iter().map(|e| e.to_string()).collect();
        format!("left {} / {} / right {}", self.left, body.join("; "), self.right)
    }

    /// Parses the compact one-line form produced by [`DivideWord::compact`].
    pub fn from_compact(name: &str, text: &str) -> Result<Self, ParseError> {
        let parts: Vec<&str> = text.split('/').map(str::trim).collect();
        let err = |msg: &str| ParseError::new(1, 1, ParseErrorKind::Syntax(msg.to_string()));
        if parts.len() != 3 {
            return Err(err("expected `left k / events / right m`"));
        }
        let left = parse_keyword_count(parts[0], "left").ok_or_else(|| err("bad left clause"))?;
        let right = parse_keyword_count(parts[2], "right").ok_or_else(|| err("bad right clause"))?;
        let mut events = Vec::new();
        for tok in parts[1].split(';').map(str::trim).filter(|t| !t.is_empty()) {
            events.push(parse_event(tok).ok_or_else(|| err(&format!("bad event `{tok}`")))?);
        }
        let word = DivideWord::new(name, left, events)
            .map_err(|e| ParseError::new(1, 1, ParseErrorKind::Word(e)))?;
        if word.right != right {
            return Err(ParseError::new(
                1,
                1,
                ParseErrorKind::Word(WordError::RightMismatch {
                    declared: right,
                    actual: word.right,
                }),
            ));
        }
        Ok(word)
    }

    /// Serializes to DIV1.
    pub fn to_div1(&self) -> String {
        let mut out = format!("divide {}\nleft {}\nevents:\n", self.name, self.left);
        for e in &self.events {
            out.push_str(&format!("{e}\n"));
        }
        out.push_str(&format!("right {}\nend\n", self.right));
        out
    }
}

fn parse_keyword_count(s: &str, kw: &str) -> Option<u32> {
    let mut it = s.split_whitespace();
    if it.next()? != kw {
        return None;
    }
    let n = it.next()?.parse().ok()?;
    it.next().is_none().then_some(n)
}

fn parse_event(tok: &str) -> Option<Event> {
    let mut it = tok.split_whitespace();
    let kind = it.next()?;
    let pos: u32 = it.next()?.parse().ok()?;
    if it.next().is_some() || pos == 0 {
        return None;
    }
    match kind {
        "b" => Some(Event::Birth(pos)),
        "d" => Some(Event::Death(pos)),
        "x" => Some(Event::Cross(pos)),
        _ => None,
    }
}

/// Strand counts per gap, checking every event against the strands present.
pub fn strand_counts(left: u32, events: &[Event]) -> Result<Vec<u32>, WordError> {
    let mut counts = Vec::with_capacity(events.len() + 1);
    let mut c = left;
    counts.push(c);
    for (index, &event) in events.iter().enumerate() {
        let p = event.pos();
        match event {
            Event::Birth(_) => {
                if p == 0 || p > c + 1 {
                    return Err(WordError::OutOfRange { index, event, available: c });
                }
                c += 2;
            }
            Event::Death(_) | Event::Cross(_) => {
                if c < 2 {
                    return Err(WordError::Underflow { index, event, needed: 2, available: c });
                }
                if p == 0 || p + 1 > c {
                    return Err(WordError::OutOfRange { index, event, available: c });
                }
                if matches!(event, Event::Death(_)) {
                    c -= 2;
                }
            }
        }
        counts.push(c);
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Word(WordError),
}

/// A DIV1 parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}

/// Parses DIV1 source text.
pub fn parse_divide(text: &str) -> Result<DivideWord, ParseError> {
    // (line number, column of first token, tokens)
    let lines: Vec<(usize, usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.is_empty() {
                return None;
            }
            let col = body.len() - body.trim_start().len() + 1;
            Some((i + 1, col, toks))
        })
        .collect();

    let syntax = |line: usize, col: usize, msg: String| {
        ParseError::new(line, col, ParseErrorKind::Syntax(msg))
    };
    let eof_line = text.lines().count().max(1);
    let mut it = lines.iter().peekable();

    let name = match it.next() {
        Some((l, c, t)) if t.len() == 2 && t[0] == "divide" => {
            let _ = (l, c);
            t[1].to_string()
        }
        Some((l, c, _)) => return Err(syntax(*l, *c, "expected `divide <name>`".into())),
        None => return Err(syntax(eof_line, 1, "empty input".into())),
    };
    let left = match it.next() {
        Some((l, c, t)) => {
            if t.len() != 2 || t[0] != "left" {
                return Err(syntax(*l, *c, "expected `left <k>`".into()));
            }
            t[1].parse::<u32>()
                .map_err(|_| syntax(*l, *c, format!("bad strand count `{}`", t[1])))?
        }
        None => return Err(syntax(eof_line, 1, "missing `left` line".into())),
    };
    match it.next() {
        Some((_, _, t)) if t.len() == 1 && t[0] == "events:" => {}
        Some((l, c, _)) => return Err(syntax(*l, *c, "expected `events:`".into())),
        None => return Err(syntax(eof_line, 1, "missing `events:` line".into())),
    }

    let mut events = Vec::new();
    let mut event_lines = Vec::new();
    let mut right = None;
    for (l, c, t) in it.by_ref() {
        if t[0] == "right" {
            if t.len() != 2 {
                return Err(syntax(*l, *c, "expected `right <m>`".into()));
            }
            let m = t[1]
                .parse::<u32>()
                .map_err(|_| syntax(*l, *c, format!("bad strand count `{}`", t[1])))?;
            right = Some((m, *l, *c));
            break;
        }
        let joined = t.join(" ");
        let ev = parse_event(&joined)
            .ok_or_else(|| syntax(*l, *c, format!("bad event `{joined}`")))?;
        events.push(ev);
        event_lines.push((*l, *c));
    }
    let (right, rl, rc) = right.ok_or_else(|| syntax(eof_line, 1, "missing `right` line".into()))?;
    match it.next() {
        Some((_, _, t)) if t.len() == 1 && t[0] == "end" => {}
        Some((l, c, _)) => return Err(syntax(*l, *c, "expected `end`".into())),
        None => return Err(syntax(eof_line, 1, "missing `end`".into())),
    }
    if let Some((l, c, _)) = it.next() {
        return Err(syntax(*l, *c, "trailing content after `end`".into()));
    }

    let word = DivideWord::new(name, left, events).map_err(|e| {
        let (l, c) = match &e {
            WordError::Underflow { index, .. } | WordError::OutOfRange { index, .. } => {
                event_lines[*index]
            }
            WordError::RightMismatch { .. } => (rl, rc),
        };
        ParseError::new(l, c, ParseErrorKind::Word(e))
    })?;
    if word.right != right {
        return Err(ParseError::new(
            rl,
            rc,
            ParseErrorKind::Word(WordError::RightMismatch {
                declared: right,
                actual: word.right,
            }),
        ));
    }
    Ok(word)
}

impl FromStr for DivideWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_divide(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn div1(left: u32, events: &str, right: u32) -> String {
        let body: String = events
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| format!("{s}\n"))
            .collect();
        format!("divide t\nleft {left}\nevents:\n{body}right {right}\nend\n")
    }

    #[test]
    fn embedded_arc() {
        let w = parse_divide(&div1(1, "", 1)).unwrap();
        assert!(w.events.is_empty());
        assert_eq!(w.left, 1);
        assert_eq!(w.right, 1);
    }

    #[test]
    fn curl_word() {
        let w = parse_divide(&div1(1, "b 1; x 2; d 1", 1)).unwrap();
        assert_eq!(w.events, vec![Event::Birth(1), Event::Cross(2), Event::Death(1)]);
        assert_eq!(w.counts(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn cross_needs_two_strands() {
        let err = parse_divide(&div1(1, "x 1", 1)).unwrap_err();
        assert_eq!(err.line, 4);
        assert!(matches!(err.kind, ParseErrorKind::Word(WordError::Underflow { .. })));
    }

    #[test]
    fn out_of_range_and_mismatch() {
        let err = parse_divide(&div1(2, "x 2", 2)).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Word(WordError::OutOfRange { .. })));
        let err = parse_divide(&div1(1, "b 1", 1)).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(matches!(err.kind, ParseErrorKind::Word(WordError::RightMismatch { .. })));
    }

    #[test]
    fn comments_and_columns() {
        let text = "# a curl\ndivide c # name\nleft 1\nevents:\n  b 2\n  q 1\nright 1\nend\n";
        let err = parse_divide(text).unwrap_err();
        assert_eq!((err.line, err.column), (6, 3));
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn missing_end() {
        let err = parse_divide("divide a\nleft 1\nevents:\nright 1\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn div1_round_trip() {
        let w = DivideWord::from_compact("e6", "left 1 / b 2; x 1; x 2; x 1; d 2 / right 1").unwrap();
        assert_eq!(parse_divide(&w.to_div1()).unwrap(), w);
    }

    #[test]
    fn mirror_is_involution() {
        let w = DivideWord::from_compact("w", "left 1 / b 1; b 1; x 2; d 2; x 1; d 2 / right 1").unwrap();
        let mut back = w.mirrored().mirrored();
        back.name = w.name.clone();
        assert_eq!(back, w);
    }
}
