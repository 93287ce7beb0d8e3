//! Moves between divides, and the second-order invariant J±₂ they compute.
//!
//! Every move rewrites a few consecutive events of the Morse word. A move
//! carries its certificate: the position, the events it expects there and
//! the events it puts in their place. Applying the reversed certificate
//! undoes it.
//!
//! Self-tangencies appear in two local shapes. A bigon `x i; x i` shrinks
//! away between two neighbouring strands. A strand crossing both legs of a
//! turn, as in `b i; x i+1; x i`, slides off the tip and leaves `b i+1`.
//! In both cases the side with fewer double points shows the two strands
//! side by side in one gap; that gap and height locate the tangency.
//!
//! A divide with one marked self-tangency is stored by its resolution with
//! fewer double points together with that location.

use std::collections::{BinaryHeap, HashMap, HashSet};
use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::divide::{validate, Divide, DivideError};
use crate::word::{DivideWord, Event};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Style {
    /// The touching strands run the same way.
    Direct,
    /// The touching strands run opposite ways.
    Inverse,
}

impl Style {
    pub fn symbol(self) -> char {
        match self {
            Style::Direct => '+',
            Style::Inverse => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Gain2,
    Lose2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rewrite {
    /// Two events on separate strands change order.
    Commute,
    /// A crossing on one leg of a turn moves to the other leg.
    Slide,
    /// A birth and a death forming an S are straightened out.
    Zigzag,
    /// An S is put into a strand, bending up or down.
    Unzigzag { up: bool },
    /// The marked tangency moves past the next event.
    Mark,
    /// A third strand passes through the marked tangency.
    MarkThrough,
}

impl Rewrite {
    pub fn id(self) -> &'static str {
        match self {
            Rewrite::Commute => "commute",
            Rewrite::Slide => "slide",
            Rewrite::Zigzag => "zigzag",
            Rewrite::Unzigzag { up: true } => "unzigzag-up",
            Rewrite::Unzigzag { up: false } => "unzigzag-down",
            Rewrite::Mark => "mark",
            Rewrite::MarkThrough => "mark-through",
        }
    }

    fn from_id(s: &str) -> Option<Self> {
        Some(match s {
            "commute" => Rewrite::Commute,
            "slide" => Rewrite::Slide,
            "zigzag" => Rewrite::Zigzag,
            "unzigzag-up" => Rewrite::Unzigzag { up: true },
            "unzigzag-down" => Rewrite::Unzigzag { up: false },
            "mark" => Rewrite::Mark,
            "mark-through" => Rewrite::MarkThrough,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    IsotopyRewrite(Rewrite),
    SelfTangency { style: Style, direction: Direction },
    TriplePoint,
}

/// Where a move acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    /// Starting at an event.
    Event(usize),
    /// Between strands `height` and `height + 1` of a gap.
    Gap { gap: usize, height: u32 },
    /// At the turn at `event`, against a strand above or below it.
    Turn { event: usize, above: bool },
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Site::Event(k) => write!(f, "{k}"),
            Site::Gap { gap, height } => write!(f, "{gap}:{height}"),
            Site::Turn { event, above } => write!(f, "{event}:{}", if above { "above" } else { "below" }),
        }
    }
}

impl FromStr for Site {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad site `{s}`");
        match s.split_once(':') {
            None => s.parse().map(Site::Event).map_err(|_| bad()),
            Some((a, b)) => {
                let k: usize = a.parse().map_err(|_| bad())?;
                match b {
                    "above" => Ok(Site::Turn { event: k, above: true }),
                    "below" => Ok(Site::Turn { event: k, above: false }),
                    _ => Ok(Site::Gap { gap: k, height: b.parse().map_err(|_| bad())? }),
                }
            }
        }
    }
}

/// A tangency seen from its resolution with fewer double points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tangency {
    pub gap: usize,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    pub site: Site,
    /// Index of the first replaced event.
    pub at: usize,
    pub before: Vec<Event>,
    pub after: Vec<Event>,
    /// For self-tangencies: the tangency in the word without the bigon.
    pub tangency: Option<Tangency>,
}

impl Move {
    /// The move that undoes this one.
    pub fn inverse(&self) -> Move {
        let kind = match self.kind {
            MoveKind::SelfTangency { style, direction } => MoveKind::SelfTangency {
                style,
                direction: match direction {
                    Direction::Gain2 => Direction::Lose2,
                    Direction::Lose2 => Direction::Gain2,
                },
            },
            k => k,
        };
        Move {
            kind,
            site: self.site,
            at: self.at,
            before: self.after.clone(),
            after: self.before.clone(),
            tangency: self.tangency,
        }
    }

    pub fn delta_change(&self) -> i64 {
        let crosses = |v: &[Event]| v.iter().filter(|e| e.is_cross()).count() as i64;
        crosses(&self.after) - crosses(&self.before)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move certificate does not match the word at event {0}")]
    Stale(usize),
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error("the move would split the marked tangency")]
    SplitsMark,
}

/// Swaps two adjacent events acting on separate strands, if they do.
pub fn commute(a: Event, b: Event) -> Option<(Event, Event)> {
    use Event::*;
    match (a, b) {
        (Cross(p), Cross(q)) => (p.abs_diff(q) >= 2).then_some((b, a)),
        (Cross(p), Birth(q)) => {
            if q <= p {
                Some((Birth(q), Cross(p + 2)))
            } else if q >= p + 2 {
                Some((b, a))
            } else {
                None
            }
        }
        (Cross(p), Death(q)) => {
            if q + 2 <= p {
                Some((b, Cross(p - 2)))
            } else if q >= p + 2 {
                Some((b, a))
            } else {
                None
            }
        }
        (Birth(p), Cross(q)) => {
            if q + 2 <= p {
                Some((b, a))
            } else if q >= p + 2 {
                Some((Cross(q - 2), a))
            } else {
                None
            }
        }
        (Birth(p), Birth(q)) => {
            if q <= p {
                Some((b, Birth(p + 2)))
            } else if q >= p + 2 {
                Some((Birth(q - 2), a))
            } else {
                None
            }
        }
        (Birth(p), Death(q)) => {
            if q + 2 <= p {
                Some((b, Birth(p - 2)))
            } else if q >= p + 2 {
                Some((Death(q - 2), a))
            } else {
                None
            }
        }
        (Death(p), Cross(q)) => {
            if q + 2 <= p {
                Some((b, a))
            } else if q >= p {
                Some((Cross(q + 2), a))
            } else {
                None
            }
        }
        (Death(p), Birth(q)) => {
            if q <= p {
                Some((b, Death(p + 2)))
            } else {
                Some((Birth(q + 2), a))
            }
        }
        (Death(p), Death(q)) => {
            if q + 2 <= p {
                Some((b, Death(p - 2)))
            } else if q >= p {
                Some((Death(q + 2), a))
            } else {
                None
            }
        }
    }
}

/// Which kinds of move to list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveOptions {
    /// Moves that add two double points.
    pub gains: bool,
    /// Moves that add an S to a strand.
    pub unzigzags: bool,
}

impl Default for MoveOptions {
    fn default() -> Self {
        MoveOptions { gains: true, unzigzags: true }
    }
}

/// All moves applicable to the divide.
pub fn enumerate_moves(d: &Divide) -> Vec<Move> {
    enumerate_moves_with(d, MoveOptions::default())
}

pub fn enumerate_moves_with(d: &Divide, opts: MoveOptions) -> Vec<Move> {
    use Event::*;
    let ev = &d.word.events;
    let counts = d.word.counts();
    let dirs = d.directions();
    let style = |fewer_dirs: &[Vec<bool>], t: Tangency| {
        let row = &fewer_dirs[t.gap];
        if row[t.height as usize - 1] == row[t.height as usize] {
            Style::Direct
        } else {
            Style::Inverse
        }
    };
    let mut out = Vec::new();
    let mut push = |kind, site, at: usize, before: &[Event], after: Vec<Event>, tangency| {
        out.push(Move { kind, site, at, before: before.to_vec(), after, tangency });
    };
    let iso = MoveKind::IsotopyRewrite;
    for k in 0..ev.len() {
        if k + 1 < ev.len() {
            let pair = &ev[k..k + 2];
            if let Some((b, a)) = commute(pair[0], pair[1]) {
                push(iso(Rewrite::Commute), Site::Event(k), k, pair, vec![b, a], None);
            }
            let slid = match (pair[0], pair[1]) {
                (Birth(j), Cross(c)) if c == j + 1 => Some(vec![Birth(j + 1), Cross(j)]),
                (Birth(j), Cross(c)) if c + 1 == j => Some(vec![Birth(j - 1), Cross(j)]),
                (Cross(c), Death(j)) if j == c + 1 => Some(vec![Cross(c + 1), Death(c)]),
                (Cross(c), Death(j)) if j + 1 == c => Some(vec![Cross(c - 1), Death(c)]),
                _ => None,
            };
            if let Some(after) = slid {
                push(iso(Rewrite::Slide), Site::Event(k), k, pair, after, None);
            }
            if let (Birth(j), Death(e)) = (pair[0], pair[1]) {
                if e == j + 1 || e + 1 == j {
                    push(iso(Rewrite::Zigzag), Site::Event(k), k, pair, vec![], None);
                }
            }
        }
        if k + 2 < ev.len() {
            let t = &ev[k..k + 3];
            if let (Cross(a), Cross(b), Cross(c)) = (t[0], t[1], t[2]) {
                if a == c && a.abs_diff(b) == 1 {
                    push(MoveKind::TriplePoint, Site::Event(k), k, t, vec![Cross(b), Cross(a), Cross(b)], None);
                }
            }
        }
    }

    // Losing a bigon or a turn-crossing pair. The style is read on the result.
    let mut losses: Vec<(usize, usize, Vec<Event>, Tangency)> = Vec::new();
    for k in 0..ev.len() {
        if k + 1 < ev.len() {
            if let (Cross(a), Cross(b)) = (ev[k], ev[k + 1]) {
                if a == b {
                    losses.push((k, 2, vec![], Tangency { gap: k, height: a }));
                }
            }
        }
        if k + 2 < ev.len() {
            let lost = match (ev[k], ev[k + 1], ev[k + 2]) {
                (Birth(j), Cross(a), Cross(b)) if a == j + 1 && b == j => {
                    Some((Birth(j + 1), Tangency { gap: k + 1, height: j }))
                }
                (Birth(j), Cross(a), Cross(b)) if j >= 1 && a + 1 == j && b == j => {
                    Some((Birth(j - 1), Tangency { gap: k + 1, height: j }))
                }
                (Cross(a), Cross(b), Death(j)) if a == j && b == j + 1 => {
                    Some((Death(j + 1), Tangency { gap: k, height: j }))
                }
                (Cross(a), Cross(b), Death(j)) if a == j && b + 1 == j => {
                    Some((Death(j - 1), Tangency { gap: k, height: j }))
                }
                _ => None,
            };
            if let Some((e, t)) = lost {
                losses.push((k, 3, vec![e], t));
            }
        }
    }
    for (k, len, after, t) in losses {
        let mut events = ev.clone();
        events.splice(k..k + len, after.iter().copied());
        let Ok(fewer) = DivideWord::new(d.word.name.clone(), d.word.left, events).map_err(|_| ()).and_then(|w| validate(&w).map_err(|_| ())) else {
            continue;
        };
        let st = style(&fewer.directions(), t);
        push(
            MoveKind::SelfTangency { style: st, direction: Direction::Lose2 },
            Site::Event(k),
            k,
            &ev[k..k + len],
            after,
            Some(t),
        );
    }

    if opts.gains {
        let gain = |st| MoveKind::SelfTangency { style: st, direction: Direction::Gain2 };
        for (g, &c) in counts.iter().enumerate() {
            for h in 1..c {
                let t = Tangency { gap: g, height: h };
                push(gain(style(&dirs, t)), Site::Gap { gap: g, height: h }, g, &[], vec![Cross(h), Cross(h)], Some(t));
            }
        }
        for (k, &e) in ev.iter().enumerate() {
            let c = counts[k];
            match e {
                Birth(j) => {
                    if j >= 2 {
                        let t = Tangency { gap: k + 1, height: j - 1 };
                        push(gain(style(&dirs, t)), Site::Turn { event: k, above: false }, k, &[e], vec![Birth(j - 1), Cross(j), Cross(j - 1)], Some(t));
                    }
                    if j <= c {
                        let t = Tangency { gap: k + 1, height: j + 1 };
                        push(gain(style(&dirs, t)), Site::Turn { event: k, above: true }, k, &[e], vec![Birth(j + 1), Cross(j), Cross(j + 1)], Some(t));
                    }
                }
                Death(j) => {
                    if j >= 2 {
                        let t = Tangency { gap: k, height: j - 1 };
                        push(gain(style(&dirs, t)), Site::Turn { event: k, above: false }, k, &[e], vec![Cross(j - 1), Cross(j), Death(j - 1)], Some(t));
                    }
                    if j + 2 <= c {
                        let t = Tangency { gap: k, height: j + 1 };
                        push(gain(style(&dirs, t)), Site::Turn { event: k, above: true }, k, &[e], vec![Cross(j + 1), Cross(j), Death(j + 1)], Some(t));
                    }
                }
                Cross(_) => {}
            }
        }
    }

    if opts.unzigzags {
        for (g, &c) in counts.iter().enumerate() {
            for h in 1..=c {
                push(iso(Rewrite::Unzigzag { up: false }), Site::Gap { gap: g, height: h }, g, &[], vec![Birth(h), Death(h + 1)], None);
                push(iso(Rewrite::Unzigzag { up: true }), Site::Gap { gap: g, height: h }, g, &[], vec![Birth(h + 1), Death(h)], None);
            }
        }
    }
    out
}

/// Applies a move after checking its certificate.
pub fn apply_move(d: &Divide, m: &Move) -> Result<Divide, MoveError> {
    let ev = &d.word.events;
    let end = m.at + m.before.len();
    if end > ev.len() || ev[m.at..end] != m.before[..] {
        return Err(MoveError::Stale(m.at));
    }
    let mut events = ev.clone();
    events.splice(m.at..end, m.after.iter().copied());
    let word = DivideWord::new(d.word.name.clone(), d.word.left, events).map_err(|_| MoveError::Stale(m.at))?;
    Ok(validate(&word)?)
}

/// Position of every slot along the (single) branch: visit index and direction.
fn arc_positions(d: &Divide) -> Vec<Vec<(usize, bool)>> {
    let counts = d.word.counts();
    let mut pos: Vec<Vec<(usize, bool)>> = counts.iter().map(|&c| vec![(0, true); c as usize]).collect();
    for v in d.branches.iter().flat_map(|b| b.visits.iter()).enumerate() {
        let (i, v) = v;
        pos[v.slot.gap][v.slot.height as usize - 1] = (i, v.east);
    }
    pos
}

/// The two arc parameters of a tangency. `rank` orders points sharing a gap
/// from west (0) to east (1).
fn chord_of(pos: &[Vec<(usize, bool)>], t: Tangency, rank: usize) -> (usize, usize) {
    let at = |h: u32| {
        let (i, east) = pos[t.gap][h as usize - 1];
        4 * i + 1 + if east { rank } else { 1 - rank }
    };
    let (a, b) = (at(t.height), at(t.height + 1));
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Configuration {
    Disjoint,
    /// The chord at this position (0 or 1) is the outer one.
    Nested { outer: usize },
    Interleaved,
}

/// Two chords on an interval, in order of their first endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoChordDiagram {
    pub styles: [Style; 2],
    pub configuration: Configuration,
}

impl TwoChordDiagram {
    /// Builds the diagram from two chords given by their endpoint parameters.
    pub fn from_chords(a: (usize, usize), sa: Style, b: (usize, usize), sb: Style) -> Self {
        let ((a, sa), (b, sb)) = if a.0 <= b.0 { ((a, sa), (b, sb)) } else { ((b, sb), (a, sa)) };
        let configuration = if a.1 < b.0 {
            Configuration::Disjoint
        } else if b.1 < a.1 {
            Configuration::Nested { outer: 0 }
        } else {
            Configuration::Interleaved
        };
        TwoChordDiagram { styles: [sa, sb], configuration }
    }
}

/// Signed Gauss word of a one-branch divide, read from whichever end gives
/// the smaller word. Each passage through a double point contributes its
/// label (by first appearance), the sign of the crossing and whether the
/// double point is one of `marked`. Two arcs in the disk are isotopic
/// exactly when their codes agree.
pub fn curve_code(d: &Divide, marked: &[usize]) -> Vec<u32> {
    let ev = &d.word.events;
    let mut passes: Vec<(usize, (i64, i64))> = Vec::new();
    for b in &d.branches {
        for w in b.visits.windows(2) {
            if let Some(col) = crate::divide::crossing_between(ev, w[0], w[1]) {
                let dx = if w[0].slot.gap == col { 1 } else { -1 };
                let dy = w[1].slot.height as i64 - w[0].slot.height as i64;
                passes.push((col, (dx, dy)));
            }
        }
    }
    let read = |order: &mut dyn Iterator<Item = (usize, (i64, i64))>, flip: i64| {
        let list: Vec<_> = order.collect();
        let mut first: HashMap<usize, (u32, (i64, i64))> = HashMap::new();
        let mut sign: HashMap<usize, bool> = HashMap::new();
        for &(col, v) in &list {
            let v = (v.0 * flip, v.1 * flip);
            match first.get(&col) {
                None => {
                    let n = first.len() as u32;
                    first.insert(col, (n, v));
                }
                Some(&(_, u)) => {
                    sign.insert(col, u.0 * v.1 - u.1 * v.0 > 0);
                }
            }
        }
        list.iter()
            .map(|&(col, _)| first[&col].0 * 4 + 2 * sign[&col] as u32 + marked.contains(&col) as u32)
            .collect::<Vec<u32>>()
    };
    let fwd = read(&mut passes.iter().copied(), 1);
    let back = read(&mut passes.iter().rev().copied(), -1);
    fwd.min(back)
}

/// A divide with one marked self-tangency, stored as its resolution with
/// fewer double points and the location of the tangency there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularDivide {
    pub fewer: Divide,
    pub mark: Tangency,
}

impl SingularDivide {
    pub fn new(fewer: Divide, mark: Tangency) -> Result<Self, MoveError> {
        let counts = fewer.word.counts();
        if mark.gap >= counts.len() || mark.height == 0 || mark.height >= counts[mark.gap] {
            return Err(MoveError::Stale(mark.gap));
        }
        Ok(SingularDivide { fewer, mark })
    }

    pub fn style(&self) -> Style {
        let row = &self.fewer.directions()[self.mark.gap];
        if row[self.mark.height as usize - 1] == row[self.mark.height as usize] {
            Style::Direct
        } else {
            Style::Inverse
        }
    }

    /// The resolution with two more double points.
    pub fn more(&self) -> Divide {
        let mut events = self.fewer.word.events.clone();
        let h = self.mark.height;
        events.splice(self.mark.gap..self.mark.gap, [Event::Cross(h), Event::Cross(h)]);
        let word = DivideWord::new(self.fewer.word.name.clone(), self.fewer.word.left, events)
            .expect("a bigon keeps the strand counts");
        validate(&word).expect("a bigon keeps the divide valid")
    }

    /// Isotopy code: the code of the resolution with more double points, with
    /// the two double points of the tangency marked.
    pub fn code(&self) -> Vec<u32> {
        curve_code(&self.more(), &[self.mark.gap, self.mark.gap + 1])
    }
}

/// Height of a marked pair after moving east past `e`.
fn mark_east(e: Event, h: u32) -> Option<u32> {
    match e {
        Event::Cross(i) => (i == h || i + 1 < h || i > h + 1).then_some(h),
        Event::Birth(j) if j <= h => Some(h + 2),
        Event::Birth(j) => (j >= h + 2).then_some(h),
        Event::Death(j) if j + 1 < h => Some(h - 2),
        Event::Death(j) => (j > h + 1).then_some(h),
    }
}

/// Height of a marked pair after moving west past `e`.
fn mark_west(e: Event, h: u32) -> Option<u32> {
    match e {
        Event::Cross(_) => mark_east(e, h),
        Event::Birth(j) if j + 1 < h => Some(h - 2),
        Event::Birth(j) => (j > h + 1).then_some(h),
        Event::Death(j) if h >= j => Some(h + 2),
        Event::Death(j) => (h + 1 < j).then_some(h),
    }
}

/// Moves of a singular divide: moves of its resolution away from the mark,
/// and moves of the mark itself.
pub fn enumerate_singular_moves(s: &SingularDivide, opts: MoveOptions) -> Vec<Move> {
    let g = s.mark.gap;
    let h = s.mark.height;
    let ev = &s.fewer.word.events;
    let mut out: Vec<Move> = enumerate_moves_with(&s.fewer, opts)
        .into_iter()
        .filter(|m| !(m.at < g && g < m.at + m.before.len()))
        .collect();
    let mark = |rw, at: usize, len: usize| Move {
        kind: MoveKind::IsotopyRewrite(rw),
        site: Site::Event(at),
        at,
        before: ev[at..at + len].to_vec(),
        after: ev[at..at + len].to_vec(),
        tangency: None,
    };
    if g < ev.len() && mark_east(ev[g], h).is_some() {
        out.push(mark(Rewrite::Mark, g, 1));
    }
    if g > 0 && mark_west(ev[g - 1], h).is_some() {
        out.push(mark(Rewrite::Mark, g - 1, 1));
    }
    if g + 1 < ev.len() && through_east(ev[g], ev[g + 1], h).is_some() {
        out.push(mark(Rewrite::MarkThrough, g, 2));
    }
    if g >= 2 && through_west(ev[g - 2], ev[g - 1], h).is_some() {
        out.push(mark(Rewrite::MarkThrough, g - 2, 2));
    }
    out
}

fn through_east(a: Event, b: Event, h: u32) -> Option<u32> {
    match (a, b) {
        (Event::Cross(p), Event::Cross(q)) if q == h && p == h + 1 => Some(h + 1),
        (Event::Cross(p), Event::Cross(q)) if q == h && p + 1 == h => Some(h - 1),
        _ => None,
    }
}

fn through_west(a: Event, b: Event, h: u32) -> Option<u32> {
    match (a, b) {
        (Event::Cross(p), Event::Cross(q)) if p == h && q + 1 == h => Some(h - 1),
        (Event::Cross(p), Event::Cross(q)) if p == h && q == h + 1 => Some(h + 1),
        _ => None,
    }
}

/// Applies a move to a singular divide.
pub fn apply_singular(s: &SingularDivide, m: &Move) -> Result<SingularDivide, MoveError> {
    let ev = &s.fewer.word.events;
    let end = m.at + m.before.len();
    if end > ev.len() || ev[m.at..end] != m.before[..] {
        return Err(MoveError::Stale(m.at));
    }
    let Tangency { gap: g, height: h } = s.mark;
    let moved = |gap, height: Option<u32>| {
        let height = height.ok_or(MoveError::Stale(m.at))?;
        Ok(SingularDivide { fewer: s.fewer.clone(), mark: Tangency { gap, height } })
    };
    match m.kind {
        MoveKind::IsotopyRewrite(Rewrite::Mark) => {
            if m.at == g {
                moved(g + 1, mark_east(ev[g], h))
            } else if m.at + 1 == g {
                moved(g - 1, mark_west(ev[g - 1], h))
            } else {
                Err(MoveError::Stale(m.at))
            }
        }
        MoveKind::IsotopyRewrite(Rewrite::MarkThrough) => {
            if m.at == g && g + 1 < ev.len() {
                moved(g + 2, through_east(ev[g], ev[g + 1], h))
            } else if m.at + 2 == g {
                moved(g - 2, through_west(ev[g - 2], ev[g - 1], h))
            } else {
                Err(MoveError::Stale(m.at))
            }
        }
        _ => {
            if m.at < g && g < end {
                return Err(MoveError::SplitsMark);
            }
            let fewer = apply_move(&s.fewer, m)?;
            let gap = if g <= m.at { g } else { g + m.after.len() - m.before.len() };
            SingularDivide::new(fewer, Tangency { gap, height: h })
        }
    }
}

/// The two-chord diagram formed by the marked tangency of `s` and the
/// tangency crossed by `m` on the way to `result`, read on the curve lacking
/// both bigons. The marked chord comes first when the chords are told apart.
pub fn two_chords(s: &SingularDivide, m: &Move, result: &SingularDivide) -> Option<TwoChordDiagram> {
    let MoveKind::SelfTangency { style, direction } = m.kind else { return None };
    let t = m.tangency?;
    let base = match direction {
        Direction::Gain2 => s,
        Direction::Lose2 => result,
    };
    let mark_first = s.mark.gap <= m.at;
    let pos = arc_positions(&base.fewer);
    let (rm, rt) = if base.mark.gap == t.gap { if mark_first { (0, 1) } else { (1, 0) } } else { (0, 0) };
    let a = chord_of(&pos, base.mark, rm);
    let b = chord_of(&pos, t, rt);
    Some(TwoChordDiagram::from_chords(a, base.style(), b, style))
}

/// The canonical forms at the end of a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CanonicalPattern {
    /// A chain of `n` curls.
    Standard(u32),
    /// `m` curls, the marked tangency, then `n` curls. Negative counts are clockwise curls.
    Singular { style: Style, m: i64, n: i64 },
}

/// `k` curls on the strand at height `p`: counterclockwise for `k > 0`.
fn curls(p: u32, k: i64) -> Vec<Event> {
    use Event::*;
    let one = if k > 0 { [Birth(p + 1), Cross(p), Death(p + 1)] } else { [Birth(p), Cross(p + 1), Death(p)] };
    one.iter().copied().cycle().take(3 * k.unsigned_abs() as usize).collect()
}

/// The standard divide with `n` curls.
pub fn standard_divide(n: i64) -> Divide {
    let word = DivideWord::new(format!("D{n}"), 1, curls(1, n)).expect("curl chain");
    validate(&word).expect("curl chain")
}

/// The canonical singular divide with the given style and curl counts.
pub fn canonical_singular(style: Style, m: i64, n: i64) -> SingularDivide {
    use Event::*;
    let (events, mark) = match style {
        Style::Inverse => {
            let mut e = vec![Birth(2)];
            e.extend(curls(1, m));
            e.push(Death(1));
            e.extend(curls(1, n));
            (e, Tangency { gap: 1, height: 1 })
        }
        Style::Direct => {
            let mut e = vec![Birth(2), Cross(1)];
            e.extend(curls(2, m));
            e.push(Death(2));
            e.extend(curls(1, n));
            (e, Tangency { gap: 2, height: 1 })
        }
    };
    let name = format!("D{}{m},{n}", style.symbol());
    let word = DivideWord::new(name, 1, events).expect("canonical word");
    SingularDivide::new(validate(&word).expect("canonical divide"), mark).expect("canonical mark")
}

/// Codes of canonical forms up to a number of double points.
#[derive(Debug, Default)]
pub struct Canonicals {
    reach: usize,
    table: HashMap<Vec<u32>, CanonicalPattern>,
}

impl Canonicals {
    pub fn new() -> Self {
        Self::default()
    }

    fn extend_to(&mut self, delta: usize) {
        if delta < self.reach && self.reach > 0 {
            return;
        }
        let top = delta as i64 + 1;
        for n in 0..=top {
            self.table.entry(curve_code(&standard_divide(n), &[])).or_insert(CanonicalPattern::Standard(n as u32));
        }
        for m in -top..=top {
            for n in -top..=top {
                if m.abs() + n.abs() > top {
                    continue;
                }
                for style in [Style::Inverse, Style::Direct] {
                    let s = canonical_singular(style, m, n);
                    self.table.entry(s.code()).or_insert(CanonicalPattern::Singular { style, m, n });
                }
            }
        }
        self.reach = delta + 1;
    }

    pub fn recognize(&mut self, d: &Divide) -> Option<CanonicalPattern> {
        if d.branch_count() != 1 {
            return None;
        }
        self.extend_to(d.delta);
        self.table.get(&curve_code(d, &[])).copied()
    }

    pub fn recognize_singular(&mut self, s: &SingularDivide) -> Option<CanonicalPattern> {
        if s.fewer.branch_count() != 1 {
            return None;
        }
        self.extend_to(s.fewer.delta + 2);
        self.table.get(&s.code()).copied()
    }
}

/// Recognizes a standard divide.
pub fn recognize_canonical(d: &Divide) -> Option<CanonicalPattern> {
    Canonicals::new().recognize(d)
}

/// Recognizes a canonical singular divide.
pub fn recognize_canonical_singular(s: &SingularDivide) -> Option<CanonicalPattern> {
    Canonicals::new().recognize_singular(s)
}

/// Values of J±₂ on two-chord diagrams and canonical divides.
#[derive(Debug, Clone, Copy, Default)]
pub struct ActualityTableJ2;

impl ActualityTableJ2 {
    /// Nested chords give 4 when the inner chord is an inverse tangency and 0
    /// otherwise. Interleaved chords give 2 whatever their styles.
    pub fn two_chord(&self, d: &TwoChordDiagram) -> i64 {
        match d.configuration {
            Configuration::Disjoint => 0,
            Configuration::Interleaved => 2,
            Configuration::Nested { outer } => {
                if d.styles[1 - outer] == Style::Inverse {
                    4
                } else {
                    0
                }
            }
        }
    }

    /// Derivative of J±₂ at a canonical singular divide. It does not depend on `n`.
    pub fn singular_canonical(&self, style: Style, m: i64, _n: i64) -> i64 {
        let shift = match style {
            Style::Inverse => 3,
            Style::Direct => 4,
        };
        if m >= 0 {
            -6 * m - shift
        } else {
            2 * m - shift
        }
    }

    pub fn canonical(&self, n: u32) -> i64 {
        n as i64
    }

    pub fn value(&self, p: CanonicalPattern) -> i64 {
        match p {
            CanonicalPattern::Standard(n) => self.canonical(n),
            CanonicalPattern::Singular { style, m, n } => self.singular_canonical(style, m, n),
        }
    }
}


#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Provenance {
    #[default]
    UserSupplied,
    Found,
}

/// One line of a reduction script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Iso { site: Site, rewrite: Rewrite },
    /// A self-tangency, with the script that reduces the singular divide met on the way.
    St { style: Style, direction: Direction, site: Site, sub: Option<ReductionScript> },
    Tri { site: Site },
}

/// Moves leading from a divide to a canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionScript {
    pub steps: Vec<Step>,
    pub provenance: Provenance,
}

impl Step {
    fn of_move(m: &Move) -> Step {
        match m.kind {
            MoveKind::IsotopyRewrite(rewrite) => Step::Iso { site: m.site, rewrite },
            MoveKind::TriplePoint => Step::Tri { site: m.site },
            MoveKind::SelfTangency { style, direction } => Step::St { style, direction, site: m.site, sub: None },
        }
    }

    fn matches(&self, m: &Move) -> bool {
        match (self, m.kind) {
            (Step::Iso { site, rewrite }, MoveKind::IsotopyRewrite(r)) => *site == m.site && *rewrite == r,
            (Step::Tri { site }, MoveKind::TriplePoint) => *site == m.site,
            (Step::St { direction, site, .. }, MoveKind::SelfTangency { direction: d, .. }) => {
                *site == m.site && *direction == d
            }
            _ => false,
        }
    }

    fn head(&self) -> String {
        match self {
            Step::Iso { site, rewrite } => format!("iso {site} {}", rewrite.id()),
            Step::Tri { site } => format!("tri {site}"),
            Step::St { style, direction, site, .. } => {
                let dir = match direction {
                    Direction::Gain2 => "gain",
                    Direction::Lose2 => "lose",
                };
                format!("st {} {dir} {site}", style.symbol())
            }
        }
    }
}

impl ReductionScript {
    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        for step in &self.steps {
            write!(f, "{:indent$}{}", "", step.head())?;
            match step {
                // An empty sub-script says the singular divide is already canonical.
                Step::St { sub: Some(sub), .. } if sub.steps.is_empty() => writeln!(f, " canonical")?,
                Step::St { sub: Some(sub), .. } => {
                    writeln!(f)?;
                    sub.write(f, indent + 2)?;
                }
                _ => writeln!(f)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for ReductionScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

impl FromStr for ReductionScript {
    type Err = ScriptError;

    fn from_str(text: &str) -> Result<Self, ScriptError> {
        let lines: Vec<(usize, usize, &str)> = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let body = l.split('#').next().unwrap_or("");
                let t = body.trim();
                (!t.is_empty()).then(|| (i + 1, body.len() - body.trim_start().len(), t))
            })
            .collect();
        let mut at = 0;
        let script = parse_block(&lines, &mut at, lines.first().map_or(0, |l| l.1))?;
        if let Some(&(line, _, _)) = lines.get(at) {
            return Err(ScriptError::Parse { line, msg: "unexpected indentation".into() });
        }
        Ok(script)
    }
}

fn parse_block(lines: &[(usize, usize, &str)], at: &mut usize, indent: usize) -> Result<ReductionScript, ScriptError> {
    let mut steps = Vec::new();
    while let Some(&(line, ind, text)) = lines.get(*at) {
        if ind < indent {
            break;
        }
        if ind > indent {
            return Err(ScriptError::Parse { line, msg: "sub-script without a self-tangency".into() });
        }
        *at += 1;
        let bad = |msg: &str| ScriptError::Parse { line, msg: format!("{msg} in `{text}`") };
        let words: Vec<&str> = text.split_whitespace().collect();
        let site = |s: &str| s.parse::<Site>().map_err(|e| bad(&e));
        let step = match words.as_slice() {
            ["iso", s, id] => Step::Iso { site: site(s)?, rewrite: Rewrite::from_id(id).ok_or_else(|| bad("unknown rewrite"))? },
            ["tri", s] => Step::Tri { site: site(s)? },
            ["st", st, dir, s] | ["st", st, dir, s, "canonical"] => {
                let style = match *st {
                    "+" => Style::Direct,
                    "-" => Style::Inverse,
                    _ => return Err(bad("style must be + or -")),
                };
                let direction = match *dir {
                    "gain" => Direction::Gain2,
                    "lose" => Direction::Lose2,
                    _ => return Err(bad("direction must be gain or lose")),
                };
                let sub = match lines.get(*at) {
                    Some(&(l, deeper, _)) if deeper > indent && words.len() == 5 => {
                        return Err(ScriptError::Parse { line: l, msg: "sub-script after `canonical`".into() })
                    }
                    Some(&(_, deeper, _)) if deeper > indent => Some(parse_block(lines, at, deeper)?),
                    _ if words.len() == 5 => Some(ReductionScript::default()),
                    _ => None,
                };
                Step::St { style, direction, site: site(s)?, sub }
            }
            _ => return Err(bad("unknown step")),
        };
        steps.push(step);
    }
    Ok(ReductionScript { steps, provenance: Provenance::UserSupplied })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("step {step}: `{text}` does not apply")]
    NoMove { step: usize, text: String },
    #[error("step {step}: the tangency is {found:?}, the script says {stated:?}")]
    StyleMismatch { step: usize, stated: Style, found: Style },
    #[error("step {step}: {source}")]
    Move { step: usize, source: MoveError },
    #[error("the script ends at `{0}`, which is not canonical")]
    Unrecognized(String),
    #[error("step {0}: a self-tangency needs a sub-script")]
    MissingSubscript(usize),
    #[error("in the sub-script of step {step}: {inner}")]
    Nested { step: usize, inner: Box<ScriptError> },
    #[error(transparent)]
    Divide(#[from] DivideError),
}

/// A divide, or a divide with a marked tangency, as moves see it.
trait State: Clone {
    fn moves(&self, opts: MoveOptions) -> Vec<Move>;
    fn apply(&self, m: &Move) -> Result<Self, MoveError>;
    fn word(&self) -> &DivideWord;
    fn describe(&self) -> String;
    fn key(&self) -> (u32, Vec<Event>, Option<Tangency>);
}

impl State for Divide {
    fn moves(&self, opts: MoveOptions) -> Vec<Move> {
        enumerate_moves_with(self, opts)
    }
    fn apply(&self, m: &Move) -> Result<Self, MoveError> {
        apply_move(self, m)
    }
    fn word(&self) -> &DivideWord {
        &self.word
    }
    fn describe(&self) -> String {
        self.word.compact()
    }
    fn key(&self) -> (u32, Vec<Event>, Option<Tangency>) {
        (self.word.left, self.word.events.clone(), None)
    }
}

impl State for SingularDivide {
    fn moves(&self, opts: MoveOptions) -> Vec<Move> {
        enumerate_singular_moves(self, opts)
    }
    fn apply(&self, m: &Move) -> Result<Self, MoveError> {
        apply_singular(self, m)
    }
    fn word(&self) -> &DivideWord {
        &self.fewer.word
    }
    fn describe(&self) -> String {
        format!("{} marked at {}:{}", self.fewer.word.compact(), self.mark.gap, self.mark.height)
    }
    fn key(&self) -> (u32, Vec<Event>, Option<Tangency>) {
        (self.fewer.word.left, self.fewer.word.events.clone(), Some(self.mark))
    }
}

/// Runs the steps of a script. At every self-tangency `jump` gets the step
/// number and the move along with the states on either side of it.
fn run<S: State>(
    start: &S,
    script: &ReductionScript,
    mut jump: impl FnMut(usize, &Move, &S, &S, Option<&ReductionScript>) -> Result<(), ScriptError>,
) -> Result<S, ScriptError> {
    let mut cur = start.clone();
    for (i, step) in script.steps.iter().enumerate() {
        let n = i + 1;
        let m = cur
            .moves(MoveOptions::default())
            .into_iter()
            .find(|m| step.matches(m))
            .ok_or_else(|| ScriptError::NoMove { step: n, text: step.head() })?;
        let next = cur.apply(&m).map_err(|source| ScriptError::Move { step: n, source })?;
        if let (Step::St { style, sub, .. }, MoveKind::SelfTangency { style: found, .. }) = (step, m.kind) {
            if *style != found {
                return Err(ScriptError::StyleMismatch { step: n, stated: *style, found });
            }
            jump(n, &m, &cur, &next, sub.as_ref())?;
        }
        cur = next;
    }
    Ok(cur)
}

/// The singular divide met when crossing the tangency of `m` between `a` and `b`.
pub fn crossed(m: &Move, a: &Divide, b: &Divide) -> SingularDivide {
    let t = m.tangency.expect("self-tangency moves carry their tangency");
    let fewer = match m.kind {
        MoveKind::SelfTangency { direction: Direction::Gain2, .. } => a,
        _ => b,
    };
    SingularDivide { fewer: fewer.clone(), mark: t }
}

fn sign(m: &Move) -> i64 {
    match m.kind {
        MoveKind::SelfTangency { direction: Direction::Gain2, .. } => 1,
        _ => -1,
    }
}

/// Evaluates J±₂ and its derivative along scripts.
#[derive(Debug, Default)]
pub struct Evaluator {
    canonicals: Canonicals,
    table: ActualityTableJ2,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn j2(&mut self, d: &Divide, script: &ReductionScript) -> Result<i64, ScriptError> {
        d.require_one_branch()?;
        let mut total = 0;
        let end = run(d, script, |step, m, a, b, sub| {
            let sub = sub.ok_or(ScriptError::MissingSubscript(step))?;
            let s = crossed(m, a, b);
            let v = self.derivative(&s, sub).map_err(|e| ScriptError::Nested { step, inner: Box::new(e) })?;
            total += sign(m) * v;
            Ok(())
        })?;
        match self.canonicals.recognize(&end) {
            Some(p @ CanonicalPattern::Standard(_)) => Ok(self.table.value(p) + total),
            _ => Err(ScriptError::Unrecognized(end.describe())),
        }
    }

    /// Derivative of J±₂ at a singular divide: J±₂ of the side with fewer
    /// double points minus J±₂ of the other side.
    pub fn derivative(&mut self, s: &SingularDivide, script: &ReductionScript) -> Result<i64, ScriptError> {
        s.fewer.require_one_branch()?;
        let table = self.table;
        let mut total = 0;
        let end = run(s, script, |_, m, a, b, _| {
            let d = two_chords(a, m, b).expect("self-tangency");
            total += sign(m) * table.two_chord(&d);
            Ok(())
        })?;
        match self.canonicals.recognize_singular(&end) {
            Some(p @ CanonicalPattern::Singular { .. }) => Ok(self.table.value(p) + total),
            _ => Err(ScriptError::Unrecognized(end.describe())),
        }
    }

    /// A first-order invariant along a script: `jump(style)` is its derivative
    /// at a tangency and `standard(n)` its value on the chain of `n` curls.
    pub fn first_order(
        &mut self,
        d: &Divide,
        script: &ReductionScript,
        jump: impl Fn(Style) -> i64,
        standard: impl Fn(u32) -> i64,
    ) -> Result<i64, ScriptError> {
        d.require_one_branch()?;
        let mut total = 0;
        let end = run(d, script, |_, m, _, _, _| {
            if let MoveKind::SelfTangency { style, .. } = m.kind {
                total += sign(m) * jump(style);
            }
            Ok(())
        })?;
        match self.canonicals.recognize(&end) {
            Some(CanonicalPattern::Standard(n)) => Ok(standard(n) + total),
            _ => Err(ScriptError::Unrecognized(end.describe())),
        }
    }
}

/// J±₂ of a one-branch divide along a reduction script.
pub fn j2_evaluate(d: &Divide, script: &ReductionScript) -> Result<i64, ScriptError> {
    Evaluator::new().j2(d, script)
}

/// J⁻ along a reduction script: an inverse tangency changes it by 2 and the
/// chain of `n` curls has value −2n.
pub fn j_minus_via_moves(d: &Divide, script: &ReductionScript) -> Result<i64, ScriptError> {
    Evaluator::new().first_order(d, script, |s| if s == Style::Inverse { 2 } else { 0 }, |n| -2 * n as i64)
}

/// J⁺ along a reduction script: a direct tangency changes it by −2 and the
/// chain of `n` curls has value −n.
pub fn j_plus_via_moves(d: &Divide, script: &ReductionScript) -> Result<i64, ScriptError> {
    Evaluator::new().first_order(d, script, |s| if s == Style::Direct { -2 } else { 0 }, |n| -(n as i64))
}

/// Limits for the automatic search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Words visited per search.
    pub nodes: usize,
    /// How far the number of double points may rise above the start.
    pub delta_slack: usize,
    /// How far the number of turns may rise above the start.
    pub turn_slack: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 1_000_000, delta_slack: 2, turn_slack: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Value { value: i64, script: ReductionScript },
    GaveUp { nodes: usize },
}

fn turns(w: &DivideWord) -> usize {
    w.events.iter().filter(|e| !e.is_cross()).count()
}

/// Best-first search from `start` to a state satisfying `goal`. States are
/// ranked by their number of turns, then by `excess` and length, then by
/// discovery order. Getting rid of turns first keeps isotopy classes small.
fn search<S: State>(
    start: &S,
    budget: SearchBudget,
    mut goal: impl FnMut(&S) -> bool,
    excess: impl Fn(&S) -> usize,
) -> Result<Vec<Move>, usize> {
    // Extra turns multiply the words in an isotopy class, so first allow
    // more double points and no extra turns.
    let phases = [(budget.delta_slack, 0), (budget.delta_slack + 2, 0), (budget.delta_slack, budget.turn_slack)];
    let mut used = 0;
    for (i, &(delta_slack, turn_slack)) in phases.iter().enumerate() {
        if i == 2 && turn_slack == 0 {
            break;
        }
        let b = SearchBudget { nodes: budget.nodes - used, delta_slack, turn_slack };
        match search_within(start, b, &mut goal, &excess) {
            Ok(path) => return Ok(path),
            Err(n) => used += n,
        }
        if used >= budget.nodes {
            break;
        }
    }
    Err(used)
}

fn search_within<S: State>(
    start: &S,
    budget: SearchBudget,
    goal: &mut impl FnMut(&S) -> bool,
    excess: &impl Fn(&S) -> usize,
) -> Result<Vec<Move>, usize> {
    let crosses = |s: &S| s.word().crossings();
    let max_delta = crosses(start) + budget.delta_slack;
    let max_turns = turns(start.word()) + budget.turn_slack;
    let rank = |s: &S| (turns(s.word()), excess(s), s.word().events.len());
    let mut nodes: Vec<(S, Option<(usize, Move)>)> = vec![(start.clone(), None)];
    let mut seen = HashSet::from([start.key()]);
    let mut heap = BinaryHeap::from([Reverse((rank(start), 0usize))]);
    while let Some(Reverse((_, at))) = heap.pop() {
        if goal(&nodes[at].0) {
            let mut path = Vec::new();
            let mut i = at;
            while let Some((parent, m)) = &nodes[i].1 {
                path.push(m.clone());
                i = *parent;
            }
            path.reverse();
            return Ok(path);
        }
        let cur = nodes[at].0.clone();
        let opts = MoveOptions {
            gains: crosses(&cur) + 2 <= max_delta,
            unzigzags: turns(cur.word()) + 2 <= max_turns,
        };
        for m in cur.moves(opts) {
            let Ok(next) = cur.apply(&m) else { continue };
            if turns(next.word()) > max_turns || !seen.insert(next.key()) {
                continue;
            }
            if nodes.len() >= budget.nodes {
                return Err(nodes.len());
            }
            heap.push(Reverse((rank(&next), nodes.len())));
            nodes.push((next, Some((at, m))));
        }
    }
    Err(nodes.len())
}

fn script_of(path: &[Move]) -> ReductionScript {
    ReductionScript { steps: path.iter().map(Step::of_move).collect(), provenance: Provenance::Found }
}

impl Evaluator {
    /// Searches a script reducing a singular divide to a canonical one.
    pub fn find_singular_script(&mut self, s: &SingularDivide, budget: SearchBudget) -> Result<ReductionScript, usize> {
        let canon = &mut self.canonicals;
        let path = search(
            s,
            budget,
            |x| matches!(canon.recognize_singular(x), Some(CanonicalPattern::Singular { .. })),
            |x| x.fewer.delta,
        )?;
        Ok(script_of(&path))
    }

    /// Searches a full two-level script for a one-branch divide.
    pub fn find_script(&mut self, d: &Divide, budget: SearchBudget) -> Result<Result<ReductionScript, usize>, DivideError> {
        d.require_one_branch()?;
        let rot = d.rotation_number()?.unsigned_abs() as usize;
        let canon = &mut self.canonicals;
        let path = match search(
            d,
            budget,
            |x| matches!(canon.recognize(x), Some(CanonicalPattern::Standard(_))),
            |x| x.delta.saturating_sub(rot),
        ) {
            Ok(p) => p,
            Err(n) => return Ok(Err(n)),
        };
        let mut script = script_of(&path);
        let mut cur = d.clone();
        for (m, step) in path.iter().zip(script.steps.iter_mut()) {
            let next = apply_move(&cur, m).expect("found moves apply");
            if let Step::St { sub, .. } = step {
                match self.find_singular_script(&crossed(m, &cur, &next), budget) {
                    Ok(s) => *sub = Some(s),
                    Err(n) => return Ok(Err(n)),
                }
            }
            cur = next;
        }
        Ok(Ok(script))
    }
}

/// J±₂ of a one-branch divide from an automatically found script.
pub fn j2_auto(d: &Divide, budget: SearchBudget) -> Result<Outcome, DivideError> {
    let mut ev = Evaluator::new();
    Ok(match ev.find_script(d, budget)? {
        Ok(script) => {
            let value = ev.j2(d, &script).expect("found scripts evaluate");
            Outcome::Value { value, script }
        }
        Err(nodes) => Outcome::GaveUp { nodes },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn div(s: &str) -> Divide {
        validate(&DivideWord::from_compact("t", s).unwrap()).unwrap()
    }

    #[test]
    fn canonical_styles() {
        for m in -2..=2 {
            for n in -2..=2 {
                assert_eq!(canonical_singular(Style::Inverse, m, n).style(), Style::Inverse);
                assert_eq!(canonical_singular(Style::Direct, m, n).style(), Style::Direct);
            }
        }
    }

    #[test]
    fn canonical_codes_are_distinct() {
        let mut seen = HashMap::new();
        for m in -3..=3i64 {
            for n in -3..=3i64 {
                for st in [Style::Inverse, Style::Direct] {
                    let c = canonical_singular(st, m, n).code();
                    if let Some(prev) = seen.insert(c, (st, m, n)) {
                        panic!("{prev:?} and {:?} share a code", (st, m, n));
                    }
                }
            }
        }
    }

    #[test]
    fn standard_recognized() {
        assert_eq!(recognize_canonical(&div("left 1 /  / right 1")), Some(CanonicalPattern::Standard(0)));
        assert_eq!(recognize_canonical(&div("left 1 / b 1; x 2; d 1 / right 1")), Some(CanonicalPattern::Standard(1)));
        assert_eq!(
            recognize_canonical(&div("left 1 / b 2; x 1; d 2; b 2; x 1; d 2 / right 1")),
            Some(CanonicalPattern::Standard(2))
        );
        assert_eq!(recognize_canonical(&div("left 1 / b 1; b 1; x 2; d 2; x 1; d 2 / right 1")), None);
    }

    const EXAMPLE: &str = "left 1 / b 1; b 1; x 2; d 2; x 1; d 2 / right 1";

    const EXAMPLE_SCRIPT: &str = "\
iso 1 slide
iso 2 slide
iso 3 commute
st + gain 2:3
  st + gain 2:3
  tri 3
  iso 2 mark
  iso 3 mark-through
  st - lose 1
tri 3
st - lose 1
  iso 2 mark-through
";

    fn kinds(d: &Divide) -> Vec<MoveKind> {
        enumerate_moves(d).into_iter().map(|m| m.kind).collect()
    }

    #[test]
    fn arc_needs_a_finger_before_a_poke() {
        let arc = div("left 1 /  / right 1");
        let finger = enumerate_moves(&arc)
            .into_iter()
            .find(|m| matches!(m.kind, MoveKind::IsotopyRewrite(Rewrite::Unzigzag { .. })))
            .unwrap();
        let bent = apply_move(&arc, &finger).unwrap();
        assert!(kinds(&bent).iter().any(|k| matches!(k, MoveKind::SelfTangency { direction: Direction::Gain2, .. })));
    }

    #[test]
    fn local_patterns_are_found() {
        let bigon = div("left 0 / b 1; x 1; x 1 / right 2");
        assert!(kinds(&bigon).contains(&MoveKind::SelfTangency { style: Style::Inverse, direction: Direction::Lose2 }));
        let e6 = div("left 1 / b 2; x 1; x 2; x 1; d 2 / right 1");
        assert!(kinds(&e6).contains(&MoveKind::TriplePoint));
    }

    #[test]
    fn moves_round_trip() {
        let d = div(EXAMPLE);
        for m in enumerate_moves(&d) {
            let there = apply_move(&d, &m).unwrap();
            assert_eq!(there.delta as i64, d.delta as i64 + m.delta_change());
            let back = apply_move(&there, &m.inverse()).unwrap();
            assert_eq!(back.word, d.word);
        }
    }

    #[test]
    fn stale_certificate() {
        let d = div(EXAMPLE);
        let m = enumerate_moves(&d).into_iter().find(|m| m.kind == MoveKind::IsotopyRewrite(Rewrite::Commute)).unwrap();
        let moved = apply_move(&d, &m).unwrap();
        assert_eq!(apply_move(&moved, &m), Err(MoveError::Stale(m.at)));
    }

    #[test]
    fn gain_on_curl_adds_two() {
        let d = div("left 1 / b 1; x 2; d 1 / right 1");
        let m = enumerate_moves(&d)
            .into_iter()
            .find(|m| m.kind == MoveKind::SelfTangency { style: Style::Inverse, direction: Direction::Gain2 })
            .unwrap();
        assert_eq!(apply_move(&d, &m).unwrap().delta, 3);
    }

    #[test]
    fn singular_recognized_after_mark_moves() {
        let s = canonical_singular(Style::Inverse, -3, 2);
        let want = Some(CanonicalPattern::Singular { style: Style::Inverse, m: -3, n: 2 });
        assert_eq!(recognize_canonical_singular(&s), want);
        let m = enumerate_singular_moves(&s, MoveOptions::default())
            .into_iter()
            .find(|m| m.kind == MoveKind::IsotopyRewrite(Rewrite::Mark))
            .unwrap();
        assert_eq!(recognize_canonical_singular(&apply_singular(&s, &m).unwrap()), want);
    }

    #[test]
    fn table_values() {
        let t = ActualityTableJ2;
        use Configuration::*;
        use Style::*;
        for a in [Direct, Inverse] {
            for b in [Direct, Inverse] {
                assert_eq!(t.two_chord(&TwoChordDiagram { styles: [a, b], configuration: Disjoint }), 0);
                assert_eq!(t.two_chord(&TwoChordDiagram { styles: [a, b], configuration: Interleaved }), 2);
                let nested = t.two_chord(&TwoChordDiagram { styles: [a, b], configuration: Nested { outer: 0 } });
                assert_eq!(nested, if b == Inverse { 4 } else { 0 });
            }
        }
        assert_eq!(t.singular_canonical(Inverse, 0, 5), -3);
        assert_eq!(t.singular_canonical(Inverse, -2, 0), -7);
        assert_eq!(t.singular_canonical(Direct, 0, 1), -4);
        assert_eq!(t.singular_canonical(Direct, 2, 0), -16);
    }

    #[test]
    fn chord_configurations() {
        let c = |a, b| TwoChordDiagram::from_chords(a, Style::Direct, b, Style::Inverse).configuration;
        assert_eq!(c((0, 1), (2, 3)), Configuration::Disjoint);
        assert_eq!(c((0, 3), (1, 2)), Configuration::Nested { outer: 0 });
        assert_eq!(c((1, 2), (0, 3)), Configuration::Nested { outer: 0 });
        assert_eq!(c((0, 2), (1, 3)), Configuration::Interleaved);
    }

    #[test]
    fn standard_values() {
        let empty = ReductionScript::default();
        for n in 0..=5 {
            let d = standard_divide(n);
            assert_eq!(j2_evaluate(&d, &empty), Ok(n));
            assert_eq!(j_minus_via_moves(&d, &empty), Ok(-2 * n));
            assert_eq!(j_plus_via_moves(&d, &empty), Ok(-n));
        }
    }

    #[test]
    fn worked_example_script() {
        let d = div(EXAMPLE);
        let script: ReductionScript = EXAMPLE_SCRIPT.parse().unwrap();
        assert_eq!(script.to_string(), EXAMPLE_SCRIPT);
        assert_eq!(j2_evaluate(&d, &script), Ok(5));
        assert_eq!(j_minus_via_moves(&d, &script), Ok(-6));
    }

    #[test]
    fn scripts_agree() {
        let d = div(EXAMPLE);
        let Outcome::Value { value, script } = j2_auto(&d, SearchBudget::default()).unwrap() else { panic!("gave up") };
        assert_eq!(value, 5);
        assert_eq!(script.provenance, Provenance::Found);
        assert_ne!(script, EXAMPLE_SCRIPT.parse().unwrap());
        assert_eq!(j_minus_via_moves(&d, &script), Ok(-6));
    }

    #[test]
    fn auto_values() {
        for (w, v) in [
            ("left 1 /  / right 1", 0),
            ("left 1 / b 2; x 1; d 2; b 2; x 1; d 2 / right 1", 2),
            ("left 1 / b 2; x 1; x 2; x 1; d 2 / right 1", 5),
            ("left 1 / b 2; x 2; x 1; x 2; d 2 / right 1", 5),
            ("left 0 / b 1; x 1; b 2; d 3; x 1 / right 2", 3),
        ] {
            match j2_auto(&div(w), SearchBudget::default()).unwrap() {
                Outcome::Value { value, script } => {
                    assert_eq!(value, v, "{w}");
                    let back: ReductionScript = script.to_string().parse().unwrap();
                    assert_eq!(j2_evaluate(&div(w), &back), Ok(v), "{w}\n{script}");
                }
                Outcome::GaveUp { .. } => panic!("gave up on {w}"),
            }
        }
    }

    #[test]
    fn tiny_budget_gives_up() {
        let d = div(EXAMPLE);
        let b = SearchBudget { nodes: 5, ..SearchBudget::default() };
        assert!(matches!(j2_auto(&d, b).unwrap(), Outcome::GaveUp { .. }));
    }

    #[test]
    fn script_errors() {
        let d = div(EXAMPLE);
        let bad: ReductionScript = "tri 0\n".parse().unwrap();
        assert!(matches!(j2_evaluate(&d, &bad), Err(ScriptError::NoMove { step: 1, .. })));
        let unfinished = ReductionScript::default();
        assert!(matches!(j2_evaluate(&d, &unfinished), Err(ScriptError::Unrecognized(_))));
        let no_sub: ReductionScript = "iso 1 slide\niso 2 slide\niso 3 commute\nst + gain 2:3\n".parse().unwrap();
        assert_eq!(j2_evaluate(&d, &no_sub), Err(ScriptError::MissingSubscript(4)));
        let wrong: ReductionScript = "iso 1 slide\niso 2 slide\niso 3 commute\nst - gain 2:3\n".parse().unwrap();
        assert!(matches!(j2_evaluate(&d, &wrong), Err(ScriptError::StyleMismatch { step: 4, .. })));
        assert!(matches!("st * gain 1".parse::<ReductionScript>(), Err(ScriptError::Parse { line: 1, .. })));
        assert!(matches!("  tri 1\ntri 2".parse::<ReductionScript>(), Err(ScriptError::Parse { line: 2, .. })));
    }
}
