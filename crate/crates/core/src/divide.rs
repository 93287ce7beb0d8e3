//! Tracing a Morse word into branches and double points.

use thiserror::Error;

use crate::word::{DivideWord, Event};

/// A horizontal piece of strand: gap `gap` (0 is left of the first event),
/// height `height` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub gap: usize,
    pub height: u32,
}

/// A slot together with the direction it is traversed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Visit {
    pub slot: Slot,
    pub east: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub edge: Edge,
    pub height: u32,
}

/// One immersed interval, traced from `start` to `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub visits: Vec<Visit>,
    pub start: Endpoint,
    pub end: Endpoint,
}

/// A transverse self-intersection. `params[k]` is the index of the visit of
/// `branches[k]` just before the crossing column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoublePoint {
    pub column: usize,
    pub branches: [usize; 2],
    pub params: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivideError {
    #[error("the word contains a closed component (through gap {gap}, height {height})")]
    ClosedLoop { gap: usize, height: u32 },
    #[error("tracing inconsistency at gap {gap}, height {height}")]
    Inconsistent { gap: usize, height: u32 },
    #[error("expected a one-branch divide, found {0} branches")]
    NotOneBranch(usize),
}

/// A validated divide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divide {
    pub word: DivideWord,
    pub branches: Vec<Branch>,
    pub double_points: Vec<DoublePoint>,
    pub delta: usize,
}

/// Where a slot end leads to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Next {
    Boundary(Edge),
    Slot(Visit),
}

/// Geometry of a word: strand counts per gap and the column connections.
pub(crate) struct Sweep<'a> {
    pub events: &'a [Event],
    pub counts: Vec<u32>,
}

impl<'a> Sweep<'a> {
    pub fn new(word: &'a DivideWord) -> Self {
        Sweep {
            events: &word.events,
            counts: word.counts(),
        }
    }

    pub fn from_parts(events: &'a [Event], counts: Vec<u32>) -> Self {
        Sweep { events, counts }
    }

    /// Leaves `v.slot` in its direction of travel.
    pub fn step(&self, v: Visit) -> Next {
        let Slot { gap, height: h } = v.slot;
        if v.east {
            if gap == self.events.len() {
                return Next::Boundary(Edge::Right);
            }
            let to = |height| Next::Slot(Visit { slot: Slot { gap: gap + 1, height }, east: true });
            match self.events[gap] {
                Event::Cross(i) => to(swap(h, i)),
                Event::Birth(i) => to(if h < i { h } else { h + 2 }),
                Event::Death(i) if h == i || h == i + 1 => Next::Slot(Visit {
                    slot: Slot { gap, height: if h == i { i + 1 } else { i } },
                    east: false,
                }),
                Event::Death(i) => to(if h < i { h } else { h - 2 }),
            }
        } else {
            if gap == 0 {
                return Next::Boundary(Edge::Left);
            }
            let to = |height| Next::Slot(Visit { slot: Slot { gap: gap - 1, height }, east: false });
            match self.events[gap - 1] {
                Event::Cross(i) => to(swap(h, i)),
                Event::Birth(i) if h == i || h == i + 1 => Next::Slot(Visit {
                    slot: Slot { gap, height: if h == i { i + 1 } else { i } },
                    east: true,
                }),
                Event::Birth(i) => to(if h < i { h } else { h - 2 }),
                Event::Death(i) => to(if h < i { h } else { h + 2 }),
            }
        }
    }
}

fn swap(h: u32, i: u32) -> u32 {
    if h == i {
        i + 1
    } else if h == i + 1 {
        i
    } else {
        h
    }
}

/// Signed half-turn made between two consecutive visits, +1 counterclockwise.
pub(crate) fn half_turn(a: Visit, b: Visit) -> i64 {
    if a.slot.gap != b.slot.gap {
        return 0;
    }
    let up = b.slot.height > a.slot.height;
    // Going east and turning back is a death cap; going west, a birth cap.
    match (a.east, up) {
        (true, true) | (false, false) => 1,
        _ => -1,
    }
}

/// Column crossed between two consecutive visits, if they are in different gaps.
pub(crate) fn column_between(a: Visit, b: Visit) -> Option<usize> {
    (a.slot.gap != b.slot.gap).then(|| a.slot.gap.min(b.slot.gap))
}

/// The crossing column passed through between two consecutive visits, if the
/// passage goes through the double point of that column.
pub(crate) fn crossing_between(events: &[Event], a: Visit, b: Visit) -> Option<usize> {
    let col = column_between(a, b)?;
    let Event::Cross(i) = events[col] else { return None };
    let left = if a.slot.gap == col { a.slot.height } else { b.slot.height };
    (left == i || left == i + 1).then_some(col)
}

/// Index of a slot in a flat per-word table.
pub(crate) struct SlotIndex {
    offsets: Vec<usize>,
    pub total: usize,
}

impl SlotIndex {
    pub fn new(counts: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(counts.len());
        let mut total = 0;
        for &c in counts {
            offsets.push(total);
            total += c as usize;
        }
        SlotIndex { offsets, total }
    }

    pub fn of(&self, s: Slot) -> usize {
        self.offsets[s.gap] + s.height as usize - 1
    }
}

/// Traces the walk starting at `start` until it reaches the boundary or returns.
pub(crate) fn walk(sweep: &Sweep<'_>, start: Visit) -> (Vec<Visit>, Option<Edge>) {
    let mut visits = vec![start];
    let mut cur = start;
    loop {
        match sweep.step(cur) {
            Next::Boundary(e) => return (visits, Some(e)),
            Next::Slot(v) => {
                if v.slot == start.slot {
                    return (visits, None);
                }
                visits.push(v);
                cur = v;
            }
        }
    }
}

/// Traces a word and checks it is a divide.
pub fn validate(word: &DivideWord) -> Result<Divide, DivideError> {
    let sweep = Sweep::new(word);
    let index = SlotIndex::new(&sweep.counts);
    let mut seen = vec![false; index.total];
    let last = word.events.len();

    let mut starts = Vec::new();
    for h in 1..=word.left {
        starts.push((Endpoint { edge: Edge::Left, height: h }, Visit { slot: Slot { gap: 0, height: h }, east: true }));
    }
    for h in 1..=word.right {
        starts.push((
            Endpoint { edge: Edge::Right, height: h },
            Visit { slot: Slot { gap: last, height: h }, east: false },
        ));
    }

    let mut branches = Vec::new();
    for (start, v) in starts {
        if seen[index.of(v.slot)] {
            continue;
        }
        let (visits, edge) = walk(&sweep, v);
        let Some(edge) = edge else {
            return Err(DivideError::Inconsistent { gap: v.slot.gap, height: v.slot.height });
        };
        for x in &visits {
            let k = index.of(x.slot);
            if seen[k] {
                return Err(DivideError::Inconsistent { gap: x.slot.gap, height: x.slot.height });
            }
            seen[k] = true;
        }
        let end_slot = visits.last().unwrap().slot;
        branches.push(Branch {
            visits,
            start,
            end: Endpoint { edge, height: end_slot.height },
        });
    }

    if let Some(k) = seen.iter().position(|s| !s) {
        let slot = slot_at(&sweep.counts, k);
        return Err(DivideError::ClosedLoop { gap: slot.gap, height: slot.height });
    }

    let mut passes: Vec<Vec<(usize, usize)>> = vec![Vec::new(); last];
    for (b, br) in branches.iter().enumerate() {
        for (k, pair) in br.visits.windows(2).enumerate() {
            if let Some(col) = crossing_between(&word.events, pair[0], pair[1]) {
                passes[col].push((b, k));
            }
        }
    }
    let mut double_points = Vec::new();
    for (column, p) in passes.iter().enumerate() {
        if word.events[column].is_cross() {
            if p.len() != 2 {
                return Err(DivideError::Inconsistent { gap: column, height: word.events[column].pos() });
            }
            double_points.push(DoublePoint {
                column,
                branches: [p[0].0, p[1].0],
                params: [p[0].1, p[1].1],
            });
        }
    }

    Ok(Divide {
        word: word.clone(),
        delta: double_points.len(),
        branches,
        double_points,
    })
}

fn slot_at(counts: &[u32], mut k: usize) -> Slot {
    for (gap, &c) in counts.iter().enumerate() {
        if k < c as usize {
            return Slot { gap, height: k as u32 + 1 };
        }
        k -= c as usize;
    }
    unreachable!("slot index out of range")
}

impl Divide {
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn require_one_branch(&self) -> Result<(), DivideError> {
        match self.branches.len() {
            1 => Ok(()),
            n => Err(DivideError::NotOneBranch(n)),
        }
    }

    /// Double points shared by branches `a` and `b` (or self-intersections when equal).
    pub fn shared_double_points(&self, a: usize, b: usize) -> usize {
        self.double_points
            .iter()
            .filter(|d| {
                let [x, y] = d.branches;
                (x == a && y == b) || (x == b && y == a)
            })
            .count()
    }

    /// Whether the image of the divide is connected, i.e. the branches are
    /// joined through shared double points. Only connected divides have
    /// non-split links.
    pub fn is_connected(&self) -> bool {
        let n = self.branches.len();
        let mut reached = vec![false; n];
        let mut stack = vec![0];
        reached[0] = n > 0;
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if !reached[b] && self.shared_double_points(a, b) > 0 {
                    reached[b] = true;
                    stack.push(b);
                }
            }
        }
        reached.iter().all(|&r| r)
    }

    /// Direction of travel through each slot, following the traced orientation.
    pub fn directions(&self) -> Vec<Vec<bool>> {
        let counts = self.word.counts();
        let mut dirs: Vec<Vec<bool>> = counts.iter().map(|&c| vec![true; c as usize]).collect();
        for b in &self.branches {
            for v in &b.visits {
                dirs[v.slot.gap][v.slot.height as usize - 1] = v.east;
            }
        }
        dirs
    }

    /// Branch id of every slot.
    pub fn owners(&self) -> Vec<Vec<usize>> {
        let counts = self.word.counts();
        let mut own: Vec<Vec<usize>> = counts.iter().map(|&c| vec![0; c as usize]).collect();
        for (id, b) in self.branches.iter().enumerate() {
            for v in &b.visits {
                own[v.slot.gap][v.slot.height as usize - 1] = id;
            }
        }
        own
    }

    /// Whitney rotation number of a one-branch divide: the closure through the
    /// upper arc turns once more than the branch itself.
    pub fn rotation_number(&self) -> Result<i64, DivideError> {
        let c = crate::closure::close_divide(self, crate::closure::Side::Upper)?;
        Ok(c.rotation - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> DivideWord {
        DivideWord::from_compact("t", s).unwrap()
    }

    #[test]
    fn embedded_arc() {
        let d = validate(&word("left 1 /  / right 1")).unwrap();
        assert_eq!(d.delta, 0);
        assert_eq!(d.branch_count(), 1);
        assert_eq!(d.rotation_number().unwrap(), 0);
    }

    #[test]
    fn curl() {
        let d = validate(&word("left 1 / b 1; x 2; d 1 / right 1")).unwrap();
        assert_eq!(d.delta, 1);
        assert_eq!(d.branch_count(), 1);
        assert_eq!(d.rotation_number().unwrap().abs(), 1);
        let ccw = validate(&word("left 1 / b 2; x 1; d 2 / right 1")).unwrap();
        assert_eq!(ccw.rotation_number().unwrap(), 1);
    }

    #[test]
    fn closed_loop_rejected() {
        // A circle crossing the arc twice.
        let err = validate(&word("left 1 / b 2; x 1; x 1; d 2 / right 1")).unwrap_err();
        assert!(matches!(err, DivideError::ClosedLoop { .. }));
        // The same births and deaths with a single crossing form a curl instead.
        assert!(validate(&word("left 1 / b 2; x 1; d 2 / right 1")).is_ok());
    }

    #[test]
    fn two_arcs() {
        let d = validate(&word("left 2 / x 1 / right 2")).unwrap();
        assert_eq!(d.branch_count(), 2);
        assert_eq!(d.shared_double_points(0, 1), 1);
    }

    #[test]
    fn chain_rotation_adds() {
        for n in 0..5 {
            let body = vec!["b 2; x 1; d 2"; n].join("; ");
            let d = validate(&word(&format!("left 1 / {body} / right 1"))).unwrap();
            assert_eq!(d.rotation_number().unwrap(), n as i64);
            assert_eq!(d.delta, n);
        }
    }

    #[test]
    fn same_edge_arcs() {
        let d = validate(&word("left 2 / d 1 / right 0")).unwrap();
        assert_eq!(d.rotation_number().unwrap(), 0);
        let d = validate(&word("left 0 / b 1 / right 2")).unwrap();
        assert_eq!(d.rotation_number().unwrap(), 0);
    }

    #[test]
    fn every_double_point_has_two_passages() {
        let d = validate(&word("left 1 / b 1; b 1; x 2; d 2; x 1; d 2 / right 1")).unwrap();
        assert_eq!(d.delta, 2);
        for p in &d.double_points {
            assert_eq!(p.branches, [0, 0]);
            assert_ne!(p.params[0], p.params[1]);
        }
    }
}
