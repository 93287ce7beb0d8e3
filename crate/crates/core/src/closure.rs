//! Closing a one-branch divide with an arc of the boundary circle, and the
//! winding numbers of the resulting plane curve.

use std::collections::BTreeMap;

use crate::divide::{crossing_between, half_turn, walk, Divide, DivideError, Slot, Sweep, Visit};
use crate::word::{DivideWord, Event};

/// Which arc of the boundary circle closes the divide. `Upper` passes through
/// the north pole of the disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

/// A double point of a closed curve as a chord between two walk parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chord {
    pub column: usize,
    pub a: usize,
    pub b: usize,
}

/// A generic closed immersed curve given as a Morse word with no boundary
/// strands, together with its traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedCurve {
    pub side: Option<Side>,
    pub word: DivideWord,
    pub walk: Vec<Visit>,
    pub chords: Vec<Chord>,
    pub rotation: i64,
}

fn shifted(events: &[Event], by: u32) -> Vec<Event> {
    events.iter().map(|e| e.with_pos(e.pos() + by)).collect()
}

/// Closes a one-branch divide. The closing arc runs outside the layout so no
/// double point is added. The traversal follows the closing arc of `Upper`
/// counterclockwise.
pub fn close_divide(d: &Divide, side: Side) -> Result<ClosedCurve, DivideError> {
    d.require_one_branch()?;
    let w = &d.word;
    let e = &w.events;
    let n = e.len();
    use Event::{Birth as B, Death as D};
    let (events, start) = match (w.left, w.right, side) {
        (1, 1, Side::Upper) => (
            [vec![B(1)], e.clone(), vec![D(1)]].concat(),
            Visit { slot: Slot { gap: 1, height: 1 }, east: true },
        ),
        (1, 1, Side::Lower) => (
            [vec![B(1)], shifted(e, 1), vec![D(1)]].concat(),
            Visit { slot: Slot { gap: 1, height: 2 }, east: true },
        ),
        (2, 0, Side::Upper) => (
            [vec![B(1), B(3)], shifted(e, 1), vec![D(1)]].concat(),
            Visit { slot: Slot { gap: 2, height: 3 }, east: true },
        ),
        (2, 0, Side::Lower) => (
            [vec![B(1)], e.clone()].concat(),
            Visit { slot: Slot { gap: 1, height: 2 }, east: true },
        ),
        (0, 2, Side::Upper) => (
            [vec![B(1)], shifted(e, 1), vec![D(1), D(1)]].concat(),
            Visit { slot: Slot { gap: n + 1, height: 2 }, east: false },
        ),
        (0, 2, Side::Lower) => (
            [e.clone(), vec![D(1)]].concat(),
            Visit { slot: Slot { gap: n, height: 1 }, east: false },
        ),
        _ => unreachable!("a single branch has exactly two endpoints"),
    };
    let word = DivideWord::new(format!("{}-{}", w.name, side_name(side)), 0, events)
        .expect("closure of a valid word is valid");
    let mut c = closed_curve(word, start);
    c.side = Some(side);
    Ok(c)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Upper => "upper",
        Side::Lower => "lower",
    }
}

/// Traces a closed word (no boundary strands, one component) from `start`.
///
/// Panics if the word has boundary strands or more than one component.
pub fn closed_curve(word: DivideWord, start: Visit) -> ClosedCurve {
    assert!(word.left == 0 && word.right == 0, "closed words have no boundary strands");
    let sweep = Sweep::new(&word);
    let (visits, edge) = walk(&sweep, start);
    assert!(edge.is_none(), "closed word reached the boundary");
    let total: u32 = sweep.counts.iter().sum();
    assert_eq!(visits.len(), total as usize, "closed word has several components");

    let len = visits.len();
    let mut rotation2 = 0;
    let mut by_column: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..len {
        let (a, b) = (visits[k], visits[(k + 1) % len]);
        rotation2 += half_turn(a, b);
        if let Some(col) = crossing_between(&word.events, a, b) {
            by_column.entry(col).or_default().push(k);
        }
    }
    debug_assert_eq!(rotation2 % 2, 0);
    let chords = by_column
        .into_iter()
        .map(|(column, p)| Chord { column, a: p[0], b: p[1] })
        .collect();
    ClosedCurve {
        side: None,
        word,
        walk: visits,
        chords,
        rotation: rotation2 / 2,
    }
}

impl ClosedCurve {
    pub fn double_points(&self) -> usize {
        self.chords.len()
    }

    /// Direction of travel for each slot, indexed `[gap][height - 1]`.
    pub fn directions(&self) -> Vec<Vec<bool>> {
        let counts = self.word.counts();
        let mut dirs: Vec<Vec<bool>> = counts.iter().map(|&c| vec![true; c as usize]).collect();
        for v in &self.walk {
            dirs[v.slot.gap][v.slot.height as usize - 1] = v.east;
        }
        dirs
    }
}

/// Complementary regions of a closed curve with their winding numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMap {
    /// Winding number of every face; face 0 is the unbounded one.
    pub winding: Vec<i64>,
    /// Face id of interval `j` (between strands `j` and `j + 1`) in each gap.
    pub interval_face: Vec<Vec<usize>>,
    /// Index of each double point (mean of the four adjacent windings), by column.
    pub vertex_index: Vec<(usize, i64)>,
    pub vertices: usize,
    pub edges: usize,
}

impl RegionMap {
    pub fn faces(&self) -> usize {
        self.winding.len()
    }

    /// V − E + F on the sphere.
    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces() as i64
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Sweeps the layout left to right, assigning winding numbers to the
/// intervals between strands and merging intervals into faces.
pub fn region_windings(c: &ClosedCurve) -> RegionMap {
    let counts = c.word.counts();
    let dirs = c.directions();
    // Per-gap interval windings: interval 0 is below every strand.
    let ind: Vec<Vec<i64>> = dirs
        .iter()
        .map(|d| {
            let mut w = vec![0i64];
            for &east in d {
                let last = *w.last().unwrap();
                w.push(last + if east { 1 } else { -1 });
            }
            w
        })
        .collect();

    let mut offset = Vec::with_capacity(counts.len());
    let mut total = 0;
    for &n in &counts {
        offset.push(total);
        total += n as usize + 1;
    }
    let id = |g: usize, j: u32| offset[g] + j as usize;
    let mut uf = UnionFind((0..total).collect());
    // The outer face touches the bottom and top of every gap.
    for (g, &n) in counts.iter().enumerate() {
        uf.union(id(g, 0), id(0, 0));
        uf.union(id(g, n), id(0, 0));
    }

    let mut vertex_cols = Vec::new();
    for (k, ev) in c.word.events.iter().enumerate() {
        let n = counts[k];
        match *ev {
            Event::Cross(i) => {
                for j in 0..=n {
                    if j != i {
                        uf.union(id(k, j), id(k + 1, j));
                    }
                }
                vertex_cols.push((k, i));
            }
            Event::Birth(i) => {
                for j in 0..=n {
                    if j + 1 < i {
                        uf.union(id(k, j), id(k + 1, j));
                    } else if j + 1 == i {
                        uf.union(id(k, j), id(k + 1, j));
                        uf.union(id(k, j), id(k + 1, j + 2));
                    } else {
                        uf.union(id(k, j), id(k + 1, j + 2));
                    }
                }
            }
            Event::Death(i) => {
                let m = counts[k + 1];
                for j in 0..=m {
                    if j + 1 < i {
                        uf.union(id(k + 1, j), id(k, j));
                    } else if j + 1 == i {
                        uf.union(id(k + 1, j), id(k, j));
                        uf.union(id(k + 1, j), id(k, j + 2));
                    } else {
                        uf.union(id(k + 1, j), id(k, j + 2));
                    }
                }
            }
        }
    }

    let mut face_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    face_of_root.insert(uf.find(0), 0);
    let mut winding = vec![0i64];
    let mut interval_face = Vec::with_capacity(counts.len());
    for (g, &n) in counts.iter().enumerate() {
        let mut row = Vec::with_capacity(n as usize + 1);
        for j in 0..=n {
            let r = uf.find(id(g, j));
            let f = *face_of_root.entry(r).or_insert_with(|| {
                winding.push(ind[g][j as usize]);
                winding.len() - 1
            });
            debug_assert_eq!(winding[f], ind[g][j as usize], "winding must be constant on a face");
            row.push(f);
        }
        interval_face.push(row);
    }

    let vertex_index = vertex_cols
        .into_iter()
        .map(|(k, i)| {
            let i = i as usize;
            let s = ind[k][i - 1] + ind[k][i] + ind[k][i + 1] + ind[k + 1][i];
            debug_assert_eq!(s % 4, 0);
            (k, s / 4)
        })
        .collect::<Vec<_>>();

    let v = vertex_index.len();
    let (vertices, edges) = if v == 0 { (1, 1) } else { (v, 2 * v) };
    RegionMap {
        winding,
        interval_face,
        vertex_index,
        vertices,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::validate;

    fn divide(s: &str) -> Divide {
        validate(&DivideWord::from_compact("t", s).unwrap()).unwrap()
    }

    #[test]
    fn embedded_arc_closes_to_circles() {
        let d = divide("left 1 /  / right 1");
        let u = close_divide(&d, Side::Upper).unwrap();
        let l = close_divide(&d, Side::Lower).unwrap();
        assert_eq!((u.rotation, l.rotation), (1, -1));
        assert_eq!(u.double_points(), 0);
        let r = region_windings(&u);
        assert_eq!(r.winding, vec![0, 1]);
        assert_eq!(region_windings(&l).winding, vec![0, -1]);
        assert_eq!(r.euler(), 2);
    }

    #[test]
    fn curl_closures() {
        let d = divide("left 1 / b 1; x 2; d 1 / right 1");
        let u = close_divide(&d, Side::Upper).unwrap();
        let l = close_divide(&d, Side::Lower).unwrap();
        assert_eq!(u.double_points(), 1);
        assert_eq!(l.double_points(), 1);
        let mut rots = [u.rotation.abs(), l.rotation.abs()];
        rots.sort();
        assert_eq!(rots, [0, 2]);
        for c in [&u, &l] {
            let r = region_windings(c);
            assert_eq!(r.euler(), 2);
            assert_eq!(r.faces(), 3);
        }
        // Figure eight: windings 0, 1, -1 in some order.
        let fig8 = if u.rotation == 0 { &u } else { &l };
        let mut w = region_windings(fig8).winding;
        w.sort();
        assert_eq!(w, vec![-1, 0, 1]);
    }

    #[test]
    fn same_edge_closures() {
        for s in ["left 2 / d 1 / right 0", "left 0 / b 1 / right 2", "left 2 / x 1; d 1 / right 0"] {
            let d = divide(s);
            let u = close_divide(&d, Side::Upper).unwrap();
            let l = close_divide(&d, Side::Lower).unwrap();
            assert_eq!(u.rotation - l.rotation, 2, "{s}");
            assert_eq!(u.double_points(), d.delta);
            assert_eq!(region_windings(&l).euler(), 2);
        }
    }

    #[test]
    fn multi_branch_rejected() {
        let d = divide("left 2 / x 1 / right 2");
        assert!(matches!(close_divide(&d, Side::Upper), Err(DivideError::NotOneBranch(2))));
    }
}
