//! Oriented link diagrams as planar-diagram codes.
//!
//! Every crossing lists four edge ids counterclockwise, starting with the
//! incoming under-edge. The over-strand enters at position 3 and leaves at
//! position 1 on a positive (right-handed) crossing, and the other way round
//! on a negative one. Components without crossings are kept as a count.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::divide::{walk, SlotIndex, Sweep, Visit};
use crate::word::Event;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub pd: [usize; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn over_in(&self) -> usize {
        if self.sign > 0 {
            self.pd[3]
        } else {
            self.pd[1]
        }
    }

    pub fn over_out(&self) -> usize {
        if self.sign > 0 {
            self.pd[1]
        } else {
            self.pd[3]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    pub free_loops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("component {0} out of range")]
    ComponentOutOfRange(usize),
    #[error("linking number needs two distinct components")]
    SameComponent,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl LinkDiagram {
    pub fn unknot() -> Self {
        LinkDiagram { crossings: Vec::new(), free_loops: 1 }
    }

    pub fn num_edges(&self) -> usize {
        2 * self.crossings.len()
    }

    /// The edge following `e` along its component.
    pub fn successor(&self, e: usize) -> usize {
        let (k, role) = self.head(e);
        let x = &self.crossings[k];
        match role {
            Role::UnderIn => x.pd[2],
            Role::OverIn => x.over_out(),
        }
    }

    /// The crossing where edge `e` ends, and as which strand it arrives.
    fn head(&self, e: usize) -> (usize, Role) {
        self.heads()[e]
    }

    fn heads(&self) -> Vec<(usize, Role)> {
        let mut h = vec![(usize::MAX, Role::UnderIn); self.num_edges()];
        for (k, x) in self.crossings.iter().enumerate() {
            h[x.pd[0]] = (k, Role::UnderIn);
            h[x.over_in()] = (k, Role::OverIn);
        }
        h
    }

    fn successors(&self) -> Vec<usize> {
        let heads = self.heads();
        heads
            .iter()
            .map(|&(k, role)| {
                let x = &self.crossings[k];
                match role {
                    Role::UnderIn => x.pd[2],
                    Role::OverIn => x.over_out(),
                }
            })
            .collect()
    }

    /// Edge cycles of the components that pass through crossings, ordered by
    /// their smallest edge id.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let next = self.successors();
        let mut seen = vec![false; next.len()];
        let mut out = Vec::new();
        for s in 0..next.len() {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut e = s;
            while !seen[e] {
                seen[e] = true;
                cyc.push(e);
                e = next[e];
            }
            out.push(cyc);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len() + self.free_loops
    }

    fn edge_component(&self) -> Vec<usize> {
        let mut comp = vec![0; self.num_edges()];
        for (i, c) in self.components().iter().enumerate() {
            for &e in c {
                comp[e] = i;
            }
        }
        comp
    }

    /// Half the signed count of crossings between components `a` and `b`.
    /// Components are numbered as in [`LinkDiagram::components`], followed by
    /// the free loops.
    pub fn linking_number(&self, a: usize, b: usize) -> Result<i64, LinkError> {
        let n = self.component_count();
        for c in [a, b] {
            if c >= n {
                return Err(LinkError::ComponentOutOfRange(c));
            }
        }
        if a == b {
            return Err(LinkError::SameComponent);
        }
        let comp = self.edge_component();
        let mut sum = 0i64;
        for x in &self.crossings {
            let (u, o) = (comp[x.pd[0]], comp[x.pd[1]]);
            if (u == a && o == b) || (u == b && o == a) {
                sum += x.sign as i64;
            }
        }
        Ok(sum / 2)
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign as i64).sum()
    }

    /// Circles produced by smoothing every crossing along the orientation.
    pub fn seifert_circles(&self) -> usize {
        if self.crossings.is_empty() {
            return self.free_loops;
        }
        // After smoothing, the under-in edge continues into the over-out edge
        // and the over-in edge into the under-out edge.
        let mut next = vec![0; self.num_edges()];
        for x in &self.crossings {
            next[x.pd[0]] = x.over_out();
            next[x.over_in()] = x.pd[2];
        }
        let mut seen = vec![false; next.len()];
        let mut count = self.free_loops;
        for s in 0..next.len() {
            if !seen[s] {
                count += 1;
                let mut e = s;
                while !seen[e] {
                    seen[e] = true;
                    e = next[e];
                }
            }
        }
        count
    }

    /// Removes crossing `k`, joining `pairs` of (incoming, outgoing) edges.
    fn remove_crossing(&self, k: usize, pairs: [(usize, usize); 2]) -> LinkDiagram {
        self.remove_crossings(&[k], &pairs)
    }

    fn remove_crossings(&self, ks: &[usize], pairs: &[(usize, usize)]) -> LinkDiagram {
        let n = self.num_edges();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(i, o) in pairs {
            let (a, b) = (find(&mut parent, i), find(&mut parent, o));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let rest: Vec<Crossing> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|(j, _)| !ks.contains(j))
            .map(|(_, x)| *x)
            .collect();
        let mut used = vec![false; n];
        let mut relabel = HashMap::new();
        let mut crossings = Vec::with_capacity(rest.len());
        for x in &rest {
            let mut pd = [0; 4];
            for (slot, &e) in pd.iter_mut().zip(&x.pd) {
                let r = find(&mut parent, e);
                used[r] = true;
                let next = relabel.len();
                *slot = *relabel.entry(r).or_insert(next);
            }
            crossings.push(Crossing { pd, sign: x.sign });
        }
        // Classes that lost every crossing are closed loops.
        let mut lost = std::collections::BTreeSet::new();
        for e in 0..n {
            let r = find(&mut parent, e);
            if !used[r] {
                lost.insert(r);
            }
        }
        LinkDiagram {
            crossings,
            free_loops: self.free_loops + lost.len(),
        }
    }

    /// Oriented smoothing of crossing `k`.
    pub fn smooth(&self, k: usize) -> LinkDiagram {
        let x = self.crossings[k];
        self.remove_crossing(k, [(x.pd[0], x.over_out()), (x.over_in(), x.pd[2])])
    }

    /// Switches over and under at crossing `k`.
    pub fn switch(&self, k: usize) -> LinkDiagram {
        let mut d = self.clone();
        let [a, b, c, e] = self.crossings[k].pd;
        d.crossings[k] = if self.crossings[k].sign > 0 {
            Crossing { pd: [e, a, b, c], sign: -1 }
        } else {
            Crossing { pd: [b, c, e, a], sign: 1 }
        };
        d
    }

    /// Removes kinks (crossings with an edge that leaves and re-enters them)
    /// until none remain.
    pub fn remove_kinks(&self) -> LinkDiagram {
        let mut d = self.clone();
        'outer: loop {
            for (k, x) in d.crossings.iter().enumerate() {
                for p in 0..4 {
                    let q = (p + 1) % 4;
                    if x.pd[p] == x.pd[q] {
                        // The two other positions carry the through strand.
                        let (r, s) = ((p + 2) % 4, (p + 3) % 4);
                        let (e, f) = (x.pd[r], x.pd[s]);
                        let incoming = |e: usize| e == x.pd[0] || e == x.over_in();
                        let (i, o) = if incoming(e) { (e, f) } else { (f, e) };
                        let loop_edge = x.pd[p];
                        d = d.remove_crossing(k, [(i, loop_edge), (loop_edge, o)]);
                        continue 'outer;
                    }
                }
            }
            return d;
        }
    }

    /// Faces of the diagram as cycles of (crossing, position) corners. Each
    /// corner is followed by the next position counterclockwise at the far
    /// end of its edge.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.num_edges()];
        for (k, x) in self.crossings.iter().enumerate() {
            for p in 0..4 {
                ends[x.pd[p]].push((k, p));
            }
        }
        let far = |k: usize, p: usize| {
            let e = &ends[self.crossings[k].pd[p]];
            if e[0] == (k, p) { e[1] } else { e[0] }
        };
        let mut seen = vec![[false; 4]; self.crossings.len()];
        let mut out = Vec::new();
        for k in 0..self.crossings.len() {
            for p in 0..4 {
                let mut face = Vec::new();
                let (mut a, mut b) = (k, p);
                while !seen[a][b] {
                    seen[a][b] = true;
                    face.push((a, b));
                    let (c, q) = far(a, b);
                    (a, b) = (c, (q + 1) % 4);
                }
                if !face.is_empty() {
                    out.push(face);
                }
            }
        }
        out
    }

    /// Undoes one second Reidemeister move if a bigon has the same strand on
    /// top at both of its crossings.
    fn remove_bigon(&self) -> Option<LinkDiagram> {
        for face in self.faces() {
            let [(x, p), (y, q)] = face[..] else { continue };
            if x == y || p % 2 != (q + 3) % 4 % 2 {
                continue;
            }
            let straight = |k: usize| {
                let c = &self.crossings[k];
                [(c.pd[0], c.pd[2]), (c.over_in(), c.over_out())]
            };
            let pairs: Vec<_> = straight(x).into_iter().chain(straight(y)).collect();
            return Some(self.remove_crossings(&[x, y], &pairs));
        }
        None
    }

    /// Removes kinks and second-move bigons until neither is left.
    pub fn reduce(&self) -> LinkDiagram {
        let mut d = self.remove_kinks();
        while let Some(next) = d.remove_bigon() {
            d = next.remove_kinks();
        }
        d
    }

    /// Third Reidemeister moves available on triangular faces.
    pub fn triangle_moves(&self) -> Vec<LinkDiagram> {
        let mut out = Vec::new();
        for face in self.faces() {
            let [c0, c1, c2] = face[..] else { continue };
            let corners = [c0, c1, c2];
            if c0.0 == c1.0 || c1.0 == c2.0 || c0.0 == c2.0 {
                continue;
            }
            // Edge t leaves corner t and arrives at corner t + 1 one slot
            // clockwise of that corner's position.
            let mut roles = [(false, false); 3];
            let mut ok = true;
            for t in 0..3 {
                let (a, p) = corners[t];
                let (b, q) = corners[(t + 1) % 3];
                let q = (q + 3) % 4;
                if self.crossings[a].pd[p] != self.crossings[b].pd[q] {
                    ok = false;
                }
                roles[t] = (p % 2 == 1, q % 2 == 1);
            }
            if !ok {
                continue;
            }
            let (over, under) = roles.iter().fold((0, 0), |(o, u), &(x, y)| (o + (x && y) as usize, u + (!x && !y) as usize));
            if over != 1 || under != 1 {
                continue;
            }
            let mut d = self.clone();
            let heads = self.heads();
            for &(a, p) in &corners {
                let e = self.crossings[a].pd[p];
                // Along the orientation the edge runs from `from` to `to`.
                let (to, _) = heads[e];
                let from = if to == a { corners.iter().map(|c| c.0).find(|&k| k != a && self.crossings[k].pd.contains(&e)).unwrap() } else { a };
                let (xf, xt) = (d.crossings[from], d.crossings[to]);
                let (fin, _) = strand_through(&xf, e, false);
                let (_, tout) = strand_through(&xt, e, true);
                if fin == tout {
                    ok = false;
                }
                let rep = |x: &mut Crossing, old: usize, new: usize| {
                    for v in x.pd.iter_mut() {
                        if *v == old {
                            *v = new;
                        }
                    }
                };
                // The strand now meets `to` first and `from` second.
                let (mut nf, mut nt) = (xf, xt);
                rep(&mut nf, fin, usize::MAX);
                rep(&mut nf, e, tout);
                rep(&mut nf, usize::MAX, e);
                rep(&mut nt, tout, usize::MAX);
                rep(&mut nt, e, fin);
                rep(&mut nt, usize::MAX, e);
                d.crossings[from] = nf;
                d.crossings[to] = nt;
            }
            if ok {
                out.push(d);
            }
        }
        out
    }

    /// Reduces the diagram, then searches through third moves for further
    /// reductions, keeping the diagram whose Seifert surface has the largest
    /// Euler characteristic. Diagrams with fewer crossings are explored
    /// first; the search ends once `target` is reached or `budget` diagrams
    /// have been seen.
    pub fn simplify(&self, budget: usize, target: Option<i64>) -> LinkDiagram {
        use std::cmp::Reverse;
        use std::collections::{BinaryHeap, HashSet};
        let score = |d: &LinkDiagram| d.seifert_circles() as i64 - d.crossings.len() as i64;
        let start = self.reduce();
        let mut best = start.clone();
        let done = |b: &LinkDiagram| target.is_some_and(|t| score(b) >= t);
        if done(&best) {
            return best;
        }
        let mut seen = HashSet::new();
        seen.insert(start.canonical_key());
        let mut heap = BinaryHeap::new();
        let mut tie = 0usize;
        heap.push((score(&start), Reverse(start.crossings.len()), Reverse(tie), start));
        while let Some((_, _, _, d)) = heap.pop() {
            for next in d.triangle_moves() {
                let r = next.reduce();
                if !seen.insert(r.canonical_key()) {
                    continue;
                }
                let sc = score(&r);
                if sc > score(&best) || (sc == score(&best) && r.crossings.len() < best.crossings.len()) {
                    best = r.clone();
                    if done(&best) {
                        return best;
                    }
                }
                tie += 1;
                heap.push((sc, Reverse(r.crossings.len()), Reverse(tie), r));
            }
            if seen.len() > budget {
                break;
            }
        }
        best
    }

    /// Groups of components connected through crossings; free loops are
    /// separate groups.
    pub fn split_groups(&self) -> usize {
        let comps = self.components();
        let comp = self.edge_component();
        let mut parent: Vec<usize> = (0..comps.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for x in &self.crossings {
            let (a, b) = (find(&mut parent, comp[x.pd[0]]), find(&mut parent, comp[x.pd[1]]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let roots = (0..comps.len()).filter(|&i| find(&mut parent, i) == i).count();
        roots + self.free_loops
    }

    /// A labeling-independent key: edges are renumbered along a traversal
    /// from every possible starting edge and the smallest code is kept.
    pub fn canonical_key(&self) -> Vec<u32> {
        let n = self.num_edges();
        if n == 0 {
            return vec![self.free_loops as u32];
        }
        let next = self.successors();
        let heads = self.heads();
        let mut best: Option<Vec<u32>> = None;
        for start in 0..n {
            let mut label = vec![u32::MAX; n];
            let mut counter = 0u32;
            let mut order: Vec<usize> = Vec::new();
            let mut seen_x = vec![false; self.crossings.len()];
            let mut s = start;
            loop {
                let mut e = s;
                while label[e] == u32::MAX {
                    label[e] = counter;
                    counter += 1;
                    let k = heads[e].0;
                    if !seen_x[k] {
                        seen_x[k] = true;
                        order.push(k);
                    }
                    e = next[e];
                }
                let Some(k) = order.iter().copied().find(|&k| self.crossings[k].pd.iter().any(|&e| label[e] == u32::MAX)) else {
                    break;
                };
                let x = self.crossings[k];
                let cand = if label[x.pd[2]] == u32::MAX { x.pd[2] } else { x.over_out() };
                s = cand;
            }
            if label.contains(&u32::MAX) {
                // Disconnected diagram: fall back to appending the rest in id order.
                for e in 0..n {
                    if label[e] == u32::MAX {
                        let mut f = e;
                        while label[f] == u32::MAX {
                            label[f] = counter;
                            counter += 1;
                            f = next[f];
                        }
                    }
                }
            }
            let mut code: Vec<[u32; 5]> = self
                .crossings
                .iter()
                .map(|x| {
                    [
                        label[x.pd[0]],
                        label[x.pd[1]],
                        label[x.pd[2]],
                        label[x.pd[3]],
                        (x.sign > 0) as u32,
                    ]
                })
                .collect();
            code.sort_unstable();
            let mut flat: Vec<u32> = Vec::with_capacity(code.len() * 5 + 1);
            flat.push(self.free_loops as u32);
            for c in code {
                flat.extend_from_slice(&c);
            }
            if best.as_ref().is_none_or(|b| flat < *b) {
                best = Some(flat);
            }
        }
        best.unwrap()
    }

    /// Relabels edges so that ids run consecutively along each component.
    pub fn normalized(&self) -> LinkDiagram {
        let mut relabel = vec![0; self.num_edges()];
        let mut id = 0;
        for c in self.components() {
            for e in c {
                relabel[e] = id;
                id += 1;
            }
        }
        LinkDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|x| Crossing { pd: x.pd.map(|e| relabel[e]), sign: x.sign })
                .collect(),
            free_loops: self.free_loops,
        }
    }
}

/// The (incoming, outgoing) edges of the strand of `x` that contains `e`,
/// where `e` is incoming if `incoming` is set.
fn strand_through(x: &Crossing, e: usize, incoming: bool) -> (usize, usize) {
    let under = (x.pd[0], x.pd[2]);
    let over = (x.over_in(), x.over_out());
    let hit = |s: (usize, usize)| if incoming { s.0 == e } else { s.1 == e };
    if hit(under) { under } else { over }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    UnderIn,
    OverIn,
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# crossings {} components {} free_loops {}", self.crossings.len(), self.component_count(), self.free_loops)?;
        for x in &self.crossings {
            writeln!(f, "X {} {} {} {} {:+}", x.pd[0], x.pd[1], x.pd[2], x.pd[3], x.sign)?;
        }
        Ok(())
    }
}

impl FromStr for LinkDiagram {
    type Err = LinkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut d = LinkDiagram::default();
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let err = |msg: &str| LinkError::Parse { line, msg: msg.into() };
            let t: Vec<&str> = raw.split_whitespace().collect();
            if t.is_empty() {
                continue;
            }
            if t[0] == "#" {
                if let Some(p) = t.iter().position(|&w| w == "free_loops") {
                    d.free_loops = t.get(p + 1).and_then(|v| v.parse().ok()).ok_or_else(|| err("bad free_loops"))?;
                }
                continue;
            }
            if t[0] != "X" || t.len() != 6 {
                return Err(err("expected `X a b c d sign`"));
            }
            let mut pd = [0; 4];
            for (k, slot) in pd.iter_mut().enumerate() {
                *slot = t[k + 1].parse().map_err(|_| err("bad edge id"))?;
            }
            let sign = match t[5] {
                "+1" | "1" => 1,
                "-1" => -1,
                _ => return Err(err("sign must be +1 or -1")),
            };
            d.crossings.push(Crossing { pd, sign });
        }
        Ok(d)
    }
}

/// A link diagram drawn as a Morse word: births and deaths of strand pairs
/// and crossings of adjacent strands, with the over strand recorded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinkWord {
    pub events: Vec<Event>,
    /// For each event: for a crossing, whether the strand going from `i` to
    /// `i + 1` (left to right) passes over.
    pub rising_over: Vec<bool>,
    /// Slots with a known direction of travel, used to orient components.
    pub hints: Vec<Visit>,
}

impl LinkWord {
    pub fn counts(&self) -> Vec<u32> {
        crate::word::strand_counts(0, &self.events).expect("link words are closed and well formed")
    }

    pub fn push(&mut self, e: Event) {
        self.events.push(e);
        self.rising_over.push(false);
    }

    pub fn cross(&mut self, i: u32, rising_over: bool) {
        self.events.push(Event::Cross(i));
        self.rising_over.push(rising_over);
    }

    pub fn gap(&self) -> usize {
        self.events.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.events.iter().filter(|e| e.is_cross()).count()
    }

    /// Converts to a planar-diagram code, orienting each component by the
    /// first hint it passes through.
    pub fn to_diagram(&self) -> LinkDiagram {
        let counts = self.counts();
        let sweep = Sweep::from_parts(&self.events, counts.clone());
        let index = SlotIndex::new(&counts);
        let mut seen = vec![false; index.total];
        let mut walks = Vec::new();
        for &h in &self.hints {
            if seen[index.of(h.slot)] {
                continue;
            }
            let (visits, edge) = walk(&sweep, h);
            assert!(edge.is_none(), "link words have no boundary");
            for v in &visits {
                seen[index.of(v.slot)] = true;
            }
            walks.push(visits);
        }
        assert!(seen.iter().all(|&s| s), "every component needs an orientation hint");

        // Passages through crossing columns: (column, left height, right height, east).
        let mut ends: BTreeMap<usize, Vec<(u32, u32, bool, usize, usize)>> = BTreeMap::new();
        let mut edge = 0usize;
        let mut free_loops = 0;
        for visits in &walks {
            let len = visits.len();
            let passes: Vec<usize> = (0..len)
                .filter(|&k| {
                    let (a, b) = (visits[k], visits[(k + 1) % len]);
                    crate::divide::crossing_between(&self.events, a, b).is_some()
                })
                .collect();
            if passes.is_empty() {
                free_loops += 1;
                continue;
            }
            let first_edge = edge;
            let m = passes.len();
            for (j, &k) in passes.iter().enumerate() {
                let (a, b) = (visits[k], visits[(k + 1) % len]);
                let col = a.slot.gap.min(b.slot.gap);
                let (l, r) = if a.slot.gap == col { (a, b) } else { (b, a) };
                let in_edge = first_edge + j;
                let out_edge = first_edge + (j + 1) % m;
                ends.entry(col).or_default().push((l.slot.height, r.slot.height, a.east, in_edge, out_edge));
            }
            edge += m;
        }

        let mut crossings = Vec::new();
        for (col, p) in ends {
            assert_eq!(p.len(), 2);
            let rising_over = self.rising_over[col];
            // Geometry: a rising strand runs from SW to NE.
            let info = |(l, r, east, i, o): (u32, u32, bool, usize, usize)| {
                let rising = r > l;
                // Direction vector of travel.
                let (dx, dy) = match (rising, east) {
                    (true, true) => (1, 1),
                    (true, false) => (-1, -1),
                    (false, true) => (1, -1),
                    (false, false) => (-1, 1),
                };
                (rising, (dx, dy), i, o)
            };
            let s0 = info(p[0]);
            let s1 = info(p[1]);
            let (over, under) = if s0.0 == rising_over { (s0, s1) } else { (s1, s0) };
            let ((ox, oy), (ux, uy)) = (over.1, under.1);
            let sign: i8 = if ox * uy - oy * ux > 0 { 1 } else { -1 };
            // Compass angle (in eighths of a turn) of the end each edge attaches to.
            let angle = |(dx, dy): (i32, i32)| -> i32 { match (dx, dy) {
                (1, 1) => 1,
                (-1, 1) => 3,
                (-1, -1) => 5,
                _ => 7,
            } };
            let mut around = [
                (angle((-ux, -uy)), under.2),
                (angle((ux, uy)), under.3),
                (angle((-ox, -oy)), over.2),
                (angle((ox, oy)), over.3),
            ];
            let start = around[0].0;
            around.sort_by_key(|&(a, _)| (a - start).rem_euclid(8));
            crossings.push(Crossing { pd: around.map(|(_, e)| e), sign });
        }
        LinkDiagram { crossings, free_loops }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::divide::Slot;

    /// Standard diagram of the right-handed trefoil.
    pub fn trefoil() -> LinkDiagram {
        "X 0 4 1 3 +1\nX 2 0 3 5 +1\nX 4 2 5 1 +1\n".parse().unwrap()
    }

    #[test]
    fn trefoil_structure() {
        let t = trefoil();
        assert_eq!(t.component_count(), 1);
        assert_eq!(t.writhe(), 3);
        assert_eq!(t.seifert_circles(), 2);
        assert_eq!(t.to_string().parse::<LinkDiagram>().unwrap(), t);
    }

    #[test]
    fn hopf_linking() {
        let d = hopf();
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.linking_number(0, 1).unwrap().abs(), 1);
        assert!(d.linking_number(0, 0).is_err());
        assert!(d.linking_number(0, 2).is_err());
    }

    /// Two circles crossing twice, over and then under.
    pub fn hopf() -> LinkDiagram {
        let mut w = LinkWord::default();
        w.push(Event::Birth(1));
        w.push(Event::Birth(3));
        w.cross(2, true);
        w.cross(2, true);
        w.push(Event::Death(3));
        w.push(Event::Death(1));
        w.hints = vec![
            Visit { slot: Slot { gap: 2, height: 1 }, east: true },
            Visit { slot: Slot { gap: 2, height: 3 }, east: true },
        ];
        w.to_diagram()
    }

    #[test]
    fn unlink_from_same_over() {
        let mut w = LinkWord::default();
        w.push(Event::Birth(1));
        w.push(Event::Birth(3));
        w.cross(2, true);
        w.cross(2, false);
        w.push(Event::Death(3));
        w.push(Event::Death(1));
        w.hints = vec![
            Visit { slot: Slot { gap: 2, height: 1 }, east: true },
            Visit { slot: Slot { gap: 2, height: 3 }, east: false },
        ];
        let d = w.to_diagram();
        assert_eq!(d.linking_number(0, 1).unwrap(), 0);
    }

    #[test]
    fn kink_removal() {
        // A one-crossing unknot.
        let mut w = LinkWord::default();
        w.push(Event::Birth(1));
        w.push(Event::Birth(2));
        w.cross(1, true);
        w.push(Event::Death(2));
        w.push(Event::Death(1));
        w.hints = vec![Visit { slot: Slot { gap: 1, height: 1 }, east: true }];
        let d = w.to_diagram();
        assert_eq!(d.crossings.len(), 1);
        let r = d.remove_kinks();
        assert!(r.crossings.is_empty());
        assert_eq!(r.free_loops, 1);
    }

    #[test]
    fn switch_twice_is_identity() {
        let t = trefoil();
        assert_eq!(t.switch(1).switch(1), t);
        assert_eq!(t.switch(0).crossings[0].sign, -1);
    }

    #[test]
    fn smoothing_trefoil_gives_hopf() {
        let s = trefoil().smooth(0);
        assert_eq!(s.crossings.len(), 2);
        assert_eq!(s.component_count(), 2);
        assert_eq!(s.linking_number(0, 1).unwrap(), 1);
    }

    #[test]
    fn canonical_key_ignores_labels() {
        let t = trefoil();
        let relabeled: LinkDiagram = "X 1 5 2 4 +1\nX 3 1 4 0 +1\nX 5 3 0 2 +1\n".parse().unwrap();
        assert_eq!(t.canonical_key(), relabeled.canonical_key());
        assert_ne!(t.canonical_key(), t.switch(0).canonical_key());
    }
}
