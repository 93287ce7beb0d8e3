//! From a divide to its link diagram and a disk-band Seifert surface.
//!
//! The link of a divide consists of the unit tangent vectors to the divide,
//! pointing both ways. Drawn over the layout, every strand of the divide
//! becomes two strands, one per direction, meeting at the left and right
//! edges. [`link_word`] draws the east copies in an upper half and the west
//! copies in a mirrored lower half; [`folded_link_word`] lays the two copies
//! side by side, which costs far fewer crossings at the turns.
//!
//! The surface is the one Seifert's algorithm gives on a simplified diagram
//! of the folded drawing, checked against the Conway polynomial.

use thiserror::Error;

use crate::divide::{validate, Divide, DivideError, Slot, Visit};
use crate::knotpoly;
use crate::link::{LinkDiagram, LinkWord};
use crate::word::{DivideWord, Event};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AcampoError {
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error("surface is disconnected ({0} pieces)")]
    Disconnected(usize),
    #[error("surface has {0} boundary components")]
    MultiBoundary(usize),
}

/// A divide whose double points are all passed left to right by both
/// strands, under the orientation recorded in `reversed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedDivide {
    pub divide: Divide,
    /// Branches traversed against their traced direction.
    pub reversed: Vec<bool>,
}

impl NormalizedDivide {
    pub fn word(&self) -> &DivideWord {
        &self.divide.word
    }

    /// Vertical tangencies (turn events) of the layout.
    pub fn turns(&self) -> usize {
        self.divide.word.events.iter().filter(|e| !e.is_cross()).count()
    }
}

/// Directions of every slot after flipping the branches marked in `reversed`.
fn oriented_directions(d: &Divide, reversed: &[bool]) -> Vec<Vec<bool>> {
    let mut dirs = d.directions();
    let own = d.owners();
    for (g, row) in dirs.iter_mut().enumerate() {
        for (h, east) in row.iter_mut().enumerate() {
            if reversed.get(own[g][h]).copied().unwrap_or(false) {
                *east = !*east;
            }
        }
    }
    dirs
}

/// Replaces every double point passed westward by a zigzag so that the
/// double point moves onto an eastward piece. Each westward strand costs two
/// extra turns; the divide is unchanged up to isotopy.
pub fn hirasawa_normalize(d: &Divide, reversed: &[bool]) -> NormalizedDivide {
    let dirs = oriented_directions(d, reversed);
    let mut events = Vec::with_capacity(d.word.events.len());
    for (k, &ev) in d.word.events.iter().enumerate() {
        let Event::Cross(i) = ev else {
            events.push(ev);
            continue;
        };
        let lower = dirs[k][i as usize - 1];
        let upper = dirs[k][i as usize];
        use Event::{Birth as B, Cross as X, Death as D};
        match (lower, upper) {
            (true, true) => events.push(ev),
            (false, true) => events.extend([B(i + 2), X(i + 1), D(i)]),
            (true, false) => events.extend([B(i), X(i + 1), D(i + 2)]),
            (false, false) => events.extend([B(i + 2), B(i + 3), X(i + 2), D(i + 1), D(i)]),
        }
    }
    let word = DivideWord {
        name: d.word.name.clone(),
        left: d.word.left,
        right: d.word.right,
        events,
    };
    let divide = validate(&word).expect("zigzag gadgets are isotopies");
    // Branches are traced from the same endpoints, so their ids and
    // directions carry over.
    NormalizedDivide {
        divide,
        reversed: reversed.to_vec(),
    }
}

/// Whether every double point has both strands heading east.
pub fn is_normalized(d: &Divide, reversed: &[bool]) -> bool {
    let dirs = oriented_directions(d, reversed);
    d.word.events.iter().enumerate().all(|(k, ev)| match *ev {
        Event::Cross(i) => dirs[k][i as usize - 1] && dirs[k][i as usize],
        _ => true,
    })
}

/// The doubled drawing of the link as a Morse word.
pub fn link_word(word: &DivideWord) -> LinkWord {
    let mut lw = LinkWord::default();
    let counts = word.counts();
    let hint = |lw: &mut LinkWord, c: u32| {
        let gap = lw.gap();
        for h in 1..=c {
            lw.hints.push(Visit { slot: Slot { gap, height: 2 * c + 1 - h }, east: true });
        }
    };
    for k in 1..=word.left {
        lw.push(Event::Birth(k));
    }
    hint(&mut lw, counts[0]);
    for (k, &ev) in word.events.iter().enumerate() {
        let c = counts[k];
        match ev {
            Event::Cross(i) => {
                // The strand climbing in the divide is over in the upper half
                // and under in the lower half; in both it falls in the picture.
                lw.cross(2 * c - i, false);
                lw.cross(i, false);
            }
            Event::Birth(i) => {
                let m = c + 1 - i;
                lw.push(Event::Birth(i));
                for p in i + 1..=i + 2 * m {
                    lw.cross(p, true);
                }
                lw.push(Event::Birth(i + 1));
                for p in i + 2..=i + 2 * m + 2 {
                    lw.cross(p, false);
                }
            }
            Event::Death(i) => {
                let m = c - i - 1;
                for p in (i + 1..=i + 2 * m + 1).rev() {
                    lw.cross(p, true);
                }
                lw.push(Event::Death(i));
                for p in (i + 1..=i + 2 * m).rev() {
                    lw.cross(p, false);
                }
                lw.push(Event::Death(i));
            }
        }
        hint(&mut lw, counts[k + 1]);
    }
    for k in (1..=word.right).rev() {
        lw.push(Event::Death(k));
    }
    lw
}

/// The doubled drawing with the two lifts of every strand side by side: the
/// west-pointing copy of divide strand h at height 2h − 1, the east-pointing
/// copy at 2h. East copies lie above all west copies in space. At a turn one
/// lift passes straight between the layers; the other runs out around every
/// strand on the cheaper side and back, once under the stack and once over.
pub fn folded_link_word(word: &DivideWord) -> LinkWord {
    folded_link_word_with(word, |_, above, below| above <= below)
}

/// [`folded_link_word`] with the side of each finger chosen by `top(event,
/// strands above, strands below)`; `true` sends the finger over the top.
pub fn folded_link_word_with(word: &DivideWord, mut top: impl FnMut(usize, u32, u32) -> bool) -> LinkWord {
    let mut lw = LinkWord::default();
    let counts = word.counts();
    let hint = |lw: &mut LinkWord, c: u32| {
        let gap = lw.gap();
        for h in 1..=c {
            lw.hints.push(Visit { slot: Slot { gap, height: 2 * h }, east: true });
        }
    };
    for h in 1..=word.left {
        lw.push(Event::Birth(2 * h - 1));
    }
    hint(&mut lw, counts[0]);
    for (k, &ev) in word.events.iter().enumerate() {
        let c = counts[k];
        match ev {
            Event::Cross(i) => {
                // The pair of copies of strand i climbs past the pair of
                // strand i + 1; east copies pass over west ones, and within a
                // layer the climbing copy is under.
                lw.cross(2 * i, true);
                lw.cross(2 * i + 1, false);
                lw.cross(2 * i - 1, false);
                lw.cross(2 * i, false);
            }
            Event::Birth(i) => {
                let total = 2 * c + 4;
                lw.push(Event::Birth(2 * i - 1));
                lw.push(Event::Birth(2 * i));
                if top(k, total - 2 * i - 1, 2 * i - 1) {
                    finger(&mut lw, 2 * i + 1, total);
                } else {
                    finger(&mut lw, 2 * i, 1);
                }
            }
            Event::Death(i) => {
                let total = 2 * c;
                if top(k, total - 2 * i - 2, 2 * i - 2) {
                    finger(&mut lw, 2 * i + 2, total);
                } else {
                    finger(&mut lw, 2 * i - 1, 1);
                }
                lw.push(Event::Death(2 * i));
                lw.push(Event::Death(2 * i - 1));
            }
        }
        hint(&mut lw, counts[k + 1]);
    }
    for _ in 0..word.right {
        lw.push(Event::Death(1));
    }
    lw
}

/// Moves the strand at `from` to `to` and back, rising over and sinking
/// under every strand on the way.
fn finger(lw: &mut LinkWord, from: u32, to: u32) {
    let (lo, hi) = (from.min(to), from.max(to));
    let up: Vec<u32> = (lo..hi).collect();
    let (out, back): (Vec<u32>, Vec<u32>) = if to > from {
        (up.clone(), up.into_iter().rev().collect())
    } else {
        (up.iter().rev().copied().collect(), up)
    };
    for p in out.into_iter().chain(back) {
        lw.cross(p, true);
    }
}

/// A band of the surface, attached at a crossing of the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Band {
    pub crossing: usize,
    /// Signed number of half twists.
    pub half_twists: i8,
}

/// Disk-band surface from Seifert's algorithm: one disk per Seifert circle,
/// one half-twisted band per crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    pub disks: usize,
    pub bands: Vec<Band>,
    pub boundary_components: usize,
    /// Connected pieces of the surface.
    pub pieces: usize,
}

impl SeifertData {
    pub fn euler(&self) -> i64 {
        self.disks as i64 - self.bands.len() as i64
    }
}

/// Diagrams seen by the third-move search from each starting drawing.
pub const SEARCH_BUDGET: usize = 2_000;

/// Builds the doubled link diagram of the layout and simplifies it until its
/// Seifert surface is as large as the Conway polynomial allows, then returns
/// that surface together with the diagram that bounds it.
///
/// A Seifert surface of Euler characteristic 1 − deg ∇ has minimal genus, so
/// reaching that value ends the search with a certificate. The search starts
/// from the folded drawing of the layout and of its reflections, with the
/// fingers sent to the cheaper side, then all over the top, then all under
/// the bottom. If no start reaches the bound, the best diagram found wins.
pub fn build_surface_and_link(nd: &NormalizedDivide) -> (SeifertData, LinkDiagram) {
    let word = nd.word();
    let words = [word.clone(), word.mirrored(), word.reversed(), word.mirrored().reversed()];
    let policies: [fn(usize, u32, u32) -> bool; 3] =
        [|_, above, below| above <= below, |_, _, _| true, |_, _, _| false];
    let score = |d: &LinkDiagram| d.seifert_circles() as i64 - d.crossings.len() as i64;
    let mut target = None;
    let mut best: Option<LinkDiagram> = None;
    for policy in policies {
        for w in &words {
            let raw = folded_link_word_with(w, policy).to_diagram().reduce();
            if target.is_none() {
                target = Some(conway_degree(&raw).map_or(i64::MIN, |deg| 1 - deg));
            }
            let d = raw.simplify(SEARCH_BUDGET, target);
            if best.as_ref().is_none_or(|b| score(&d) > score(b)) {
                best = Some(d);
            }
            if best.as_ref().map(score) >= target {
                let diagram = best.unwrap().normalized();
                return (seifert_surface(&diagram), diagram);
            }
        }
    }
    let diagram = best.expect("at least one start").normalized();
    (seifert_surface(&diagram), diagram)
}

/// Degree of the Conway polynomial, read off as the span of the Alexander
/// polynomial; `None` when both vanish.
fn conway_degree(d: &LinkDiagram) -> Option<i64> {
    if d.crossings.is_empty() {
        return (d.component_count() == 1).then_some(0);
    }
    let a = knotpoly::alexander(d);
    Some((a.max_degree()? - a.min_degree()?) as i64)
}

pub fn seifert_surface(diagram: &LinkDiagram) -> SeifertData {
    SeifertData {
        disks: diagram.seifert_circles(),
        bands: diagram
            .crossings
            .iter()
            .enumerate()
            .map(|(k, x)| Band { crossing: k, half_twists: x.sign })
            .collect(),
        boundary_components: diagram.component_count(),
        pieces: diagram.split_groups(),
    }
}

/// (1 − χ)/2 for a connected surface with one boundary circle.
pub fn surface_genus(sd: &SeifertData) -> Result<usize, AcampoError> {
    if sd.pieces != 1 {
        return Err(AcampoError::Disconnected(sd.pieces));
    }
    if sd.boundary_components != 1 {
        return Err(AcampoError::MultiBoundary(sd.boundary_components));
    }
    Ok(((1 - sd.euler()) / 2) as usize)
}

/// The link diagram of a divide, via its normalization with traced orientations.
pub fn divide_link(d: &Divide) -> (SeifertData, LinkDiagram) {
    let nd = hirasawa_normalize(d, &vec![false; d.branch_count()]);
    build_surface_and_link(&nd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divide(s: &str) -> Divide {
        validate(&DivideWord::from_compact("t", s).unwrap()).unwrap()
    }

    #[test]
    fn arc_gives_unknot() {
        let (sd, ld) = divide_link(&divide("left 1 /  / right 1"));
        assert!(ld.crossings.is_empty());
        assert_eq!(ld.component_count(), 1);
        assert_eq!(surface_genus(&sd).unwrap(), 0);
    }

    #[test]
    fn curl_normalization() {
        // A curl in the plain Morse position is already normalized; the one
        // whose cap is twisted is not.
        assert!(is_normalized(&divide("left 1 / b 1; x 2; d 1 / right 1"), &[false]));
        let d = divide("left 1 / b 2; x 2; d 1 / right 1");
        assert!(!is_normalized(&d, &[false]));
        let nd = hirasawa_normalize(&d, &[false]);
        assert!(is_normalized(&nd.divide, &[false]));
        assert_eq!(nd.divide.delta, 1);
        assert_eq!(nd.turns(), 4);
        // Already normalized words are left alone.
        assert_eq!(hirasawa_normalize(&nd.divide, &[false]), nd);
    }

    #[test]
    fn genus_is_delta() {
        for s in [
            "left 1 / b 1; x 2; d 1 / right 1",
            "left 1 / b 2; x 1; d 2 / right 1",
            "left 1 / b 2; x 1; x 2; x 1; d 2 / right 1",
            "left 1 / b 1; b 1; x 2; d 2; x 1; d 2 / right 1",
            "left 2 / x 1; d 1 / right 0",
        ] {
            let d = divide(s);
            let (sd, ld) = divide_link(&d);
            assert_eq!(ld.component_count(), 1, "{s}");
            assert_eq!(sd.euler(), 1 - 2 * d.delta as i64, "{s}");
            assert_eq!(surface_genus(&sd).unwrap(), d.delta, "{s}");
        }
    }

    #[test]
    fn two_arcs_link_once() {
        let d = divide("left 2 / x 1 / right 2");
        let (_, ld) = divide_link(&d);
        assert_eq!(ld.component_count(), 2);
        assert_eq!(ld.linking_number(0, 1).unwrap().abs(), 1);
    }

    #[test]
    fn both_drawings_agree() {
        for s in ["left 1 / b 2; x 1; x 2; x 1; d 2 / right 1", "left 2 / x 1; b 1; x 2; d 1; x 1 / right 2"] {
            let w = DivideWord::from_compact("t", s).unwrap();
            let a = link_word(&w).to_diagram().reduce();
            let b = folded_link_word(&w).to_diagram().reduce();
            assert_eq!(knotpoly::conway_skein(&a), knotpoly::conway_skein(&b), "{s}");
        }
    }

    #[test]
    fn split_divide_has_no_target() {
        let d = divide("left 2 / d 1; b 1; x 1; x 1 / right 2");
        assert!(!d.is_connected());
        let (sd, ld) = divide_link(&d);
        assert_eq!(ld.component_count(), 2);
        assert_eq!(sd.pieces, 2);
    }
}
