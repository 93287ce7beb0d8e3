//! Arnold's first-order invariants J⁻ and J⁺.
//!
//! Closed curves get two independent formulas: Viro's index formula over the
//! faces of the complement, and a Seifert-smoothing formula over the nesting
//! of the circles obtained by oriented smoothing of every double point. A
//! one-branch divide takes the mean over its two closures.

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::closure::{close_divide, region_windings, ClosedCurve, Side};
use crate::divide::{half_turn, walk, Divide, DivideError, Slot, Sweep, Visit};
use crate::word::Event;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JValues {
    pub j_minus: Ratio<i64>,
    pub j_plus: Ratio<i64>,
}

impl JValues {
    pub fn integers(j_minus: i64, j_plus: i64) -> Self {
        JValues {
            j_minus: Ratio::from_integer(j_minus),
            j_plus: Ratio::from_integer(j_plus),
        }
    }
}

impl fmt::Display for JValues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "jminus={} jplus={}", self.j_minus, self.j_plus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArnoldError {
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error("J- = {0} is not an even integer")]
    OddJMinus(Ratio<i64>),
}

/// Viro's formula: J⁻ = 1 − Σ_faces ind² + Σ_vertices ind², J⁺ = J⁻ + n.
pub fn j_closed(c: &ClosedCurve) -> JValues {
    let r = region_windings(c);
    let faces: i64 = r.winding.iter().map(|w| w * w).sum();
    let verts: i64 = r.vertex_index.iter().map(|(_, w)| w * w).sum();
    let jm = 1 - faces + verts;
    JValues::integers(jm, jm + c.double_points() as i64)
}

/// Seifert-smoothing formula. With `s` circles of orientation o(c) = ±1,
/// J⁻ = 1 − s − 2 Σ o(c)·o(c') over pairs where c' encloses c.
pub fn j_closed_seifert(c: &ClosedCurve) -> JValues {
    let dirs = c.directions();
    let counts = c.word.counts();
    let mut events = Vec::new();
    let mut gap_dirs: Vec<Vec<bool>> = vec![dirs[0].clone()];
    for (k, &ev) in c.word.events.iter().enumerate() {
        match ev {
            Event::Cross(i) => {
                let (lo, hi) = (dirs[k][i as usize - 1], dirs[k][i as usize]);
                if lo != hi {
                    let mut mid = dirs[k].clone();
                    mid.drain(i as usize - 1..=i as usize);
                    events.push(Event::Death(i));
                    gap_dirs.push(mid);
                    events.push(Event::Birth(i));
                    gap_dirs.push(dirs[k + 1].clone());
                }
                // Coherent strands smooth to two parallel strands: drop the column.
            }
            _ => {
                events.push(ev);
                gap_dirs.push(dirs[k + 1].clone());
            }
        }
    }
    let new_counts: Vec<u32> = gap_dirs.iter().map(|d| d.len() as u32).collect();
    debug_assert_eq!(new_counts.first(), counts.first());
    let sweep = Sweep::from_parts(&events, new_counts.clone());

    let mut circle_of: Vec<Vec<usize>> = new_counts.iter().map(|&n| vec![usize::MAX; n as usize]).collect();
    let mut orient = Vec::new();
    for g in 0..new_counts.len() {
        for h in 1..=new_counts[g] {
            if circle_of[g][h as usize - 1] != usize::MAX {
                continue;
            }
            let start = Visit { slot: Slot { gap: g, height: h }, east: gap_dirs[g][h as usize - 1] };
            let (visits, edge) = walk(&sweep, start);
            debug_assert!(edge.is_none());
            let id = orient.len();
            let mut turn = 0;
            for k in 0..visits.len() {
                let v = visits[k];
                circle_of[v.slot.gap][v.slot.height as usize - 1] = id;
                turn += half_turn(v, visits[(k + 1) % visits.len()]);
            }
            debug_assert_eq!(turn.abs(), 2);
            orient.push(turn.signum());
        }
    }

    let s = orient.len();
    let mut encl = vec![vec![false; s]; s];
    for (g, row) in circle_of.iter().enumerate() {
        let _ = g;
        for (h, &c) in row.iter().enumerate() {
            let mut parity = vec![false; s];
            for &below in &row[..h] {
                parity[below] ^= true;
            }
            for (outer, &p) in parity.iter().enumerate() {
                if p && outer != c {
                    encl[c][outer] = true;
                }
            }
        }
    }
    let mut nest = 0;
    for c in 0..s {
        for outer in 0..s {
            if encl[c][outer] {
                nest += orient[c] * orient[outer];
            }
        }
    }
    let jm = 1 - s as i64 - 2 * nest;
    JValues::integers(jm, jm + c.double_points() as i64)
}

/// Mean of the closed-curve values over both closures.
pub fn j_divide(d: &Divide) -> Result<JValues, DivideError> {
    let u = j_closed(&close_divide(d, Side::Upper)?);
    let l = j_closed(&close_divide(d, Side::Lower)?);
    let two = Ratio::from_integer(2);
    Ok(JValues {
        j_minus: (u.j_minus + l.j_minus) / two,
        j_plus: (u.j_plus + l.j_plus) / two,
    })
}

/// (J⁻/2) mod 2.
pub fn arf_from_j(d: &Divide) -> Result<u8, ArnoldError> {
    let j = j_divide(d)?.j_minus;
    if !j.is_integer() || !(j.to_integer() % 2).is_zero() {
        return Err(ArnoldError::OddJMinus(j));
    }
    Ok((j.to_integer() / 2).rem_euclid(2).to_u8().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::validate;
    use crate::word::DivideWord;

    fn divide(s: &str) -> Divide {
        validate(&DivideWord::from_compact("t", s).unwrap()).unwrap()
    }

    fn chain(n: usize) -> Divide {
        let body = vec!["b 2; x 1; d 2"; n].join("; ");
        divide(&format!("left 1 / {body} / right 1"))
    }

    fn both(c: &ClosedCurve) -> JValues {
        let v = j_closed(c);
        assert_eq!(v, j_closed_seifert(c), "routes disagree on {}", c.word.compact());
        v
    }

    #[test]
    fn standard_closed_curves() {
        // The upper closure of a chain of i curls is a circle with i inner kinks.
        for i in 0..6 {
            let c = close_divide(&chain(i), Side::Upper).unwrap();
            assert_eq!(c.rotation, i as i64 + 1);
            assert_eq!(both(&c), JValues::integers(-3 * i as i64, -2 * i as i64));
        }
    }

    #[test]
    fn figure_eight() {
        let c = close_divide(&chain(1), Side::Lower).unwrap();
        assert_eq!(c.rotation, 0);
        assert_eq!(both(&c), JValues::integers(-1, 0));
    }

    #[test]
    fn standard_divides() {
        for i in 0..6i64 {
            assert_eq!(j_divide(&chain(i as usize)).unwrap(), JValues::integers(-2 * i, -i));
        }
    }

    #[test]
    fn example_closures() {
        let d = divide("left 1 / b 1; b 1; x 2; d 2; x 1; d 2 / right 1");
        let u = both(&close_divide(&d, Side::Upper).unwrap());
        let l = both(&close_divide(&d, Side::Lower).unwrap());
        assert_eq!((u.j_minus.to_integer(), l.j_minus.to_integer()), (-4, -8));
        assert_eq!(j_divide(&d).unwrap().j_minus, Ratio::from_integer(-6));
        assert_eq!(arf_from_j(&d).unwrap(), 1);
    }

    #[test]
    fn arf_values() {
        assert_eq!(arf_from_j(&chain(0)).unwrap(), 0);
        assert_eq!(arf_from_j(&chain(1)).unwrap(), 1);
        assert_eq!(arf_from_j(&chain(2)).unwrap(), 0);
    }

    #[test]
    fn e6_fixture() {
        let d = divide("left 1 / b 2; x 1; x 2; x 1; d 2 / right 1");
        assert_eq!(d.delta, 3);
        let u = both(&close_divide(&d, Side::Upper).unwrap());
        let l = both(&close_divide(&d, Side::Lower).unwrap());
        assert_eq!(u.j_minus + l.j_minus, Ratio::from_integer(-4));
    }
}
