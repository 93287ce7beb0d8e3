//! SVG drawings of Morse words. Each event gets a column and each strand
//! height a row, with cubic curves through crossings and turns.

use std::fmt::Write;

use crate::link::LinkWord;
use crate::word::{DivideWord, Event};

const W: f64 = 40.0;
const S: f64 = 24.0;
const MARGIN: f64 = 16.0;

struct Canvas {
    out: String,
    top: f64,
}

impl Canvas {
    fn new(gaps: usize, max_strands: u32) -> Self {
        let width = gaps as f64 * W + 2.0 * MARGIN;
        let height = (max_strands.max(1) + 1) as f64 * S + 2.0 * MARGIN;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="2" stroke-linecap="round">"#);
        Canvas { out, top: height - MARGIN }
    }

    fn y(&self, h: u32) -> f64 {
        self.top - h as f64 * S
    }

    /// Left edge of gap `g`; event `g` sits between `W/2` and `W` after it.
    fn x(g: usize) -> f64 {
        MARGIN + g as f64 * W
    }

    fn line(&mut self, x0: f64, h: u32, x1: f64) {
        let y = self.y(h);
        let _ = writeln!(self.out, r#"<path d="M{x0} {y} H{x1}"/>"#);
    }

    /// A strand moving from height `a` to height `b` across an event column,
    /// drawn only between the fractions `from` and `to` of the column.
    fn swing(&mut self, k: usize, a: u32, b: u32, from: f64, to: f64) {
        let (x0, x1) = (Self::x(k) + W / 2.0, Self::x(k + 1));
        let (y0, y1) = (self.y(a), self.y(b));
        if from == 0.0 && to == 1.0 {
            let xm = (x0 + x1) / 2.0;
            let _ = writeln!(self.out, r#"<path d="M{x0} {y0} C{xm} {y0} {xm} {y1} {x1} {y1}"/>"#);
        } else {
            let at = |t: f64| (x0 + (x1 - x0) * t, y0 + (y1 - y0) * (3.0 * t * t - 2.0 * t * t * t));
            let (ax, ay) = at(from);
            let (bx, by) = at(to);
            let _ = writeln!(self.out, r#"<path d="M{ax:.2} {ay:.2} L{bx:.2} {by:.2}"/>"#);
        }
    }

    /// A turn joining heights `a` and `a + 1`, opening to the right for a birth.
    fn turn(&mut self, k: usize, a: u32, birth: bool) {
        let (x0, x1) = (Self::x(k) + W / 2.0, Self::x(k + 1));
        let (tip, open) = if birth { (x0, x1) } else { (x1, x0) };
        let (y0, y1) = (self.y(a), self.y(a + 1));
        let _ = writeln!(self.out, r#"<path d="M{open} {y0} C{tip} {y0} {tip} {y1} {open} {y1}"/>"#);
    }

    fn dot(&mut self, x: f64, h: u32) {
        let y = self.y(h);
        let _ = writeln!(self.out, r#"<circle cx="{x}" cy="{y}" r="3" fill="black"/>"#);
    }

    fn finish(mut self) -> String {
        self.out.push_str("</g>\n</svg>\n");
        self.out
    }
}

/// Draws `events` over strand `counts`; `over(k)` says for crossing `k`
/// whether the rising strand is drawn on top, or `None` for a flat crossing.
fn draw(events: &[Event], counts: &[u32], over: impl Fn(usize) -> Option<bool>) -> Canvas {
    let mut c = Canvas::new(counts.len(), counts.iter().copied().max().unwrap_or(0));
    for (g, &n) in counts.iter().enumerate() {
        for h in 1..=n {
            c.line(Canvas::x(g), h, Canvas::x(g) + W / 2.0);
        }
    }
    for (k, &e) in events.iter().enumerate() {
        let n = counts[k];
        match e {
            Event::Cross(i) => {
                for h in (1..=n).filter(|&h| h != i && h != i + 1) {
                    c.swing(k, h, h, 0.0, 1.0);
                }
                match over(k) {
                    None => {
                        c.swing(k, i, i + 1, 0.0, 1.0);
                        c.swing(k, i + 1, i, 0.0, 1.0);
                    }
                    Some(rising_over) => {
                        let (top, under) = if rising_over { ((i, i + 1), (i + 1, i)) } else { ((i + 1, i), (i, i + 1)) };
                        c.swing(k, top.0, top.1, 0.0, 1.0);
                        c.swing(k, under.0, under.1, 0.0, 0.38);
                        c.swing(k, under.0, under.1, 0.62, 1.0);
                    }
                }
            }
            Event::Birth(j) => {
                for h in 1..=n {
                    let to = if h < j { h } else { h + 2 };
                    c.swing(k, h, to, 0.0, 1.0);
                }
                c.turn(k, j, true);
            }
            Event::Death(j) => {
                for h in (1..=n).filter(|&h| h != j && h != j + 1) {
                    let to = if h < j { h } else { h - 2 };
                    c.swing(k, h, to, 0.0, 1.0);
                }
                c.turn(k, j, false);
            }
        }
    }
    c
}

/// The divide as an immersed curve, with its endpoints marked.
pub fn divide_svg(word: &DivideWord) -> String {
    let counts = word.counts();
    let mut c = draw(&word.events, &counts, |_| None);
    for h in 1..=counts[0] {
        c.dot(Canvas::x(0), h);
    }
    let last = counts.len() - 1;
    for h in 1..=counts[last] {
        c.dot(Canvas::x(last) + W / 2.0, h);
    }
    c.finish()
}

/// A link diagram given as a Morse word, with breaks in under-strands.
pub fn link_word_svg(lw: &LinkWord) -> String {
    let counts = lw.counts();
    draw(&lw.events, &counts, |k| Some(lw.rising_over[k])).finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curl_drawing() {
        let w = DivideWord::from_compact("curl", "left 1 / b 1; x 2; d 1 / right 1").unwrap();
        let svg = divide_svg(&w);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg, divide_svg(&w));
    }

    #[test]
    fn under_strands_are_broken() {
        let lw = crate::acampo::folded_link_word(&DivideWord::from_compact("c", "left 1 / b 1; x 2; d 1 / right 1").unwrap());
        let svg = link_word_svg(&lw);
        let crossings = lw.events.iter().filter(|e| e.is_cross()).count();
        assert_eq!(svg.matches(" L").count(), 2 * crossings);
    }
}
