//! Divides and their links, with the invariants that tie them together.
//!
//! A divide is an immersed collection of arcs in a disk. Here it is written
//! as a Morse word (see [`word`]), traced into branches ([`divide`]), closed
//! into plane curves ([`closure`]), measured by Arnold's invariants
//! ([`arnold`]), turned into a link diagram ([`acampo`]) whose Conway
//! polynomial is computed exactly ([`knotpoly`]), and finally compared to the
//! second-order invariant evaluated by curve moves ([`moves`]).
//!
//! Fixture files live in a corpus ([`corpus`]) and are checked entry by
//! entry ([`verify`]). The `divides` binary wraps all of this ([`cli`]) and
//! can draw divides and link diagrams as SVG ([`svg`]).
//!
//! ```
//! use divides::acampo::divide_link;
//! use divides::knotpoly::{casson_c2, conway_skein};
//! use divides::moves::{j2_auto, Outcome, SearchBudget};
//! use divides::{validate, DivideWord};
//!
//! let w = DivideWord::from_compact("curl", "left 1 / b 1; x 2; d 1 / right 1").unwrap();
//! let d = validate(&w).unwrap();
//! let c2 = casson_c2(&conway_skein(&divide_link(&d).1)).unwrap();
//! let Outcome::Value { value: j2, .. } = j2_auto(&d, SearchBudget::default()).unwrap() else { panic!() };
//! assert_eq!((c2, j2), (1, 1));
//! ```

pub mod acampo;
pub mod arnold;
pub mod cli;
pub mod closure;
pub mod corpus;
pub mod divide;
pub mod knotpoly;
pub mod link;
pub mod moves;
pub mod poly;
pub mod svg;
pub mod verify;
pub mod word;

pub use arnold::{arf_from_j, j_closed, j_divide, JValues};
pub use closure::{close_divide, region_windings, ClosedCurve, RegionMap, Side};
pub use divide::{validate, Divide, DivideError};
pub use word::{parse_divide, DivideWord, Event, ParseError};
