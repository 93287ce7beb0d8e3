// mdbook cannot run Rust listings against a local crate, so every chapter is
// pulled into this crate as module docs and `cargo test --doc` runs them.

#[doc = include_str!("src/divides.md")]
pub mod divides_chapter {}
#[doc = include_str!("src/first-order.md")]
pub mod first_order {}
#[doc = include_str!("src/links.md")]
pub mod links {}
#[doc = include_str!("src/moves.md")]
pub mod moves {}
#[doc = include_str!("src/corpus.md")]
pub mod corpus {}
