//! mdbook cannot run a book's code blocks against a workspace crate, so
//! this crate includes each chapter as a doc comment: `cargo test` then
//! compiles and runs every Rust snippet in the book via rustdoc. One
//! module per chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/systems.md")]
pub mod systems {}

#[doc = include_str!("../../../book/src/hyperspace.md")]
pub mod hyperspace {}

#[doc = include_str!("../../../book/src/streams.md")]
pub mod streams {}

#[doc = include_str!("../../../book/src/codespace.md")]
pub mod codespace {}

#[doc = include_str!("../../../book/src/chaos_game.md")]
pub mod chaos_game {}

#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
