//! The book chapters, included as rustdoc so that every code block in the
//! guide runs under `cargo test --doc` and stays in sync with the library.
//! The rendered sources live in `book/src/`.

#[doc = include_str!("../../../book/src/contours.md")]
pub mod contours {}

#[doc = include_str!("../../../book/src/cauchy.md")]
pub mod cauchy_transforms {}

#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}

#[doc = include_str!("../../../book/src/airy.md")]
pub mod airy {}

#[doc = include_str!("../../../book/src/painleve.md")]
pub mod painleve {}

#[doc = include_str!("../../../book/src/scattering.md")]
pub mod scattering {}

#[doc = include_str!("../../../book/src/orthopoly.md")]
pub mod orthopoly {}

#[doc = include_str!("../../../book/src/szego.md")]
pub mod szego {}
