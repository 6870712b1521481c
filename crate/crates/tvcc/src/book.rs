//! Runs every code block in the mdbook guide as a doctest, so the book and
//! the API cannot drift apart. Each chapter gets its own module to make a
//! failing snippet easy to locate.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/gf2-polynomials.md")]
mod gf2_polynomials {}

#[doc = include_str!("../../../book/src/matrices-and-minors.md")]
mod matrices_and_minors {}

#[doc = include_str!("../../../book/src/periodic-encoders.md")]
mod periodic_encoders {}

#[doc = include_str!("../../../book/src/the-blocked-equivalent.md")]
mod the_blocked_equivalent {}

#[doc = include_str!("../../../book/src/deciding-and-converting.md")]
mod deciding_and_converting {}

#[doc = include_str!("../../../book/src/state-graph-oracle.md")]
mod state_graph_oracle {}

#[doc = include_str!("../../../book/src/command-line.md")]
mod command_line {}
