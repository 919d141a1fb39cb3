//! The book chapters, compiled so that every Rust listing runs as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/interference.md")]
pub mod interference {}

#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}

#[doc = include_str!("../../../book/src/pareto.md")]
pub mod pareto {}

#[doc = include_str!("../../../book/src/cellless.md")]
pub mod cellless {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
