//! Text and JSON formats, seeded invariant suites and the command-line front
//! end for [`adelekit_core`].

pub mod cli;
pub mod json;
pub mod parse;
pub mod suites;
