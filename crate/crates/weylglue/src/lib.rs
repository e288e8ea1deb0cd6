//! Companion crate to `weylglue-core`: JSON formats, report rendering,
//! randomized corpora, and the command-line interface.

// Index loops over relation matrices mirror the core crate's idiom.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod corpus;
pub mod json;
pub mod report;
