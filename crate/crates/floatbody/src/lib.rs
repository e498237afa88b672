//! Command-line front end and multi-threaded drivers for `floatbody-core`.

pub mod cli;
pub mod json;
pub mod parallel;
