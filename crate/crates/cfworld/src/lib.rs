//! File formats, run reports, golden reproductions and the command line
//! for `cfworld-core`.

pub mod cli;
pub mod format;
pub mod report;
pub mod suite;
