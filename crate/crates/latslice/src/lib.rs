//! JSON formats, parallel counting and the `latslice` command line on top of
//! [`latslice_core`].

pub mod cli;
pub mod format;
pub mod parallel;

pub use cli::run;
