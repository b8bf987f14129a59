//! File formats, sampler evaluation, the experiment harness and the
//! command-line front end built on `leaky-core`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod eval;
pub mod io;
pub mod selftest;

pub use error::{CliError, CliResult};
