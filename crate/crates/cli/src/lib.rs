//! Library side of the `hspec` command-line tool: experiment commands,
//! CSV output, and run manifests. The binary in `main.rs` is a thin
//! argument-parsing layer over this.

pub mod commands;
pub mod manifest;
pub mod output;

pub use commands::{CliError, CmdResult};
pub use manifest::{Parameters, Results, RunManifest};
