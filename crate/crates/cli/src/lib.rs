//! File formats, workspace loading and command dispatch for the `epic` tool.

pub mod blocks;
pub mod commands;
pub mod workspace;

pub use blocks::LoadError;
pub use commands::{run, run_with_limit, Outcome};
pub use workspace::Workspace;
