//! Problem files, the shipped catalog, reports and the `econvex` command.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod problem;
pub mod render;

pub use error::CliError;
pub use problem::ProblemFile;
