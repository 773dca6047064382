//! Reproducibility linter for R data-analysis projects.
//!
//! Scans a project directory, classifies its files, extracts facts from R
//! and R Markdown sources without running them, and reports on layout,
//! paths, randomness and build order.

pub mod analyzer;
pub mod checks;
pub mod cli;
pub mod config;
pub mod error;
pub mod graph;
pub mod guard;
pub mod log;
pub mod paths;
pub mod project;
pub mod sandbox;
pub mod scanner;

pub use error::{Error, Result};
