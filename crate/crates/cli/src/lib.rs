//! Command-line front end for `dillscope-core`: rule loading, distance
//! curves, classification reports, space-time diagrams and the built-in
//! reproduction suite. The binary in `main.rs` is a thin clap layer over the
//! functions here.

pub mod commands;
pub mod error;
pub mod output;
pub mod ppm;
pub mod rules;
pub mod sampling;
pub mod verify;

pub use error::CliError;
