//! Command-line front end: file formats, configuration and the commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;

pub use commands::run;
