//! Command-line and HTTP front end for spindual.

pub mod api;
pub mod cli;
pub mod session;
