//! Library half of the `stackdist` command-line tool.

pub mod app;
pub mod ranges;
pub mod verify;
