//! IO, file formats, and the command-line front end for the
//! substitution-algebra core.

pub mod cli;
pub mod formats;
pub mod report;
