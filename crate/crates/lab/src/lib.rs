//! File formats, bench parser and command-line front end for `photon-su6`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod formats;

pub use error::{LabError, Result};
