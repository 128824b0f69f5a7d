#![no_std]
#![doc = include_str!("../README.md")]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod field;
pub mod linalg;
pub mod optics;
pub mod state;
#[cfg(any(test, feature = "testing"))]
pub mod testing;

pub use error::{Error, Result};
