//! Relative (two-colored) operads and the combinatorics around them.

pub mod bar;
pub mod demo;
pub mod error;
pub mod geom;
pub mod operad;
pub mod pairs;
pub mod partitions;
pub mod render;
pub mod report;
pub mod sets;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};
