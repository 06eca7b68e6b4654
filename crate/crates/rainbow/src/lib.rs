//! File formats, verification campaigns and numeric checks on top of
//! [`rainbow_core`].

pub mod format;
pub mod harness;
pub mod numeric;

pub use rainbow_core as core;
