//! File formats, verification suites, the end-to-end reduction pipeline and
//! a timed search wrapper on top of [`kframe_core`]. The `kframe` binary
//! exposes all of it on the command line.

pub mod error;
pub mod io;
pub mod pipeline;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
