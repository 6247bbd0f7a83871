//! Document formats and command implementations behind the `gog` binary.

pub mod app;
pub mod doc;
