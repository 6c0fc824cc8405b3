//! Standard-library companion to `k3kit-core`: JSON file formats, the
//! verification harness and the `k3kit` command line.

pub mod cli;
pub mod formats;
pub mod verify;
