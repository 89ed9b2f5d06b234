//! Sweeps, file formats and command-line plumbing around
//! [`magwalk_core`].

pub mod config;
pub mod error;
pub mod export;
pub mod parse;
pub mod sweep;

pub use crate::config::RunOptions;
pub use crate::error::{Error, Result};
pub use crate::export::{export_csv, export_json, parse_csv, parse_json, Format};
pub use crate::sweep::{run_sweep, Observable, SweepAxis, SweepRecord, SweepSpec};
