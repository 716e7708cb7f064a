//! Command-line front end: argument definitions, figure presets, CSV
//! records and the runner behind the `merodyn` binary.

pub mod args;
pub mod presets;
pub mod records;
mod run;

pub use run::{
    compute, describe, julia_config, pixel_rows, render_command, run, Artifact, Failure, Table,
};
