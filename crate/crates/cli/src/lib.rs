//! Library side of the `mrp` command-line tool: instance parsing,
//! command dispatch, and report rendering, separated from argument
//! handling so integration tests can drive commands directly.

pub mod commands;
pub mod instance;

pub use commands::{dyadic_instance, run_command, CliError, Command, Report, RunOptions};
pub use instance::{
    parse_instance, parse_named, serialize_instance, InstanceError, InstanceFile,
    NamedDecomposition, NamedFamily,
};
