//! Library half of the `sparseres` command line tool: subcommand
//! implementations, output documents and scene emission.

pub mod commands;
pub mod plot;
pub mod report;
