//! Command-line front end: a small input grammar for nest algebras,
//! embeddings, cell homomorphisms, and direct systems, plus commands that
//! emit deterministic JSON reports.

pub mod commands;
pub mod parser;

pub use commands::{run, summarize, CliError, Options};
pub use parser::{ParseError, Workspace};
