//! Definition files for Lie algebroid structures and the command layer that
//! runs verifier checks on them.

pub mod catalog;
pub mod commands;
pub mod error;
pub mod lexer;
pub mod model;
pub mod parser;

pub use error::{ErrorKind, ParseError, UsageError};
pub use model::{DefinitionFile, Invocation, Structure};
pub use parser::{parse, parse_bytes};
