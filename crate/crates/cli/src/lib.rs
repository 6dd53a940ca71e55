//! Document formats and subcommands behind the `diffrest` binary.

pub mod commands;
pub mod doc;

use std::io::Read;

use commands::CliError;
use doc::Document;

/// Read and parse a document from a path, or from stdin for `-`.
pub fn read_document(path: &str) -> Result<Document, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?
    };
    Ok(doc::parse(&text)?)
}
