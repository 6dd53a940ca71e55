use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use diffrest::limits::Limits;
use diffrest_cli::commands::{self, CliError, CmdResult};
use diffrest_cli::doc::render;
use diffrest_cli::read_document;

/// Finite difference-restriction algebras and their dual étale spaces.
///
/// Documents are JSON files (or `-` for stdin). Exit codes: 0 success,
/// 1 a checked property failed, 2 bad input. Set DIFFREST_SIZE_CAP to
/// change the element caps of the exhaustive checks.
#[derive(Parser)]
#[command(name = "diffrest", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Axiom, space, morphism or relation report; exit 0 iff valid
    Validate { file: String },
    /// Maximal filters, their ≈ classes, and the basic open of each element
    Filters { algebra: String },
    /// The dual document: F of an algebra, G of a space, or the dual of a map or relation
    Dualize { file: String },
    /// The completion, its embedding and a density certificate
    Complete {
        algebra: String,
        /// Lift these operators to the completion
        #[arg(long = "with-op", num_args = 1..)]
        with_op: Vec<String>,
    },
    /// Triangle identities, naturality and idempotence checks
    Roundtrip { file: String },
    /// Homomorphism or space-morphism report
    CheckHom {
        map: String,
        /// Emit the dual morphism instead of the report
        #[arg(long)]
        dualize: bool,
    },
    /// Classify an operator (an operator document, or a name on the algebra)
    CheckOp {
        algebra: String,
        op: String,
        /// Emit the dual relation instead of the report
        #[arg(long)]
        relation: bool,
    },
    /// Classify the concrete operations on a pfalgebra
    ClassifyOp { pfalgebra: String },
    /// Emit every built-in fixture
    Catalog {
        /// Write one file per fixture into this directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a document in canonical form
    Normalize { file: String },
}

fn install_size_cap() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("DIFFREST_SIZE_CAP") else {
        return Ok(());
    };
    let cap: usize = raw.trim().parse().map_err(|_| {
        CliError::Input(diffrest_cli::doc::Diagnostic::new(
            "",
            format!("DIFFREST_SIZE_CAP must be a positive integer, got `{raw}`"),
        ))
    })?;
    if cap == 0 {
        return Err(CliError::Input(diffrest_cli::doc::Diagnostic::new(
            "",
            "DIFFREST_SIZE_CAP must be positive",
        )));
    }
    let _ = Limits::install(Limits::default().with_element_cap(cap));
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    install_size_cap()?;
    match cli.command {
        Command::Validate { file } => commands::validate(&read_document(&file)?),
        Command::Filters { algebra } => commands::filters(&read_document(&algebra)?),
        Command::Dualize { file } => commands::dualize(&read_document(&file)?),
        Command::Complete { algebra, with_op } => {
            commands::complete_cmd(&read_document(&algebra)?, &with_op)
        }
        Command::Roundtrip { file } => commands::roundtrip(&read_document(&file)?),
        Command::CheckHom { map, dualize } => commands::check_hom(&read_document(&map)?, dualize),
        Command::CheckOp {
            algebra,
            op,
            relation,
        } => commands::check_op(&read_document(&algebra)?, &op, relation),
        Command::ClassifyOp { pfalgebra } => commands::classify_op(&read_document(&pfalgebra)?),
        Command::Catalog { out } => commands::catalog(out.as_deref()),
        Command::Normalize { file } => commands::normalize(&read_document(&file)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", render(&outcome.output));
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprint!("{}", render(&e.to_json()));
            ExitCode::from(2)
        }
    }
}
