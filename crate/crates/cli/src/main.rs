use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use olkit_core::functional::Kind;
use olkit_core::polyadic::DEFAULT_SEED;

use olkit::commands::{self, Outcome, Settings};
use olkit::error::CliError;
use olkit::format::{parse, serialize, Document};
use olkit::output::{render_documents, render_report, ReportFormat};

/// Workbench for finite ortholattices and their quantifier algebras.
#[derive(Debug, Parser)]
#[command(name = "olkit", version)]
struct Cli {
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Size cap; its meaning depends on the command.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Write the produced document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Worker threads (0 = one per core). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every law that applies to the document's kind.
    Check { file: PathBuf },
    /// Rewrite a document in canonical form.
    Fmt { file: PathBuf },
    /// MacNeille completion of an ortholattice, or the closed sets of a frame.
    Macneille { file: PathBuf },
    /// The orthoframe of an ortholattice.
    Frame { file: PathBuf },
    /// Full functional algebras.
    Functional {
        #[command(subcommand)]
        command: FunctionalCommand,
    },
    /// Move between δ-free cylindric and σ-free polyadic form.
    Convert { direction: Direction, file: PathBuf },
    /// Amalgamation certificates.
    Amalgam {
        #[command(subcommand)]
        command: AmalgamCommand,
    },
    /// Recursive amalgamation chains of a monadic ortholattice.
    Chain {
        #[command(subcommand)]
        command: ChainCommand,
    },
    /// Search for a functional representation of a monadic ortholattice.
    Embed {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_base: usize,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
    },
    /// All ortholattices of a size up to isomorphism.
    Enumerate {
        #[arg(long)]
        size: usize,
        /// Emit one monadic document per quantifier instead.
        #[arg(long)]
        quantifiers: bool,
    },
}

#[derive(Debug, Subcommand)]
enum FunctionalCommand {
    /// Materialize and verify a full functional algebra over a base.
    Build {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        index: u32,
        #[arg(long, value_enum, default_value_t = KindArg::Monadic)]
        kind: KindArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Monadic,
    DeltaFreeLiteral,
    DeltaFreeCoordinatewise,
    SigmaFreePolyadic,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Monadic => Kind::Monadic,
            KindArg::DeltaFreeLiteral => Kind::DeltaFreeLiteral,
            KindArg::DeltaFreeCoordinatewise => Kind::DeltaFreeCoordinatewise,
            KindArg::SigmaFreePolyadic => Kind::SigmaFreePolyadic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Direction {
    Cyl2pol,
    Pol2cyl,
}

#[derive(Debug, Subcommand)]
enum AmalgamCommand {
    /// Search for a certificate for a V-formation.
    Find {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_size: usize,
        /// Accept a plain amalgam; by default a super-amalgam is required.
        #[arg(long)]
        plain: bool,
    },
    /// Verify a certificate document.
    Verify { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum ChainCommand {
    /// Build the first stages of the chain.
    Build {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        stages: usize,
        #[arg(long, default_value_t = 16)]
        max_size: usize,
    },
    /// Re-verify a chain document and the limit lemmas at its last stage.
    Check { file: PathBuf },
}

fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    parse(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let s = Settings { seed: cli.seed, cap: cli.cap };
    match &cli.command {
        Command::Check { file } => commands::check(&read_document(file)?, &s),
        Command::Fmt { file } => Ok(commands::fmt(read_document(file)?)),
        Command::Macneille { file } => commands::macneille(&read_document(file)?, &s),
        Command::Frame { file } => commands::frame(&read_document(file)?),
        Command::Functional { command: FunctionalCommand::Build { base, points, index, kind } } => {
            commands::functional_build(&read_document(base)?, *points, *index, (*kind).into(), &s)
        }
        Command::Convert { direction, file } => {
            let doc = read_document(file)?;
            match direction {
                Direction::Cyl2pol => commands::cyl2pol(&doc),
                Direction::Pol2cyl => commands::pol2cyl(&doc, &s),
            }
        }
        Command::Amalgam { command } => match command {
            AmalgamCommand::Find { file, max_size, plain } => {
                commands::amalgam_find(&read_document(file)?, *max_size, !plain)
            }
            AmalgamCommand::Verify { file } => commands::amalgam_verify(&read_document(file)?),
        },
        Command::Chain { command } => match command {
            ChainCommand::Build { file, stages, max_size } => {
                commands::chain_build(&read_document(file)?, *stages, *max_size)
            }
            ChainCommand::Check { file } => commands::chain_check(&read_document(file)?),
        },
        Command::Embed { file, max_base, max_points } => {
            commands::embed(&read_document(file)?, *max_base, *max_points)
        }
        Command::Enumerate { size, quantifiers } => commands::enumerate(*size, *quantifiers, &s),
    }
}

/// Documents go to `--output` when given, otherwise to standard output; the
/// report follows on standard output only when there is no document there.
fn emit(cli: &Cli, out: &Outcome) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    let doc_text = match (out.documents.as_slice(), out.many) {
        ([], false) => None,
        ([d], false) => Some(serialize(d)),
        (docs, _) => Some(render_documents(docs)),
    };
    match (&doc_text, &cli.output) {
        (Some(text), Some(path)) => {
            std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            if let Some(r) = &out.report {
                stdout.write_all(render_report(r, cli.format).as_bytes())?;
            }
        }
        (Some(text), None) => stdout.write_all(text.as_bytes())?,
        (None, _) => {
            if let Some(r) = &out.report {
                stdout.write_all(render_report(r, cli.format).as_bytes())?;
            }
        }
    }
    stdout.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("olkit: {e}");
            return ExitCode::from(3);
        }
    };
    let result = pool.install(|| run(&cli));
    let code = match result {
        Ok(out) => {
            if let Some(msg) = &out.message {
                eprintln!("olkit: {msg}");
            }
            match emit(&cli, &out) {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("olkit: {e}");
                    e.exit_code()
                }
            }
        }
        Err(CliError::Violations(r)) => {
            print!("{}", render_report(&r, cli.format));
            1
        }
        Err(e) => {
            eprintln!("olkit: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
