use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cornerforge_cli::ops::{self, CommandIo, Format};
use cornerforge_cli::{log_debug, CliError};

#[derive(Parser)]
#[command(
    name = "cornerforge",
    about = "Toric monoids, monoidal complexes and blow-up atlases",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input document (UTF-8 JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output path (default: stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = CliFormat::Text)]
    format: CliFormat,

    /// Named entity to operate on; may be repeated where a command takes
    /// several.
    #[arg(long, global = true)]
    entity: Vec<String>,

    /// Seed for numeric sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Dual monoid of a monoid entity.
    Dual,
    /// Hilbert basis of a monoid entity.
    Hilbert,
    /// Face lattice of a monoid entity.
    Faces,
    /// Validate the monoidal complex axioms.
    CheckComplex,
    /// Validate the saturated refinement axioms.
    CheckRefinement,
    /// Blow-up atlas of a monoid along a refinement of its dual complex.
    Blowup,
    /// Lift a monomial map through a blow-up.
    Lift,
    /// Pull a refinement back along a monomial map.
    Pullback,
    /// Resolve: subdivide the dual fan until all charts are smooth.
    Resolve,
    /// Evaluate a monomial map at sampled interior points.
    Eval,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((exit, stdout, output)) => {
            let write_result = match output {
                Some(path) => std::fs::write(&path, stdout)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{stdout}");
                    Ok(())
                }
            };
            if let Err(msg) = write_result {
                eprintln!("cornerforge: {msg}");
                return ExitCode::from(2);
            }
            ExitCode::from(exit)
        }
        Err(e) => {
            eprintln!("cornerforge: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(u8, String, Option<PathBuf>), CliError> {
    let input = cli
        .input
        .as_ref()
        .ok_or_else(|| CliError::input("--input is required"))?;
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", input.display())))?;
    let format = match cli.format {
        CliFormat::Text => Format::Text,
        CliFormat::Json => Format::Json,
    };
    let io = CommandIo::from_text(&text, cli.entity.clone(), format, cli.seed)?;
    log_debug(&format!("loaded {} entities", io.doc.entities.len()));
    let out = match cli.command {
        Command::Dual => ops::run_dual(&io)?,
        Command::Hilbert => ops::run_hilbert(&io)?,
        Command::Faces => ops::run_faces(&io)?,
        Command::CheckComplex => ops::run_check_complex(&io)?,
        Command::CheckRefinement => ops::run_check_refinement(&io)?,
        Command::Blowup => ops::run_blowup(&io)?,
        Command::Lift => ops::run_lift(&io)?,
        Command::Pullback => ops::run_pullback(&io)?,
        Command::Resolve => ops::run_resolve(&io)?,
        Command::Eval => ops::run_eval(&io)?,
    };
    Ok((out.exit, out.stdout, cli.output))
}
