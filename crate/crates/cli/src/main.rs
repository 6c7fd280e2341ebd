use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dillscope::commands::{self, CurveKind};
use dillscope::error::{CliError, CliResult, EXIT_USAGE};
use dillscope::output::write_atomic;
use dillscope::verify;

/// Dill maps, Besicovitch/Feldman distances and space-time diagrams.
#[derive(Parser)]
#[command(name = "dillscope", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hamming,
    Levenshtein,
    WeylHamming,
    WeylLevenshtein,
}

impl From<Kind> for CurveKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Hamming => CurveKind::Hamming,
            Kind::Levenshtein => CurveKind::Levenshtein,
            Kind::WeylHamming => CurveKind::WeylHamming,
            Kind::WeylLevenshtein => CurveKind::WeylLevenshtein,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the classification report of a rule as JSON.
    Classify {
        /// Rule file, `builtin:NAME`, or a built-in name.
        rule: String,
    },
    /// Write the normalized distance curve between two words as CSV.
    Distance {
        #[arg(long, value_enum)]
        kind: Kind,
        /// `t(p)^inf` or `fix(<rule>,<seed>)`.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Comma-separated lengths, or `geometric:a,b` for 2^a..=2^b.
        #[arg(long, default_value = "geometric:6,20")]
        lengths: String,
        /// Glyphs of the alphabet, in letter order.
        #[arg(long, default_value = "01")]
        alphabet: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the space-time diagram of a rule as a binary PPM.
    Simulate {
        rule: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the reproduction suite, or one experiment of it.
    Verify {
        #[arg(default_value = "all")]
        id: String,
        /// Print results as JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Directory for CSV/PPM/JSON artifacts.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// List experiment ids and exit.
        #[arg(long)]
        list: bool,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Classify { rule } => print!("{}", commands::classify_json(&rule)?),
        Command::Distance {
            kind,
            x,
            y,
            lengths,
            alphabet,
            out,
        } => {
            let lengths = commands::parse_lengths(&lengths)?;
            let csv = commands::distance_csv(kind.into(), &x, &y, &lengths, &alphabet)?;
            write_atomic(&out, csv.as_bytes())?;
        }
        Command::Simulate {
            rule,
            x,
            steps,
            width,
            out,
        } => write_atomic(&out, &commands::simulate_ppm(&rule, &x, steps, width)?)?,
        Command::Verify {
            id,
            json,
            out_dir,
            list,
        } => {
            if list {
                for e in verify::experiments() {
                    println!("{:<28} {}", e.id, e.summary);
                }
                return Ok(());
            }
            let reports = verify::run(&id)?;
            if let Some(dir) = out_dir {
                verify::write_artifacts(&reports, &dir)?;
            }
            if json {
                print!("{}", verify::json(&reports));
            } else {
                print!("{}", verify::table(&reports));
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::ChecksFailed(_)) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
