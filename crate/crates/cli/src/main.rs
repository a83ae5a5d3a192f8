//! `contextlab` command-line front end.
//!
//! Exit codes: 0 success (negative verdicts included), 2 usage error,
//! 3 input, format or domain error.

mod input;
mod output;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 12345;

#[derive(Debug, Parser)]
#[command(name = "contextlab", version, about = "Contextuality, correlation polytopes and context-mismatch randomness")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and inspect orthogonality hypergraphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Two-valued measures and Kochen-Specker checks.
    #[command(subcommand)]
    States(StatesCmd),
    /// Correlation polytopes.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Born-rule computations.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Context-mismatch random bits.
    #[command(subcommand)]
    Qrng(QrngCmd),
    /// Counterfactual outcome tables.
    #[command(subcommand)]
    Table(TableCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextReport {
    /// The native text format (V/H files, tables).
    Text,
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BitsFormat {
    /// ASCII `0`/`1`.
    Bits,
    /// Packed, most significant bit first.
    Bytes,
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BitsInput {
    Bits,
    Bytes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoordsArg {
    Probability,
    Correlation,
}

#[derive(Debug, Args)]
pub struct ReportArg {
    #[arg(long, value_enum, default_value_t = Report::Json)]
    pub format: Report,
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Hypergraph document from a ray file.
    Build {
        rayfile: PathBuf,
        /// Explicit contexts, one per line (`label: A, B, C`).
        #[arg(long)]
        contexts: Option<PathBuf>,
        #[command(flatten)]
        format: ReportArg,
    },
    /// Context count and atom multiplicities.
    Parity {
        /// Library name or hypergraph/ray file.
        graph: String,
        #[command(flatten)]
        format: ReportArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum StatesCmd {
    /// All two-valued measures.
    Enumerate {
        graph: String,
        #[arg(long, default_value_t = contextlab_core::states::DEFAULT_LIMIT)]
        limit: usize,
        #[command(flatten)]
        format: ReportArg,
    },
    /// Whether no two-valued measure exists, with a witness.
    Ks {
        graph: String,
        #[command(flatten)]
        format: ReportArg,
    },
    /// Truth values per (atom, context) with few noncontextual atoms.
    Contextual {
        graph: String,
        /// Seeded randomized search instead of the minimal one.
        #[arg(long)]
        random: bool,
        #[command(flatten)]
        format: ReportArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum PolyCmd {
    /// Vertices of a scheme's correlation polytope.
    Vertices {
        /// `single`, `pair`, `chsh` or a scheme file.
        scheme: String,
        #[arg(long, value_enum, default_value_t = CoordsArg::Probability)]
        coords: CoordsArg,
        #[arg(long, value_enum, default_value_t = TextReport::Text)]
        format: TextReport,
    },
    /// Facets of the hull of a V-file (or of a scheme's polytope).
    Facets {
        input: String,
        #[arg(long, value_enum, default_value_t = CoordsArg::Probability)]
        coords: CoordsArg,
        #[arg(long, value_enum, default_value_t = TextReport::Text)]
        format: TextReport,
    },
    /// Locate a point relative to an H-file.
    Member {
        hfile: PathBuf,
        /// Comma-separated coordinates.
        #[arg(allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        format: ReportArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuantumCmd {
    /// Singlet CHSH value `E11 + E12 + E21 - E22`.
    Chsh {
        #[arg(long, allow_hyphen_values = true)]
        angles: String,
        #[arg(long, value_enum, default_value_t = Report::Human)]
        format: Report,
    },
    /// Remote-context marginals of an atom on the maximally entangled state.
    Explosion {
        graph: String,
        atom: String,
        /// Two context labels; default is every pair containing the atom.
        #[arg(long)]
        contexts: Option<String>,
        #[command(flatten)]
        format: ReportArg,
    },
    /// Born-rule expectation value.
    Expect {
        /// `zero`, `one`, `plus`, `singlet`, `mixed:D`, `entangled:D` or `vector:a,b,...`.
        #[arg(long)]
        state: String,
        /// `x`, `y`, `z`, `spin:THETA`, `proj:a,b,...` or a `*`-separated tensor product.
        #[arg(long)]
        observable: String,
        #[arg(long, value_enum, default_value_t = Report::Human)]
        format: Report,
    },
}

#[derive(Debug, Subcommand)]
pub enum QrngCmd {
    /// Simulate measurements of |0> along a rotated axis.
    Gen {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        n: usize,
        /// Probability of replacing an outcome by a fair coin.
        #[arg(long)]
        noise: Option<f64>,
        /// Apply the von Neumann extractor.
        #[arg(long)]
        extract: bool,
        #[arg(long, value_enum, default_value_t = BitsFormat::Bits)]
        format: BitsFormat,
    },
    /// Run the statistical battery on a bit file.
    Test {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = BitsInput::Bits)]
        input: BitsInput,
        #[arg(long, default_value_t = contextlab_core::qrng::ALPHA)]
        alpha: f64,
        #[command(flatten)]
        format: ReportArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum TableCmd {
    /// CHSH outcome table with a target mean.
    Chsh {
        #[arg(long, allow_hyphen_values = true)]
        target: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = TextReport::Text)]
        format: TextReport,
    },
    /// Contextual 0/1 table for a Kochen-Specker set.
    Ks {
        graph: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = TextReport::Text)]
        format: TextReport,
    },
    /// Check a table file.
    Validate {
        file: PathBuf,
        /// Hypergraph for a `ks` table whose graph is not a library name.
        #[arg(long)]
        graph: Option<String>,
        #[command(flatten)]
        format: ReportArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| run::dispatch(&cli)),
            Err(e) => Err(run::CliError::Other(format!("cannot start thread pool: {e}"))),
        },
        None => run::dispatch(&cli),
    };
    match result {
        Ok(bytes) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(&bytes).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
