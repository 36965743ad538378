//! `k3lab`: fibre reports, Weierstrass families, curve counts and moduli
//! paths from the command line.

mod error;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "k3lab", version, about = "Elliptic K3 surfaces, their singular fibres and paths between rational curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Jsonl,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    /// `A = 0`, `B = α`: twelve type II fibres.
    Cuspidal,
    /// `A = ∛(K²)·δ·x1⁸`, `B = α + K x1¹²`: twenty-four `I1` fibres.
    Nodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathKind {
    /// Reach `(g, 0, ..., 0)` from `--m`.
    Connect,
    /// Swap fibre positions by `--sigma`.
    Permute,
    /// Shrink `K` to 0.
    Cusp,
    /// Move one unit from fibre 1 to fibre 2 through nodal surfaces.
    Transfer,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Family over the 12th roots of unity, used when no input file is given.
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Real parameter of the nodal family.
    #[arg(long = "K", default_value_t = 0.25, allow_negative_numbers = true)]
    pub k_param: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the singular fibres of a Weierstrass surface.
    Analyze {
        /// Weierstrass data as `{"A": {...}, "B": {...}}`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        /// Tolerance of the smoothness probe.
        #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
        tol: f64,
    },
    /// Write the Weierstrass data of a family.
    Family {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Stream the members `S + Σ mᵢNᵢ` of `|S + gE|`.
    Enumerate {
        #[arg(long)]
        g: u32,
        /// Number of singular fibres.
        #[arg(long, default_value_t = 12)]
        s: usize,
    },
    /// Yau-Zaslow numbers `n_0..n_gmax`.
    Count {
        #[arg(long)]
        gmax: usize,
    },
    /// Dimension counts for Severi varieties.
    Severi {
        /// Nodal curves on a quartic cut by degree `--l` surfaces.
        #[arg(long)]
        quartic: bool,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        g: Option<u64>,
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Geometric genus.
        #[arg(long)]
        h: Option<u64>,
    },
    /// Trace and verify a path in the moduli of pairs.
    Trace {
        #[arg(long, value_enum)]
        path: Option<PathKind>,
        /// Curve multiplicities on the twelve cuspidal fibres, e.g. `2,1`.
        #[arg(long, value_delimiter = ',')]
        m: Vec<u32>,
        /// Must equal the sum of `--m` when given.
        #[arg(long)]
        g: Option<u32>,
        /// Cycle notation on labels 1..12, e.g. `(1 2)(3 5 4)`.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long = "K", default_value_t = 0.25, allow_negative_numbers = true)]
        k_param: f64,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        /// Smallest allowed distance between fibres.
        #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
        sep: f64,
        /// Continuity threshold; derived from the path when absent.
        #[arg(long, allow_negative_numbers = true)]
        eps_cont: Option<f64>,
        /// Also write the trajectory plot here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// A parsed invocation with its tolerances checked.
#[derive(Debug)]
pub struct JobConfig {
    pub command: Command,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl JobConfig {
    fn new(cli: Cli) -> Result<Self, CliError> {
        let bad = |m: String| CliError::validation("cli::config", "InvalidConfig", m);
        let positive = |name: &str, x: f64| if x > 0.0 && x.is_finite() { Ok(()) } else { Err(bad(format!("--{name} must be positive, got {x}"))) };
        match &cli.command {
            Command::Analyze { tol, .. } => positive("tol", *tol)?,
            Command::Trace { steps, sep, eps_cont, .. } => {
                positive("sep", *sep)?;
                if let Some(e) = eps_cont {
                    positive("eps-cont", *e)?;
                }
                if *steps < 2 {
                    return Err(bad(format!("--steps must be at least 2, got {steps}")));
                }
            }
            _ => {}
        }
        Ok(Self { command: cli.command, output: cli.output, format: cli.format })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail(&CliError::validation("cli::parse", "InvalidArguments", first));
        }
    };
    match JobConfig::new(cli).and_then(|cfg| run::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.code as u8)
}
