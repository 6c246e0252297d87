use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use stlattice::cli::{run, Emit, RunConfig};
use stlattice::io::InputFormat;
use stlattice::{Fraction, Orientation, SupportDenominator};

#[derive(Parser)]
#[command(
    name = "stlattice",
    version,
    about = "Mine closed spatio-temporal triples, their lattice and temporal rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the maximal triples, one `extent;intent;times` line each.
    MineTriples(Common),
    /// Write the lattice of triples with its Hasse diagram.
    BuildLattice {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "lattice-dot")]
        emit: LatticeFormat,
    },
    /// Write the rules passing both thresholds as CSV.
    MineRules(Common),
    /// Write a JSON report comparing the input with the published toy results.
    Conformance(Common),
    /// Run the pipeline and write any of its outputs.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        emit: EmitArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeFormat {
    LatticeDot,
    LatticeJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Triples,
    LatticeDot,
    LatticeJson,
    Rules,
    Conformance,
}

impl From<EmitArg> for Emit {
    fn from(e: EmitArg) -> Emit {
        match e {
            EmitArg::Triples => Emit::Triples,
            EmitArg::LatticeDot => Emit::LatticeDot,
            EmitArg::LatticeJson => Emit::LatticeJson,
            EmitArg::Rules => Emit::Rules,
            EmitArg::Conformance => Emit::Conformance,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Input cube; the bundled toy dataset when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// long-csv, wide-csv or cube-json.
    #[arg(long, default_value = "wide-csv")]
    format: InputFormat,
    /// JSON file declaring the axis members and their order.
    #[arg(long)]
    axes: Option<PathBuf>,
    /// Minimum support, as a decimal or `p/q`.
    #[arg(long, default_value = "0.7")]
    min_support: Fraction,
    /// Minimum confidence, as a decimal or `p/q`.
    #[arg(long, default_value = "0.8")]
    min_confidence: Fraction,
    /// locations or dimensions.
    #[arg(long, default_value = "locations")]
    support_denominator: SupportDenominator,
    /// by-time or by-dimension.
    #[arg(long, default_value = "by-time")]
    orientation: Orientation,
    /// Add a top (all locations) and bottom (all dimensions and timestamps) node.
    #[arg(long)]
    artificial_bounds: bool,
    /// Restrict rule consequents to these dimensions.
    #[arg(long = "target-dim", value_delimiter = ',')]
    target_dims: Vec<String>,
    /// Keep only rules whose triple covers these timestamps.
    #[arg(long = "target-time", value_delimiter = ',')]
    target_times: Vec<String>,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            input: self.input.clone(),
            format: self.format,
            axes: self.axes.clone(),
            min_support: self.min_support,
            min_confidence: self.min_confidence,
            support_denominator: self.support_denominator,
            orientation: self.orientation,
            artificial_bounds: self.artificial_bounds,
            target_dims: self.target_dims.clone(),
            target_times: self.target_times.clone(),
        }
    }
}

/// Writes through a sibling temporary file so readers never see a partial file.
fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (common, emit) = match &cli.command {
        Command::MineTriples(c) => (c, Emit::Triples),
        Command::BuildLattice { common, emit } => (
            common,
            match emit {
                LatticeFormat::LatticeDot => Emit::LatticeDot,
                LatticeFormat::LatticeJson => Emit::LatticeJson,
            },
        ),
        Command::MineRules(c) => (c, Emit::Rules),
        Command::Conformance(c) => (c, Emit::Conformance),
        Command::Run { common, emit } => (common, Emit::from(*emit)),
    };
    let text = run(&common.config(), emit)?;
    match &common.out {
        Some(path) => write_atomically(path, &text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
