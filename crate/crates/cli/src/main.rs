use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aggsim::{invoke, Command, ConfigSource};

#[derive(Parser)]
#[command(name = "aggsim", version, about = "Accelerated distributed aggregative optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Single solver run with oracle residuals
    Run(Common),
    /// Iterations-to-tolerance over a momentum grid
    Sweep(Common),
    /// Same run over several graph topologies
    Topology(Common),
    /// Two-step delay and noisy communication scenarios
    Robustness(Common),
    /// Conservative step-size / momentum bounds
    Bounds(Common),
    /// Rasterized stability region
    Region(Common),
    /// Predicted vs measured rates on a quadratic instance
    Rates(Common),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Path to a TOML experiment config
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset: placement-paper, cournot-paper or quadratic-demo
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    source: Source,
    /// Output directory (default: `output.dir` from the config, else ./out)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Run(c) => (Command::Run, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
        Cmd::Topology(c) => (Command::Topology, c),
        Cmd::Robustness(c) => (Command::Robustness, c),
        Cmd::Bounds(c) => (Command::Bounds, c),
        Cmd::Region(c) => (Command::Region, c),
        Cmd::Rates(c) => (Command::Rates, c),
    };
    let source = match (common.source.config, common.source.preset) {
        (Some(path), _) => ConfigSource::File(path),
        (None, Some(name)) => ConfigSource::Preset(name),
        (None, None) => unreachable!("clap enforces one source"),
    };
    match invoke(command, &source, common.out.as_deref()) {
        Ok(summary) => {
            // a closed pipe (e.g. `| head`) is not an error of the run
            let _ = writeln!(std::io::stdout(), "{}", summary.to_json());
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("aggsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
