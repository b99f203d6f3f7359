use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relayarea::config::parse_cli_length;
use relayarea::{execute, Command, Overrides};

#[derive(Parser)]
#[command(name = "relayarea", version, about = "Relay-area maps, placement search and model validation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Relaying-probability map over the sector grid
    MapRea(Common),
    /// Expected-energy map over the sector grid
    MapEea(Common),
    /// Relay interference over the six neighbouring cells
    MapIci(Common),
    /// Gain-to-loss ratio of the configured layout
    Gamma(Common),
    /// Worst-case energy metric, optionally swept over cell size
    Psi(Common),
    /// Relay placement search
    Optimize(Common),
    /// Per-point scheme selection
    SchemeMap(Common),
    /// Error ratios of the closed forms against Monte Carlo
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the oracle seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, all cores by default
    #[arg(long, env = "RELAYAREA_THREADS")]
    threads: Option<usize>,
    /// Overrides the grid step, e.g. "25 m"
    #[arg(long, value_parser = parse_cli_length)]
    grid_step: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, c) = match cli.cmd {
        Cmd::MapRea(c) => (Command::MapRea, c),
        Cmd::MapEea(c) => (Command::MapEea, c),
        Cmd::MapIci(c) => (Command::MapIci, c),
        Cmd::Gamma(c) => (Command::Gamma, c),
        Cmd::Psi(c) => (Command::Psi, c),
        Cmd::Optimize(c) => (Command::Optimize, c),
        Cmd::SchemeMap(c) => (Command::SchemeMap, c),
        Cmd::Validate(c) => (Command::Validate, c),
    };
    let ov = Overrides { seed: c.seed, grid_step: c.grid_step };
    match execute(cmd, &c.config, &c.out, &ov, c.threads) {
        Ok(art) => {
            for (k, v) in &art.summary {
                println!("{k}: {v}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
