//! Configuration, file formats and subcommands for the `relayarea` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod params;
pub mod run;
pub mod units;

pub use config::{load, resolve, Overrides, Resolved};
pub use error::CliError;
pub use output::{Artifacts, Table};
pub use run::{run, Command};

/// Loads `config`, runs `cmd` on a pool of `threads` workers (all cores when
/// `None`) and writes the artifacts into `out`.
pub fn execute(
    cmd: Command,
    config: &std::path::Path,
    out: &std::path::Path,
    ov: &Overrides,
    threads: Option<usize>,
) -> Result<Artifacts, CliError> {
    let cfg = load(config, ov)?;
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    let pool = b.build().map_err(|e| CliError::config("--threads", e))?;
    let art = pool.install(|| run(cmd, &cfg))?;
    art.write(out, cmd.name(), &cfg.hash)?;
    if let Some(why) = &art.infeasible {
        return Err(CliError::Infeasible(why.clone()));
    }
    Ok(art)
}
