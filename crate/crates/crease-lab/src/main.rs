use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use crease_lab::{execute, Command, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    CreaseCheck,
    Adm,
    Identities,
    Solve,
    Rigidity,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::CreaseCheck => Command::CreaseCheck,
            Cmd::Adm => Command::Adm,
            Cmd::Identities => Command::Identities,
            Cmd::Solve => Command::Solve,
            Cmd::Rigidity => Command::Rigidity,
        }
    }
}

/// Numerical checks for creased initial data.
#[derive(Debug, Parser)]
#[command(name = "crease-lab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `out_dir` from the config, then `crease-lab-out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cmd: Command = cli.command.into();
    let result = RunConfig::load(&cli.config).and_then(|cfg| {
        let out = cli
            .out
            .clone()
            .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("crease-lab-out"));
        let run = execute(cmd, cfg, cli.seed)?;
        run.write(&out)?;
        Ok((run, out))
    });
    match result {
        Ok((run, out)) => {
            for c in &run.report.checks {
                let tag = if c.passed { "ok  " } else { "FAIL" };
                let expect = if c.expect_hold { "" } else { " (negative control)" };
                println!("{tag} {:<32} {:>14.6e} {:?} {:e}{expect}", c.name, c.value, c.relation, c.threshold);
            }
            println!("report: {}", out.join("report.json").display());
            ExitCode::from(run.report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("crease-lab {}: {e}", cmd.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
