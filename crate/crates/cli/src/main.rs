mod args;
mod commands;
mod output;
mod parse;
mod schemas;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command, Format};
use output::{envelope, write_output, CliError, CliResult};

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("ROTLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("ROTLAB_THREADS must be a positive integer, got {v:?}")))?;
    if threads == 0 {
        return Err(CliError::Usage("ROTLAB_THREADS must be positive".into()));
    }
    // fails only if a pool already exists, which cannot happen here
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn run(cli: &Cli) -> CliResult<bool> {
    configure_threads()?;
    let c = &cli.common;
    let out = commands::run(&cli.command, c)?;
    if let Command::Schema { .. } = cli.command {
        let text = serde_json::to_string_pretty(&out.report)? + "\n";
        write_output(c.out.as_deref(), &text)?;
        return Ok(false);
    }
    let text = match c.format {
        Format::Csv => out.csv.clone(),
        Format::Json => {
            let mut config = json!({
                "seed": c.seed,
                "cap": c.cap,
                "depth": c.depth.unwrap_or(rotlab_core::abelian::DEFAULT_DEPTH),
                "format": c.format,
            });
            if let Some(p) = out.params.as_object() {
                for (k, v) in p {
                    config[k] = v.clone();
                }
            }
            let env = envelope(cli.command.name(), config, &out);
            serde_json::to_string_pretty(&env)? + "\n"
        }
    };
    write_output(c.out.as_deref(), &text)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    Ok(!out.warnings.is_empty())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::Usage(e.to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(1)
        }
    }
}
