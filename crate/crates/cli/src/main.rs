mod args;
mod commands;
mod manifest;

use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::Parser;
use graphcode::{Error, FORMAT_VERSION};

use args::Cli;
use manifest::{Output, RunManifest, Verification};

fn execute(cli: &Cli) -> Result<u8, Error> {
    let start = Instant::now();
    let mut out = Output::new(&cli.out);
    let outcome = commands::run(&cli.command, cli.seed, &mut out)?;
    let manifest = RunManifest {
        format_version: FORMAT_VERSION,
        command: std::env::args().skip(1).collect(),
        parameters: outcome.parameters,
        seed: cli.seed,
        artifacts: out.artifacts.clone(),
        wall_time_ms: start.elapsed().as_millis(),
        verification: Verification { passed: outcome.passed, failed: outcome.failed },
    };
    let manifest_name = format!("{}.manifest.json", outcome.stem);
    out.write(&manifest_name, &serde_json::to_string_pretty(&manifest)?)?;
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&outcome.summary)?);
    } else {
        for line in &outcome.lines {
            println!("{line}");
        }
        println!("artifacts in {}", out.dir().display());
    }
    Ok(if outcome.failed > 0 { 1 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.budget_ms {
        None => execute(&cli),
        Some(ms) => {
            let (tx, rx) = mpsc::channel();
            let budget = Duration::from_millis(ms);
            std::thread::scope(|s| {
                s.spawn(|| {
                    let _ = tx.send(execute(&cli));
                });
                match rx.recv_timeout(budget) {
                    Ok(r) => r,
                    Err(_) => {
                        eprintln!("error: time budget of {ms} ms exceeded");
                        std::process::exit(3);
                    }
                }
            })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
