use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symvec_cli::commands::{run_check, run_enumerate, run_verify, CheckArgs, EnumerateArgs, VerifyArgs};
use symvec_cli::CliError;

/// Global CTL model checking of Petri nets with place capacities.
#[derive(Parser)]
#[command(name = "symvec", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a formula and print the satisfying set.
    Check(CheckArgs),
    /// Compare the symbolic result against explicit-state evaluation.
    Verify(VerifyArgs),
    /// List satisfying markings within finite capacities.
    Enumerate(EnumerateArgs),
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Check(a) => match run_check(&a) {
            Ok(r) => {
                print!("{}", if a.json { r.to_json() + "\n" } else { r.to_text() });
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Cmd::Verify(a) => match run_verify(&a) {
            Ok(out) => {
                for f in &out.failures {
                    println!(
                        "FAIL case {} (k={}): {}\n  marking {} oracle={} symbolic={}",
                        f.case, f.capacity, f.formula, f.mismatch.marking, f.mismatch.expected, f.mismatch.symbolic
                    );
                }
                println!("{} cases, {} mismatches", out.cases, out.failures.len());
                if out.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(3) }
            }
            Err(e) => fail(e),
        },
        Cmd::Enumerate(a) => match run_enumerate(&a) {
            Ok(ms) => {
                for m in ms {
                    println!("{m}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
    }
}
