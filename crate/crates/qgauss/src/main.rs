//! Thin binary wrapper: reads one JSON job, writes one report, exits with
//! the code the job implies. All logic lives in the library's `cli` module.

use std::io::{Read, Write};

use clap::Parser;

use qgauss::cli::{parse_job, run_job, Format, EXIT_INPUT};

/// Exact q-Gaussian moments, feasibility verdicts, and region scans.
#[derive(Parser)]
#[command(name = "qgauss", version, about)]
struct Args {
    /// JSON job description; "-" reads standard input
    #[arg(long, default_value = "-")]
    input: String,
    /// Report destination; "-" writes standard output
    #[arg(long, default_value = "-")]
    output: String,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn run(args: &Args) -> qgauss::Result<i32> {
    let text = if args.input == "-" {
        let mut buffer = String::new();
        std::io::stdin().read_to_string(&mut buffer)?;
        buffer
    } else {
        std::fs::read_to_string(&args.input)?
    };
    let spec = parse_job(&text)?;
    let report = run_job(&spec, args.format)?;
    if args.output == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(report.body.as_bytes())?;
        stdout.flush()?;
    } else {
        std::fs::write(&args.output, report.body.as_bytes())?;
    }
    Ok(report.exit_code)
}

fn main() {
    // Clap's own usage-error exit code (2) would collide with the
    // NO_CLASSICAL_VERSION code, so flag errors are remapped to the
    // general input-error code.
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) => {
            let _ = err.print();
            std::process::exit(if err.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let code = match run(&args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_INPUT
        }
    };
    std::process::exit(code);
}
