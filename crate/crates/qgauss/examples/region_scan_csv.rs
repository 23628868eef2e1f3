//! Region scans through the JSON job interface.
//!
//! The same entry point the `qgauss` binary uses is callable as a library
//! function: a JSON job document goes in, a deterministic CSV table comes
//! out. Here a scan sweeps the family <f,h> = <g,h> = rho, <f,g> = fg at
//! q = 1/2 and the CSV shows the NO_CLASSICAL_VERSION region, its exact
//! boundary, and the non-PSD cells.

use qgauss::cli::{parse_job, run_job, Format};

fn main() -> qgauss::Result<()> {
    let job = parse_job(
        r#"{
            "command": "scan",
            "q": "1/2",
            "grid": {
                "rho": {"values": ["11/20", "3/5", "7/10"]},
                "fg":  {"start": "-1/2", "stop": "1/2", "steps": 9}
            }
        }"#,
    )?;
    let report = run_job(&job, Format::Csv)?;
    print!("{}", report.body);
    assert_eq!(report.exit_code, 0);

    // Determinism is part of the contract: running the identical job again
    // must reproduce the bytes exactly.
    let again = run_job(&job, Format::Csv)?;
    assert_eq!(report.body, again.body);
    println!("\nsecond run is byte-identical: true");

    // The same grid as JSON, for machine consumers.
    let small = parse_job(
        r#"{
            "command": "scan",
            "q": "1/2",
            "grid": {"rho": {"values": ["3/5"]}, "fg": {"values": ["-1/5"]}}
        }"#,
    )?;
    println!("\nsingle-cell scan as JSON:");
    print!("{}", run_job(&small, Format::Json)?.body);
    Ok(())
}
