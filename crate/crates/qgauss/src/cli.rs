//! JSON-driven command layer: one job description in, one report out.
//!
//! A job is a single JSON document selecting a `command` and its
//! parameters. Rationals cross the I/O boundary as strings (`"-1/2"`) or
//! decimal literals, both parsed exactly, so no precision is lost between
//! a job file and the exact core. Reports come back as plain text, CSV
//! (region scans), or JSON.
//!
//! Exit codes are part of the interface so shell pipelines can branch on
//! the mathematical outcome: `0` success / not excluded, `1` input error,
//! `2` no classical version, `3` verification mismatch.

use serde::Deserialize;
use serde_json::json;

use crate::bell::{
    bell_applicability, bell_check, region_scan, Applicability, ScanOutcome, ScanRow, Verdict,
};
use crate::error::{Error, Result};
use crate::hilbert::{covariance_space, CovarianceSpec};
use crate::moments::{
    qv_sweep, regression_system_residuals, switch_sweep_with, vacuum_expectation, OperatorExpr,
    SweepReport, SwitchKind,
};
use crate::qcore::{int, parse_scalar, rat, render_scalar, scalar_to_f64, QParam, Scalar};

/// Everything went through; for `bell`, the verdict was `NOT_EXCLUDED`.
pub const EXIT_OK: i32 = 0;
/// The job could not be read or violated a precondition.
pub const EXIT_INPUT: i32 = 1;
/// A `bell` job concluded `NO_CLASSICAL_VERSION`.
pub const EXIT_EXCLUDED: i32 = 2;
/// A `verify` job found a disagreement between independent routes.
pub const EXIT_MISMATCH: i32 = 3;

/// Report rendering selected by `--format`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Key/value lines for humans (scans still stream CSV).
    Text,
    /// Comma-separated rows; only region scans have a tabular shape.
    Csv,
    /// One machine-readable JSON object.
    Json,
}

/// An exact rational that deserializes from either a string (`"3/4"`,
/// `"-0.25"`) or a bare JSON number. Numbers are converted by their
/// literal digits — `0.1` becomes exactly `1/10`, not the nearest double.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalField(pub Scalar);

impl<'de> Deserialize<'de> for RationalField {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let value = serde_json::Value::deserialize(deserializer)?;
        let text = match &value {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(serde::de::Error::custom(format!(
                    "expected a rational string or number, got {other}"
                )))
            }
        };
        parse_scalar(&text)
            .map(RationalField)
            .map_err(serde::de::Error::custom)
    }
}

/// The four job kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Moment,
    Bell,
    Scan,
    Verify,
}

/// One axis of a scan grid: either an explicit list of values or an
/// inclusive `start..stop` range with a point count. Values are sorted
/// ascending and deduplicated, so equal grids yield identical scans.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    #[serde(default)]
    pub values: Option<Vec<RationalField>>,
    #[serde(default)]
    pub start: Option<RationalField>,
    #[serde(default)]
    pub stop: Option<RationalField>,
    #[serde(default)]
    pub steps: Option<usize>,
}

/// The `rho` x `fg` grid of a scan job.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub rho: AxisSpec,
    pub fg: AxisSpec,
}

/// A parsed job description. Unknown fields are rejected so typos fail
/// loudly instead of silently running a default.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    /// Deformation parameter; required by every command except `verify`,
    /// which runs its own fixed sweep.
    #[serde(default)]
    pub q: Option<RationalField>,
    /// Covariance matrix as rows of rationals.
    #[serde(default)]
    pub covariance: Option<Vec<Vec<RationalField>>>,
    /// Moment word such as `"X1 X2 X1"`; indices are 1-based rows of the
    /// covariance. The empty word is the identity.
    #[serde(default)]
    pub word: Option<String>,
    /// Grid for `scan`.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Sweep depth for `verify` (`n, m <= depth`); defaults to 6.
    #[serde(default)]
    pub depth: Option<u32>,
    /// Test fixture for `verify`: corrupt one closed-form cell to prove
    /// the comparison can fail.
    #[serde(default)]
    pub inject_fault: Option<bool>,
}

/// Rendered report plus the process exit code it implies.
#[derive(Clone, Debug)]
pub struct JobOutput {
    pub body: String,
    pub exit_code: i32,
}

/// Parses a JSON job document. Syntax and unknown-field errors carry
/// serde's line/column diagnostics.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    Ok(serde_json::from_str(text)?)
}

/// Runs a job and renders its report in the requested format.
pub fn run_job(spec: &JobSpec, format: Format) -> Result<JobOutput> {
    match spec.command {
        Command::Moment => cmd_moment(spec, format),
        Command::Bell => cmd_bell(spec, format),
        Command::Scan => cmd_scan(spec, format),
        Command::Verify => cmd_verify(spec, format),
    }
}

fn require_q(spec: &JobSpec) -> Result<QParam> {
    let field = spec
        .q
        .as_ref()
        .ok_or_else(|| Error::Input("this command needs a \"q\" field".into()))?;
    QParam::new(field.0.clone())
}

fn require_covariance(spec: &JobSpec) -> Result<CovarianceSpec> {
    let rows = spec
        .covariance
        .as_ref()
        .ok_or_else(|| Error::Input("this command needs a \"covariance\" field".into()))?;
    let entries = rows
        .iter()
        .map(|row| row.iter().map(|cell| cell.0.clone()).collect())
        .collect();
    CovarianceSpec::new(entries)
}

/// Turns `"X1 X2"` into 0-based covariance row indices.
fn parse_word(word: &str, size: usize) -> Result<Vec<usize>> {
    word.split_whitespace()
        .map(|token| {
            let index: usize = token
                .strip_prefix('X')
                .and_then(|digits| digits.parse().ok())
                .ok_or_else(|| {
                    Error::Input(format!("word token {token:?} is not of the form X<index>"))
                })?;
            if index == 0 || index > size {
                return Err(Error::Input(format!(
                    "word token {token:?} is out of range for a {size}x{size} covariance"
                )));
            }
            Ok(index - 1)
        })
        .collect()
}

fn expand_axis(name: &str, axis: &AxisSpec) -> Result<Vec<Scalar>> {
    let mut points = match (&axis.values, &axis.start, &axis.stop, &axis.steps) {
        (Some(values), None, None, None) => values.iter().map(|v| v.0.clone()).collect(),
        (None, Some(start), Some(stop), Some(steps)) => {
            let mut points = Vec::with_capacity(*steps);
            if *steps == 1 {
                points.push(start.0.clone());
            } else if *steps > 1 {
                let span = &stop.0 - &start.0;
                let gap = span / int(*steps as i64 - 1);
                for k in 0..*steps {
                    points.push(&start.0 + &gap * int(k as i64));
                }
            }
            points
        }
        _ => {
            return Err(Error::Input(format!(
            "grid axis {name:?} needs either \"values\" or all of \"start\", \"stop\", \"steps\""
        )))
        }
    };
    points.sort();
    points.dedup();
    Ok(points)
}

fn render_float(x: f64) -> String {
    format!("{x}")
}

fn only_structured(format: Format, command: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(Error::Input(format!(
            "csv format applies to scan jobs only, not {command}"
        )));
    }
    Ok(())
}

fn finish(body: String, exit_code: i32) -> Result<JobOutput> {
    Ok(JobOutput { body, exit_code })
}

/// Evaluates the vacuum expectation of a word in the field variables and
/// reports it exactly plus as a float.
pub fn cmd_moment(spec: &JobSpec, format: Format) -> Result<JobOutput> {
    only_structured(format, "moment")?;
    let q = require_q(spec)?;
    let cov = require_covariance(spec)?;
    let word_text = spec
        .word
        .as_deref()
        .ok_or_else(|| Error::Input("moment jobs need a \"word\" field".into()))?;
    let indices = parse_word(word_text, cov.size())?;
    let (_, basis) = covariance_space(&cov)?;
    let expr = if indices.is_empty() {
        OperatorExpr::Identity
    } else {
        OperatorExpr::Compose(
            indices
                .iter()
                .map(|&i| OperatorExpr::field(&basis[i]))
                .collect(),
        )
    };
    let value = vacuum_expectation(&expr, &q)?;
    let body = match format {
        Format::Json => {
            let doc = json!({
                "command": "moment",
                "word": word_text,
                "q": render_scalar(q.value()),
                "expectation": render_scalar(&value),
                "float": scalar_to_f64(&value),
            });
            format!("{doc}\n")
        }
        _ => format!(
            "word: {word_text}\nq: {}\nexpectation: {}\nfloat: {}\n",
            render_scalar(q.value()),
            render_scalar(&value),
            render_float(scalar_to_f64(&value))
        ),
    };
    finish(body, EXIT_OK)
}

fn branch_label(branch: Applicability) -> &'static str {
    match branch {
        Applicability::SubMarkov => "sub-Markov",
        Applicability::ZeroEndpointCovariance => "zero endpoint covariance",
        Applicability::QMinusOne => "q = -1",
        Applicability::NotApplicable => "none",
    }
}

/// Runs the full feasibility check on a standardized triplet covariance
/// and reports every ingredient of the verdict.
pub fn cmd_bell(spec: &JobSpec, format: Format) -> Result<JobOutput> {
    only_structured(format, "bell")?;
    let q = require_q(spec)?;
    let cov = require_covariance(spec)?;
    let branch = bell_applicability(&cov, &q)?;
    let report = bell_check(&cov, &q)?;
    let exit_code = match report.verdict {
        Verdict::NoClassicalVersion => EXIT_EXCLUDED,
        Verdict::NotExcluded => EXIT_OK,
    };
    let body = match format {
        Format::Json => {
            let doc = json!({
                "command": "bell",
                "q": render_scalar(q.value()),
                "verdict": report.verdict.to_string(),
                "branch": branch_label(branch),
                "bell_applicable": report.bell_applicable,
                "bell_satisfied": report.bell_satisfied,
                "variance_min": report.variance_min.as_ref().map(render_scalar),
                "variance_min_float": report.variance_min.as_ref().map(scalar_to_f64),
                "variance_nonnegative": report.variance_nonnegative,
            });
            format!("{doc}\n")
        }
        _ => {
            let satisfied = match report.bell_satisfied {
                Some(b) => b.to_string(),
                None => "n/a".into(),
            };
            let vmin = match &report.variance_min {
                Some(v) => format!("{} ({})", render_scalar(v), render_float(scalar_to_f64(v))),
                None => "skipped (q = -1)".into(),
            };
            format!(
                "verdict: {}\nbranch: {}\nbell_applicable: {}\nbell_satisfied: {}\nvariance_min: {}\nvariance_nonnegative: {}\n",
                report.verdict,
                branch_label(branch),
                report.bell_applicable,
                satisfied,
                vmin,
                report.variance_nonnegative
            )
        }
    };
    finish(body, exit_code)
}

/// CSV header shared by every scan report.
pub const SCAN_HEADER: &str = "rho,fg,q,bell_applicable,bell_satisfied,variance_min,verdict";

fn scan_csv(rows: &[ScanRow], q: &QParam) -> String {
    let q_text = render_scalar(q.value());
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for row in rows {
        let rho = render_scalar(&row.rho);
        let fg = render_scalar(&row.fg);
        match &row.outcome {
            ScanOutcome::Checked(v) => {
                let satisfied = v.bell_satisfied.map(|b| b.to_string()).unwrap_or_default();
                let vmin = v
                    .variance_min
                    .as_ref()
                    .map(render_scalar)
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{rho},{fg},{q_text},{},{satisfied},{vmin},{}\n",
                    v.bell_applicable, v.verdict
                ));
            }
            ScanOutcome::InvalidPsd => {
                out.push_str(&format!("{rho},{fg},{q_text},,,,INVALID_PSD\n"));
            }
            ScanOutcome::Degenerate => {
                out.push_str(&format!("{rho},{fg},{q_text},,,,DEGENERATE\n"));
            }
        }
    }
    out
}

fn scan_json(rows: &[ScanRow], q: &QParam) -> String {
    let q_text = render_scalar(q.value());
    let rendered: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| match &row.outcome {
            ScanOutcome::Checked(v) => json!({
                "rho": render_scalar(&row.rho),
                "fg": render_scalar(&row.fg),
                "q": q_text,
                "bell_applicable": v.bell_applicable,
                "bell_satisfied": v.bell_satisfied,
                "variance_min": v.variance_min.as_ref().map(render_scalar),
                "verdict": v.verdict.to_string(),
            }),
            ScanOutcome::InvalidPsd => json!({
                "rho": render_scalar(&row.rho),
                "fg": render_scalar(&row.fg),
                "q": q_text,
                "verdict": "INVALID_PSD",
            }),
            ScanOutcome::Degenerate => json!({
                "rho": render_scalar(&row.rho),
                "fg": render_scalar(&row.fg),
                "q": q_text,
                "verdict": "DEGENERATE",
            }),
        })
        .collect();
    format!("{}\n", json!({ "command": "scan", "rows": rendered }))
}

/// Tabulates the feasibility verdict over a `rho` x `fg` grid for the
/// family `<f,h> = <g,h> = rho`, `<f,g> = fg`. Rows are rho-major with
/// both axes ascending, so equal jobs produce byte-identical output.
pub fn cmd_scan(spec: &JobSpec, format: Format) -> Result<JobOutput> {
    let q = require_q(spec)?;
    let grid = spec
        .grid
        .as_ref()
        .ok_or_else(|| Error::Input("scan jobs need a \"grid\" field".into()))?;
    let rho_axis = expand_axis("rho", &grid.rho)?;
    let fg_axis = expand_axis("fg", &grid.fg)?;
    let rows = region_scan(&rho_axis, &fg_axis, &q);
    let body = match format {
        Format::Json => scan_json(&rows, &q),
        _ => scan_csv(&rows, &q),
    };
    finish(body, EXIT_OK)
}

/// The fixed verification sweep: correlation grid, `q` grid, and two
/// standardized triplet fixtures for the conditional-moment identity.
fn verify_grids() -> Result<(Vec<Scalar>, Vec<QParam>, Vec<CovarianceSpec>)> {
    let rhos = vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4)];
    let qs = [rat(-1, 2), int(0), rat(1, 2), rat(9, 10)]
        .into_iter()
        .map(QParam::new)
        .collect::<Result<Vec<_>>>()?;
    let fixtures = vec![
        CovarianceSpec::triplet(rat(1, 2), rat(1, 4), rat(1, 2))?,
        CovarianceSpec::triplet(rat(-1, 5), rat(3, 5), rat(3, 5))?,
    ];
    Ok((rhos, qs, fixtures))
}

/// Re-derives the closed-form identities from first principles and
/// compares exactly: the switch formulas against brute-force Fock inner
/// products, the conditional-second-moment quadratic against direct
/// expectations, and the regression residual system against zero. Any
/// disagreement is listed and the exit code is [`EXIT_MISMATCH`].
pub fn cmd_verify(spec: &JobSpec, format: Format) -> Result<JobOutput> {
    only_structured(format, "verify")?;
    let depth = spec.depth.unwrap_or(6);
    let inject = spec.inject_fault.unwrap_or(false);
    let (rhos, qs, fixtures) = verify_grids()?;

    // The fixture fault targets one specific cell well inside the default
    // sweep, proving a mismatch would actually be caught and reported.
    let tweak = |kind: SwitchKind, n: u32, m: u32, rho: &Scalar, q: &QParam, value: Scalar| {
        if kind == SwitchKind::Xx
            && n == 2
            && m == 2
            && *rho == rat(1, 2)
            && *q.value() == rat(1, 2)
        {
            value + int(1)
        } else {
            value
        }
    };
    let switch_report = switch_sweep_with(depth, &rhos, &qs, inject.then_some(&tweak as _))?;

    let qv_depth = depth.min(4);
    let mut qv_report = SweepReport {
        checked: 0,
        mismatches: Vec::new(),
    };
    let mut residual_checked = 0usize;
    let mut residual_nonzero: Vec<String> = Vec::new();
    for cov in &fixtures {
        for q in &qs {
            let partial = qv_sweep(cov, q, qv_depth)?;
            qv_report.checked += partial.checked;
            qv_report.mismatches.extend(partial.mismatches);
            for (label, value) in ["ABC1", "ABC2", "ABC3"]
                .iter()
                .zip(regression_system_residuals(cov, q)?)
            {
                residual_checked += 1;
                if value != int(0) {
                    residual_nonzero.push(format!(
                        "{label} rho={} q={}: residual {}",
                        render_scalar(cov.entry(0, 2)),
                        render_scalar(q.value()),
                        render_scalar(&value)
                    ));
                }
            }
        }
    }

    let pass = switch_report.ok() && qv_report.ok() && residual_nonzero.is_empty();
    let exit_code = if pass { EXIT_OK } else { EXIT_MISMATCH };
    let body = match format {
        Format::Json => {
            let doc = json!({
                "command": "verify",
                "depth": depth,
                "switch_checked": switch_report.checked,
                "switch_mismatches": switch_report.mismatches.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "conditional_checked": qv_report.checked,
                "conditional_mismatches": qv_report.mismatches.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "residual_checked": residual_checked,
                "residual_nonzero": residual_nonzero,
                "pass": pass,
            });
            format!("{doc}\n")
        }
        _ => {
            let mut out = String::new();
            out.push_str(&format!(
                "switch identities: {} checked, {} mismatches\n",
                switch_report.checked,
                switch_report.mismatches.len()
            ));
            for m in &switch_report.mismatches {
                out.push_str(&format!("  mismatch: {m}\n"));
            }
            out.push_str(&format!(
                "conditional second moments: {} checked, {} mismatches\n",
                qv_report.checked,
                qv_report.mismatches.len()
            ));
            for m in &qv_report.mismatches {
                out.push_str(&format!("  mismatch: {m}\n"));
            }
            out.push_str(&format!(
                "regression residuals: {residual_checked} checked, {} nonzero\n",
                residual_nonzero.len()
            ));
            for line in &residual_nonzero {
                out.push_str(&format!("  mismatch: {line}\n"));
            }
            out.push_str(if pass {
                "verdict: PASS\n"
            } else {
                "verdict: FAIL\n"
            });
            out
        }
    };
    finish(body, exit_code)
}
