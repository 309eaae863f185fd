//! Report serialization: per-suite CSV (one row per function per check) and a
//! JSON summary embedding the resolved configuration and its content hash.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use fracpot::inequalities::{SuiteOutcome, Verdict};

use crate::config::ExperimentConfig;

fn fmt_exp(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_exp).unwrap_or_default()
}

pub const CSV_HEADER: [&str; 11] = [
    "suite",
    "check_id",
    "alpha",
    "p",
    "q",
    "kappa",
    "s",
    "function",
    "ratio",
    "fitted_constant",
    "verdict",
];

/// Write the long-form CSV rows of one suite outcome.
pub fn append_suite_csv<W: std::io::Write>(
    writer: &mut csv::Writer<W>,
    outcome: &SuiteOutcome,
) -> Result<()> {
    for report in &outcome.reports {
        let verdict = verdict_str(report.verdict);
        if report.ratios.is_empty() {
            writer.write_record([
                outcome.suite.as_str(),
                report.check_id.as_str(),
                &fmt_exp(report.config.alpha),
                &fmt_exp(report.config.p),
                &fmt_opt(report.config.q),
                &fmt_opt(report.config.kappa),
                &fmt_exp(report.config.s),
                "",
                "",
                &fmt_exp(report.fitted_constant),
                verdict,
            ])?;
            continue;
        }
        for entry in &report.ratios {
            writer.write_record([
                outcome.suite.as_str(),
                report.check_id.as_str(),
                &fmt_exp(report.config.alpha),
                &fmt_exp(report.config.p),
                &fmt_opt(report.config.q),
                &fmt_opt(report.config.kappa),
                &fmt_exp(report.config.s),
                entry.label.as_str(),
                &fmt_exp(entry.ratio),
                &fmt_exp(report.fitted_constant),
                verdict,
            ])?;
        }
    }
    Ok(())
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    suite: &'a str,
    overall: &'static str,
    config_hash: String,
    config: ExperimentConfig,
    reports: &'a [fracpot::inequalities::VerificationReport],
}

/// Write `<suite>.csv` and `<suite>.json` into the output directory.
pub fn write_suite_outputs(
    out_dir: &Path,
    config: &ExperimentConfig,
    outcome: &SuiteOutcome,
) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let csv_path = out_dir.join(format!("{}.csv", outcome.suite));
    let mut writer = csv::Writer::from_path(&csv_path)
        .with_context(|| format!("writing {}", csv_path.display()))?;
    writer.write_record(CSV_HEADER)?;
    append_suite_csv(&mut writer, outcome)?;
    writer.flush()?;

    let json_path = out_dir.join(format!("{}.json", outcome.suite));
    let summary = SuiteSummary {
        suite: &outcome.suite,
        overall: verdict_str(outcome.overall()),
        config_hash: config.content_hash(),
        config: config.canonical(),
        reports: &outcome.reports,
    };
    let text = serde_json::to_string_pretty(&summary)?;
    std::fs::write(&json_path, text.as_bytes())
        .with_context(|| format!("writing {}", json_path.display()))?;
    Ok(())
}

/// Write per-check plot data (x = swept parameter, y = fitted constant).
pub fn write_plot_data(
    out_dir: &Path,
    suite: &str,
    check_id: &str,
    param: &str,
    points: &[(f64, f64)],
) -> Result<()> {
    let path = out_dir.join(format!(
        "plot_{suite}_{}_{param}.csv",
        check_id.replace(|c: char| !c.is_alphanumeric(), "-")
    ));
    let mut writer = csv::Writer::from_path(&path)?;
    writer.write_record([param, "fitted_constant"])?;
    for (x, y) in points {
        writer.write_record([format!("{x}"), format!("{y}")])?;
    }
    writer.flush()?;
    Ok(())
}
