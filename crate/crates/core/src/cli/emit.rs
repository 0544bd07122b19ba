use std::io::Write;
use std::path::Path;

use super::config::Format;
use crate::experiments::ExperimentReport;
use crate::Result;

/// Serialized report. CSV carries the count table, or the weight
/// trajectories for reports that have no counts but do have trajectories.
pub fn render(report: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv if report.counts.is_empty() && !report.trajectories.is_empty() => report.trajectories_csv(),
        Format::Csv => report.counts_csv(),
    }
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit_report(report: &ExperimentReport, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(report, format);
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
