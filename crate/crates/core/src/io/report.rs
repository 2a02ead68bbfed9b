use std::path::Path;

use crate::analysis::VerificationReport;
use crate::error::Result;

/// Pretty-printed JSON with keys in declaration order and shortest
/// round-trip numbers.
pub fn render_report(report: &VerificationReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

pub fn write_report(report: &VerificationReport, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_report(report)?)?;
    Ok(())
}
