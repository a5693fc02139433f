//! Report rows, experiment reports and CSV/JSON emission.

use serde::Serialize;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Flag text recorded whenever a row was computed through the weighted
/// norm realized as ||f w||_{p(.)}.
pub const WEIGHTED_NORM_NOTE: &str =
    "weighted norm interpreted as ||f w||_{p(.)} (weight multiplied into the integrand)";

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub param_id: String,
    pub quantity: String,
    pub value: f64,
    /// Tolerance attached to the pass rule; None for informational rows.
    pub tolerance: Option<f64>,
    pub pass: bool,
    /// Whether the weighted-norm interpretation entered this row.
    pub weighted_interpretation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportRow {
    pub fn new(
        experiment: &str,
        param_id: &str,
        quantity: &str,
        value: f64,
        tolerance: Option<f64>,
        pass: bool,
    ) -> Self {
        Self {
            experiment: experiment.to_string(),
            param_id: param_id.to_string(),
            quantity: quantity.to_string(),
            value,
            tolerance,
            pass,
            weighted_interpretation: false,
            note: None,
        }
    }

    pub fn weighted(mut self) -> Self {
        self.weighted_interpretation = true;
        self.note = Some(WEIGHTED_NORM_NOTE.to_string());
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        Self { experiment: experiment.to_string(), rows: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    /// Informational row: no pass rule attached, always passes.
    pub fn info(&mut self, param_id: &str, quantity: &str, value: f64) {
        let exp = self.experiment.clone();
        self.push(ReportRow::new(&exp, param_id, quantity, value, None, true));
    }

    /// Checked row: pass iff the stated rule held.
    pub fn check(&mut self, param_id: &str, quantity: &str, value: f64, tol: f64, pass: bool) {
        let exp = self.experiment.clone();
        self.push(ReportRow::new(&exp, param_id, quantity, value, Some(tol), pass));
    }

    pub fn note(&mut self, text: &str) {
        self.notes.push(text.to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Full run payload for the JSON sidecar: config echo plus all reports.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub config: super::config::HarnessConfig,
    pub reports: Vec<ExperimentReport>,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.all_pass())
    }
}

fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// CSV body with the fixed header; 17 significant digits throughout.
pub fn csv_string(reports: &[ExperimentReport], timestamp: Option<&str>) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["experiment", "param_id", "quantity", "value", "tolerance", "pass"])
        .expect("csv header");
    for rep in reports {
        for row in &rep.rows {
            let tol = row.tolerance.map(fmt17).unwrap_or_default();
            wtr.write_record([
                row.experiment.as_str(),
                row.param_id.as_str(),
                row.quantity.as_str(),
                &fmt17(row.value),
                &tol,
                if row.pass { "true" } else { "false" },
            ])
            .expect("csv row");
        }
    }
    let body = String::from_utf8(wtr.into_inner().expect("csv flush")).expect("csv utf8");
    match timestamp {
        Some(t) => format!("# generated_at_unix_seconds,{t}\n{body}"),
        None => body,
    }
}

/// Writes the CSV to `out` and the JSON sidecar next to it (extension
/// swapped to .json). The timestamp header line is suppressed when
/// `reproducible` is set.
pub fn write_reports(out: &Path, run: &RunReport, reproducible: bool) -> Result<()> {
    let timestamp = if reproducible {
        None
    } else {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Some(secs.to_string())
    };
    let csv = csv_string(&run.reports, timestamp.as_deref());
    let mut f = std::fs::File::create(out).map_err(Error::Io)?;
    f.write_all(csv.as_bytes()).map_err(Error::Io)?;

    let json = serde_json::to_string_pretty(run)
        .map_err(|e| Error::Config(format!("report serialization failed: {e}")))?;
    let sidecar = out.with_extension("json");
    std::fs::write(&sidecar, json).map_err(Error::Io)?;
    Ok(())
}
