use std::fs;
use std::path::Path;

use super::{render_svg, ExperimentResult, HarnessError, OutputSpec, ResultRow};

pub const CSV_HEADER: [&str; 8] = [
    "algorithm",
    "checkpoint_samples",
    "successes",
    "trials",
    "rate",
    "wilson_lo",
    "wilson_hi",
    "mean_samples_used",
];

fn create_parent(path: &Path) -> Result<(), HarnessError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
        }
        _ => Ok(()),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> HarnessError {
    let message = e.to_string();
    match e.into_kind() {
        csv::ErrorKind::Io(source) => HarnessError::io(path, source),
        _ => HarnessError::Schema {
            path: path.display().to_string(),
            message,
        },
    }
}

/// Writes the rows as CSV. Floats are printed in shortest round-trip form.
pub fn write_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    create_parent(path)?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Reads a CSV in the schema of [`write_csv`], rejecting any other header.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>, HarnessError> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r.headers().map_err(|e| csv_error(path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Schema {
            path: path.display().to_string(),
            message: format!(
                "expected header {}, found {}",
                CSV_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    r.deserialize()
        .map(|row| row.map_err(|e| csv_error(path, e)))
        .collect()
}

pub fn write_json(result: &ExperimentResult, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    create_parent(path)?;
    let text = serde_json::to_string_pretty(result).expect("results always serialize");
    fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))
}

/// Writes whichever of the CSV, JSON and SVG outputs are configured.
pub fn emit_results(result: &ExperimentResult, output: &OutputSpec) -> Result<(), HarnessError> {
    if let Some(path) = &output.csv {
        write_csv(&result.rows, path)?;
    }
    if let Some(path) = &output.json {
        write_json(result, path)?;
    }
    if let Some(path) = &output.svg {
        create_parent(path)?;
        fs::write(path, render_svg(&result.rows)).map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(())
}
