//! Writes the tables and the summary. Headers are written even for empty
//! tables so every run produces the same set of files.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;
use crate::report::{BoundRow, EigenRow, Outcome, Summary, SweepRow};

const EIGEN_HEADER: &[&str] = &["component_k", "multiplicity", "index", "eigenvalue", "bracket_width", "provenance"];
const BOUND_HEADER: &[&str] = &[
    "instance",
    "name",
    "lhs",
    "rhs",
    "constant",
    "ratio",
    "satisfied",
    "gamma",
    "a",
    "p",
    "q",
    "d",
    "c1",
    "c2",
    "lhs_provenance",
    "rhs_provenance",
    "constant_provenance",
];
const SWEEP_HEADER: &[&str] = &["grid_point", "lhs", "rhs", "ratio", "included", "lhs_provenance", "rhs_provenance"];

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Writes the requested tables into `dir`; returns the file names.
pub fn write_tables(dir: &Path, formats: &[Format], out: &Outcome) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir)?;
    let mut formats = formats.to_vec();
    formats.sort();
    formats.dedup();
    let mut files = Vec::new();
    for f in formats {
        match f {
            Format::Csv => {
                write_csv::<EigenRow>(&dir.join("eigenvalues.csv"), EIGEN_HEADER, &out.eigenvalues)?;
                write_csv::<BoundRow>(&dir.join("bounds.csv"), BOUND_HEADER, &out.bounds)?;
                write_csv::<SweepRow>(&dir.join("sweep.csv"), SWEEP_HEADER, &out.sweep)?;
                files.extend(["eigenvalues.csv", "bounds.csv", "sweep.csv"].map(String::from));
            }
            Format::Json => {
                write_json(&dir.join("eigenvalues.json"), &out.eigenvalues)?;
                write_json(&dir.join("bounds.json"), &out.bounds)?;
                write_json(&dir.join("sweep.json"), &out.sweep)?;
                files.extend(["eigenvalues.json", "bounds.json", "sweep.json"].map(String::from));
            }
        }
    }
    files.push("summary.json".into());
    Ok(files)
}

pub fn write_summary(dir: &Path, summary: &Summary) -> Result<(), CliError> {
    write_json(&dir.join("summary.json"), summary)
}
