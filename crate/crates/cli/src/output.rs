//! CSV tables for sequences, JSON documents for verdicts.
//!
//! Everything here is deterministic: fixed column order, fixed float
//! formatting (shortest round-trip), no timestamps.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use wco_core::{sequence_stats, ChaosVerdict, NormSequence};

use crate::config::{ExperimentConfig, SCHEMA_VERSION};
use crate::pipeline::OrbitSummary;

pub const SEQUENCE_COLUMNS: [&str; 5] = ["n", "norm", "cesaro_mean", "running_min", "running_max"];

/// One sequence as CSV. With `label`, a leading `candidate` column is added
/// so several sequences can share a table.
fn write_sequence_rows<W: Write>(out: &mut csv::Writer<W>, label: Option<&str>, v: &NormSequence) -> Result<()> {
    let stats = sequence_stats(v);
    for (i, value) in v.values().iter().enumerate() {
        let mut row = Vec::with_capacity(6);
        if let Some(label) = label {
            row.push(label.to_string());
        }
        row.extend([
            (i + 1).to_string(),
            value.to_string(),
            stats.cesaro[i].to_string(),
            stats.running_min[i].to_string(),
            stats.running_max[i].to_string(),
        ]);
        out.write_record(&row)?;
    }
    Ok(())
}

pub fn sequence_csv(v: &NormSequence) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(SEQUENCE_COLUMNS)?;
    write_sequence_rows(&mut out, None, v)?;
    Ok(String::from_utf8(out.into_inner()?)?)
}

/// Several labeled sequences in one table; a single sequence keeps the
/// plain five columns.
pub fn labeled_sequences_csv(seqs: &[(String, &NormSequence)]) -> Result<String> {
    if let [(_, v)] = seqs {
        return sequence_csv(v);
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["candidate"];
    header.extend(SEQUENCE_COLUMNS);
    out.write_record(&header)?;
    for (label, v) in seqs {
        write_sequence_rows(&mut out, Some(label), v)?;
    }
    Ok(String::from_utf8(out.into_inner()?)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    LiYorke,
    MeanLiYorke,
}

/// The verdict file: the verdict's own fields at top level, plus context.
#[derive(Serialize)]
pub struct VerdictDocument<'a> {
    pub schema_version: u32,
    pub criterion: Criterion,
    #[serde(flatten)]
    pub verdict: &'a ChaosVerdict,
    pub orbits: Vec<OrbitSummary>,
    pub config: &'a ExperimentConfig,
}

impl<'a> VerdictDocument<'a> {
    pub fn new(
        criterion: Criterion,
        verdict: &'a ChaosVerdict,
        orbits: Vec<OrbitSummary>,
        config: &'a ExperimentConfig,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            criterion,
            verdict,
            orbits,
            config,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wco_core::{Provenance, SpaceSpec};

    fn seq(v: &[f64]) -> NormSequence {
        NormSequence::new(v.to_vec(), SpaceSpec::h2(), Provenance::ExactCoefficient).unwrap()
    }

    #[test]
    fn sequence_table_columns() {
        let text = sequence_csv(&seq(&[2.0, 1.0, 3.0])).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,norm,cesaro_mean,running_min,running_max");
        assert_eq!(lines[1], "1,2,2,2,2");
        assert_eq!(lines[2], "2,1,1.5,1,2");
        assert_eq!(lines[3], "3,3,2,1,3");
    }

    #[test]
    fn labeled_table_adds_column_only_for_several() {
        let a = seq(&[1.0]);
        let b = seq(&[0.5]);
        let one = labeled_sequences_csv(&[("x".into(), &a)]).unwrap();
        assert!(one.starts_with("n,"));
        let two = labeled_sequences_csv(&[("x".into(), &a), ("y".into(), &b)]).unwrap();
        assert!(two.starts_with("candidate,n,"));
        assert!(two.contains("y,1,0.5"));
    }
}
