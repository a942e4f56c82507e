use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::campaign::{AlgorithmTraces, CampaignResult};
use super::summary::Summary;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown output format `{other}`"))),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    }
}

/// Writes a header and string rows as CSV.
pub fn write_rows<W: Write, I>(out: W, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| csv_error(e.into()))
}

/// Columns `algorithm, run, t, regret`, one row per run and checkpoint.
pub fn write_traces_csv<W: Write>(out: W, traces: &[AlgorithmTraces]) -> Result<()> {
    let rows = traces.iter().flat_map(|a| {
        a.runs.iter().flat_map(move |tr| {
            tr.points
                .iter()
                .map(move |&(t, r)| vec![a.algorithm.clone(), tr.run_index.to_string(), t.to_string(), r.to_string()])
        })
    });
    write_rows(out, &["algorithm", "run", "t", "regret"], rows)
}

/// One row per algorithm and checkpoint with mean, std and quantiles.
pub fn write_summary_csv<W: Write>(out: W, summary: &Summary) -> Result<()> {
    let rows = summary.algorithms.iter().flat_map(|a| {
        a.checkpoints.iter().map(move |c| {
            let q = &c.quantiles;
            [c.mean, c.std, q.q20, q.q50, q.q80, q.q95, q.q99]
                .iter()
                .map(f64::to_string)
                .fold(vec![a.algorithm.clone(), a.runs.to_string(), c.t.to_string()], |mut row, v| {
                    row.push(v);
                    row
                })
        })
    });
    write_rows(out, &["algorithm", "runs", "t", "mean", "std", "q20", "q50", "q80", "q95", "q99"], rows)
}

pub fn write_summary_json<W: Write>(mut out: W, summary: &Summary) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, summary).map_err(|e| Error::Io {
        path: "<json>".into(),
        message: e.to_string(),
    })?;
    writeln!(out).map_err(|e| Error::Io {
        path: "<json>".into(),
        message: e.to_string(),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn with_path(path: &Path, r: Result<()>) -> Result<()> {
    r.map_err(|e| match e {
        Error::Io { message, .. } => Error::Io {
            path: path.display().to_string(),
            message,
        },
        other => other,
    })
}

/// Writes `traces.csv` and the summary (`summary.csv` or `summary.json`) into
/// `dir`, creating it if needed. Returns the written paths.
pub fn emit(result: &CampaignResult, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    if result.traces.is_empty() {
        return Err(Error::InvalidArgument("nothing to emit".into()));
    }
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let traces = dir.join("traces.csv");
    with_path(&traces, write_traces_csv(create(&traces)?, &result.traces))?;
    let summary = match format {
        OutputFormat::Csv => {
            let p = dir.join("summary.csv");
            with_path(&p, write_summary_csv(create(&p)?, &result.summary))?;
            p
        }
        OutputFormat::Json => {
            let p = dir.join("summary.json");
            with_path(&p, write_summary_json(create(&p)?, &result.summary))?;
            p
        }
    };
    Ok(vec![traces, summary])
}
