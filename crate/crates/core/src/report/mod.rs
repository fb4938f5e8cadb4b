//! Deterministic emitters (CSV, JSON, SVG) and the command pipeline behind
//! the `citescope` binary.

mod pipeline;
pub mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::authors::AuthorsError;
use crate::cluster::ClusterError;
use crate::corpus::CorpusError;
use crate::forgetting::ForgettingError;
use crate::milestone::MilestoneError;
use crate::synth::SynthError;
use crate::timeseries::TimeseriesError;

pub use pipeline::{
    emit_authors, emit_cluster, emit_curves, emit_forgetting, emit_ingest, emit_mc,
    emit_milestones, emit_parse, emit_synth, report_all, Analysis, Options,
};
pub use svg::{render_dendrogram, render_svg, Axis, Bubble, Mark, PlotSpec, Scale, Series};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Timeseries(#[from] TimeseriesError),
    #[error(transparent)]
    Forgetting(#[from] ForgettingError),
    #[error(transparent)]
    Milestone(#[from] MilestoneError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Authors(#[from] AuthorsError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("cannot plot: {0}")]
    Plot(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl ReportError {
    /// Process exit status: 1 for usage errors, 2 for data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Usage(_) | ReportError::Synth(SynthError::InvalidConfig(_)) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ReportError::Usage(_) => "usage",
            ReportError::Corpus(_) => "corpus",
            ReportError::Timeseries(_) => "timeseries",
            ReportError::Forgetting(_) => "forgetting",
            ReportError::Milestone(_) => "milestone",
            ReportError::Cluster(_) => "cluster",
            ReportError::Authors(_) => "authors",
            ReportError::Synth(_) => "synth",
            ReportError::Plot(_) => "plot",
            ReportError::Io { .. } => "io",
            ReportError::Csv(_) => "csv",
            ReportError::Json(_) => "json",
        }
    }
}

/// Writes `bytes` to a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

/// Collects output files in one directory, writing each atomically.
#[derive(Debug)]
pub struct Emitter {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(dir: &Path) -> Result<Self, ReportError> {
        fs::create_dir_all(dir).map_err(|source| ReportError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Emitter {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), ReportError> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes).map_err(|source| ReportError::Io {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }

    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), ReportError>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| ReportError::Io {
            path: self.dir.join(name),
            source: e.into_error(),
        })?;
        self.write(name, &bytes)
    }

    pub fn json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<(), ReportError> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
