//! Run-stamped output directories with a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::{DateTime, Local, SecondsFormat};
use serde::Serialize;

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    started: String,
    finished: String,
    status: &'a str,
    arguments: &'a serde_json::Value,
    files: &'a [String],
}

pub struct RunDir {
    path: PathBuf,
    subcommand: String,
    started: DateTime<Local>,
    arguments: serde_json::Value,
    files: Vec<String>,
}

impl RunDir {
    /// Creates `<base>/<subcommand>-<timestamp>[-k]`.
    pub fn create(base: &Path, subcommand: &str, arguments: serde_json::Value) -> Result<Self> {
        let started = Local::now();
        let stem = format!("{subcommand}-{}", started.format("%Y%m%dT%H%M%S"));
        fs::create_dir_all(base).with_context(|| format!("cannot create output directory {}", base.display()))?;
        let mut path = base.join(&stem);
        let mut k = 1;
        while path.exists() {
            k += 1;
            path = base.join(format!("{stem}-{k}"));
        }
        fs::create_dir(&path).with_context(|| format!("cannot create {}", path.display()))?;
        Ok(RunDir { path, subcommand: subcommand.to_string(), started, arguments, files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let p = self.path.join(name);
        fs::write(&p, contents).with_context(|| format!("cannot write {}", p.display()))?;
        self.files.push(name.to_string());
        Ok(p)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let text = serde_json::to_string_pretty(value)?;
        self.write(name, &(text + "\n"))
    }

    /// Writes a CSV file from a header and string rows.
    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {e}"))?;
        self.write(name, &String::from_utf8(bytes)?)
    }

    pub fn finish(self, ok: bool) -> Result<PathBuf> {
        let m = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand: &self.subcommand,
            started: self.started.to_rfc3339_opts(SecondsFormat::Secs, false),
            finished: Local::now().to_rfc3339_opts(SecondsFormat::Secs, false),
            status: if ok { "ok" } else { "failed" },
            arguments: &self.arguments,
            files: &self.files,
        };
        let p = self.path.join("manifest.json");
        fs::write(&p, serde_json::to_string_pretty(&m)? + "\n")?;
        Ok(self.path)
    }
}
