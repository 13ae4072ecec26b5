use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use hbac::config::Config;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Column-named rows, written as CSV or JSON.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    command: &'a str,
    config_sha256: &'a str,
    seed: u64,
    #[serde(flatten)]
    body: T,
}

/// Output directory plus the provenance stamped into every file.
pub struct Output {
    dir: PathBuf,
    format: Format,
    command: &'static str,
    config_hash: String,
    seed: u64,
}

impl Output {
    pub fn new(dir: &Path, format: Format, command: &'static str, config: &Config) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let config_hash = hex::encode(Sha256::digest(config.to_toml_string().as_bytes()));
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            command,
            config_hash,
            seed: config.pulse.optimizer.seed,
        })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    fn stamp(&self) -> String {
        format!(
            "hbac {} config_sha256={} seed={}",
            self.command, self.config_hash, self.seed
        )
    }

    fn write(&self, file: String, contents: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(file);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    /// CSV with a `#` provenance line and optional `# key: value` metadata lines.
    pub fn csv(&self, name: &str, table: &Table, meta: &[(&str, String)]) -> Result<PathBuf> {
        let mut text = format!("# {}\n", self.stamp());
        for (k, v) in meta {
            text.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().map(cell))?;
        }
        text.push_str(std::str::from_utf8(&w.into_inner()?)?);
        self.write(format!("{name}.csv"), text.as_bytes())
    }

    pub fn json<T: Serialize>(&self, name: &str, body: T) -> Result<PathBuf> {
        let doc = Stamped {
            command: self.command,
            config_sha256: &self.config_hash,
            seed: self.seed,
            body,
        };
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        self.write(format!("{name}.json"), text.as_bytes())
    }

    /// Writes the table in the selected format.
    pub fn table(&self, name: &str, table: &Table) -> Result<PathBuf> {
        match self.format {
            Format::Csv => self.csv(name, table, &[]),
            Format::Json => {
                #[derive(Serialize)]
                struct Body<'a> {
                    columns: &'a [String],
                    rows: &'a [Vec<Value>],
                }
                self.json(
                    name,
                    Body {
                        columns: &table.columns,
                        rows: &table.rows,
                    },
                )
            }
        }
    }

    /// Renders an SVG through `draw`, then stamps it with a comment.
    pub fn svg(&self, name: &str, draw: impl FnOnce(&Path) -> Result<()>) -> Result<PathBuf> {
        let path = self.dir.join(format!("{name}.svg"));
        draw(&path)?;
        let svg = fs::read_to_string(&path)?;
        let at = svg.find('>').map_or(0, |i| i + 1);
        let stamped = format!("{}\n<!-- {} -->{}", &svg[..at], self.stamp(), &svg[at..]);
        self.write(format!("{name}.svg"), stamped.as_bytes())
    }
}
