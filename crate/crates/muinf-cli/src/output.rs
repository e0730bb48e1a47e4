//! Output plumbing: headers with resolved config and input digests,
//! CSV/JSON emission, atomic file writes.
//!
//! Files are written to `<path>.tmp` and renamed on success, so a failed run
//! never leaves a partial artifact. Floats are printed with 17 significant
//! digits, which round-trips f64 exactly and keeps identical invocations
//! byte-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "muinf";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable overriding the directory for relative output paths.
pub const OUT_DIR_ENV: &str = "MUINF_OUT_DIR";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(format!("sha256:{hex}"))
}

enum Sink {
    Stdout(io::Stdout),
    File {
        final_path: PathBuf,
        tmp_path: PathBuf,
        writer: BufWriter<File>,
        committed: bool,
    },
}

/// Where emitted text goes; file targets are atomic.
pub struct Output {
    sink: Sink,
}

impl Output {
    /// Resolve the target; relative paths honor MUINF_OUT_DIR. The temporary
    /// file is created immediately so an unwritable target fails before any
    /// compute starts.
    pub fn create(path: Option<&Path>) -> io::Result<Output> {
        match path {
            None => Ok(Output {
                sink: Sink::Stdout(io::stdout()),
            }),
            Some(p) => {
                let final_path = resolve_out_path(p);
                let tmp_path = final_path.with_extension(match final_path.extension() {
                    Some(e) => format!("{}.tmp", e.to_string_lossy()),
                    None => "tmp".to_string(),
                });
                let writer = BufWriter::new(File::create(&tmp_path)?);
                Ok(Output {
                    sink: Sink::File {
                        final_path,
                        tmp_path,
                        writer,
                        committed: false,
                    },
                })
            }
        }
    }

    pub fn writeln(&mut self, line: &str) -> io::Result<()> {
        match &mut self.sink {
            Sink::Stdout(out) => writeln!(out, "{line}"),
            Sink::File { writer, .. } => writeln!(writer, "{line}"),
        }
    }

    /// Flush and move the temporary file into place.
    pub fn commit(mut self) -> io::Result<()> {
        match &mut self.sink {
            Sink::Stdout(out) => out.flush(),
            Sink::File {
                final_path,
                tmp_path,
                writer,
                committed,
            } => {
                writer.flush()?;
                std::fs::rename(&*tmp_path, &*final_path)?;
                *committed = true;
                Ok(())
            }
        }
    }
}

impl Drop for Output {
    fn drop(&mut self) {
        if let Sink::File {
            tmp_path,
            committed: false,
            ..
        } = &self.sink
        {
            let _ = std::fs::remove_file(tmp_path);
        }
    }
}

fn resolve_out_path(p: &Path) -> PathBuf {
    if p.is_relative() {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return Path::new(&dir).join(p);
            }
        }
    }
    p.to_path_buf()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Streaming record emitter. CSV rows go out as they arrive; JSON collects
/// and prints one document mirroring the same columns.
pub struct Emitter {
    format: Format,
    output: Output,
    command: &'static str,
    config: Value,
    inputs: Vec<(String, String)>,
    columns: Vec<&'static str>,
    json_records: Vec<Value>,
    header_written: bool,
}

impl Emitter {
    pub fn new(
        format: Format,
        output: Output,
        command: &'static str,
        config: Value,
        inputs: Vec<(String, String)>,
    ) -> Emitter {
        Emitter {
            format,
            output,
            command,
            config,
            inputs,
            columns: Vec::new(),
            json_records: Vec::new(),
            header_written: false,
        }
    }

    fn header_comment(&self) -> String {
        let inputs = if self.inputs.is_empty() {
            "none".to_string()
        } else {
            self.inputs
                .iter()
                .map(|(name, digest)| format!("{name}={digest}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "# {TOOL} {VERSION} | cmd: {} | config: {} | inputs: {inputs}",
            self.command, self.config
        )
    }

    pub fn begin(&mut self, columns: &[&'static str]) -> io::Result<()> {
        self.columns = columns.to_vec();
        if self.format == Format::Csv {
            let header = self.header_comment();
            self.output.writeln(&header)?;
            self.output.writeln(&self.columns.join(","))?;
        }
        self.header_written = true;
        Ok(())
    }

    /// One record; `values` must match the declared columns.
    pub fn row(&mut self, values: &[Value]) -> io::Result<()> {
        assert!(self.header_written, "begin() must precede row()");
        assert_eq!(values.len(), self.columns.len(), "column arity mismatch");
        match self.format {
            Format::Csv => {
                let line = values
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => match n.as_f64() {
                            Some(f) if !n.is_i64() && !n.is_u64() => fmt_f64(f),
                            _ => n.to_string(),
                        },
                        other => other.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(",");
                self.output.writeln(&line)
            }
            Format::Json => {
                let obj: serde_json::Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(values)
                    .map(|(c, v)| (c.to_string(), v.clone()))
                    .collect();
                self.json_records.push(Value::Object(obj));
                Ok(())
            }
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        if self.format == Format::Json {
            let inputs: serde_json::Map<String, Value> = self
                .inputs
                .iter()
                .map(|(name, digest)| (name.clone(), json!(digest)))
                .collect();
            let doc = json!({
                "tool": TOOL,
                "version": VERSION,
                "command": self.command,
                "config": self.config,
                "inputs": inputs,
                "columns": self.columns,
                "records": self.json_records,
            });
            let text = serde_json::to_string_pretty(&doc)?;
            self.output.writeln(&text)?;
        }
        self.output.commit()
    }
}

/// Evenly spaced grid parsed from `lo:hi:count`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid `{spec}` must be lo:hi:count"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| format!("bad grid start `{}`", parts[0]))?;
    let hi: f64 = parts[1].parse().map_err(|_| format!("bad grid end `{}`", parts[1]))?;
    let count: usize = parts[2].parse().map_err(|_| format!("bad grid count `{}`", parts[2]))?;
    if count == 0 {
        return Err("grid count must be positive".into());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    if hi < lo {
        return Err("grid end below start".into());
    }
    Ok((0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect())
}
