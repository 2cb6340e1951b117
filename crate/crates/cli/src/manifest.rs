use crate::config::RunConfig;
use crate::error::CliError;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Record of one run, written as `manifest.txt` next to the artifacts.
pub struct RunManifest {
    pub command: &'static str,
    pub config: Vec<(String, String)>,
    /// `(label, value)` of every seed a run draws from.
    pub seeds: Vec<(String, u64)>,
    pub notes: Vec<(String, String)>,
    /// File names relative to the output directory.
    pub artifacts: Vec<String>,
    out: PathBuf,
    start: Instant,
}

pub const MANIFEST_FILE: &str = "manifest.txt";

impl RunManifest {
    pub fn new(command: &'static str, cfg: &RunConfig, out: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(out)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", out.display())))?;
        Ok(Self {
            command,
            config: cfg.echo.clone(),
            seeds: vec![("root".into(), cfg.solver.seed)],
            notes: Vec::new(),
            artifacts: Vec::new(),
            out: out.to_path_buf(),
            start: Instant::now(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    /// Writes `contents` to `name` inside the output directory and records it.
    pub fn write_file(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let p = self.path(name);
        std::fs::write(&p, contents)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", p.display())))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, header: &str, rows: &[String]) -> Result<(), CliError> {
        let mut s = String::with_capacity(64 * (rows.len() + 1));
        s.push_str(header);
        s.push('\n');
        for r in rows {
            s.push_str(r);
            s.push('\n');
        }
        self.write_file(name, s.as_bytes())
    }

    pub fn write_field(&mut self, name: &str, f: &ftlab_core::RealField) -> Result<(), CliError> {
        self.write_file(name, &ftlab_core::ftf::encode(f))
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "version = ftlab {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "wallclock_s = {:.3}", self.start.elapsed().as_secs_f64());
        for (k, v) in &self.config {
            let _ = writeln!(s, "config.{k} = {v}");
        }
        for (k, v) in &self.seeds {
            let _ = writeln!(s, "seed.{k} = {v}");
        }
        for (k, v) in &self.notes {
            let _ = writeln!(s, "note.{k} = {v}");
        }
        for a in &self.artifacts {
            let _ = writeln!(s, "artifact = {a}");
        }
        s
    }

    pub fn finish(self) -> Result<(), CliError> {
        let p = self.path(MANIFEST_FILE);
        std::fs::write(&p, self.render())
            .map_err(|e| CliError::Io(format!("writing {}: {e}", p.display())))
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}
