use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub enum Body {
    Json(Value),
    Csv(String),
}

/// One output file. `stdout` marks the artifact printed when no output
/// directory is given.
pub struct Artifact {
    pub name: String,
    pub body: Body,
    pub stdout: bool,
}

impl Artifact {
    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Self {
        Self {
            name: name.into(),
            body: Body::Json(serde_json::to_value(value).expect("serializable")),
            stdout: false,
        }
    }

    pub fn csv(name: impl Into<String>, text: String) -> Self {
        Self {
            name: name.into(),
            body: Body::Csv(text),
            stdout: false,
        }
    }

    pub fn primary(mut self) -> Self {
        self.stdout = true;
        self
    }

    fn render(&self, manifest: &RunManifest) -> String {
        match &self.body {
            Body::Json(v) => {
                let doc = json!({
                    "manifest": { "digest": manifest.digest, "run": manifest.core },
                    "result": v,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
                s.push('\n');
                s
            }
            Body::Csv(text) => format!("# manifest {}\n{text}", manifest.digest),
        }
    }
}

/// Writes artifacts and the manifest to `dir`, or prints the primary
/// artifact to stdout. Returns whether files were written.
pub fn emit(dir: Option<&PathBuf>, manifest: &RunManifest, artifacts: &[Artifact]) -> Result<bool> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for a in artifacts {
                let path = dir.join(&a.name);
                fs::write(&path, a.render(manifest)).with_context(|| format!("writing {}", path.display()))?;
            }
            let mut m = serde_json::to_string_pretty(manifest)?;
            m.push('\n');
            fs::write(dir.join("manifest.json"), m)?;
            Ok(true)
        }
        None => {
            let mut out = std::io::stdout().lock();
            for a in artifacts.iter().filter(|a| a.stdout) {
                out.write_all(a.render(manifest).as_bytes())?;
            }
            Ok(false)
        }
    }
}

/// Three significant figures for display tables.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-3..6).contains(&mag) {
        format!("{:.*}", (2 - mag).max(0) as usize, x)
    } else {
        format!("{x:.2e}")
    }
}

pub fn csv_from_rows<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_significant_figures() {
        assert_eq!(sig3(66.53), "66.5");
        assert_eq!(sig3(0.012345), "0.0123");
        assert_eq!(sig3(146.44), "146");
        assert_eq!(sig3(12345.0), "12345");
        assert_eq!(sig3(1.5e7), "1.50e7");
        assert_eq!(sig3(0.0), "0");
    }
}
