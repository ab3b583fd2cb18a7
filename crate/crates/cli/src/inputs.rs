use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use scopt::arch::{self, AcceleratorConfig, PeripheralCosts, PRESET_NAMES};
use scopt::workload::{bundled, NetworkSpec};

use crate::manifest::InputRecord;

/// Collects every input a command reads, for the manifest.
#[derive(Default)]
pub struct Inputs {
    pub records: Vec<InputRecord>,
    pub presets: Vec<String>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.records.push(InputRecord::new(path.display().to_string(), text.as_bytes()));
        Ok(text)
    }

    /// A network descriptor file, or the name of a bundled network.
    pub fn network(&mut self, arg: &str) -> Result<NetworkSpec> {
        let path = Path::new(arg);
        if path.is_file() {
            let text = self.read(path)?;
            return NetworkSpec::from_json_str(&text).with_context(|| format!("invalid network {arg}"));
        }
        match bundled::ALL.iter().find(|(n, _)| *n == arg) {
            Some((name, json)) => {
                self.records.push(InputRecord::new(format!("bundled:{name}"), json.as_bytes()));
                Ok(NetworkSpec::from_json_str(json)?)
            }
            None => {
                let names: Vec<_> = bundled::ALL.iter().map(|(n, _)| *n).collect();
                bail!("no network file or bundled network named '{arg}'; bundled: {}", names.join(", "))
            }
        }
    }

    /// Accelerator lookup order: file path, `<preset_dir>/<name>.json`, built-in preset.
    pub fn accelerator(&mut self, arg: &str, preset_dir: Option<&PathBuf>) -> Result<AcceleratorConfig> {
        let path = Path::new(arg);
        if path.is_file() {
            let text = self.read(path)?;
            return AcceleratorConfig::from_json_str(&text).with_context(|| format!("invalid accelerator {arg}"));
        }
        if let Some(dir) = preset_dir {
            let candidate = dir.join(format!("{arg}.json"));
            if candidate.is_file() {
                let text = self.read(&candidate)?;
                self.presets.push(arg.to_string());
                return AcceleratorConfig::from_json_str(&text)
                    .with_context(|| format!("invalid accelerator {}", candidate.display()));
            }
        }
        match arch::preset(arg) {
            Some(cfg) => {
                self.presets.push(arg.to_string());
                Ok(cfg)
            }
            None => bail!(
                "unknown accelerator preset '{arg}'; available: {}",
                available_presets(preset_dir).join(", ")
            ),
        }
    }

    pub fn costs(&mut self, path: Option<&PathBuf>) -> Result<PeripheralCosts> {
        match path {
            Some(p) => {
                let text = self.read(p)?;
                PeripheralCosts::from_json_str(&text).with_context(|| format!("invalid costs {}", p.display()))
            }
            None => Ok(PeripheralCosts::default()),
        }
    }

    pub fn text(&mut self, path: &Path) -> Result<String> {
        self.read(path)
    }
}

fn available_presets(preset_dir: Option<&PathBuf>) -> Vec<String> {
    let mut names: Vec<String> = PRESET_NAMES.iter().map(|s| s.to_string()).collect();
    if let Some(entries) = preset_dir.and_then(|d| fs::read_dir(d).ok()) {
        for e in entries.flatten() {
            let p = e.path();
            if p.extension().is_some_and(|x| x == "json") {
                if let Some(stem) = p.file_stem().and_then(|s| s.to_str()) {
                    if !names.iter().any(|n| n == stem) {
                        names.push(stem.to_string());
                    }
                }
            }
        }
    }
    names
}
