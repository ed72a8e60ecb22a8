use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use girthforge::{ConvCodeSpec, ExponentMatrix};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::failure::{CliResult, Failure};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Record of one invocation: enough to run it again and check that every
/// artifact comes out byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub cwd: PathBuf,
    pub config: Value,
    pub seed: u64,
    /// Input path to SHA-256.
    pub inputs: BTreeMap<String, String>,
    /// Output file name, relative to the manifest's directory, to SHA-256.
    pub outputs: BTreeMap<String, String>,
    pub started_unix_s: u64,
    pub wall_clock_s: f64,
}

/// Bookkeeping for a single command: where outputs go and what was read and
/// written.
pub struct Run {
    pub out_dir: PathBuf,
    pub seed: u64,
    command: String,
    config: Value,
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
    started: Instant,
    started_unix_s: u64,
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::io(format!("{}: {e}", path.display()))
}

impl Run {
    pub fn new(out_dir: PathBuf, seed: u64, command: &str, config: Value) -> CliResult<Self> {
        fs::create_dir_all(&out_dir).map_err(|e| io_error(&out_dir, e))?;
        let started_unix_s = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Ok(Run {
            out_dir,
            seed,
            command: command.to_string(),
            config,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            started: Instant::now(),
            started_unix_s,
        })
    }

    pub fn read(&mut self, path: &Path) -> CliResult<Vec<u8>> {
        let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
        self.inputs
            .insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }

    pub fn read_json(&mut self, path: &Path) -> CliResult<Value> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes)
            .map_err(|e| Failure::validation(format!("{}: invalid JSON: {e}", path.display())))
    }

    /// Writes `bytes` to `name` inside the output directory and records its
    /// digest.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.out_dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| io_error(&path, e))?;
        self.outputs.insert(name.to_string(), sha256_hex(bytes));
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| Failure::validation(format!("serializing {name}: {e}")))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn finish(self) -> CliResult<PathBuf> {
        let manifest = RunManifest {
            tool: "girthforge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.clone(),
            argv: std::env::args().collect(),
            cwd: std::env::current_dir().unwrap_or_default(),
            config: self.config,
            seed: self.seed,
            inputs: self.inputs,
            outputs: self.outputs,
            started_unix_s: self.started_unix_s,
            wall_clock_s: self.started.elapsed().as_secs_f64(),
        };
        let path = self.out_dir.join(format!("{}.manifest.json", self.command));
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Failure::validation(e.to_string()))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| io_error(&path, e))?;
        Ok(path)
    }
}

/// A code read from any JSON artifact this tool produces.
#[derive(Debug, Clone)]
pub enum LoadedCode {
    /// Exponent matrix with a lifting degree.
    Qc(ExponentMatrix),
    Conv(ConvCodeSpec),
}

fn decode<T: serde::de::DeserializeOwned>(value: &Value, what: &str) -> CliResult<T> {
    T::deserialize(value).map_err(|e| Failure::validation(format!("invalid {what}: {e}")))
}

/// Accepts a bare exponent matrix, a convolutional code, or the output of
/// `search`, `minimize-mh` and `pipeline`.
pub fn code_from_json(value: &Value) -> CliResult<LoadedCode> {
    let obj = value
        .as_object()
        .ok_or_else(|| Failure::validation("code file must hold a JSON object"))?;
    if obj.contains_key("exponents") {
        return Ok(LoadedCode::Conv(decode(value, "convolutional code")?));
    }
    if let Some(code) = obj.get("code") {
        return code_from_json(code);
    }
    if let Some(matrix) = obj.get("matrix") {
        if matrix.is_null() {
            return Err(Failure::validation(
                "file holds no matrix (search was infeasible)",
            ));
        }
        return code_from_json(matrix);
    }
    if obj.contains_key("entries") {
        let p: ExponentMatrix = decode(value, "exponent matrix")?;
        return Ok(match p.lifting_degree() {
            Some(_) => LoadedCode::Qc(p),
            None => LoadedCode::Conv(ConvCodeSpec::new(p)),
        });
    }
    Err(Failure::validation("unrecognized code file"))
}

pub fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got {text:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrList(pub Vec<f64>);

/// `start:step:stop` (inclusive, with tolerance for float steps) or a comma
/// separated list.
pub fn parse_snr(text: &str) -> Result<SnrList, String> {
    let number = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let parts: Vec<&str> = text.split(':').collect();
    let points = match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (number(start)?, number(step)?, number(stop)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(format!("bad SNR sweep {text:?}"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count)
                .map(|i| start + i as f64 * step)
                .map(|x| (x * 1e9).round() / 1e9)
                .collect()
        }
        [_] => text.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("bad SNR list {text:?}")),
    };
    if points.is_empty() || points.iter().any(|x: &f64| !x.is_finite()) {
        return Err(format!("bad SNR list {text:?}"));
    }
    Ok(SnrList(points))
}

/// Parses counts written as integers or in scientific notation (`1e6`).
pub fn parse_count(text: &str) -> Result<u64, String> {
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = text.parse().map_err(|e| format!("{text:?}: {e}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("{text:?} is not a non-negative integer"))
    }
}

/// Half-length bound of the relations that certify girth `girth`.
pub fn relation_bound(girth: usize) -> CliResult<usize> {
    if !girth.is_multiple_of(2) || !(6..=14).contains(&girth) {
        return Err(Failure::validation(format!(
            "girth must be even and between 6 and 14, got {girth}"
        )));
    }
    Ok(girth / 2 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_range("5:9"), Ok((5, 9)));
        assert!(parse_range("9:5").is_err());
        assert_eq!(
            parse_snr("1.0:0.25:2.0").unwrap().0,
            vec![1.0, 1.25, 1.5, 1.75, 2.0]
        );
        assert_eq!(parse_snr("0,2.5").unwrap().0, vec![0.0, 2.5]);
        assert_eq!(parse_snr("0:0.1:0.3").unwrap().0.len(), 4);
        assert!(parse_snr("1:0:2").is_err());
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert!(parse_count("1.5").is_err());
    }

    #[test]
    fn digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
