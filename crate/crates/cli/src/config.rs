//! Flag/config-file layering and validation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

pub const DEFAULT_A: f64 = 1.5;
pub const DEFAULT_K: f64 = 0.018;

/// Flags shared by every subcommand. Values given here override the config file.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// lo:hi
    #[arg(long = "b-range", allow_hyphen_values = true)]
    pub b_range: Option<String>,
    /// lo:hi
    #[arg(long = "y-range", allow_hyphen_values = true)]
    pub y_range: Option<String>,
    /// x0:x1:y0:y1
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// NX:NY
    #[arg(long)]
    pub res: Option<String>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Integration steps per seed (split between backward and forward).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Number of sample points for scan and rotation.
    #[arg(long)]
    pub samples: Option<usize>,
    /// CSV file of seed points, one `x,y` per line.
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat JSON object with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub triple: bool,
    #[arg(long)]
    pub topology: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Thresholds,
    Portrait,
    Scan,
    Rotation,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Thresholds => "thresholds",
            CommandKind::Portrait => "portrait",
            CommandKind::Scan => "scan",
            CommandKind::Rotation => "rotation",
        }
    }

    fn keys(&self) -> &'static [&'static str] {
        match self {
            CommandKind::Thresholds => &["a", "k", "b-range", "triple", "out"],
            CommandKind::Portrait => &["a", "b", "k", "window", "res", "dt", "steps", "seeds", "svg", "out"],
            CommandKind::Scan => &["a", "b", "k", "b-range", "samples", "topology", "out"],
            CommandKind::Rotation => &["a", "b", "y-range", "samples", "out"],
        }
    }
}

const ALL_KEYS: &[&str] = &[
    "command", "a", "b", "k", "b-range", "y-range", "window", "res", "dt", "steps", "samples", "seeds", "svg", "out",
    "triple", "topology",
];

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub a: f64,
    pub b: Option<f64>,
    pub k: f64,
    pub b_range: Option<(f64, f64)>,
    pub y_range: (f64, f64),
    /// `(x0, x1, y0, y1)`; `None` picks a window around the equilibria.
    pub window: Option<(f64, f64, f64, f64)>,
    pub res: (usize, usize),
    pub dt: f64,
    pub steps: usize,
    pub samples: usize,
    pub seeds: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub triple: bool,
    pub topology: bool,
}

fn parse_f64(field: &str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| CliError::config(field, format!("`{s}` is not a number")))
}

fn parse_parts(field: &str, s: &str, n: usize, shape: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != n {
        return Err(CliError::config(field, format!("expected {shape}, got `{s}`")));
    }
    parts.iter().map(|p| parse_f64(field, p)).collect()
}

fn parse_range(field: &str, s: &str) -> Result<(f64, f64)> {
    let v = parse_parts(field, s, 2, "lo:hi")?;
    Ok((v[0], v[1]))
}

fn parse_res(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::config("res", format!("expected NX:NY with positive integers, got `{s}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let nx = parts[0].trim().parse().map_err(|_| bad())?;
    let ny = parts[1].trim().parse().map_err(|_| bad())?;
    Ok((nx, ny))
}

/// `n` evenly spaced points from `lo` to `hi`, both ends included exactly.
pub fn sample_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let m = (n - 1) as f64;
    (0..n).map(|i| (lo * (m - i as f64) + hi * i as f64) / m).collect()
}

/// Raw values from the config file, checked for type only.
#[derive(Debug, Default)]
struct FileValues(Map<String, Value>);

impl FileValues {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config("config", format!("cannot read {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::config("config", format!("{} is not valid JSON: {e}", path.display())))?;
        let Value::Object(map) = value else {
            return Err(CliError::config("config", "expected a flat JSON object"));
        };
        if let Some(bad) = map.keys().find(|k| !ALL_KEYS.contains(&k.as_str())) {
            return Err(CliError::config(bad.clone(), "unknown config key"));
        }
        Ok(FileValues(map))
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| CliError::config(key, "expected a number")),
        }
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(|| CliError::config(key, "expected a non-negative integer")),
        }
    }

    fn text(&self, key: &str) -> Result<Option<String>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(CliError::config(key, "expected a string")),
        }
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.0.get(key) {
            None => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => Err(CliError::config(key, "expected true or false")),
        }
    }
}

impl RunConfig {
    /// Layers flags over the config file (if any) over the built-in defaults, then validates.
    pub fn resolve(command: CommandKind, flags: &Flags) -> Result<RunConfig> {
        let file = match &flags.config {
            Some(path) => FileValues::load(path)?,
            None => FileValues::default(),
        };
        if let Some(c) = file.text("command")? {
            if c != command.as_str() {
                return Err(CliError::config("command", format!("config is for `{c}`, not `{}`", command.as_str())));
            }
        }
        let pick_num = |flag: Option<f64>, key: &str| -> Result<Option<f64>> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => file.number(key),
            }
        };
        let pick_count = |flag: Option<usize>, key: &str| -> Result<Option<usize>> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => file.count(key),
            }
        };
        let pick_text = |flag: &Option<String>, key: &str| -> Result<Option<String>> {
            match flag {
                Some(v) => Ok(Some(v.clone())),
                None => file.text(key),
            }
        };
        let pick_path = |flag: &Option<PathBuf>, key: &str| -> Result<Option<PathBuf>> {
            match flag {
                Some(v) => Ok(Some(v.clone())),
                None => Ok(file.text(key)?.map(PathBuf::from)),
            }
        };

        let b_range = pick_text(&flags.b_range, "b-range")?.map(|s| parse_range("b-range", &s)).transpose()?;
        let y_range = pick_text(&flags.y_range, "y-range")?.map(|s| parse_range("y-range", &s)).transpose()?;
        let window = pick_text(&flags.window, "window")?
            .map(|s| parse_parts("window", &s, 4, "x0:x1:y0:y1").map(|v| (v[0], v[1], v[2], v[3])))
            .transpose()?;
        let res = pick_text(&flags.res, "res")?.map(|s| parse_res(&s)).transpose()?;
        let default_samples = if command == CommandKind::Rotation { 301 } else { 101 };

        let cfg = RunConfig {
            command,
            a: pick_num(flags.a, "a")?.unwrap_or(DEFAULT_A),
            b: pick_num(flags.b, "b")?,
            k: pick_num(flags.k, "k")?.unwrap_or(DEFAULT_K),
            b_range,
            y_range: y_range.unwrap_or((-1.0, 2.0)),
            window,
            res: res.unwrap_or((200, 200)),
            dt: pick_num(flags.dt, "dt")?.unwrap_or(0.1),
            steps: pick_count(flags.steps, "steps")?.unwrap_or(4000),
            samples: pick_count(flags.samples, "samples")?.unwrap_or(default_samples),
            seeds: pick_path(&flags.seeds, "seeds")?,
            svg: pick_path(&flags.svg, "svg")?,
            out: pick_path(&flags.out, "out")?,
            triple: flags.triple || file.flag("triple")?,
            topology: flags.topology || file.flag("topology")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(CliError::config(field, format!("{v} is not finite")))
            }
        };
        finite("a", self.a)?;
        if self.a <= 0.0 {
            return Err(CliError::config("a", format!("must be positive, got {}", self.a)));
        }
        finite("k", self.k)?;
        if self.k < 0.0 {
            return Err(CliError::config("k", format!("must be non-negative, got {}", self.k)));
        }
        if let Some(b) = self.b {
            finite("b", b)?;
        }
        if let Some((lo, hi)) = self.b_range {
            finite("b-range", lo)?;
            finite("b-range", hi)?;
            let single = self.command == CommandKind::Scan && self.samples == 1;
            if lo > hi || (lo == hi && !single) {
                return Err(CliError::config("b-range", format!("lo {lo} must be below hi {hi}")));
            }
        }
        let (ylo, yhi) = self.y_range;
        if !(ylo.is_finite() && yhi.is_finite() && ylo < yhi) {
            return Err(CliError::config("y-range", format!("need finite lo < hi, got {ylo}:{yhi}")));
        }
        if let Some((x0, x1, y0, y1)) = self.window {
            if ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) || x0 >= x1 || y0 >= y1 {
                return Err(CliError::config("window", "need finite x0 < x1 and y0 < y1"));
            }
        }
        if self.res.0 < 2 || self.res.1 < 2 {
            return Err(CliError::config("res", "need at least 2 nodes per axis"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(CliError::config("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.steps < 2 {
            return Err(CliError::config("steps", "need at least 2 steps"));
        }
        if self.samples == 0 {
            return Err(CliError::config("samples", "need at least one sample"));
        }
        match self.command {
            CommandKind::Thresholds if self.b_range.is_none() && !self.triple => {
                Err(CliError::config("b-range", "required unless --triple is given"))
            }
            CommandKind::Portrait | CommandKind::Rotation if self.b.is_none() => Err(CliError::config("b", "required")),
            CommandKind::Scan if self.b_range.is_none() && self.b.is_none() => {
                Err(CliError::config("b-range", "required (or give a single --b)"))
            }
            _ => Ok(()),
        }
    }

    /// Sample points of `b` for a scan.
    pub fn scan_values(&self) -> Vec<f64> {
        match (self.b_range, self.b) {
            (Some((lo, hi)), _) => sample_points(lo, hi, self.samples),
            (None, Some(b)) => vec![b],
            (None, None) => Vec::new(),
        }
    }

    /// The configuration as a flat object that can be fed back through `--config`.
    pub fn echo(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("command".to_string(), Value::from(self.command.as_str()));
        let range = |(lo, hi): (f64, f64)| Value::from(format!("{lo}:{hi}"));
        for key in self.command.keys() {
            let v = match *key {
                "a" => Some(Value::from(self.a)),
                "b" => self.b.map(Value::from),
                "k" => Some(Value::from(self.k)),
                "b-range" => self.b_range.map(range),
                "y-range" => Some(range(self.y_range)),
                "window" => self.window.map(|(a, b, c, d)| Value::from(format!("{a}:{b}:{c}:{d}"))),
                "res" => Some(Value::from(format!("{}:{}", self.res.0, self.res.1))),
                "dt" => Some(Value::from(self.dt)),
                "steps" => Some(Value::from(self.steps)),
                "samples" => Some(Value::from(self.samples)),
                "seeds" => self.seeds.as_ref().map(|p| Value::from(p.display().to_string())),
                "svg" => self.svg.as_ref().map(|p| Value::from(p.display().to_string())),
                "out" => self.out.as_ref().map(|p| Value::from(p.display().to_string())),
                "triple" => Some(Value::from(self.triple)),
                "topology" => Some(Value::from(self.topology)),
                _ => unreachable!("unlisted key {key}"),
            };
            if let Some(v) = v {
                m.insert(key.to_string(), v);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn config_file(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(body.as_bytes()).unwrap();
        f
    }

    #[test]
    fn defaults() {
        let flags = Flags { b: Some(0.5), ..Flags::default() };
        let c = RunConfig::resolve(CommandKind::Portrait, &flags).unwrap();
        assert_eq!((c.a, c.k), (1.5, 0.018));
        assert_eq!(c.res, (200, 200));
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let f = config_file(r#"{"a": 2.0, "k": 0.05, "b": 0.1}"#);
        let flags = Flags { k: Some(0.03), config: Some(f.path().into()), ..Flags::default() };
        let c = RunConfig::resolve(CommandKind::Portrait, &flags).unwrap();
        assert_eq!((c.a, c.b, c.k), (2.0, Some(0.1), 0.03));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let f = config_file(r#"{"bogus": 1}"#);
        let flags = Flags { config: Some(f.path().into()), ..Flags::default() };
        let e = RunConfig::resolve(CommandKind::Scan, &flags).unwrap_err();
        assert!(matches!(&e, CliError::Config { field, .. } if field == "bogus"), "{e}");

        let flags = Flags { b_range: Some("1:0".into()), ..Flags::default() };
        let e = RunConfig::resolve(CommandKind::Thresholds, &flags).unwrap_err();
        assert!(matches!(&e, CliError::Config { field, .. } if field == "b-range"), "{e}");
        assert_eq!(e.exit_code(), 2);

        let flags = Flags { a: Some(-1.0), b: Some(0.1), ..Flags::default() };
        let e = RunConfig::resolve(CommandKind::Rotation, &flags).unwrap_err();
        assert!(matches!(&e, CliError::Config { field, .. } if field == "a"));
    }

    #[test]
    fn echo_resolves_to_the_same_config() {
        let flags = Flags { b_range: Some("-3:1".into()), samples: Some(7), topology: true, ..Flags::default() };
        let c = RunConfig::resolve(CommandKind::Scan, &flags).unwrap();
        let f = config_file(&serde_json::to_string(&c.echo()).unwrap());
        let again = RunConfig::resolve(CommandKind::Scan, &Flags { config: Some(f.path().into()), ..Flags::default() });
        assert_eq!(again.unwrap(), c);
    }

    #[test]
    fn scan_values_hit_both_ends() {
        let flags = Flags { b_range: Some("0.3:0.7".into()), samples: Some(9), ..Flags::default() };
        let c = RunConfig::resolve(CommandKind::Scan, &flags).unwrap();
        let v = c.scan_values();
        assert_eq!(v.len(), 9);
        assert_eq!((v[0], v[8]), (0.3, 0.7));
        assert!((v[4] - 0.5).abs() < 1e-15);
    }
}
