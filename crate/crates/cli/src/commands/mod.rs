mod portrait;
mod rotation;
mod scan;
mod thresholds;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub use portrait::cmd_portrait;
pub use rotation::{cmd_rotation, RotationDoc};
pub use scan::cmd_scan;
pub use thresholds::{cmd_thresholds, ThresholdsDoc};

use crate::config::RunConfig;
use crate::dataset::Dataset;
use crate::error::Result;

/// Everything a command produces. Nothing touches the filesystem until [`Output::write`].
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: Option<String>,
    pub files: Vec<(PathBuf, Vec<u8>)>,
    /// Short human-readable notes for the diagnostic stream.
    pub notes: Vec<String>,
}

impl Output {
    fn csv(&mut self, path: PathBuf, d: &Dataset) {
        let mut buf = Vec::new();
        d.write_csv(&mut buf).expect("writing to memory");
        self.files.push((path, buf));
    }

    fn json(&mut self, path: PathBuf, text: String) {
        let mut bytes = text.into_bytes();
        bytes.push(b'\n');
        self.files.push((path, bytes));
    }

    pub fn write(&self) -> Result<()> {
        for (path, bytes) in &self.files {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, bytes)?;
        }
        if let Some(s) = &self.stdout {
            let mut out = std::io::stdout().lock();
            out.write_all(s.as_bytes())?;
            out.flush()?;
        }
        Ok(())
    }
}

pub const DEFAULT_OUT: &str = "nontwist-out";

fn out_dir(cfg: &RunConfig) -> &Path {
    cfg.out.as_deref().unwrap_or(Path::new(DEFAULT_OUT))
}
