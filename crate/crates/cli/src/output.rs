use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use toomcook::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Rendered command output, written in one piece.
#[derive(Debug)]
pub struct Output {
    text: String,
}

impl Output {
    pub fn new(text: String) -> Self {
        Output { text }
    }

    pub fn json(mut text: String) -> Self {
        if !text.ends_with('\n') {
            text.push('\n');
        }
        Output { text }
    }

    #[cfg(test)]
    pub fn text(&self) -> &str {
        &self.text
    }

    /// Print to stdout, or write `out` (relative to `dir` when given) through
    /// a temporary file in the same directory, so a failed write leaves no
    /// partial file behind.
    pub fn emit(&self, out: Option<&Path>, dir: Option<&Path>) -> Result<()> {
        let Some(out) = out else {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(self.text.as_bytes())?;
            return Ok(stdout.flush()?);
        };
        let path: PathBuf = match dir {
            Some(d) if out.is_relative() => d.join(out),
            _ => out.to_path_buf(),
        };
        let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let tmp = parent.join(format!(".{name}.{}.tmp", std::process::id()));
        let written = fs::write(&tmp, &self.text).and_then(|_| fs::rename(&tmp, &path));
        if written.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        Ok(written?)
    }
}
