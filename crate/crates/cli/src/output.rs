use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliResult;

/// Destination for command results: files under `--out`, or stdout.
pub struct Output {
    dir: Option<PathBuf>,
}

impl Output {
    pub fn new(dir: Option<&Path>) -> CliResult<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d)?;
        }
        Ok(Self {
            dir: dir.map(Path::to_path_buf),
        })
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    /// Writes `name` under the output directory, or the contents to stdout.
    pub fn primary(&self, name: &str, contents: &str) -> CliResult<()> {
        match &self.dir {
            Some(d) => fs::write(d.join(name), contents)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(contents.as_bytes())?;
                out.flush()?;
            }
        }
        Ok(())
    }

    /// Writes `name` under the output directory, or the contents to stderr.
    pub fn secondary(&self, name: &str, contents: &str) -> CliResult<()> {
        match &self.dir {
            Some(d) => fs::write(d.join(name), contents)?,
            None => eprint!("{contents}"),
        }
        Ok(())
    }

    /// Writes `name` only when an output directory was given.
    pub fn file_only(&self, name: &str, contents: &str) -> CliResult<()> {
        if let Some(d) = &self.dir {
            let path = d.join(name);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, contents)?;
        }
        Ok(())
    }
}

/// Keeps `[A-Za-z0-9_-]` and replaces everything else with `_`.
pub fn file_stem_safe(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
