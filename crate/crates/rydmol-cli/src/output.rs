//! Atomic file output and the shared run-metadata block.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    /// Writes through a temp file and renames, so a failed run never leaves a
    /// partial primary output behind.
    pub fn write(&mut self, name: &str, content: &str) -> Result<PathBuf> {
        let target = self.dir.join(name);
        let tmp = self.dir.join(format!(".tmp.{name}"));
        std::fs::write(&tmp, content)
            .with_context(|| format!("cannot write {}", tmp.display()))?;
        std::fs::rename(&tmp, &target)
            .with_context(|| format!("cannot finalize {}", target.display()))?;
        Ok(target)
    }
}

/// Reproducibility block embedded at the top of every text report and
/// written alongside JSON outputs. Contains no timestamps: identical inputs
/// must produce identical bytes.
pub fn metadata_block(cfg: &RunConfig) -> String {
    let mut s = String::new();
    s.push_str("# run metadata\n");
    s.push_str(&format!("# constants: {}\n", cfg.constants.vintage));
    s.push_str("# resolved configuration:\n");
    for line in cfg.echo().lines() {
        s.push_str(&format!("#   {line}\n"));
    }
    s
}
