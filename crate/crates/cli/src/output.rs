//! Output staging: files are written to a scratch directory and moved into
//! place only after every stage has succeeded.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub struct Staging {
    dir: PathBuf,
    target: PathBuf,
    files: Vec<String>,
}

impl Staging {
    pub fn new(target: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(target).with_context(|| format!("creating {}", target.display()))?;
        let dir = target.join(format!(".leadlag-staging-{}", std::process::id()));
        if dir.exists() {
            fs::remove_dir_all(&dir)?;
        }
        fs::create_dir(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir,
            target: target.to_owned(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(name.to_owned());
        Ok(())
    }

    pub fn file_names(&self) -> &[String] {
        &self.files
    }

    /// Renames every staged file into the target directory.
    pub fn commit(self) -> anyhow::Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.files.len());
        for name in &self.files {
            let dest = self.target.join(name);
            fs::rename(self.dir.join(name), &dest).with_context(|| format!("moving {}", dest.display()))?;
            written.push(dest);
        }
        fs::remove_dir_all(&self.dir).ok();
        Ok(written)
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        // Leftovers only exist when the run failed before commit.
        let _ = fs::remove_dir_all(&self.dir);
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    input: InputRecord,
    config: &'a RunConfig,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct InputRecord {
    path: String,
    sha256: String,
}

/// Config echo, input hash and tool version. Worker count and output
/// directory are left out: they do not affect any artifact.
pub fn manifest(
    command: &str,
    cfg: &RunConfig,
    input: &Path,
    input_bytes: &[u8],
    outputs: &[String],
) -> anyhow::Result<String> {
    let mut outputs = outputs.to_vec();
    outputs.sort();
    let m = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        input: InputRecord {
            path: input.display().to_string(),
            sha256: sha256_hex(input_bytes),
        },
        config: cfg,
        outputs,
    };
    let mut s = serde_json::to_string_pretty(&m)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commit_moves_files_and_cleans_up() {
        let root = tempfile::tempdir().unwrap();
        let mut st = Staging::new(root.path()).unwrap();
        st.write("a.txt", "hello").unwrap();
        let staging_dir = st.dir.clone();
        let written = st.commit().unwrap();
        assert_eq!(written, vec![root.path().join("a.txt")]);
        assert_eq!(fs::read_to_string(root.path().join("a.txt")).unwrap(), "hello");
        assert!(!staging_dir.exists());
    }

    #[test]
    fn dropped_staging_leaves_nothing() {
        let root = tempfile::tempdir().unwrap();
        {
            let mut st = Staging::new(root.path()).unwrap();
            st.write("partial.json", "{").unwrap();
        }
        assert_eq!(fs::read_dir(root.path()).unwrap().count(), 0);
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
