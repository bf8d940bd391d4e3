use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::N_CLASSES;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    TestClean,
    TestNoisy,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::TestClean, Split::TestNoisy];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::TestClean => "test-clean",
            Split::TestNoisy => "test-noisy",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Split {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Split::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown split '{s}' (train, test-clean, test-noisy)")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: u8,
}

/// A list of labeled WAV paths for one split, stored as CSV `path,label`.
///
/// Relative paths are resolved against the manifest's own directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub split: Split,
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn new(split: Split, entries: Vec<ManifestEntry>) -> Result<Self> {
        let m = Self { split, entries };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.entries {
            if e.label as usize >= N_CLASSES {
                return Err(Error::Input(format!("{}: label {} outside 0..=9", e.path.display(), e.label)));
            }
            if !seen.insert(&e.path) {
                return Err(Error::Input(format!("duplicate manifest path {}", e.path.display())));
            }
        }
        Ok(())
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["path", "label"])?;
        for e in &self.entries {
            w.write_record([e.path.to_string_lossy().as_ref(), &e.label.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>, split: Split) -> Result<Self> {
        let path = path.as_ref();
        let mut r = csv::Reader::from_path(path)?;
        let headers = r.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["path", "label"] {
            return Err(Error::Format(format!("{}: expected header 'path,label'", path.display())));
        }
        let mut entries = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let label: u8 = rec[1]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("{}: bad label '{}'", path.display(), &rec[1])))?;
            entries.push(ManifestEntry { path: PathBuf::from(&rec[0]), label });
        }
        Self::new(split, entries)
    }

    /// Resolves an entry path relative to the directory holding the manifest.
    pub fn resolve(manifest_path: &Path, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            manifest_path.parent().unwrap_or(Path::new(".")).join(&entry.path)
        }
    }
}
