//! Corpus entries from `.pcp` directories or the builtin families.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use pcgroup_core::families::{self, FamilyError};
use pcgroup_core::{PcGroup, PcPresentation};
use thiserror::Error;

use crate::format::{self, FormatError};

pub const EXTENSION: &str = "pcp";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    File(PathBuf),
    Builtin(String),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::File(p) => write!(f, "{}", p.display()),
            Source::Builtin(name) => write!(f, "builtin:{name}"),
        }
    }
}

#[derive(Debug)]
pub struct CorpusEntry {
    pub id: String,
    pub source: Source,
    pub presentation: PcPresentation,
    pub group: PcGroup,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {error}", path.display())]
    Io { path: PathBuf, error: io::Error },
    #[error("{}: {error}", path.display())]
    Format { path: PathBuf, error: FormatError },
    #[error("builtin:{name}: {error}")]
    Family { name: String, error: FamilyError },
}

#[derive(Debug, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    /// `(source, message)` for files that failed to load.
    pub errors: Vec<(String, String)>,
}

/// Loads one file; the id defaults to the file stem when the file has no
/// leading comment.
pub fn load_file(path: &Path) -> Result<CorpusEntry, LoadError> {
    let text = fs::read_to_string(path).map_err(|error| LoadError::Io { path: path.into(), error })?;
    let fmt_err = |error| LoadError::Format { path: path.into(), error };
    let mut pres = format::parse_pcp_unchecked(&text).map_err(fmt_err)?;
    if pres.id().is_empty() {
        pres.set_id(path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    }
    let group = format::load_group(&text).map_err(fmt_err)?;
    Ok(CorpusEntry { id: pres.id().to_string(), source: Source::File(path.into()), presentation: pres, group })
}

pub fn load_builtin(name: &str) -> Result<CorpusEntry, LoadError> {
    let fam = |error| LoadError::Family { name: name.into(), error };
    let pres = families::from_name(name).map_err(fam)?;
    let group = PcGroup::new(pres.clone()).map_err(|e| fam(FamilyError::Presentation(e)))?;
    Ok(CorpusEntry { id: name.to_string(), source: Source::Builtin(name.into()), presentation: pres, group })
}

/// `builtin:NAME` selects a builtin family, anything else is a path.
pub fn load_spec(spec: &str) -> Result<CorpusEntry, LoadError> {
    match spec.strip_prefix("builtin:") {
        Some(name) => load_builtin(name),
        None => load_file(Path::new(spec)),
    }
}

pub fn builtin_corpus() -> Corpus {
    let mut corpus = Corpus::default();
    for name in families::BUILTIN_CORPUS {
        match load_builtin(name) {
            Ok(e) => corpus.entries.push(e),
            Err(e) => corpus.errors.push((format!("builtin:{name}"), e.to_string())),
        }
    }
    corpus
}

/// Every `*.pcp` file directly inside `dir`, in file name order.
pub fn load_dir(dir: &Path) -> io::Result<Corpus> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == EXTENSION))
        .collect();
    paths.sort();
    let mut corpus = Corpus::default();
    for path in paths {
        match load_file(&path) {
            Ok(e) => corpus.entries.push(e),
            Err(e) => corpus.errors.push((path.display().to_string(), e.to_string())),
        }
    }
    Ok(corpus)
}

/// File name used when writing a builtin to disk.
pub fn file_name(id: &str) -> String {
    let stem: String = id.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("{}.{EXTENSION}", stem.trim_end_matches('_'))
}

/// Writes the builtin corpus as `.pcp` files; returns the paths written.
pub fn export_builtins(dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for name in families::BUILTIN_CORPUS {
        let pres = families::from_name(name).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        let path = dir.join(file_name(name));
        fs::write(&path, format::serialize_pcp(&pres))?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names() {
        assert_eq!(file_name("heis(3)"), "heis_3.pcp");
        assert_eq!(file_name("dihedral(8)xdihedral(8)"), "dihedral_8_xdihedral_8.pcp");
    }

    #[test]
    fn spec_prefix() {
        let e = load_spec("builtin:wreath(3)").unwrap();
        assert_eq!(e.group.order(), 81);
        assert!(matches!(load_spec("builtin:nope(3)"), Err(LoadError::Family { .. })));
    }
}
