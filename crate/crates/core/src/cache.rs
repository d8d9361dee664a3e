//! On-disk KL tables and the run configuration.
//!
//! A cache file holds every nonzero `p_{y,w}` of one group under canonical
//! ShortLex ids, the generator order they refer to and a SHA-256 checksum.
//! Anything that does not validate is ignored with a warning and rebuilt.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coxeter::{CoxeterSystem, ElementId, DEFAULT_ELEMENT_BOUND};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::hecke::KlTable;
use crate::laurent::LaurentPoly;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            other => Err(Error::Config(format!("unknown output format {other:?}; expected json, csv or text"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub bound: usize,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub seed: u64,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Self { bound: DEFAULT_ELEMENT_BOUND, cache_dir: None, format: OutputFormat::Json, seed: crate::validate::DEFAULT_SEED, jobs: None }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.bound == 0 {
            return Err(Error::Config("element bound must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("job count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEnvelope {
    pub format_version: u32,
    pub type_string: String,
    pub generator_order: Vec<String>,
    pub entries: Vec<(ElementId, ElementId, LaurentPoly)>,
    pub checksum: String,
}

#[derive(Serialize)]
struct Payload<'a> {
    format_version: u32,
    type_string: &'a str,
    generator_order: &'a [String],
    entries: &'a [(ElementId, ElementId, LaurentPoly)],
}

impl CacheEnvelope {
    pub fn from_table(sys: &CoxeterSystem, kl: &KlTable) -> Self {
        let mut env = Self {
            format_version: FORMAT_VERSION,
            type_string: sys.type_string().to_string(),
            generator_order: sys.generator_order(),
            entries: kl.entries().map(|(y, w, p)| (y, w, p.clone())).collect(),
            checksum: String::new(),
        };
        env.checksum = env.compute_checksum();
        env
    }

    pub fn compute_checksum(&self) -> String {
        let payload = Payload {
            format_version: self.format_version,
            type_string: &self.type_string,
            generator_order: &self.generator_order,
            entries: &self.entries,
        };
        let bytes = serde_json::to_vec(&payload).expect("payload serializes");
        hex::encode(Sha256::digest(bytes))
    }

    /// Why this envelope cannot be used for `sys`, if it cannot.
    pub fn rejection(&self, sys: &CoxeterSystem) -> Option<String> {
        let n = sys.order();
        if self.format_version != FORMAT_VERSION {
            Some(format!("format version {} (expected {FORMAT_VERSION})", self.format_version))
        } else if self.checksum != self.compute_checksum() {
            Some("checksum mismatch".into())
        } else if self.type_string != sys.type_string() {
            Some(format!("type {} (expected {})", self.type_string, sys.type_string()))
        } else if self.generator_order != sys.generator_order() {
            Some(format!("generator order {:?} (expected {:?})", self.generator_order, sys.generator_order()))
        } else if self.entries.iter().any(|&(y, w, _)| y >= n || w >= n) {
            Some("element id out of range".into())
        } else if self.entries.iter().filter(|(y, w, p)| y == w && p.is_one()).map(|(y, _, _)| *y).collect::<std::collections::BTreeSet<_>>().len() != n {
            Some("missing diagonal entries".into())
        } else {
            None
        }
    }

    pub fn into_table(self, sys: &CoxeterSystem) -> KlTable {
        KlTable::from_entries(sys, self.entries)
    }
}

/// What happened when a table was requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "cache")]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    Rejected { reason: String },
}

pub enum LoadOutcome {
    Hit(KlTable),
    Miss,
    Rejected(String),
}

fn sanitize(type_string: &str) -> String {
    type_string.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

pub fn cache_path(dir: &Path, sys: &CoxeterSystem) -> PathBuf {
    dir.join(format!("kl-{}.json", sanitize(sys.type_string())))
}

fn lock_file(dir: &Path, sys: &CoxeterSystem) -> Result<File> {
    let path = dir.join(format!("kl-{}.lock", sanitize(sys.type_string())));
    Ok(OpenOptions::new().create(true).truncate(false).write(true).open(path)?)
}

/// Writes the table atomically under an exclusive advisory lock.
pub fn cache_store(dir: &Path, sys: &CoxeterSystem, kl: &KlTable) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let lock = lock_file(dir, sys)?;
    lock.lock()?;
    let path = cache_path(dir, sys);
    let env = CacheEnvelope::from_table(sys, kl);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, &env)?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
    lock.unlock()?;
    Ok(path)
}

/// Reads and validates a cached table under a shared lock.
pub fn cache_load(dir: &Path, sys: &CoxeterSystem) -> Result<LoadOutcome> {
    let path = cache_path(dir, sys);
    if !path.exists() {
        return Ok(LoadOutcome::Miss);
    }
    fs::create_dir_all(dir)?;
    let lock = lock_file(dir, sys)?;
    lock.lock_shared()?;
    let text = fs::read(&path);
    lock.unlock()?;
    let env: CacheEnvelope = match serde_json::from_slice(&text?) {
        Ok(env) => env,
        Err(e) => return Ok(LoadOutcome::Rejected(format!("unreadable cache file: {e}"))),
    };
    Ok(match env.rejection(sys) {
        Some(reason) => LoadOutcome::Rejected(reason),
        None => LoadOutcome::Hit(env.into_table(sys)),
    })
}

/// Loads the KL table from `dir` when it validates, otherwise builds it and
/// writes it back.
pub fn load_or_build(dir: Option<&Path>, sys: &CoxeterSystem) -> Result<(KlTable, CacheStatus)> {
    let Some(dir) = dir else {
        return Ok((KlTable::build(sys), CacheStatus::Disabled));
    };
    let status = match cache_load(dir, sys)? {
        LoadOutcome::Hit(kl) => return Ok((kl, CacheStatus::Hit)),
        LoadOutcome::Miss => CacheStatus::Miss,
        LoadOutcome::Rejected(reason) => {
            log::warn!("ignoring cache file {}: {reason}; rebuilding", cache_path(dir, sys).display());
            CacheStatus::Rejected { reason }
        }
    };
    let kl = KlTable::build(sys);
    cache_store(dir, sys, &kl)?;
    Ok((kl, status))
}

/// Build information surfaced in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildInfo {
    pub kl_computed_entries: usize,
    #[serde(flatten)]
    pub cache: CacheStatus,
}

/// Enumerates the group within the bound and builds everything, going
/// through the cache when one is configured.
pub fn build_group(spec: &str, config: &Config) -> Result<(Group, BuildInfo)> {
    config.validate()?;
    let sys = Arc::new(CoxeterSystem::from_type_bounded(spec, config.bound)?);
    let (kl, cache) = load_or_build(config.cache_dir.as_deref(), &sys)?;
    let info = BuildInfo { kl_computed_entries: kl.computed_entries(), cache };
    Ok((Group::from_parts(sys, Arc::new(kl)), info))
}
