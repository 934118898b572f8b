//! Output directory layout.
//!
//! ```text
//! <out>/stats.csv                         every batch, plan order
//! <out>/<batch>/stats.csv                 one row per finished stage
//! <out>/<batch>/batch.json                status and network fingerprints
//! <out>/<batch>/snapshots/stage-00-white.json   initial networks
//! <out>/<batch>/snapshots/stage-KK-{white,black}.json
//! <out>/<batch>/snapshots/latest-{white,black}.json
//! <out>/<batch>/games/stage-KK.jsonl      HC game records
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BoardConfig, Player};
use crate::harness::stats::{read_csv, StatsRow};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchDir {
    root: PathBuf,
}

impl BatchDir {
    pub fn new(out: &Path, batch_id: &str) -> BatchDir {
        BatchDir { root: out.join(batch_id) }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn snapshot(&self, stage: usize, side: Player) -> PathBuf {
        self.root.join("snapshots").join(format!("stage-{stage:02}-{side}.json"))
    }

    pub fn latest_snapshot(&self, side: Player) -> PathBuf {
        self.root.join("snapshots").join(format!("latest-{side}.json"))
    }

    pub fn stats(&self) -> PathBuf {
        self.root.join("stats.csv")
    }

    pub fn summary(&self) -> PathBuf {
        self.root.join("batch.json")
    }

    pub fn games(&self, stage: usize) -> PathBuf {
        self.root.join("games").join(format!("stage-{stage:02}.jsonl"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprints {
    pub white: String,
    pub black: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum BatchStatus {
    Running,
    Completed,
    /// Stopped by an error; finished stages are kept.
    Failed {
        message: String,
    },
    /// Not run because the batch it starts from failed.
    Skipped {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub id: String,
    pub board: BoardConfig,
    pub status: BatchStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeded_from: Option<String>,
    pub stages_total: usize,
    pub stages_completed: usize,
    pub initial: Fingerprints,
    /// Networks after the last finished stage.
    pub current: Fingerprints,
    pub rows: Vec<StatsRow>,
}

impl BatchSummary {
    pub fn load(path: &Path) -> Result<BatchSummary> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Json { path: path.into(), source: e })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let text = serde_json::to_string_pretty(value).expect("serialisable value");
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads the stats of every batch under `out`: the combined file if there is
/// one, otherwise each batch directory's own file in name order.
pub fn collect_stats(out: &Path) -> Result<Vec<StatsRow>> {
    let combined = out.join("stats.csv");
    if combined.is_file() {
        return read_csv(&combined);
    }
    let entries = fs::read_dir(out).map_err(|e| Error::io(out, e))?;
    let mut dirs: Vec<PathBuf> =
        entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.join("stats.csv").is_file()).collect();
    dirs.sort();
    let mut rows = Vec::new();
    for d in dirs {
        rows.extend(read_csv(&d.join("stats.csv"))?);
    }
    Ok(rows)
}
