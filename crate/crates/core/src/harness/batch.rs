use std::fs;
use std::io::Write as _;
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agents::{
    play_game, select_move, EpsilonGreedy, GameRecord, GameSetup, LearningGame, Nets, ScriptedWhite, Transition,
};
use crate::error::{ConfigError, Error, Result};
use crate::game::{Move, Player};
use crate::harness::plan::{BatchSpec, SeedNetworks, StageKind, StageSpec};
use crate::harness::stats::{compute_stats, export_csv, StageStats, StatsRow};
use crate::harness::store::{write_json, BatchDir, BatchStatus, BatchSummary, Fingerprints};
use crate::net::ValueNetwork;
use crate::snapshot::{Provenance, Snapshot};

fn fingerprints(nets: &Nets) -> Fingerprints {
    Fingerprints { white: nets.white.fingerprint(), black: nets.black.fingerprint() }
}

fn load_pair(spec: &BatchSpec, white: &Path, black: &Path) -> Result<Nets> {
    Ok(Nets {
        white: Snapshot::load(white)?.network_for(&spec.board)?,
        black: Snapshot::load(black)?.network_for(&spec.board)?,
    })
}

/// A batch being executed stage by stage.
///
/// Automatic stages run with [`BatchRun::run_stage`]. Interactive stages are
/// driven from outside: start games with [`BatchRun::new_game`], feed moves
/// through [`BatchRun::play`] and [`BatchRun::play_black`], then hand the
/// records to [`BatchRun::complete_stage`]. Networks are snapshotted after
/// every stage.
#[derive(Debug)]
pub struct BatchRun {
    spec: BatchSpec,
    dir: BatchDir,
    nets: Nets,
    rng: ChaCha8Rng,
    next: usize,
    rows: Vec<StatsRow>,
    initial: Fingerprints,
    seeded_from: Option<String>,
}

impl BatchRun {
    /// Prepares the initial networks and writes them as stage 0.
    pub fn start(spec: &BatchSpec, out: &Path) -> Result<BatchRun> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
        let white_seed = rng.next_u64();
        let black_seed = rng.next_u64();
        let (nets, seeded_from) = match &spec.seed_networks {
            None => (Nets::fresh(&spec.board, white_seed, black_seed), None),
            Some(SeedNetworks::FromBatch { from }) => {
                let parent = BatchDir::new(out, from);
                let nets =
                    load_pair(spec, &parent.latest_snapshot(Player::White), &parent.latest_snapshot(Player::Black))?;
                (nets, Some(from.clone()))
            }
            Some(SeedNetworks::Files { white, black }) => (load_pair(spec, white, black)?, None),
        };
        let dir = BatchDir::new(out, &spec.id);
        fs::create_dir_all(dir.root()).map_err(|e| Error::io(dir.root(), e))?;
        let run = BatchRun {
            spec: spec.clone(),
            dir,
            initial: fingerprints(&nets),
            nets,
            rng,
            next: 0,
            rows: Vec::new(),
            seeded_from,
        };
        run.save_snapshots(0)?;
        export_csv(&run.rows, &run.dir.stats())?;
        run.save_summary(BatchStatus::Running)?;
        Ok(run)
    }

    pub fn spec(&self) -> &BatchSpec {
        &self.spec
    }

    pub fn dir(&self) -> &BatchDir {
        &self.dir
    }

    pub fn nets(&self) -> &Nets {
        &self.nets
    }

    pub fn rows(&self) -> &[StatsRow] {
        &self.rows
    }

    /// The next stage to play, with its 1-based index.
    pub fn current_stage(&self) -> Option<(usize, &StageSpec)> {
        self.spec.stages.get(self.next).map(|s| (self.next + 1, s))
    }

    pub fn is_finished(&self) -> bool {
        self.next >= self.spec.stages.len()
    }

    /// Plays the current stage to completion. Interactive stages are refused.
    pub fn run_stage(&mut self, progress: &mut dyn FnMut(usize, &GameRecord)) -> Result<StageStats> {
        let (_, stage) = self
            .current_stage()
            .ok_or_else(|| ConfigError::Plan(format!("batch {:?} has no stages left", self.spec.id)))?;
        let stage = stage.clone();
        if stage.is_interactive() {
            return Err(ConfigError::Plan(format!(
                "batch {:?} stage {} needs a human player; run it through the service",
                self.spec.id,
                self.next + 1
            ))
            .into());
        }
        let learn = stage.learn();
        let mut black = EpsilonGreedy;
        let mut cc_white = EpsilonGreedy;
        let mut scripted = stage.policy().map(ScriptedWhite::new);
        let mut records = Vec::with_capacity(stage.games());
        for i in 0..stage.games() {
            let white: &mut dyn crate::agents::MoveSource = match (&mut scripted, stage.kind) {
                (Some(s), StageKind::Hc) => s,
                _ => &mut cc_white,
            };
            let record = play_game(
                GameSetup { white, black: &mut black, learn },
                &mut self.nets,
                self.spec.board,
                self.spec.scheme,
                &self.spec.params,
                &mut self.rng,
                self.spec.max_plies,
            )?;
            progress(i, &record);
            records.push(record);
        }
        self.complete_stage(&records)
    }

    /// Starts a game of the current stage with that stage's learning flags.
    pub fn new_game(&self) -> Result<LearningGame> {
        let (_, stage) = self
            .current_stage()
            .ok_or_else(|| ConfigError::Plan(format!("batch {:?} has no stages left", self.spec.id)))?;
        LearningGame::new(
            self.spec.board,
            &self.nets,
            stage.learn(),
            self.spec.scheme,
            self.spec.params,
            self.spec.max_plies,
        )
    }

    pub fn play(&mut self, game: &mut LearningGame, mv: Move) -> Result<Transition> {
        game.play(mv, &mut self.nets)
    }

    /// Lets the Black network choose and play its move.
    pub fn play_black(&mut self, game: &mut LearningGame) -> Result<Transition> {
        let mv = select_move(game.state(), &self.nets.black, &self.spec.params, &mut self.rng)?.mv;
        game.play(mv, &mut self.nets)
    }

    /// Records a finished stage: statistics, snapshots and, for HC stages,
    /// the game records.
    pub fn complete_stage(&mut self, records: &[GameRecord]) -> Result<StageStats> {
        let (index, stage) = self
            .current_stage()
            .ok_or_else(|| ConfigError::Plan(format!("batch {:?} has no stages left", self.spec.id)))?;
        let kind = stage.kind;
        let stats = compute_stats(records);
        if kind == StageKind::Hc {
            self.save_games(index, records)?;
        }
        self.rows.push(StatsRow::new(&self.spec.id, index, kind.as_str(), &stats));
        self.next += 1;
        self.save_snapshots(index)?;
        export_csv(&self.rows, &self.dir.stats())?;
        let status = if self.is_finished() { BatchStatus::Completed } else { BatchStatus::Running };
        self.save_summary(status)?;
        Ok(stats)
    }

    pub fn summary(&self, status: BatchStatus) -> BatchSummary {
        BatchSummary {
            id: self.spec.id.clone(),
            board: self.spec.board,
            status,
            seeded_from: self.seeded_from.clone(),
            stages_total: self.spec.stages.len(),
            stages_completed: self.next,
            initial: self.initial.clone(),
            current: fingerprints(&self.nets),
            rows: self.rows.clone(),
        }
    }

    /// Marks the batch as stopped by `err`, keeping finished stages.
    pub fn mark_failed(&self, err: &Error) -> Result<BatchSummary> {
        let summary = self.summary(BatchStatus::Failed { message: err.to_string() });
        summary.save(&self.dir.summary())?;
        Ok(summary)
    }

    fn save_summary(&self, status: BatchStatus) -> Result<()> {
        self.summary(status).save(&self.dir.summary())
    }

    fn save_snapshots(&self, stage: usize) -> Result<()> {
        for side in Player::BOTH {
            let prov = Provenance { batch_id: self.spec.id.clone(), stage, rng_seed: self.spec.rng_seed };
            let snap = Snapshot::capture(self.nets.get(side), self.spec.board, prov);
            snap.save(&self.dir.snapshot(stage, side))?;
            snap.save(&self.dir.latest_snapshot(side))?;
        }
        Ok(())
    }

    fn save_games(&self, stage: usize, records: &[GameRecord]) -> Result<()> {
        let path = self.dir.games(stage);
        let mut buf = Vec::new();
        for r in records {
            serde_json::to_writer(&mut buf, r).expect("serialisable record");
            buf.push(b'\n');
        }
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let mut f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        f.write_all(&buf).map_err(|e| Error::io(&path, e))
    }

    pub fn into_nets(self) -> Nets {
        self.nets
    }
}

/// Runs every stage of a batch without human input.
///
/// On failure the batch is marked failed on disk (finished stages and their
/// snapshots remain) and the error is returned.
pub fn run_batch(spec: &BatchSpec, out: &Path) -> Result<BatchSummary> {
    if spec.has_interactive_stage() {
        return Err(ConfigError::Plan(format!(
            "batch {:?} has an interactive stage; run it through the service",
            spec.id
        ))
        .into());
    }
    let mut run = BatchRun::start(spec, out)?;
    while !run.is_finished() {
        if let Err(e) = run.run_stage(&mut |_, _| {}) {
            run.mark_failed(&e)?;
            return Err(e);
        }
    }
    Ok(run.summary(BatchStatus::Completed))
}

/// Final networks of a finished batch directory.
pub fn load_latest(out: &Path, batch_id: &str) -> Result<(ValueNetwork, ValueNetwork)> {
    let dir = BatchDir::new(out, batch_id);
    let w = Snapshot::load(&dir.latest_snapshot(Player::White))?.network()?;
    let b = Snapshot::load(&dir.latest_snapshot(Player::Black))?.network()?;
    Ok((w, b))
}

pub(crate) fn save_skipped(out: &Path, spec: &BatchSpec, message: String) -> Result<BatchSummary> {
    let empty = Fingerprints { white: String::new(), black: String::new() };
    let summary = BatchSummary {
        id: spec.id.clone(),
        board: spec.board,
        status: BatchStatus::Skipped { message },
        seeded_from: spec.parent().map(str::to_string),
        stages_total: spec.stages.len(),
        stages_completed: 0,
        initial: empty.clone(),
        current: empty,
        rows: Vec::new(),
    };
    write_json(&BatchDir::new(out, &spec.id).summary(), &summary)?;
    Ok(summary)
}
