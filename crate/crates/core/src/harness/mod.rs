//! Batches of training stages, cross-evaluation pits and their on-disk results.

mod batch;
mod pit;
mod plan;
mod runner;
mod stats;
mod store;

pub use batch::{load_latest, run_batch, BatchRun};
pub use pit::{cross_evaluate, load_pit_pair, pit_games, PitOptions};
pub use plan::{
    BatchSpec, Plan, SeedNetworks, StageKind, StageSpec, ACCELERATED_CC_GAMES, DEFAULT_CC_GAMES, DEFAULT_HC_GAMES,
};
pub use runner::{prepare_plan, run_plan, PlanOutcome, RunOptions};
pub use stats::{compute_stats, csv_string, export_csv, read_csv, render_pit_table, PitReport, StageStats, StatsRow};
pub use store::{collect_stats, BatchDir, BatchStatus, BatchSummary, Fingerprints};
