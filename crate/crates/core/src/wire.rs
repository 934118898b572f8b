//! JSON bodies exchanged with the game service.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::agents::{GameResult, PolicyKind, RewardScheme};
use crate::game::{BoardConfig, Cell, GameState, Move, MoveEvents, Player, Status};
use crate::harness::{BatchSummary, Plan, StageKind, StageStats, StatsRow};

/// A plan named by the server (`--plan`), a path it can read, or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlanRef {
    Named(String),
    Inline(Plan),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSession {
    pub plan: PlanRef,
    /// Overrides every batch RNG seed, as `run --seed` does.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionCreated {
    pub session_id: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pending {
    /// Automatic stages are being played.
    Running,
    WaitingHuman,
    Finished,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCounts {
    pub white: usize,
    pub black: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub batch: String,
    /// 1-based stage index within the batch.
    pub stage: usize,
    pub stage_kind: StageKind,
    /// 1-based game number within the stage.
    pub game: usize,
    pub of: usize,
    /// Finished games of the current stage.
    pub stats: StageStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateView {
    pub board: BoardConfig,
    /// `squares[y][x]`; row 0 is White's side of the board.
    pub squares: Vec<Vec<Cell>>,
    pub base_counts: BaseCounts,
    pub to_move: Player,
    pub ply: usize,
    pub status: Status,
    /// Empty unless a human move is awaited.
    pub legal: Vec<Move>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suggested: Option<Move>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guidance: Option<PolicyKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub progress: Option<Progress>,
    pub pending: Pending,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_engine_move: Option<Move>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl StateView {
    /// The board part of the view; `legal` and session fields are left empty.
    pub fn of_position(state: &GameState, pending: Pending) -> StateView {
        let cfg = *state.config();
        let squares =
            (0..cfg.n).map(|y| (0..cfg.n).map(|x| state.cell(crate::game::Square::new(x, y))).collect()).collect();
        StateView {
            board: cfg,
            squares,
            base_counts: BaseCounts { white: state.base_count(Player::White), black: state.base_count(Player::Black) },
            to_move: state.to_move(),
            ply: state.ply(),
            status: state.status(),
            legal: Vec::new(),
            suggested: None,
            guidance: None,
            progress: None,
            pending,
            last_engine_move: None,
            message: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveReply {
    pub human_events: MoveEvents,
    pub engine_move: Option<Move>,
    pub engine_events: Option<MoveEvents>,
    /// Set when this exchange ended the game.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game_over: Option<GameResult>,
    /// Set when this game was the last of its stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage_completed: Option<StatsRow>,
    pub state: StateView,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    /// Machine-readable code, e.g. a rule name such as `distance-decrease`.
    pub error: String,
    pub message: String,
    /// Process exit code a command-line client should use.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_code: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRequest {
    pub plan: Plan,
    pub out: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReply {
    pub batches: Vec<BatchSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PitRequest {
    pub white: PathBuf,
    pub black: PathBuf,
    pub games: usize,
    #[serde(default)]
    pub frozen: bool,
    #[serde(default)]
    pub seed: u64,
    pub label: String,
    #[serde(default)]
    pub scheme: RewardScheme,
}
