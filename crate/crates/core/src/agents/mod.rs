//! Move selection, rewards, scripted White policies and the learning game loop.

mod play;
mod reward;
mod scripted;
mod select;

use serde::{Deserialize, Serialize};

pub use play::{
    play_game, EpsilonGreedy, FixedMoves, GameRecord, GameResult, GameSetup, LearningGame, MoveSource, Nets,
    Transition, DEFAULT_MAX_PLIES,
};
pub use reward::{compute_rewards, RewardScheme, Rewards, ADJACENCY_REWARD, TERMINAL_REWARD};
pub use scripted::{saboteur_move, Behaviour, PolicyKind, ScriptedWhite, P2_GRACE_LOSSES};
pub use select::{afterstate_value, select_move, Branch, Selection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Rl,
    Scripted,
    Human,
}

/// How a side is played, as written in plan files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentSpec {
    pub kind: AgentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyKind>,
    #[serde(default = "default_learn")]
    pub learn: bool,
}

fn default_learn() -> bool {
    true
}

impl AgentSpec {
    pub fn rl() -> Self {
        AgentSpec { kind: AgentKind::Rl, policy: None, learn: true }
    }

    pub fn scripted(policy: PolicyKind) -> Self {
        AgentSpec { kind: AgentKind::Scripted, policy: Some(policy), learn: true }
    }

    pub fn human(guidance: Option<PolicyKind>) -> Self {
        AgentSpec { kind: AgentKind::Human, policy: guidance, learn: true }
    }
}
