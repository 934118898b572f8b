//! Scripted stand-ins for the human White player.
//!
//! * `P1` runs a single pawn north along the left edge up to the first rank of
//!   the black base, then right until it touches the base's vertical edge, and
//!   enters.
//! * `P3` is a saboteur: it never enters the black base and never moves next to it.
//! * `P2` plays the saboteur until Black has won five games of the current HC
//!   session, then switches to `P1`.

use serde::{Deserialize, Serialize};

use crate::agents::play::GameResult;
use crate::game::{base_distance, legal_moves, GameState, Move, Player, Square};

/// Black wins granted by `P2` before it starts playing to win.
pub const P2_GRACE_LOSSES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    P1,
    P2,
    P3,
}

impl PolicyKind {
    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::P1 => "P1",
            PolicyKind::P2 => "P2",
            PolicyKind::P3 => "P3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Behaviour {
    Runner,
    Saboteur,
}

/// A scripted White player with its per-session memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptedWhite {
    policy: PolicyKind,
    black_wins: usize,
    runner: Option<Square>,
}

impl ScriptedWhite {
    pub fn new(policy: PolicyKind) -> Self {
        ScriptedWhite { policy, black_wins: 0, runner: None }
    }

    pub fn policy(&self) -> PolicyKind {
        self.policy
    }

    pub fn black_wins(&self) -> usize {
        self.black_wins
    }

    pub fn behaviour(&self) -> Behaviour {
        match self.policy {
            PolicyKind::P1 => Behaviour::Runner,
            PolicyKind::P3 => Behaviour::Saboteur,
            PolicyKind::P2 if self.black_wins >= P2_GRACE_LOSSES => Behaviour::Runner,
            PolicyKind::P2 => Behaviour::Saboteur,
        }
    }

    pub fn begin_game(&mut self) {
        self.runner = None;
    }

    pub fn record_result(&mut self, result: GameResult) {
        if result == GameResult::Black {
            self.black_wins += 1;
        }
    }

    /// The move this policy wants to play, without updating its memory.
    pub fn suggest(&self, state: &GameState) -> Move {
        match self.behaviour() {
            Behaviour::Runner => runner_move(state, self.current_runner(state)),
            Behaviour::Saboteur => saboteur_move(state),
        }
    }

    /// Tracks the runner pawn through whatever move White actually played.
    pub fn observe(&mut self, state: &GameState, mv: Move) {
        let runner = self.current_runner(state);
        self.runner = match (runner, mv) {
            (None, Move::ExitBase { dst }) => Some(dst),
            (Some(r), Move::Step { src, dst }) if src == r => Some(dst),
            (r, _) => r,
        };
    }

    pub fn choose(&mut self, state: &GameState) -> Move {
        let mv = self.suggest(state);
        self.observe(state, mv);
        mv
    }

    /// The remembered runner if it is still on the board, else the White pawn
    /// closest to the black base.
    fn current_runner(&self, state: &GameState) -> Option<Square> {
        if let Some(r) = self.runner.filter(|&r| state.cell(r).owner() == Some(Player::White)) {
            return Some(r);
        }
        let cfg = *state.config();
        state.pawns_on_board(Player::White).min_by_key(|&sq| (base_distance(&cfg, Player::Black, sq), sq.y, sq.x))
    }
}

fn runner_move(state: &GameState, runner: Option<Square>) -> Move {
    let moves = legal_moves(state).expect("scripted move requested on a finished game");
    let cfg = *state.config();
    let (n, a) = (cfg.n, cfg.a);
    let legal = |mv: &Move| moves.contains(mv);

    let Some(r) = runner else {
        let preferred = Move::ExitBase { dst: Square::new(0, a) };
        if legal(&preferred) {
            return preferred;
        }
        return moves.iter().copied().find(|m| matches!(m, Move::ExitBase { .. })).unwrap_or(moves[0]);
    };

    let enter = Move::EnterEnemyBase { src: r };
    if legal(&enter) {
        return enter;
    }
    let north = (r.y + 1 < n).then(|| Move::Step { src: r, dst: Square::new(r.x, r.y + 1) });
    let east = (r.x + 1 < n).then(|| Move::Step { src: r, dst: Square::new(r.x + 1, r.y) });
    // Northward leg until level with the bottom rank of the black base, then east.
    let (preferred, alternative) = if r.y < n - a {
        (north, east)
    } else if r.x + a + 1 < n {
        (east, north)
    } else {
        (None, None)
    };
    for mv in [preferred, alternative].into_iter().flatten() {
        if legal(&mv) {
            return mv;
        }
    }
    moves.iter().copied().find(|m| matches!(m, Move::Step { src, .. } if *src == r)).unwrap_or(moves[0])
}

/// How much a move increases the mover's distance from its own base.
fn advance(state: &GameState, mv: Move) -> usize {
    let cfg = state.config();
    let me = state.to_move();
    match mv {
        Move::ExitBase { dst } => base_distance(cfg, me, dst),
        Move::Step { src, dst } => base_distance(cfg, me, dst) - base_distance(cfg, me, src),
        Move::EnterEnemyBase { .. } => usize::MAX,
    }
}

/// A move that avoids winning: never enters the enemy base and, when it has
/// any choice, never moves next to it. Sideways moves are preferred, then the
/// least advancing one, first in canonical order on ties. Works for either side.
///
/// Only when every legal move enters the enemy base is such a move returned.
pub fn saboteur_move(state: &GameState) -> Move {
    let moves = legal_moves(state).expect("scripted move requested on a finished game");
    let cfg = *state.config();
    let enemy = state.to_move().opponent();
    let pick =
        |keep: &dyn Fn(&Move) -> bool| moves.iter().copied().filter(|m| keep(m)).min_by_key(|&m| advance(state, m));
    pick(&|m| m.destination().is_some_and(|d| !cfg.adjacent_to_base(enemy, d)))
        .or_else(|| pick(&|m| m.destination().is_some()))
        .unwrap_or(moves[0])
}
