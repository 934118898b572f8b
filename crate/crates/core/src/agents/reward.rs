use serde::{Deserialize, Serialize};

use crate::game::{GameState, Move, MoveEvents, Player, Status};

pub const TERMINAL_REWARD: f64 = 100.0;
pub const ADJACENCY_REWARD: f64 = 2.0;

/// The three reward types.
///
/// * `R1`: +/-100 at the end, +/-2 when a pawn reaches a square next to the
///   enemy base, pawn difference scaled to [-1, 1] on captures.
/// * `R2`: as R1 without the adjacency credit.
/// * `R3`: as R2 with the pawn difference scaled to [-100, 100].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardScheme {
    R1,
    R2,
    #[default]
    R3,
}

impl RewardScheme {
    pub fn adjacency_bonus(self) -> Option<f64> {
        match self {
            RewardScheme::R1 => Some(ADJACENCY_REWARD),
            RewardScheme::R2 | RewardScheme::R3 => None,
        }
    }

    pub fn pawn_diff_scale(self) -> f64 {
        match self {
            RewardScheme::R1 | RewardScheme::R2 => 1.0,
            RewardScheme::R3 => 100.0,
        }
    }

    /// Scaled pawn difference from `player`'s point of view.
    pub fn pawn_term(self, state: &GameState, player: Player) -> f64 {
        let own = state.total_pawns(player) as f64;
        let opp = state.total_pawns(player.opponent()) as f64;
        self.pawn_diff_scale() * (own - opp) / state.config().beta as f64
    }

    /// Largest magnitude any single transition can award.
    pub fn max_abs_reward(self) -> f64 {
        TERMINAL_REWARD + self.adjacency_bonus().unwrap_or(0.0) + self.pawn_diff_scale()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Rewards {
    pub white: f64,
    pub black: f64,
}

impl Rewards {
    pub fn get(&self, p: Player) -> f64 {
        match p {
            Player::White => self.white,
            Player::Black => self.black,
        }
    }

    fn add(&mut self, p: Player, r: f64) {
        match p {
            Player::White => self.white += r,
            Player::Black => self.black += r,
        }
    }
}

fn pawns_next_to_enemy_base(state: &GameState, player: Player) -> usize {
    let cfg = state.config();
    state.pawns_on_board(player).filter(|&sq| cfg.adjacent_to_base(player.opponent(), sq)).count()
}

/// Rewards earned by each side on the transition `prev --mv--> next`.
///
/// Pawn-difference rewards are paid only on transitions that removed pawns;
/// the adjacency credit only on the transition that put a new pawn next to
/// the enemy base.
pub fn compute_rewards(
    scheme: RewardScheme,
    prev: &GameState,
    mv: Move,
    next: &GameState,
    events: &MoveEvents,
) -> Rewards {
    let mover = prev.to_move();
    let mut r = Rewards::default();

    if let Status::Won(winner) = next.status() {
        r.add(winner, TERMINAL_REWARD);
        r.add(winner.opponent(), -TERMINAL_REWARD);
    }

    if let Some(bonus) = scheme.adjacency_bonus() {
        let reached =
            mv.destination().is_some() && pawns_next_to_enemy_base(next, mover) > pawns_next_to_enemy_base(prev, mover);
        if reached {
            r.add(mover, bonus);
            r.add(mover.opponent(), -bonus);
        }
    }

    if !events.removed.is_empty() {
        for p in Player::BOTH {
            r.add(p, scheme.pawn_term(next, p));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{apply_move, BoardConfig, Square};

    fn sq(x: usize, y: usize) -> Square {
        Square::new(x, y)
    }

    #[test]
    fn entering_the_base_pays_terminal_rewards() {
        let s = GameState::from_parts(BoardConfig::default(), &[sq(5, 6)], &[], [9, 10], Player::White).unwrap();
        let mv = Move::EnterEnemyBase { src: sq(5, 6) };
        let (next, ev) = apply_move(&s, mv).unwrap();
        for scheme in [RewardScheme::R1, RewardScheme::R2, RewardScheme::R3] {
            let r = compute_rewards(scheme, &s, mv, &next, &ev);
            assert_eq!((r.white, r.black), (100.0, -100.0));
        }
    }

    #[test]
    fn adjacency_credit_only_under_r1() {
        let s = GameState::from_parts(BoardConfig::default(), &[sq(4, 6)], &[], [9, 10], Player::White).unwrap();
        let mv = Move::Step { src: sq(4, 6), dst: sq(5, 6) };
        let (next, ev) = apply_move(&s, mv).unwrap();
        let r = compute_rewards(RewardScheme::R1, &s, mv, &next, &ev);
        assert_eq!((r.white, r.black), (2.0, -2.0));
        let r = compute_rewards(RewardScheme::R2, &s, mv, &next, &ev);
        assert_eq!((r.white, r.black), (0.0, 0.0));
    }

    #[test]
    fn sliding_along_the_base_edge_is_not_new_adjacency() {
        let s = GameState::from_parts(BoardConfig::default(), &[sq(5, 6)], &[], [9, 10], Player::White).unwrap();
        let mv = Move::Step { src: sq(5, 6), dst: sq(5, 7) };
        let (next, ev) = apply_move(&s, mv).unwrap();
        assert_eq!(compute_rewards(RewardScheme::R1, &s, mv, &next, &ev), Rewards::default());
    }

    #[test]
    fn r3_capture_scaling() {
        // White 10 pawns vs Black 5 after the capture.
        let cfg = BoardConfig::default();
        let white: Vec<Square> = vec![sq(6, 0), sq(6, 1), sq(2, 3), sq(3, 3)];
        let s = GameState::from_parts(cfg, &white, &[sq(7, 0)], [6, 5], Player::White).unwrap();
        let mv = Move::Step { src: sq(6, 1), dst: sq(7, 1) };
        let (next, ev) = apply_move(&s, mv).unwrap();
        assert_eq!(ev.removed_of(Player::Black), 1);
        let r = compute_rewards(RewardScheme::R3, &s, mv, &next, &ev);
        // 100 * (10 - 5) / 10
        assert_eq!((r.white, r.black), (50.0, -50.0));
        let r = compute_rewards(RewardScheme::R2, &s, mv, &next, &ev);
        assert_eq!((r.white, r.black), (0.5, -0.5));
    }

    #[test]
    fn reward_bounds() {
        assert_eq!(RewardScheme::R1.max_abs_reward(), 103.0);
        assert_eq!(RewardScheme::R2.max_abs_reward(), 101.0);
        assert_eq!(RewardScheme::R3.max_abs_reward(), 200.0);
        assert_eq!(serde_json::to_string(&RewardScheme::R3).unwrap(), "\"r3\"");
    }
}
