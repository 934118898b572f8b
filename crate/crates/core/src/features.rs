//! Input encoding for the value networks.
//!
//! One entry per playable square, enumerated row-major in the frame of the
//! encoding player (their base at the origin), followed by ten summary slots.

use crate::game::{base_distance, BoardConfig, GameState, Player, Square};

pub const AUX_FEATURES: usize = 10;

pub type FeatureVector = Vec<f64>;

pub fn feature_len(config: &BoardConfig) -> usize {
    config.playable_squares() + AUX_FEATURES
}

/// Maps a square in `perspective`'s frame to absolute board coordinates.
fn absolute(config: &BoardConfig, perspective: Player, rel: Square) -> Square {
    match perspective {
        Player::White => rel,
        Player::Black => Square::new(config.n - 1 - rel.x, config.n - 1 - rel.y),
    }
}

pub fn encode_features(state: &GameState, perspective: Player) -> FeatureVector {
    let cfg = *state.config();
    let me = perspective;
    let opp = me.opponent();
    let mut x = Vec::with_capacity(feature_len(&cfg));

    // The frame swap maps base regions onto each other, so `playable()` is
    // valid for both perspectives.
    for rel in cfg.playable() {
        let value = match state.cell(absolute(&cfg, me, rel)).owner() {
            Some(p) if p == me => 1.0,
            Some(_) => -1.0,
            None => 0.0,
        };
        x.push(value);
    }

    let beta = cfg.beta as f64;
    let adjacency_norm = (4 * cfg.a) as f64;
    let own_board = state.board_count(me);
    let opp_board = state.board_count(opp);
    let own_near_goal = state.pawns_on_board(me).filter(|&s| cfg.adjacent_to_base(opp, s)).count();
    let opp_near_home = state.pawns_on_board(opp).filter(|&s| cfg.adjacent_to_base(me, s)).count();
    let proximity = state
        .pawns_on_board(me)
        .map(|s| base_distance(&cfg, opp, s))
        .min()
        .map_or(0.0, |d| 1.0 - d as f64 / (cfg.n - cfg.a) as f64);

    x.push(state.base_count(me) as f64 / beta);
    x.push(state.base_count(opp) as f64 / beta);
    x.push(own_board as f64 / beta);
    x.push(opp_board as f64 / beta);
    x.push((state.total_pawns(me) as f64 - state.total_pawns(opp) as f64) / beta);
    x.push((own_near_goal as f64 / adjacency_norm).min(1.0));
    x.push((opp_near_home as f64 / adjacency_norm).min(1.0));
    x.push(proximity);
    x.push(if state.to_move() == me { 1.0 } else { -1.0 });
    x.push(1.0);
    debug_assert_eq!(x.len(), feature_len(&cfg));
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::new_game;

    #[test]
    fn kickoff_encoding() {
        let s = new_game(BoardConfig::default()).unwrap();
        let x = encode_features(&s, Player::White);
        assert_eq!(x.len(), 66);
        assert!(x[..56].iter().all(|&v| v == 0.0));
        assert_eq!(&x[56..], &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        let b = encode_features(&s, Player::Black);
        assert_eq!(b[64], -1.0);
    }

    #[test]
    fn mirrored_position_encodes_identically() {
        let cfg = BoardConfig::default();
        let s = GameState::from_parts(
            cfg,
            &[Square::new(2, 0), Square::new(4, 3), Square::new(5, 6)],
            &[Square::new(6, 5), Square::new(1, 4)],
            [7, 8],
            Player::Black,
        )
        .unwrap();
        assert_eq!(encode_features(&s, Player::White), encode_features(&s.mirrored(), Player::Black));
        assert_eq!(encode_features(&s, Player::Black), encode_features(&s.mirrored(), Player::White));
    }

    #[test]
    fn pawn_difference_slot() {
        let cfg = BoardConfig::default();
        let white: Vec<Square> = (2..8).map(|x| Square::new(x, 0)).chain((2..6).map(|x| Square::new(x, 2))).collect();
        let s = GameState::from_parts(cfg, &white, &[Square::new(3, 5)], [0, 4], Player::White).unwrap();
        let x = encode_features(&s, Player::White);
        assert_eq!(x[56 + 4], 0.5);
        assert!(x.iter().all(|v| (-1.0..=1.0).contains(v)));
    }
}
