use rand::Rng;

use crate::error::Result;
use crate::features::encode_features;
use crate::game::{apply_move, legal_moves, GameState, Move};
use crate::net::{TdParams, ValueFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Greedy,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub mv: Move,
    pub branch: Branch,
}

/// Value of the position reached by `mv`, seen by the player making it.
pub fn afterstate_value(state: &GameState, mv: Move, net: &impl ValueFunction) -> Result<f64> {
    let (after, _) = apply_move(state, mv)?;
    Ok(net.value(&encode_features(&after, state.to_move()))?)
}

/// Epsilon-greedy choice over afterstates.
///
/// The branch is drawn first: with probability `epsilon_best` the move with
/// the highest afterstate value is played (ties split uniformly), otherwise a
/// uniformly random legal move.
pub fn select_move<R: Rng + ?Sized>(
    state: &GameState,
    net: &impl ValueFunction,
    params: &TdParams,
    rng: &mut R,
) -> Result<Selection> {
    let moves = legal_moves(state)?;
    let greedy = rng.gen::<f64>() < params.epsilon_best;
    if moves.len() == 1 {
        let branch = if greedy { Branch::Greedy } else { Branch::Random };
        return Ok(Selection { mv: moves[0], branch });
    }
    if !greedy {
        let mv = moves[rng.gen_range(0..moves.len())];
        return Ok(Selection { mv, branch: Branch::Random });
    }

    let mut best = f64::NEG_INFINITY;
    let mut ties: Vec<Move> = Vec::new();
    for &mv in &moves {
        let v = afterstate_value(state, mv, net)?;
        if v > best {
            best = v;
            ties.clear();
            ties.push(mv);
        } else if v == best {
            ties.push(mv);
        }
    }
    let mv = if ties.len() == 1 { ties[0] } else { ties[rng.gen_range(0..ties.len())] };
    Ok(Selection { mv, branch: Branch::Greedy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::NetError;
    use crate::game::{new_game, BoardConfig, Player, Square};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Linear scorer over the raw features.
    struct Lookup(Vec<f64>);

    impl ValueFunction for Lookup {
        fn params(&self) -> &[f64] {
            &self.0
        }
        fn params_mut(&mut self) -> &mut [f64] {
            &mut self.0
        }
        fn value(&self, x: &[f64]) -> std::result::Result<f64, NetError> {
            Ok(self.0.iter().zip(x).map(|(w, x)| w * x).sum())
        }
        fn value_and_gradient(&self, x: &[f64], g: &mut [f64]) -> std::result::Result<f64, NetError> {
            g.copy_from_slice(x);
            self.value(x)
        }
    }

    #[test]
    fn singleton_move_is_forced() {
        let cfg = BoardConfig { n: 4, a: 1, beta: 1 };
        // A black pawn on (1,0) leaves White a single exit square.
        let s = crate::game::GameState::from_parts(cfg, &[], &[Square::new(1, 0)], [1, 0], Player::White).unwrap();
        let moves = legal_moves(&s).unwrap();
        assert_eq!(moves, vec![Move::ExitBase { dst: Square::new(0, 1) }]);
        let net = Lookup(vec![0.0; 24]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let sel = select_move(&s, &net, &TdParams::default(), &mut rng).unwrap();
            assert_eq!(sel.mv, moves[0]);
        }
    }

    #[test]
    fn pure_greedy_takes_the_best_afterstate() {
        let cfg = BoardConfig::default();
        let s = new_game(cfg).unwrap();
        // Per-square weights favouring a pawn on (0,2) over one on (2,0).
        let mut w = vec![0.0; 66];
        w[cfg.playable().position(|q| q == Square::new(0, 2)).unwrap()] = 0.9;
        w[cfg.playable().position(|q| q == Square::new(2, 0)).unwrap()] = 0.1;
        let net = Lookup(w);
        let params = TdParams { epsilon_best: 1.0, ..TdParams::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let sel = select_move(&s, &net, &params, &mut rng).unwrap();
            assert_eq!(sel.mv, Move::ExitBase { dst: Square::new(0, 2) });
            assert_eq!(sel.branch, Branch::Greedy);
        }
    }

    #[test]
    fn ties_are_split() {
        let s = new_game(BoardConfig::default()).unwrap();
        let net = Lookup(vec![0.0; 66]);
        let params = TdParams { epsilon_best: 1.0, ..TdParams::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..200 {
            seen.insert(select_move(&s, &net, &params, &mut rng).unwrap().mv);
        }
        assert_eq!(seen.len(), 4);
    }
}
