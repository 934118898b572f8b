use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::agents::{play_game, EpsilonGreedy, GameRecord, GameSetup, Nets, RewardScheme, DEFAULT_MAX_PLIES};
use crate::error::{ConfigError, Result};
use crate::game::BoardConfig;
use crate::harness::stats::{PitReport, StageStats};
use crate::net::{TdParams, ValueNetwork};
use crate::snapshot::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitOptions {
    pub games: usize,
    /// Both networks keep learning during the match (on working copies).
    pub learn: bool,
    pub seed: u64,
    pub scheme: RewardScheme,
    pub params: TdParams,
    pub max_plies: usize,
}

impl Default for PitOptions {
    fn default() -> Self {
        PitOptions {
            games: 500,
            learn: true,
            seed: 0,
            scheme: RewardScheme::default(),
            params: TdParams::default(),
            max_plies: DEFAULT_MAX_PLIES,
        }
    }
}

/// Loads a White and a Black snapshot that must share a board.
pub fn load_pit_pair(white: &Path, black: &Path) -> Result<(BoardConfig, ValueNetwork, ValueNetwork)> {
    let ws = Snapshot::load(white)?;
    let bs = Snapshot::load(black)?;
    if ws.board.n != bs.board.n || ws.board.a != bs.board.a || ws.topology != bs.topology {
        return Err(ConfigError::TopologyMismatch {
            expected: format!("{} on n={} a={} ({})", ws.topology, ws.board.n, ws.board.a, white.display()),
            found: format!("{} on n={} a={} ({})", bs.topology, bs.board.n, bs.board.a, black.display()),
        }
        .into());
    }
    let w = ws.network_for(&ws.board)?;
    let b = bs.network_for(&ws.board)?;
    Ok((ws.board, w, b))
}

/// Plays `white` against `black` and tallies the outcomes.
pub fn cross_evaluate(
    label: &str,
    white: &ValueNetwork,
    black: &ValueNetwork,
    board: BoardConfig,
    opts: &PitOptions,
) -> Result<PitReport> {
    let games = pit_games(white, black, board, opts)?;
    Ok(PitReport::new(label, &StageStats::from_outcomes(games.iter().map(|g| (g.result, g.plies)))))
}

/// Every pit game, in game order.
///
/// With learning off every game gets its own pre-drawn seed and games run in
/// parallel; the result does not depend on the thread count.
pub fn pit_games(
    white: &ValueNetwork,
    black: &ValueNetwork,
    board: BoardConfig,
    opts: &PitOptions,
) -> Result<Vec<GameRecord>> {
    let nets = Nets { white: white.clone(), black: black.clone() };
    nets.check_board(&board)?;
    if opts.learn {
        let mut nets = nets;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut out = Vec::with_capacity(opts.games);
        for _ in 0..opts.games {
            let r = play_game(
                GameSetup { white: &mut EpsilonGreedy, black: &mut EpsilonGreedy, learn: [true, true] },
                &mut nets,
                board,
                opts.scheme,
                &opts.params,
                &mut rng,
                opts.max_plies,
            )?;
            out.push(r);
        }
        Ok(out)
    } else {
        let mut master = ChaCha8Rng::seed_from_u64(opts.seed);
        let seeds: Vec<u64> = (0..opts.games).map(|_| master.next_u64()).collect();
        seeds
            .par_iter()
            .map_init(
                || nets.clone(),
                |nets, &seed| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    play_game(
                        GameSetup { white: &mut EpsilonGreedy, black: &mut EpsilonGreedy, learn: [false, false] },
                        nets,
                        board,
                        opts.scheme,
                        &opts.params,
                        &mut rng,
                        opts.max_plies,
                    )
                },
            )
            .collect()
    }
}
