//! The single-game loop with per-player TD(lambda) learning.

use std::collections::VecDeque;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::agents::reward::{compute_rewards, RewardScheme, Rewards};
use crate::agents::scripted::ScriptedWhite;
use crate::agents::select::select_move;
use crate::error::{ConfigError, Result};
use crate::features::{encode_features, FeatureVector};
use crate::game::{apply_move, new_game, BoardConfig, GameState, Move, MoveEvents, Player, Status};
use crate::net::{td_step, TdParams, Topology, Traces, ValueFunction, ValueNetwork};

pub const DEFAULT_MAX_PLIES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameResult {
    White,
    Black,
    Aborted,
}

impl GameResult {
    pub fn winner(self) -> Option<Player> {
        match self {
            GameResult::White => Some(Player::White),
            GameResult::Black => Some(Player::Black),
            GameResult::Aborted => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub config: BoardConfig,
    pub moves: Vec<Move>,
    pub events: Vec<MoveEvents>,
    pub rewards: Vec<Rewards>,
    pub result: GameResult,
    pub plies: usize,
}

/// The pair of per-player networks.
#[derive(Debug, Clone, PartialEq)]
pub struct Nets {
    pub white: ValueNetwork,
    pub black: ValueNetwork,
}

impl Nets {
    pub fn fresh(board: &BoardConfig, white_seed: u64, black_seed: u64) -> Nets {
        let t = Topology::for_board(board);
        Nets { white: ValueNetwork::init(t, white_seed), black: ValueNetwork::init(t, black_seed) }
    }

    pub fn get(&self, p: Player) -> &ValueNetwork {
        match p {
            Player::White => &self.white,
            Player::Black => &self.black,
        }
    }

    pub fn get_mut(&mut self, p: Player) -> &mut ValueNetwork {
        match p {
            Player::White => &mut self.white,
            Player::Black => &mut self.black,
        }
    }

    pub fn check_board(&self, board: &BoardConfig) -> Result<()> {
        let expected = Topology::for_board(board);
        for p in Player::BOTH {
            let found = self.get(p).topology();
            if found != expected {
                return Err(ConfigError::TopologyMismatch {
                    expected: expected.to_string(),
                    found: format!("{found} ({p} network)"),
                }
                .into());
            }
        }
        Ok(())
    }
}

/// Anything that can pick a move for the side to move.
pub trait MoveSource {
    fn choose(
        &mut self,
        state: &GameState,
        net: &ValueNetwork,
        params: &TdParams,
        rng: &mut dyn RngCore,
    ) -> Result<Move>;

    fn game_started(&mut self) {}

    fn game_finished(&mut self, _result: GameResult) {}
}

/// The learning computer player.
#[derive(Debug, Clone, Copy, Default)]
pub struct EpsilonGreedy;

impl MoveSource for EpsilonGreedy {
    fn choose(
        &mut self,
        state: &GameState,
        net: &ValueNetwork,
        params: &TdParams,
        rng: &mut dyn RngCore,
    ) -> Result<Move> {
        Ok(select_move(state, net, params, rng)?.mv)
    }
}

impl MoveSource for ScriptedWhite {
    fn choose(&mut self, state: &GameState, _: &ValueNetwork, _: &TdParams, _: &mut dyn RngCore) -> Result<Move> {
        Ok(ScriptedWhite::choose(self, state))
    }

    fn game_started(&mut self) {
        self.begin_game();
    }

    fn game_finished(&mut self, result: GameResult) {
        self.record_result(result);
    }
}

/// Plays back a fixed move list, e.g. a recorded game.
#[derive(Debug, Clone, Default)]
pub struct FixedMoves(pub VecDeque<Move>);

impl MoveSource for FixedMoves {
    fn choose(&mut self, state: &GameState, _: &ValueNetwork, _: &TdParams, _: &mut dyn RngCore) -> Result<Move> {
        Ok(self.0.pop_front().unwrap_or_else(|| panic!("move list exhausted at ply {}", state.ply())))
    }
}

#[derive(Debug, Clone)]
struct SideLearner {
    learn: bool,
    traces: Traces,
    /// Features of this side's previous afterstate (or the kickoff position).
    prev: FeatureVector,
    /// Reward accumulated since this side's last update.
    pending: f64,
}

/// What one applied move produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub mover: Player,
    pub mv: Move,
    pub events: MoveEvents,
    pub rewards: Rewards,
    pub status: Status,
}

/// A game in progress together with both players' learning state.
///
/// Each learning side updates its own network when it moves, bootstrapping
/// from the value of its new afterstate, and both sides make a final update
/// when the game is decided. Traces are reset at kickoff. A rejected move
/// changes nothing.
#[derive(Debug, Clone)]
pub struct LearningGame {
    state: GameState,
    scheme: RewardScheme,
    params: TdParams,
    max_plies: usize,
    sides: [SideLearner; 2],
    record: GameRecord,
}

impl LearningGame {
    pub fn new(
        config: BoardConfig,
        nets: &Nets,
        learn: [bool; 2],
        scheme: RewardScheme,
        params: TdParams,
        max_plies: usize,
    ) -> Result<LearningGame> {
        nets.check_board(&config)?;
        let state = new_game(config)?;
        let side = |p: Player| SideLearner {
            learn: learn[p.index()],
            traces: Traces::for_function(nets.get(p)),
            prev: encode_features(&state, p),
            pending: 0.0,
        };
        let sides = [side(Player::White), side(Player::Black)];
        let record = GameRecord {
            config,
            moves: Vec::new(),
            events: Vec::new(),
            rewards: Vec::new(),
            result: GameResult::Aborted,
            plies: 0,
        };
        Ok(LearningGame { state, scheme, params, max_plies, sides, record })
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn is_over(&self) -> bool {
        !self.state.is_ongoing()
    }

    pub fn record(&self) -> &GameRecord {
        &self.record
    }

    pub fn traces(&self, p: Player) -> &Traces {
        &self.sides[p.index()].traces
    }

    pub fn play(&mut self, mv: Move, nets: &mut Nets) -> Result<Transition> {
        let prev = &self.state;
        let mover = prev.to_move();
        let (next, events) = apply_move(prev, mv)?;
        let rewards = compute_rewards(self.scheme, prev, mv, &next, &events);
        for p in Player::BOTH {
            self.sides[p.index()].pending += rewards.get(p);
        }

        if next.is_ongoing() {
            let x_new = encode_features(&next, mover);
            let side = &mut self.sides[mover.index()];
            if side.learn {
                let net = nets.get_mut(mover);
                let v_next = net.value(&x_new)?;
                td_step(net, &mut side.traces, &self.params, &side.prev, side.pending, v_next, false)?;
            }
            side.prev = x_new;
            side.pending = 0.0;
        } else {
            for p in Player::BOTH {
                let side = &mut self.sides[p.index()];
                if side.learn {
                    td_step(nets.get_mut(p), &mut side.traces, &self.params, &side.prev, side.pending, 0.0, true)?;
                }
                side.pending = 0.0;
            }
        }

        self.state = next;
        if self.state.is_ongoing() && self.state.ply() >= self.max_plies {
            self.state.abort();
        }
        self.record.moves.push(mv);
        self.record.events.push(events.clone());
        self.record.rewards.push(rewards);
        self.record.plies = self.state.ply();
        self.record.result = match self.state.status() {
            Status::Won(Player::White) => GameResult::White,
            Status::Won(Player::Black) => GameResult::Black,
            Status::Ongoing | Status::Aborted => GameResult::Aborted,
        };
        Ok(Transition { mover, mv, events, rewards, status: self.state.status() })
    }

    pub fn into_record(self) -> GameRecord {
        self.record
    }
}

/// Who plays each side, and whether its network learns.
pub struct GameSetup<'a> {
    pub white: &'a mut dyn MoveSource,
    pub black: &'a mut dyn MoveSource,
    pub learn: [bool; 2],
}

/// Plays one game from kickoff, updating the learning networks in place.
pub fn play_game(
    setup: GameSetup<'_>,
    nets: &mut Nets,
    config: BoardConfig,
    scheme: RewardScheme,
    params: &TdParams,
    rng: &mut dyn RngCore,
    max_plies: usize,
) -> Result<GameRecord> {
    let GameSetup { white, black, learn } = setup;
    let mut game = LearningGame::new(config, nets, learn, scheme, *params, max_plies)?;
    white.game_started();
    black.game_started();
    while !game.is_over() {
        let mover = game.state().to_move();
        let source: &mut dyn MoveSource = match mover {
            Player::White => &mut *white,
            Player::Black => &mut *black,
        };
        let mv = source.choose(game.state(), nets.get(mover), params, rng)?;
        game.play(mv, nets)?;
    }
    let record = game.into_record();
    white.game_finished(record.result);
    black.game_finished(record.result);
    Ok(record)
}
