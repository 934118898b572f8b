//! Corner-base board game with TD(lambda)-trained value-network players,
//! scripted human stand-ins, and an experiment harness for batches of
//! self-play and human-guided training stages.

pub mod agents;
pub mod error;
pub mod features;
pub mod game;
pub mod harness;
pub mod net;
pub mod snapshot;
pub mod wire;

pub use error::{ConfigError, Error, NetError, Result};
pub use game::{BoardConfig, GameState, Move, Player, Square, Status};
