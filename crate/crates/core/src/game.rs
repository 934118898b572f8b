//! Rules of the corner-base game.
//!
//! The board is an `n x n` grid. White owns the `a x a` corner region at the
//! origin, Black owns the opposite corner. A base behaves like a single square:
//! any pawn still inside it may step out onto any free square orthogonally
//! adjacent to the region. Pawns move one square orthogonally and may never
//! reduce their distance from their own base, where distance is the larger of
//! the two per-axis gaps. A pawn that has no move is lost, and moving a pawn
//! into the opposing base wins.
//!
//! Every operation here is a pure function of its inputs.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    White,
    Black,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::White, Player::Black];

    pub fn opponent(self) -> Player {
        match self {
            Player::White => Player::Black,
            Player::Black => Player::White,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::White => 0,
            Player::Black => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::White => "white",
            Player::Black => "black",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    #[default]
    Empty,
    White,
    Black,
}

impl Cell {
    pub fn owner(self) -> Option<Player> {
        match self {
            Cell::Empty => None,
            Cell::White => Some(Player::White),
            Cell::Black => Some(Player::Black),
        }
    }

    pub fn of(player: Player) -> Cell {
        match player {
            Player::White => Cell::White,
            Player::Black => Cell::Black,
        }
    }
}

/// Board coordinate; `x` is the file, `y` the rank, both counted from the
/// white-base corner. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Square {
    pub x: usize,
    pub y: usize,
}

impl Square {
    pub const fn new(x: usize, y: usize) -> Self {
        Square { x, y }
    }

    /// Orthogonal neighbours, clipped to the board.
    pub fn neighbors(self, n: usize) -> impl Iterator<Item = Square> {
        let Square { x, y } = self;
        let candidates = [
            (x.checked_sub(1), Some(y)),
            ((x + 1 < n).then_some(x + 1), Some(y)),
            (Some(x), y.checked_sub(1)),
            (Some(x), (y + 1 < n).then_some(y + 1)),
        ];
        candidates.into_iter().filter_map(|c| match c {
            (Some(x), Some(y)) => Some(Square { x, y }),
            _ => None,
        })
    }

    pub fn is_orthogonal_neighbor(self, other: Square) -> bool {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y) == 1
    }

    /// Key used for canonical move ordering: rank first, then file.
    fn order_key(self) -> (usize, usize) {
        (self.y, self.x)
    }
}

impl From<[usize; 2]> for Square {
    fn from([x, y]: [usize; 2]) -> Self {
        Square { x, y }
    }
}

impl From<Square> for [usize; 2] {
    fn from(sq: Square) -> Self {
        [sq.x, sq.y]
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Static parameters of a game: board side `n`, base side `a`, pawns per side `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoardConfig {
    pub n: usize,
    pub a: usize,
    pub beta: usize,
}

impl Default for BoardConfig {
    fn default() -> Self {
        BoardConfig { n: 8, a: 2, beta: 10 }
    }
}

impl BoardConfig {
    pub fn new(n: usize, a: usize, beta: usize) -> Result<Self, ConfigError> {
        let config = BoardConfig { n, a, beta };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.a < 1 {
            return Err(ConfigError::Board(format!("base side a must be >= 1, got {}", self.a)));
        }
        if self.beta < 1 {
            return Err(ConfigError::Board(format!("pawn count beta must be >= 1, got {}", self.beta)));
        }
        if self.n < 2 * self.a + 2 {
            return Err(ConfigError::Board(format!("board side n={} is smaller than 2a+2={}", self.n, 2 * self.a + 2)));
        }
        Ok(())
    }

    /// Number of squares outside both bases.
    pub fn playable_squares(&self) -> usize {
        self.n * self.n - 2 * self.a * self.a
    }

    pub fn index(&self, sq: Square) -> usize {
        sq.y * self.n + sq.x
    }

    pub fn contains(&self, sq: Square) -> bool {
        sq.x < self.n && sq.y < self.n
    }

    pub fn in_base(&self, player: Player, sq: Square) -> bool {
        match player {
            Player::White => sq.x < self.a && sq.y < self.a,
            Player::Black => sq.x >= self.n - self.a && sq.y >= self.n - self.a,
        }
    }

    pub fn in_any_base(&self, sq: Square) -> bool {
        self.in_base(Player::White, sq) || self.in_base(Player::Black, sq)
    }

    /// True when `sq` lies outside the base of `player` but shares an edge with it.
    pub fn adjacent_to_base(&self, player: Player, sq: Square) -> bool {
        let (n, a) = (self.n, self.a);
        match player {
            Player::White => (sq.x == a && sq.y < a) || (sq.y == a && sq.x < a),
            Player::Black => (sq.x + a + 1 == n && sq.y >= n - a) || (sq.y + a + 1 == n && sq.x >= n - a),
        }
    }

    /// Squares from which a pawn leaving `player`'s base may land, canonical order.
    pub fn base_exits(&self, player: Player) -> Vec<Square> {
        let mut exits: Vec<Square> = self.squares().filter(|&sq| self.adjacent_to_base(player, sq)).collect();
        exits.sort_by_key(|sq| sq.order_key());
        exits
    }

    /// Every square in row-major order, bases included.
    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        (0..self.n).flat_map(move |y| (0..self.n).map(move |x| Square { x, y }))
    }

    /// Every square outside both bases in row-major order.
    pub fn playable(&self) -> impl Iterator<Item = Square> + '_ {
        self.squares().filter(move |&sq| !self.in_any_base(sq))
    }
}

/// Distance of `sq` from `player`'s base: the larger of the per-axis gaps to
/// the nearest base square. Zero only inside the base.
pub fn base_distance(config: &BoardConfig, player: Player, sq: Square) -> usize {
    let (n, a) = (config.n, config.a);
    match player {
        Player::White => sq.x.saturating_sub(a - 1).max(sq.y.saturating_sub(a - 1)),
        Player::Black => (n - a).saturating_sub(sq.x).max((n - a).saturating_sub(sq.y)),
    }
}

/// Where a pawn sits: still inside its own base, or on a board square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PawnLocation {
    InOwnBase,
    OnBoard(Square),
}

impl Serialize for PawnLocation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PawnLocation::InOwnBase => serializer.serialize_str("base"),
            PawnLocation::OnBoard(sq) => sq.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for PawnLocation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Tag(String),
            Square(Square),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Tag(t) if t == "base" => Ok(PawnLocation::InOwnBase),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!("unknown pawn location {t:?}"))),
            Repr::Square(sq) => Ok(PawnLocation::OnBoard(sq)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Move {
    #[serde(rename = "exit")]
    ExitBase {
        dst: Square,
    },
    Step {
        src: Square,
        dst: Square,
    },
    #[serde(rename = "enter")]
    EnterEnemyBase {
        src: Square,
    },
}

impl Move {
    /// Canonical ordering key: exits first, then steps, then base entries.
    fn order_key(&self) -> (u8, (usize, usize), (usize, usize)) {
        match *self {
            Move::ExitBase { dst } => (0, (0, 0), dst.order_key()),
            Move::Step { src, dst } => (1, src.order_key(), dst.order_key()),
            Move::EnterEnemyBase { src } => (2, src.order_key(), (0, 0)),
        }
    }

    pub fn destination(&self) -> Option<Square> {
        match *self {
            Move::ExitBase { dst } | Move::Step { dst, .. } => Some(dst),
            Move::EnterEnemyBase { .. } => None,
        }
    }

    pub fn source(&self) -> Option<Square> {
        match *self {
            Move::Step { src, .. } | Move::EnterEnemyBase { src } => Some(src),
            Move::ExitBase { .. } => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::ExitBase { dst } => write!(f, "exit->{dst}"),
            Move::Step { src, dst } => write!(f, "{src}->{dst}"),
            Move::EnterEnemyBase { src } => write!(f, "{src}->base"),
        }
    }
}

/// Sorts moves into the canonical order used for reproducible tie-breaking.
pub fn sort_canonical(moves: &mut [Move]) {
    moves.sort_by_key(Move::order_key);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "winner", rename_all = "lowercase")]
pub enum Status {
    Ongoing,
    Won(Player),
    Aborted,
}

/// The rule a rejected move broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleViolation {
    DistanceDecrease,
    Occupied,
    NotAdjacent,
    NotYourPawn,
    GameOver,
}

impl RuleViolation {
    pub fn code(self) -> &'static str {
        match self {
            RuleViolation::DistanceDecrease => "distance-decrease",
            RuleViolation::Occupied => "occupied",
            RuleViolation::NotAdjacent => "not-adjacent",
            RuleViolation::NotYourPawn => "not-your-pawn",
            RuleViolation::GameOver => "game-over",
        }
    }
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("illegal move {mv}: {rule}")]
pub struct MoveError {
    pub mv: Move,
    pub rule: RuleViolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("operation requires an ongoing game, status is {0:?}")]
pub struct TerminalStateError(pub Status);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid position: {0}")]
pub struct PositionError(pub String);

/// One pawn taken off the board by the immobility rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Removal {
    pub owner: Player,
    pub at: PawnLocation,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MoveEvents {
    pub removed: Vec<Removal>,
    pub winner: Option<Player>,
}

impl MoveEvents {
    pub fn removed_of(&self, player: Player) -> usize {
        self.removed.iter().filter(|r| r.owner == player).count()
    }
}

/// A full position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    config: BoardConfig,
    base_counts: [usize; 2],
    board: Vec<Cell>,
    to_move: Player,
    ply: usize,
    status: Status,
}

/// Kickoff position: every pawn in its base, White to move.
pub fn new_game(config: BoardConfig) -> Result<GameState, ConfigError> {
    config.validate()?;
    Ok(GameState {
        config,
        base_counts: [config.beta; 2],
        board: vec![Cell::Empty; config.n * config.n],
        to_move: Player::White,
        ply: 0,
        status: Status::Ongoing,
    })
}

impl GameState {
    /// Builds an arbitrary ongoing position, for tests and analysis.
    pub fn from_parts(
        config: BoardConfig,
        white: &[Square],
        black: &[Square],
        base_counts: [usize; 2],
        to_move: Player,
    ) -> Result<GameState, PositionError> {
        config.validate().map_err(|e| PositionError(e.to_string()))?;
        let mut board = vec![Cell::Empty; config.n * config.n];
        for (player, squares) in [(Player::White, white), (Player::Black, black)] {
            if base_counts[player.index()] + squares.len() > config.beta {
                return Err(PositionError(format!("{player} has more than beta={} pawns", config.beta)));
            }
            for &sq in squares {
                if !config.contains(sq) || config.in_any_base(sq) {
                    return Err(PositionError(format!("{sq} is not a playable square")));
                }
                let cell = &mut board[config.index(sq)];
                if *cell != Cell::Empty {
                    return Err(PositionError(format!("{sq} holds two pawns")));
                }
                *cell = Cell::of(player);
            }
        }
        Ok(GameState { config, base_counts, board, to_move, ply: 0, status: Status::Ongoing })
    }

    pub fn config(&self) -> &BoardConfig {
        &self.config
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn ply(&self) -> usize {
        self.ply
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_ongoing(&self) -> bool {
        self.status == Status::Ongoing
    }

    pub fn base_count(&self, player: Player) -> usize {
        self.base_counts[player.index()]
    }

    pub fn cell(&self, sq: Square) -> Cell {
        self.board[self.config.index(sq)]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.board
    }

    pub fn pawns_on_board(&self, player: Player) -> impl Iterator<Item = Square> + '_ {
        let target = Cell::of(player);
        self.config.squares().filter(move |&sq| self.cell(sq) == target)
    }

    pub fn board_count(&self, player: Player) -> usize {
        let target = Cell::of(player);
        self.board.iter().filter(|&&c| c == target).count()
    }

    pub fn total_pawns(&self, player: Player) -> usize {
        self.base_count(player) + self.board_count(player)
    }

    /// Marks an ongoing game as abandoned (move cap reached).
    pub fn abort(&mut self) {
        if self.status == Status::Ongoing {
            self.status = Status::Aborted;
        }
    }

    fn is_empty(&self, sq: Square) -> bool {
        self.cell(sq) == Cell::Empty
    }

    fn step_allowed(&self, owner: Player, src: Square, dst: Square) -> bool {
        !self.config.in_any_base(dst)
            && self.is_empty(dst)
            && base_distance(&self.config, owner, dst) >= base_distance(&self.config, owner, src)
    }

    /// Whether the pawn of `owner` on `sq` has at least one legal move.
    fn pawn_is_mobile(&self, owner: Player, sq: Square) -> bool {
        self.config.adjacent_to_base(owner.opponent(), sq)
            || sq.neighbors(self.config.n).any(|dst| self.step_allowed(owner, sq, dst))
    }

    fn base_is_open(&self, owner: Player) -> bool {
        self.config.squares().any(|sq| self.config.adjacent_to_base(owner, sq) && self.is_empty(sq))
    }

    fn check_move(&self, mv: Move) -> Result<(), RuleViolation> {
        use RuleViolation::*;
        if self.status != Status::Ongoing {
            return Err(GameOver);
        }
        let me = self.to_move;
        let cfg = &self.config;
        let owns = |sq: Square| cfg.contains(sq) && self.cell(sq) == Cell::of(me);
        match mv {
            Move::ExitBase { dst } => {
                if self.base_count(me) == 0 {
                    return Err(NotYourPawn);
                }
                if !cfg.contains(dst) || !cfg.adjacent_to_base(me, dst) {
                    return Err(NotAdjacent);
                }
                if !self.is_empty(dst) {
                    return Err(Occupied);
                }
            }
            Move::Step { src, dst } => {
                if !owns(src) {
                    return Err(NotYourPawn);
                }
                if !cfg.contains(dst) || !src.is_orthogonal_neighbor(dst) || cfg.in_base(me.opponent(), dst) {
                    return Err(NotAdjacent);
                }
                if cfg.in_base(me, dst) {
                    return Err(DistanceDecrease);
                }
                if !self.is_empty(dst) {
                    return Err(Occupied);
                }
                if base_distance(cfg, me, dst) < base_distance(cfg, me, src) {
                    return Err(DistanceDecrease);
                }
            }
            Move::EnterEnemyBase { src } => {
                if !owns(src) {
                    return Err(NotYourPawn);
                }
                if !cfg.adjacent_to_base(me.opponent(), src) {
                    return Err(NotAdjacent);
                }
            }
        }
        Ok(())
    }

    /// Checks a move without applying it.
    pub fn validate(&self, mv: Move) -> Result<(), MoveError> {
        self.check_move(mv).map_err(|rule| MoveError { mv, rule })
    }

    /// Returns the position with colours swapped and the board rotated by
    /// 180 degrees, so each side sees the other's situation.
    pub fn mirrored(&self) -> GameState {
        let n = self.config.n;
        let mut board = vec![Cell::Empty; n * n];
        for sq in self.config.squares() {
            let flipped = Square::new(n - 1 - sq.x, n - 1 - sq.y);
            board[self.config.index(flipped)] = match self.cell(sq) {
                Cell::Empty => Cell::Empty,
                Cell::White => Cell::Black,
                Cell::Black => Cell::White,
            };
        }
        GameState {
            config: self.config,
            base_counts: [self.base_counts[1], self.base_counts[0]],
            board,
            to_move: self.to_move.opponent(),
            ply: self.ply,
            status: match self.status {
                Status::Won(p) => Status::Won(p.opponent()),
                s => s,
            },
        }
    }
}

/// All legal moves of the side to move, in canonical order.
pub fn legal_moves(state: &GameState) -> Result<Vec<Move>, TerminalStateError> {
    if !state.is_ongoing() {
        return Err(TerminalStateError(state.status));
    }
    let me = state.to_move;
    let cfg = &state.config;
    let mut moves = Vec::new();
    if state.base_count(me) > 0 {
        for dst in cfg.base_exits(me) {
            if state.is_empty(dst) {
                moves.push(Move::ExitBase { dst });
            }
        }
    }
    let mut entries = Vec::new();
    for src in state.pawns_on_board(me) {
        let mut dsts: Vec<Square> = src.neighbors(cfg.n).filter(|&dst| state.step_allowed(me, src, dst)).collect();
        dsts.sort_by_key(|d| d.order_key());
        moves.extend(dsts.into_iter().map(|dst| Move::Step { src, dst }));
        if cfg.adjacent_to_base(me.opponent(), src) {
            entries.push(Move::EnterEnemyBase { src });
        }
    }
    moves.extend(entries);
    debug_assert!(moves.windows(2).all(|w| w[0].order_key() < w[1].order_key()));
    Ok(moves)
}

/// Removes every pawn of either side that has no legal move, repeating until
/// nothing changes. Each sweep decides the full removable set before removing
/// anything. Base pawns are lost together when no square next to their base is free.
pub fn resolve_immobility(state: &GameState) -> (GameState, Vec<Removal>) {
    let mut next = state.clone();
    let mut removed = Vec::new();
    if !state.is_ongoing() {
        return (next, removed);
    }
    loop {
        let mut sweep = Vec::new();
        for owner in Player::BOTH {
            if next.base_count(owner) > 0 && !next.base_is_open(owner) {
                sweep.extend(std::iter::repeat_n(
                    Removal { owner, at: PawnLocation::InOwnBase },
                    next.base_count(owner),
                ));
            }
        }
        for sq in next.config.squares() {
            if let Some(owner) = next.cell(sq).owner() {
                if !next.pawn_is_mobile(owner, sq) {
                    sweep.push(Removal { owner, at: PawnLocation::OnBoard(sq) });
                }
            }
        }
        if sweep.is_empty() {
            break;
        }
        for r in &sweep {
            match r.at {
                PawnLocation::InOwnBase => next.base_counts[r.owner.index()] -= 1,
                PawnLocation::OnBoard(sq) => {
                    let idx = next.config.index(sq);
                    next.board[idx] = Cell::Empty;
                }
            }
        }
        removed.extend(sweep);
    }
    (next, removed)
}

/// Plays `mv` and resolves its consequences.
pub fn apply_move(state: &GameState, mv: Move) -> Result<(GameState, MoveEvents), MoveError> {
    state.validate(mv)?;
    let me = state.to_move;
    let mut next = state.clone();
    let mut events = MoveEvents::default();
    match mv {
        Move::ExitBase { dst } => {
            next.base_counts[me.index()] -= 1;
            let idx = next.config.index(dst);
            next.board[idx] = Cell::of(me);
        }
        Move::Step { src, dst } => {
            let (s, d) = (next.config.index(src), next.config.index(dst));
            next.board.swap(s, d);
        }
        Move::EnterEnemyBase { .. } => {
            // The game ends on the spot; the winning pawn is left where it stood.
            next.status = Status::Won(me);
            events.winner = Some(me);
        }
    }
    if next.is_ongoing() {
        let (resolved, removed) = resolve_immobility(&next);
        next = resolved;
        events.removed = removed;
        let winner = if next.total_pawns(me.opponent()) == 0 {
            Some(me)
        } else if next.total_pawns(me) == 0 {
            Some(me.opponent())
        } else {
            None
        };
        if let Some(w) = winner {
            next.status = Status::Won(w);
            events.winner = Some(w);
        }
    }
    next.to_move = me.opponent();
    next.ply += 1;
    Ok((next, events))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> BoardConfig {
        BoardConfig::default()
    }

    fn sq(x: usize, y: usize) -> Square {
        Square::new(x, y)
    }

    #[test]
    fn kickoff_positions() {
        let s = new_game(cfg()).unwrap();
        assert_eq!(s.base_count(Player::White), 10);
        assert_eq!(s.base_count(Player::Black), 10);
        assert_eq!(s.board_count(Player::White) + s.board_count(Player::Black), 0);
        assert_eq!(cfg().playable_squares(), 56);
        assert_eq!(s.to_move(), Player::White);
        assert_eq!(s.ply(), 0);
        assert_eq!(s.status(), Status::Ongoing);

        let small = new_game(BoardConfig { n: 6, a: 1, beta: 3 }).unwrap();
        assert_eq!(small.base_count(Player::Black), 3);
        assert_eq!(small.config().playable_squares(), 34);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(new_game(BoardConfig { n: 4, a: 2, beta: 1 }).is_err());
        assert!(BoardConfig::new(8, 0, 10).is_err());
        assert!(BoardConfig::new(8, 2, 0).is_err());
        assert!(BoardConfig::new(6, 2, 1).is_ok());
    }

    #[test]
    fn distances() {
        let c = cfg();
        assert_eq!(base_distance(&c, Player::White, sq(4, 1)), 3);
        assert_eq!(base_distance(&c, Player::White, sq(2, 0)), 1);
        assert_eq!(base_distance(&c, Player::Black, sq(4, 1)), 5);
        assert_eq!(base_distance(&c, Player::Black, sq(5, 7)), 1);
        assert_eq!(base_distance(&c, Player::White, sq(1, 1)), 0);
    }

    #[test]
    fn kickoff_moves_are_the_four_exits() {
        let s = new_game(cfg()).unwrap();
        let moves = legal_moves(&s).unwrap();
        let expected: Vec<Move> =
            [sq(2, 0), sq(2, 1), sq(0, 2), sq(1, 2)].into_iter().map(|dst| Move::ExitBase { dst }).collect();
        assert_eq!(moves, expected);
    }

    #[test]
    fn lone_pawn_steps() {
        let s = GameState::from_parts(cfg(), &[sq(2, 0)], &[], [9, 10], Player::White).unwrap();
        let moves = legal_moves(&s).unwrap();
        let steps: Vec<Move> = moves.iter().copied().filter(|m| matches!(m, Move::Step { .. })).collect();
        assert_eq!(
            steps,
            vec![Move::Step { src: sq(2, 0), dst: sq(3, 0) }, Move::Step { src: sq(2, 0), dst: sq(2, 1) },]
        );
        assert_eq!(moves.iter().filter(|m| matches!(m, Move::ExitBase { .. })).count(), 3);
    }

    #[test]
    fn enter_is_offered_next_to_enemy_base() {
        let s = GameState::from_parts(cfg(), &[sq(5, 6)], &[], [9, 10], Player::White).unwrap();
        let moves = legal_moves(&s).unwrap();
        assert_eq!(moves.last(), Some(&Move::EnterEnemyBase { src: sq(5, 6) }));
        let (next, ev) = apply_move(&s, Move::EnterEnemyBase { src: sq(5, 6) }).unwrap();
        assert_eq!(next.status(), Status::Won(Player::White));
        assert!(ev.removed.is_empty());
        assert_eq!(ev.winner, Some(Player::White));
        assert!(legal_moves(&next).is_err());
        assert_eq!(apply_move(&next, Move::ExitBase { dst: sq(2, 0) }).unwrap_err().rule, RuleViolation::GameOver);
    }

    #[test]
    fn corner_pawn_is_trapped() {
        // White (7,0) can only go to (7,1); (6,0) is closer to its base.
        let s = GameState::from_parts(cfg(), &[sq(7, 0)], &[sq(7, 1)], [9, 9], Player::Black).unwrap();
        let (_, removed) = resolve_immobility(&s);
        assert_eq!(removed, vec![Removal { owner: Player::White, at: PawnLocation::OnBoard(sq(7, 0)) }]);
    }

    #[test]
    fn trap_created_by_a_move() {
        // Black steps onto (7,1) and the white pawn in the corner loses its last move.
        let s = GameState::from_parts(cfg(), &[sq(7, 0)], &[sq(6, 1)], [9, 9], Player::Black).unwrap();
        let (next, ev) = apply_move(&s, Move::Step { src: sq(6, 1), dst: sq(7, 1) }).unwrap();
        assert_eq!(ev.removed_of(Player::White), 1);
        assert_eq!(next.cell(sq(7, 0)), Cell::Empty);
        assert_eq!(next.total_pawns(Player::White), 9);
    }

    #[test]
    fn sealed_base_loses_its_pawns() {
        let ring = [sq(5, 6), sq(5, 7), sq(6, 5), sq(7, 5)];
        let s = GameState::from_parts(cfg(), &ring, &[], [6, 4], Player::White).unwrap();
        let (after, removed) = resolve_immobility(&s);
        assert_eq!(removed.len(), 4);
        assert!(removed.iter().all(|r| r.owner == Player::Black && r.at == PawnLocation::InOwnBase));
        assert_eq!(after.base_count(Player::Black), 0);
    }

    #[test]
    fn filling_last_exit_square_takes_base_pawns() {
        // (6,5) is the only free square next to the black base.
        let s = GameState::from_parts(cfg(), &[sq(5, 6), sq(5, 7), sq(6, 4), sq(7, 5)], &[], [6, 4], Player::White)
            .unwrap();
        let (next, ev) = apply_move(&s, Move::Step { src: sq(6, 4), dst: sq(6, 5) }).unwrap();
        assert_eq!(ev.removed_of(Player::Black), 4);
        assert_eq!(ev.winner, Some(Player::White));
        assert_eq!(next.status(), Status::Won(Player::White));
    }

    #[test]
    fn rejection_codes() {
        let s = GameState::from_parts(cfg(), &[sq(3, 0), sq(4, 0)], &[sq(2, 3)], [8, 9], Player::White).unwrap();
        let code = |mv| apply_move(&s, mv).unwrap_err().rule;
        assert_eq!(code(Move::Step { src: sq(3, 0), dst: sq(2, 0) }), RuleViolation::DistanceDecrease);
        assert_eq!(code(Move::Step { src: sq(3, 0), dst: sq(4, 0) }), RuleViolation::Occupied);
        assert_eq!(code(Move::Step { src: sq(3, 0), dst: sq(5, 0) }), RuleViolation::NotAdjacent);
        assert_eq!(code(Move::Step { src: sq(2, 3), dst: sq(2, 4) }), RuleViolation::NotYourPawn);
        assert_eq!(code(Move::ExitBase { dst: sq(4, 4) }), RuleViolation::NotAdjacent);
        assert_eq!(code(Move::EnterEnemyBase { src: sq(3, 0) }), RuleViolation::NotAdjacent);
        assert_eq!(RuleViolation::DistanceDecrease.code(), "distance-decrease");
    }

    #[test]
    fn move_json_shape() {
        let mv = Move::Step { src: sq(2, 0), dst: sq(3, 0) };
        assert_eq!(serde_json::to_string(&mv).unwrap(), r#"{"kind":"step","src":[2,0],"dst":[3,0]}"#);
        let exit: Move = serde_json::from_str(r#"{"kind":"exit","dst":[2,0]}"#).unwrap();
        assert_eq!(exit, Move::ExitBase { dst: sq(2, 0) });
        let enter: Move = serde_json::from_str(r#"{"kind":"enter","src":[5,6]}"#).unwrap();
        assert_eq!(enter, Move::EnterEnemyBase { src: sq(5, 6) });
        let r = Removal { owner: Player::Black, at: PawnLocation::InOwnBase };
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"owner":"black","at":"base"}"#);
        assert_eq!(serde_json::from_str::<Removal>(&json).unwrap(), r);
    }

    #[test]
    fn mirror_is_an_involution() {
        let s = GameState::from_parts(cfg(), &[sq(3, 0)], &[sq(2, 5), sq(6, 3)], [8, 7], Player::White).unwrap();
        assert_eq!(s.mirrored().mirrored(), s);
        assert_eq!(s.mirrored().cell(sq(4, 7)), Cell::Black);
    }
}
