//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own rule helpers; every predicate is re-derived from the
//! rules of the game.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use cornerbase::game::{apply_move, legal_moves, new_game, Cell, GameState, Move, Player, Square};
use cornerbase::BoardConfig;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn board(n: usize, a: usize, beta: usize) -> BoardConfig {
    BoardConfig::new(n, a, beta).unwrap()
}

/// Squares of `player`'s base region.
pub fn base_squares(cfg: &BoardConfig, player: Player) -> Vec<Square> {
    let lo = match player {
        Player::White => 0,
        Player::Black => cfg.n - cfg.a,
    };
    let mut v = Vec::new();
    for x in lo..lo + cfg.a {
        for y in lo..lo + cfg.a {
            v.push(Square::new(x, y));
        }
    }
    v
}

pub fn manhattan(p: Square, q: Square) -> usize {
    p.x.abs_diff(q.x) + p.y.abs_diff(q.y)
}

/// Distance to a base as the smallest Chebyshev distance to any base square.
pub fn oracle_distance(cfg: &BoardConfig, player: Player, sq: Square) -> usize {
    base_squares(cfg, player).into_iter().map(|b| b.x.abs_diff(sq.x).max(b.y.abs_diff(sq.y))).min().unwrap()
}

pub fn oracle_in_a_base(cfg: &BoardConfig, sq: Square) -> bool {
    Player::BOTH.iter().any(|&p| base_squares(cfg, p).contains(&sq))
}

pub fn touches_base(cfg: &BoardConfig, player: Player, sq: Square) -> bool {
    base_squares(cfg, player).into_iter().any(|b| manhattan(b, sq) == 1)
}

fn all_squares(cfg: &BoardConfig) -> Vec<Square> {
    (0..cfg.n).flat_map(|y| (0..cfg.n).map(move |x| Square::new(x, y))).collect()
}

fn step_ok(state: &GameState, me: Player, src: Square, dst: Square) -> bool {
    let cfg = state.config();
    manhattan(src, dst) == 1
        && !oracle_in_a_base(cfg, dst)
        && state.cell(dst) == Cell::Empty
        && oracle_distance(cfg, me, dst) >= oracle_distance(cfg, me, src)
}

/// Brute-force legal move set: every (pawn, square) pair checked against the rules.
pub fn oracle_legal(state: &GameState) -> HashSet<Move> {
    let cfg = *state.config();
    let me = state.to_move();
    let squares = all_squares(&cfg);
    let mut out = HashSet::new();
    if state.base_count(me) > 0 {
        for &dst in &squares {
            if !oracle_in_a_base(&cfg, dst) && state.cell(dst) == Cell::Empty && touches_base(&cfg, me, dst) {
                out.insert(Move::ExitBase { dst });
            }
        }
    }
    for &src in &squares {
        if oracle_in_a_base(&cfg, src) || state.cell(src) != Cell::of(me) {
            continue;
        }
        for &dst in &squares {
            if step_ok(state, me, src, dst) {
                out.insert(Move::Step { src, dst });
            }
        }
        if touches_base(&cfg, me.opponent(), src) {
            out.insert(Move::EnterEnemyBase { src });
        }
    }
    out
}

/// Whether the pawn of `owner` at `sq` could move if it were `owner`'s turn.
pub fn oracle_mobile(state: &GameState, owner: Player, sq: Square) -> bool {
    let cfg = state.config();
    touches_base(cfg, owner.opponent(), sq) || all_squares(cfg).into_iter().any(|d| step_ok(state, owner, sq, d))
}

pub fn oracle_base_open(state: &GameState, owner: Player) -> bool {
    let cfg = *state.config();
    all_squares(&cfg)
        .into_iter()
        .any(|d| !oracle_in_a_base(&cfg, d) && state.cell(d) == Cell::Empty && touches_base(&cfg, owner, d))
}

/// A position as plain data, so oracles can edit it freely.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub white: BTreeSet<Square>,
    pub black: BTreeSet<Square>,
    pub bases: [usize; 2],
}

impl Position {
    pub fn of(state: &GameState) -> Position {
        Position {
            white: state.pawns_on_board(Player::White).collect(),
            black: state.pawns_on_board(Player::Black).collect(),
            bases: [state.base_count(Player::White), state.base_count(Player::Black)],
        }
    }

    pub fn build(&self, cfg: BoardConfig, to_move: Player) -> GameState {
        let w: Vec<Square> = self.white.iter().copied().collect();
        let b: Vec<Square> = self.black.iter().copied().collect();
        GameState::from_parts(cfg, &w, &b, self.bases, to_move).unwrap()
    }

    fn side_mut(&mut self, p: Player) -> &mut BTreeSet<Square> {
        match p {
            Player::White => &mut self.white,
            Player::Black => &mut self.black,
        }
    }
}

/// Which single removal a one-at-a-time sweep makes first.
#[derive(Debug, Clone, Copy)]
pub enum SweepOrder {
    RowMajor,
    Reverse,
}

/// Removes immobile pawns one at a time, re-checking after each removal.
pub fn one_at_a_time(state: &GameState, order: SweepOrder) -> Position {
    let cfg = *state.config();
    let to_move = state.to_move();
    let mut pos = Position::of(state);
    loop {
        let s = pos.build(cfg, to_move);
        let mut candidates: Vec<(Player, Option<Square>)> = Vec::new();
        for p in Player::BOTH {
            if s.base_count(p) > 0 && !oracle_base_open(&s, p) {
                candidates.push((p, None));
            }
        }
        for p in Player::BOTH {
            for sq in s.pawns_on_board(p) {
                if !oracle_mobile(&s, p, sq) {
                    candidates.push((p, Some(sq)));
                }
            }
        }
        let pick = match order {
            SweepOrder::RowMajor => candidates.first(),
            SweepOrder::Reverse => candidates.last(),
        };
        match pick {
            None => return pos,
            Some(&(p, None)) => pos.bases[p.index()] -= 1,
            Some(&(p, Some(sq))) => {
                pos.side_mut(p).remove(&sq);
            }
        }
    }
}

/// Every pawn that is immobile in `state` itself.
pub fn immobile_now(state: &GameState) -> Position {
    let mut pos = Position { white: BTreeSet::new(), black: BTreeSet::new(), bases: [0, 0] };
    for p in Player::BOTH {
        if state.base_count(p) > 0 && !oracle_base_open(state, p) {
            pos.bases[p.index()] = state.base_count(p);
        }
        for sq in state.pawns_on_board(p) {
            if !oracle_mobile(state, p, sq) {
                pos.side_mut(p).insert(sq);
            }
        }
    }
    pos
}

/// Ongoing states met while playing uniformly random legal moves from kickoff.
pub fn random_reachable_states(cfg: BoardConfig, count: usize, seed: u64) -> Vec<GameState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut s = new_game(cfg).unwrap();
        let limit = rng.gen_range(20..400);
        while s.is_ongoing() && s.ply() < limit && out.len() < count {
            out.push(s.clone());
            let moves = legal_moves(&s).unwrap();
            let mv = *moves.choose(&mut rng).unwrap();
            s = apply_move(&s, mv).unwrap().0;
        }
    }
    out
}

/// Random, possibly unresolved, positions with many pawns packed on the board.
pub fn random_crowded_state(cfg: BoardConfig, rng: &mut impl Rng) -> GameState {
    let mut free: Vec<Square> = all_squares(&cfg).into_iter().filter(|&s| !oracle_in_a_base(&cfg, s)).collect();
    free.shuffle(rng);
    let fill = rng.gen_range(0.3..0.9);
    let pawns = ((free.len() as f64 * fill) as usize).min(2 * cfg.beta);
    let mut white = Vec::new();
    let mut black = Vec::new();
    for sq in free.into_iter().take(pawns) {
        if rng.gen_bool(0.5) && white.len() < cfg.beta {
            white.push(sq);
        } else if black.len() < cfg.beta {
            black.push(sq);
        } else if white.len() < cfg.beta {
            white.push(sq);
        }
    }
    let wb = rng.gen_range(0..=cfg.beta - white.len());
    let bb = rng.gen_range(0..=cfg.beta - black.len());
    let to_move = if rng.gen_bool(0.5) { Player::White } else { Player::Black };
    GameState::from_parts(cfg, &white, &black, [wb, bb], to_move).unwrap()
}

/// Fewest own moves a side needs to win by entering the enemy base on an
/// otherwise empty board: one exit, the shortest monotone walk to a square
/// touching the enemy base, one entry.
pub fn shortest_entry_moves(cfg: &BoardConfig, me: Player) -> usize {
    let all = all_squares(cfg);
    let empty = new_game(*cfg).unwrap();
    let mut dist = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    for &sq in &all {
        if !oracle_in_a_base(cfg, sq) && touches_base(cfg, me, sq) {
            dist.insert(sq, 0usize);
            queue.push_back(sq);
        }
    }
    while let Some(sq) = queue.pop_front() {
        let d = dist[&sq];
        if touches_base(cfg, me.opponent(), sq) {
            return 1 + d + 1;
        }
        for &nb in &all {
            if step_ok(&empty, me, sq, nb) && !dist.contains_key(&nb) {
                dist.insert(nb, d + 1);
                queue.push_back(nb);
            }
        }
    }
    unreachable!("the enemy base is always reachable")
}

/// Lower bound on the plies of any game `winner` wins by entering the enemy
/// base. White's k-th move is ply 2k-1 and Black's is ply 2k.
pub fn shortest_win_plies(cfg: &BoardConfig, winner: Player) -> usize {
    let m = shortest_entry_moves(cfg, winner);
    match winner {
        Player::White => 2 * m - 1,
        Player::Black => 2 * m,
    }
}

/// Exhaustive breadth-first search over the full game tree: the first ply at
/// which each side can win by entering the enemy base. Only feasible on tiny
/// boards.
pub fn exact_first_entry_plies(cfg: BoardConfig, max_depth: usize) -> [Option<usize>; 2] {
    let mut found = [None, None];
    let mut layer: HashSet<GameState> = HashSet::from([new_game(cfg).unwrap()]);
    for _ in 0..max_depth {
        let mut next = HashSet::new();
        for s in &layer {
            for mv in legal_moves(s).unwrap() {
                let (t, _) = apply_move(s, mv).unwrap();
                if let Move::EnterEnemyBase { .. } = mv {
                    found[s.to_move().index()].get_or_insert(t.ply());
                } else if t.is_ongoing() {
                    next.insert(t);
                }
            }
        }
        if found.iter().all(Option::is_some) {
            break;
        }
        layer = next;
    }
    found
}

/// Central finite-difference derivative of `f` along parameter `i`.
pub fn central_difference(params: &mut [f64], i: usize, h: f64, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    let orig = params[i];
    params[i] = orig + h;
    let up = f(params);
    params[i] = orig - h;
    let down = f(params);
    params[i] = orig;
    (up - down) / (2.0 * h)
}
