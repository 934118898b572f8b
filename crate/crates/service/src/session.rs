//! Interactive sessions. Each session owns a worker thread that runs the
//! plan's batches in order, playing automatic stages itself and pausing at
//! every White move of a human stage until one arrives over its channel.

use std::path::PathBuf;
use std::sync::mpsc;
use std::sync::{Arc, RwLock};

use cornerbase::agents::{GameRecord, LearningGame, ScriptedWhite};
use cornerbase::game::legal_moves;
use cornerbase::harness::{BatchRun, BatchStatus, Plan, StageKind, StageStats, StatsRow};
use cornerbase::wire::{MoveReply, Pending, Progress, StateView};
use cornerbase::{Error, Move, Player};
use tokio::sync::oneshot;

use crate::error::ApiError;

/// What handlers can read without talking to the worker.
#[derive(Debug, Clone)]
pub struct Published {
    pub view: StateView,
    /// Completed stage rows of every batch so far, in play order.
    pub rows: Vec<StatsRow>,
}

pub struct MoveRequest {
    pub mv: Move,
    pub reply: oneshot::Sender<Result<MoveReply, ApiError>>,
}

/// Handle kept by the server.
pub struct Session {
    pub plan_key: String,
    pub out: PathBuf,
    published: Arc<RwLock<Published>>,
    moves: mpsc::Sender<MoveRequest>,
}

impl Session {
    pub fn start(plan: Plan, plan_key: String, out: PathBuf) -> Session {
        let first = plan.batches.first().map(|b| b.board).unwrap_or_default();
        let mut view =
            StateView::of_position(&cornerbase::game::new_game(first).expect("validated board"), Pending::Running);
        view.message = Some("starting".into());
        let published = Arc::new(RwLock::new(Published { view, rows: Vec::new() }));
        let (tx, rx) = mpsc::channel();
        let worker = Worker { published: published.clone(), moves: rx, rows: Vec::new() };
        let dir = out.clone();
        std::thread::spawn(move || worker.run(plan, dir));
        Session { plan_key, out, published, moves: tx }
    }

    pub fn snapshot(&self) -> Published {
        self.published.read().expect("session lock").clone()
    }

    pub fn is_live(&self) -> bool {
        matches!(self.snapshot().view.pending, Pending::Running | Pending::WaitingHuman)
    }

    /// Hands a move to the worker. Returns None if the worker has gone.
    pub fn submit(&self, mv: Move) -> Option<oneshot::Receiver<Result<MoveReply, ApiError>>> {
        let (reply, rx) = oneshot::channel();
        self.moves.send(MoveRequest { mv, reply }).ok()?;
        Some(rx)
    }
}

/// Worker thread stops early when every handle is dropped.
struct Hangup;

struct Worker {
    published: Arc<RwLock<Published>>,
    moves: mpsc::Receiver<MoveRequest>,
    rows: Vec<StatsRow>,
}

impl Worker {
    fn publish(&self, view: StateView) {
        let mut p = self.published.write().expect("session lock");
        p.view = view;
        p.rows = self.rows.clone();
    }

    fn update(&self, f: impl FnOnce(&mut StateView)) {
        let mut p = self.published.write().expect("session lock");
        f(&mut p.view);
        p.rows = self.rows.clone();
    }

    fn run(mut self, plan: Plan, out: PathBuf) {
        let order: Vec<_> = match plan.waves() {
            Ok(w) => w.into_iter().flatten().cloned().collect(),
            Err(e) => return self.fail(&e.into()),
        };
        for spec in order {
            let mut run = match BatchRun::start(&spec, &out) {
                Ok(r) => r,
                Err(e) => return self.fail(&e),
            };
            match self.run_batch(&mut run) {
                Ok(()) => {
                    if let Err(e) = run.summary(BatchStatus::Completed).save(&run.dir().summary()) {
                        return self.fail(&e);
                    }
                }
                Err(Ok(e)) => {
                    let _ = run.mark_failed(&e);
                    return self.fail(&e);
                }
                Err(Err(Hangup)) => return,
            }
        }
        self.update(|v| {
            v.pending = Pending::Finished;
            v.legal.clear();
            v.suggested = None;
            v.message = Some("plan finished".into());
        });
        // Late moves get a conflict instead of a dropped channel.
        while let Ok(req) = self.moves.recv() {
            let _ = req.reply.send(Err(ApiError::not_waiting("the session has finished")));
        }
    }

    fn fail(&self, err: &Error) {
        tracing::warn!("session failed: {err}");
        self.update(|v| {
            v.pending = Pending::Failed;
            v.legal.clear();
            v.suggested = None;
            v.message = Some(err.to_string());
        });
    }

    fn run_batch(&mut self, run: &mut BatchRun) -> Result<(), Result<Error, Hangup>> {
        while let Some((index, stage)) = run.current_stage() {
            let stage = stage.clone();
            if stage.is_interactive() {
                self.human_stage(run, index)?;
                continue;
            }
            let (batch, of, kind) = (run.spec().id.clone(), stage.games(), stage.kind);
            let start = Progress {
                batch: batch.clone(),
                stage: index,
                stage_kind: kind,
                game: 1,
                of,
                stats: StageStats::default(),
            };
            self.update(|v| {
                v.pending = Pending::Running;
                v.legal.clear();
                v.suggested = None;
                v.progress = Some(start);
                v.message = None;
            });
            let mut outcomes = Vec::new();
            let published = self.published.clone();
            run.run_stage(&mut |i, r: &GameRecord| {
                outcomes.push((r.result, r.plies));
                let stats = StageStats::from_outcomes(outcomes.iter().copied());
                let mut p = published.write().expect("session lock");
                p.view.progress = Some(Progress {
                    batch: batch.clone(),
                    stage: index,
                    stage_kind: kind,
                    game: (i + 2).min(of),
                    of,
                    stats,
                });
            })
            .map_err(Ok)?;
            self.rows.push(run.rows().last().expect("stage row").clone());
        }
        Ok(())
    }

    /// Plays one HC stage with White's moves supplied over the channel.
    fn human_stage(&mut self, run: &mut BatchRun, index: usize) -> Result<(), Result<Error, Hangup>> {
        let stage = run.current_stage().expect("stage").1.clone();
        let mut advisor = stage.policy().map(ScriptedWhite::new);
        let of = stage.games();
        let mut records: Vec<GameRecord> = Vec::new();
        let mut game = run.new_game().map_err(Ok)?;
        if let Some(a) = advisor.as_mut() {
            a.begin_game();
        }
        let mut last_engine: Option<Move> = None;
        loop {
            let stats = StageStats::from_outcomes(records.iter().map(|r| (r.result, r.plies)));
            let progress = Progress {
                batch: run.spec().id.clone(),
                stage: index,
                stage_kind: StageKind::Hc,
                game: records.len() + 1,
                of,
                stats,
            };
            let view = waiting_view(&game, advisor.as_ref(), progress, last_engine);
            self.publish(view.clone());

            let req = self.moves.recv().map_err(|_| Err(Hangup))?;
            if let Err(e) = game.state().validate(req.mv) {
                let _ = req.reply.send(Err(ApiError::illegal(&e)));
                continue;
            }
            if let Some(a) = advisor.as_mut() {
                a.observe(game.state(), req.mv);
            }
            let human = match run.play(&mut game, req.mv) {
                Ok(t) => t,
                Err(e) => {
                    let _ = req.reply.send(Err(ApiError::from_core(&e)));
                    return Err(Ok(e));
                }
            };
            let mut engine = None;
            if !game.is_over() {
                match run.play_black(&mut game) {
                    Ok(t) => engine = Some(t),
                    Err(e) => {
                        let _ = req.reply.send(Err(ApiError::from_core(&e)));
                        return Err(Ok(e));
                    }
                }
            }
            last_engine = engine.as_ref().map(|t| t.mv);

            let mut reply = MoveReply {
                human_events: human.events,
                engine_move: engine.as_ref().map(|t| t.mv),
                engine_events: engine.map(|t| t.events),
                game_over: None,
                stage_completed: None,
                state: StateView::of_position(game.state(), Pending::WaitingHuman),
            };
            if !game.is_over() {
                reply.state =
                    self.refreshed(&game, advisor.as_ref(), view.progress.clone().expect("progress"), last_engine);
                let _ = req.reply.send(Ok(reply));
                continue;
            }

            let record = game.record().clone();
            reply.game_over = Some(record.result);
            if let Some(a) = advisor.as_mut() {
                a.record_result(record.result);
            }
            records.push(record);
            if records.len() < of {
                game = run.new_game().map_err(Ok)?;
                if let Some(a) = advisor.as_mut() {
                    a.begin_game();
                }
                last_engine = None;
                let stats = StageStats::from_outcomes(records.iter().map(|r| (r.result, r.plies)));
                let progress = Progress { game: records.len() + 1, stats, ..view.progress.clone().expect("progress") };
                reply.state = self.refreshed(&game, advisor.as_ref(), progress, None);
                let _ = req.reply.send(Ok(reply));
                continue;
            }

            // Last game of the stage: the final position stays on display.
            if let Err(e) = run.complete_stage(&records) {
                let _ = req.reply.send(Err(ApiError::from_core(&e)));
                return Err(Ok(e));
            }
            let row = run.rows().last().expect("stage row").clone();
            self.rows.push(row.clone());
            reply.stage_completed = Some(row.clone());
            let mut fin = StateView::of_position(game.state(), Pending::Running);
            fin.progress = Some(Progress {
                batch: run.spec().id.clone(),
                stage: index,
                stage_kind: StageKind::Hc,
                game: of,
                of,
                stats: row.stats(),
            });
            fin.last_engine_move = last_engine;
            fin.message = Some(format!("stage {index} complete"));
            self.publish(fin.clone());
            reply.state = fin;
            let _ = req.reply.send(Ok(reply));
            return Ok(());
        }
    }

    fn refreshed(
        &self,
        game: &LearningGame,
        advisor: Option<&ScriptedWhite>,
        progress: Progress,
        last: Option<Move>,
    ) -> StateView {
        let view = waiting_view(game, advisor, progress, last);
        self.publish(view.clone());
        view
    }
}

fn waiting_view(
    game: &LearningGame,
    advisor: Option<&ScriptedWhite>,
    progress: Progress,
    last: Option<Move>,
) -> StateView {
    let state = game.state();
    debug_assert_eq!(state.to_move(), Player::White);
    let mut view = StateView::of_position(state, Pending::WaitingHuman);
    view.legal = legal_moves(state).unwrap_or_default();
    view.suggested = advisor.map(|a| a.suggest(state));
    view.guidance = advisor.map(|a| a.policy());
    view.progress = Some(progress);
    view.last_engine_move = last;
    view
}
