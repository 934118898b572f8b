use std::collections::HashMap;
use std::path::Path;
use std::thread;

use crate::error::{ConfigError, Error, Result};
use crate::harness::batch::{run_batch, save_skipped};
use crate::harness::plan::Plan;
use crate::harness::stats::{export_csv, StatsRow};
use crate::harness::store::{BatchDir, BatchStatus, BatchSummary, Fingerprints};

/// Per-run overrides.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Replaces each batch's RNG seed with `seed + position in the plan`.
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub struct PlanOutcome {
    /// One summary per batch, plan order.
    pub batches: Vec<BatchSummary>,
    /// The first failure, if any batch did not complete.
    pub error: Option<Error>,
}

impl PlanOutcome {
    pub fn rows(&self) -> Vec<StatsRow> {
        self.batches.iter().flat_map(|b| b.rows.iter().cloned()).collect()
    }
}

/// Applies run overrides to a copy of the plan.
pub fn prepare_plan(plan: &Plan, opts: &RunOptions) -> Plan {
    let mut plan = plan.clone();
    if let Some(seed) = opts.seed {
        for (i, b) in plan.batches.iter_mut().enumerate() {
            b.rng_seed = seed.wrapping_add(i as u64);
        }
    }
    plan
}

/// Executes a plan. Batches whose dependencies are satisfied run
/// concurrently; a batch seeded from a failed batch is skipped. Independent
/// batches still run to completion when another fails.
pub fn run_plan(plan: &Plan, out: &Path, opts: &RunOptions) -> Result<PlanOutcome> {
    let plan = prepare_plan(plan, opts);
    plan.validate()?;
    if let Some(b) = plan.batches.iter().find(|b| b.has_interactive_stage()) {
        return Err(ConfigError::Plan(format!(
            "batch {:?} has an interactive stage; start the plan through the service",
            b.id
        ))
        .into());
    }
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let mut done: HashMap<String, Result<BatchSummary>> = HashMap::new();
    for wave in plan.waves()? {
        let results: Vec<(String, Result<BatchSummary>)> = thread::scope(|scope| {
            let handles: Vec<_> = wave
                .iter()
                .map(|spec| {
                    let blocked = spec.parent().and_then(|p| match done.get(p) {
                        Some(Ok(s)) if s.status == BatchStatus::Completed => None,
                        _ => Some(format!("seed batch {p:?} did not complete")),
                    });
                    let spec = *spec;
                    scope.spawn(move || {
                        let r = match blocked {
                            Some(msg) => save_skipped(out, spec, msg),
                            None => run_batch(spec, out),
                        };
                        (spec.id.clone(), r)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("batch thread panicked")).collect()
        });
        for (id, r) in results {
            done.insert(id, r);
        }
    }

    let mut batches = Vec::new();
    let mut error = None;
    for spec in &plan.batches {
        match done.remove(&spec.id).expect("every batch ran") {
            Ok(summary) => batches.push(summary),
            Err(e) => {
                let none = Fingerprints { white: String::new(), black: String::new() };
                let summary = BatchSummary::load(&BatchDir::new(out, &spec.id).summary())
                    .ok()
                    .filter(|s| matches!(&s.status, BatchStatus::Failed { message } if *message == e.to_string()))
                    .unwrap_or_else(|| BatchSummary {
                        id: spec.id.clone(),
                        board: spec.board,
                        status: BatchStatus::Failed { message: e.to_string() },
                        seeded_from: spec.parent().map(str::to_string),
                        stages_total: spec.stages.len(),
                        stages_completed: 0,
                        initial: none.clone(),
                        current: none,
                        rows: Vec::new(),
                    });
                batches.push(summary);
                error.get_or_insert(e);
            }
        }
    }
    let outcome = PlanOutcome { batches, error };
    export_csv(&outcome.rows(), &out.join("stats.csv"))?;
    Ok(outcome)
}
