use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agents::{AgentKind, AgentSpec, PolicyKind, RewardScheme, DEFAULT_MAX_PLIES};
use crate::error::{ConfigError, Error, Result};
use crate::game::BoardConfig;
use crate::net::TdParams;

pub const DEFAULT_CC_GAMES: usize = 10_000;
pub const DEFAULT_HC_GAMES: usize = 10;
/// CC stage length in accelerated mode.
pub const ACCELERATED_CC_GAMES: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageKind {
    Cc,
    Hc,
}

impl StageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StageKind::Cc => "cc",
            StageKind::Hc => "hc",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSpec {
    pub kind: StageKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub games: Option<usize>,
    /// White's controller in HC stages; CC stages always pit the two networks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub white: Option<AgentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learn_white: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learn_black: Option<bool>,
}

impl StageSpec {
    pub fn cc(games: usize) -> Self {
        StageSpec { kind: StageKind::Cc, games: Some(games), white: None, learn_white: None, learn_black: None }
    }

    pub fn hc(games: usize, white: AgentSpec) -> Self {
        StageSpec { kind: StageKind::Hc, games: Some(games), white: Some(white), learn_white: None, learn_black: None }
    }

    pub fn games(&self) -> usize {
        self.games.unwrap_or(match self.kind {
            StageKind::Cc => DEFAULT_CC_GAMES,
            StageKind::Hc => DEFAULT_HC_GAMES,
        })
    }

    /// Which networks learn during this stage, `[white, black]`.
    pub fn learn(&self) -> [bool; 2] {
        let white_default = self.white.is_none_or(|w| w.learn);
        [self.learn_white.unwrap_or(white_default), self.learn_black.unwrap_or(true)]
    }

    /// True for HC stages whose White moves come from a live person.
    pub fn is_interactive(&self) -> bool {
        self.kind == StageKind::Hc && self.white.is_some_and(|w| w.kind == AgentKind::Human)
    }

    /// The scripted policy playing White, or guiding the human.
    pub fn policy(&self) -> Option<PolicyKind> {
        self.white.and_then(|w| w.policy)
    }

    fn validate(&self, batch: &str, index: usize) -> Result<(), ConfigError> {
        let err = |msg: &str| ConfigError::Plan(format!("batch {batch:?} stage {}: {msg}", index + 1));
        match (self.kind, self.white) {
            (StageKind::Cc, None) => {}
            (StageKind::Cc, Some(w)) if w.kind == AgentKind::Rl => {}
            (StageKind::Cc, Some(_)) => return Err(err("CC stages are played by the two networks")),
            (StageKind::Hc, None) => return Err(err("HC stage needs a white agent (scripted or human)")),
            (StageKind::Hc, Some(w)) => match w.kind {
                AgentKind::Rl => return Err(err("HC stage white must be scripted or human")),
                AgentKind::Scripted if w.policy.is_none() => return Err(err("scripted white needs a policy")),
                _ => {}
            },
        }
        Ok(())
    }
}

/// Initial networks of a batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedNetworks {
    /// Final snapshots of another batch of the same plan.
    FromBatch { from: String },
    /// Explicit snapshot files.
    Files { white: PathBuf, black: PathBuf },
}

fn default_max_plies() -> usize {
    DEFAULT_MAX_PLIES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSpec {
    pub id: String,
    #[serde(default)]
    pub board: BoardConfig,
    #[serde(default)]
    pub scheme: RewardScheme,
    #[serde(default)]
    pub params: TdParams,
    pub stages: Vec<StageSpec>,
    /// `None` starts from freshly initialised ("clean") networks.
    #[serde(default)]
    pub seed_networks: Option<SeedNetworks>,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default = "default_max_plies")]
    pub max_plies: usize,
}

impl BatchSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let id_ok = !self.id.is_empty()
            && self.id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            && self.id != "."
            && self.id != "..";
        if !id_ok {
            return Err(ConfigError::Plan(format!("batch id {:?} must be a plain file name", self.id)));
        }
        self.board.validate()?;
        self.params.validate().map_err(|e| ConfigError::Plan(format!("batch {:?}: {e}", self.id)))?;
        if self.stages.is_empty() {
            return Err(ConfigError::Plan(format!("batch {:?} has no stages", self.id)));
        }
        if self.max_plies == 0 {
            return Err(ConfigError::Plan(format!("batch {:?}: max_plies must be positive", self.id)));
        }
        for (i, stage) in self.stages.iter().enumerate() {
            stage.validate(&self.id, i)?;
        }
        Ok(())
    }

    pub fn parent(&self) -> Option<&str> {
        match &self.seed_networks {
            Some(SeedNetworks::FromBatch { from }) => Some(from),
            _ => None,
        }
    }

    pub fn has_interactive_stage(&self) -> bool {
        self.stages.iter().any(StageSpec::is_interactive)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub batches: Vec<BatchSpec>,
}

impl Plan {
    pub fn load(path: &Path) -> Result<Plan> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let plan: Plan = serde_json::from_str(&text).map_err(|e| Error::Json { path: path.into(), source: e })?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn batch(&self, id: &str) -> Option<&BatchSpec> {
        self.batches.iter().find(|b| b.id == id)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.batches.is_empty() {
            return Err(ConfigError::Plan("plan has no batches".into()));
        }
        let mut seen = HashSet::new();
        for b in &self.batches {
            b.validate()?;
            if !seen.insert(b.id.as_str()) {
                return Err(ConfigError::Plan(format!("duplicate batch id {:?}", b.id)));
            }
        }
        for b in &self.batches {
            if let Some(parent) = b.parent() {
                let p = self.batch(parent).ok_or_else(|| {
                    ConfigError::Plan(format!("batch {:?} depends on unknown batch {parent:?}", b.id))
                })?;
                if p.board.n != b.board.n || p.board.a != b.board.a {
                    return Err(ConfigError::TopologyMismatch {
                        expected: format!("board n={} a={} of batch {:?}", b.board.n, b.board.a, b.id),
                        found: format!("board n={} a={} of batch {parent:?}", p.board.n, p.board.a),
                    });
                }
            }
        }
        self.waves().map(|_| ())
    }

    /// Groups batches into dependency levels: every batch runs after all the
    /// batches of earlier waves. Order inside a wave follows the plan file.
    pub fn waves(&self) -> Result<Vec<Vec<&BatchSpec>>, ConfigError> {
        let mut level: HashMap<&str, usize> = HashMap::new();
        let mut remaining: Vec<&BatchSpec> = self.batches.iter().collect();
        while !remaining.is_empty() {
            let before = remaining.len();
            remaining.retain(|b| match b.parent() {
                None => {
                    level.insert(&b.id, 0);
                    false
                }
                Some(p) => match level.get(p) {
                    Some(&l) => {
                        level.insert(&b.id, l + 1);
                        false
                    }
                    None => true,
                },
            });
            if remaining.len() == before {
                let ids: Vec<&str> = remaining.iter().map(|b| b.id.as_str()).collect();
                return Err(ConfigError::Plan(format!("dependency cycle among batches {ids:?}")));
            }
        }
        let depth = level.values().copied().max().unwrap_or(0);
        let mut waves = vec![Vec::new(); depth + 1];
        for b in &self.batches {
            waves[level[b.id.as_str()]].push(b);
        }
        Ok(waves)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn batch(id: &str, from: Option<&str>) -> BatchSpec {
        BatchSpec {
            id: id.into(),
            board: BoardConfig::default(),
            scheme: RewardScheme::R3,
            params: TdParams::default(),
            stages: vec![StageSpec::cc(10)],
            seed_networks: from.map(|f| SeedNetworks::FromBatch { from: f.into() }),
            rng_seed: 1,
            max_plies: 100,
        }
    }

    #[test]
    fn parses_the_documented_plan_shape() {
        let json = r#"{"batches":[
            {"id":"b6","board":{"n":8,"a":2,"beta":10},"scheme":"r3",
             "params":{"lambda":0.5,"gamma":1.0,"alpha":0.01,"epsilon_best":0.9},
             "stages":[{"kind":"cc","games":10000},{"kind":"hc","games":10,"white":{"kind":"scripted","policy":"p1","learn":true}}],
             "seed_networks":null,"rng_seed":7},
            {"id":"b8","seed_networks":{"from":"b6"},"stages":[{"kind":"cc"}]}]}"#;
        let plan: Plan = serde_json::from_str(json).unwrap();
        plan.validate().unwrap();
        assert_eq!(plan.batches[0].stages[0].games(), 10_000);
        assert_eq!(plan.batches[1].stages[0].games(), DEFAULT_CC_GAMES);
        assert_eq!(plan.batches[1].parent(), Some("b6"));
        assert_eq!(plan.batches[0].stages[1].policy(), Some(PolicyKind::P1));
        assert_eq!(plan.batches[1].params, TdParams::default());
    }

    #[test]
    fn waves_follow_dependencies() {
        let plan = Plan { batches: vec![batch("b7", Some("b6")), batch("b6", None), batch("b8", Some("b6"))] };
        let waves = plan.waves().unwrap();
        let ids: Vec<Vec<&str>> = waves.iter().map(|w| w.iter().map(|b| b.id.as_str()).collect()).collect();
        assert_eq!(ids, vec![vec!["b6"], vec!["b7", "b8"]]);
    }

    #[test]
    fn rejects_cycles_and_missing_parents() {
        let plan = Plan { batches: vec![batch("a", Some("b")), batch("b", Some("a"))] };
        assert!(plan.validate().unwrap_err().to_string().contains("cycle"));
        let plan = Plan { batches: vec![batch("a", Some("zzz"))] };
        assert!(plan.validate().unwrap_err().to_string().contains("unknown batch"));
        let plan = Plan { batches: vec![batch("a", None), batch("a", None)] };
        assert!(plan.validate().is_err());
    }

    #[test]
    fn stage_rules() {
        let mut b = batch("x", None);
        b.stages =
            vec![StageSpec { kind: StageKind::Hc, games: None, white: None, learn_white: None, learn_black: None }];
        assert!(b.validate().is_err());
        b.stages = vec![StageSpec::hc(10, AgentSpec::human(Some(PolicyKind::P1)))];
        b.validate().unwrap();
        assert!(b.has_interactive_stage());
        b.id = "../etc".into();
        assert!(b.validate().is_err());
    }
}
