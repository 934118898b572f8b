//! On-disk network snapshots (`valuenet-v1`).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Error, Result};
use crate::game::BoardConfig;
use crate::net::{Topology, ValueNetwork};

pub const FORMAT: &str = "valuenet-v1";

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub batch_id: String,
    pub stage: usize,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Activation {
    pub hidden: String,
    pub output: String,
}

impl Default for Activation {
    fn default() -> Self {
        Activation { hidden: "sigmoid".into(), output: "identity".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub format: String,
    pub board: BoardConfig,
    pub topology: Topology,
    pub activation: Activation,
    pub w_ih: Vec<Vec<f64>>,
    pub b_h: Vec<f64>,
    pub w_ho: Vec<f64>,
    pub b_o: f64,
    pub provenance: Provenance,
}

impl Snapshot {
    pub fn capture(net: &ValueNetwork, board: BoardConfig, provenance: Provenance) -> Snapshot {
        Snapshot {
            format: FORMAT.to_string(),
            board,
            topology: net.topology(),
            activation: Activation::default(),
            w_ih: net.w_ih_rows().map(<[f64]>::to_vec).collect(),
            b_h: net.b_h().to_vec(),
            w_ho: net.w_ho().to_vec(),
            b_o: net.b_o(),
            provenance,
        }
    }

    /// Rebuilds the network, checking the format tag and that the topology
    /// agrees with the recorded board.
    pub fn network(&self) -> Result<ValueNetwork> {
        if self.format != FORMAT {
            return Err(ConfigError::Plan(format!("unsupported snapshot format {:?}", self.format)).into());
        }
        if self.activation != Activation::default() {
            return Err(ConfigError::Plan(format!("unsupported activations {:?}", self.activation)).into());
        }
        self.board.validate()?;
        let expected = Topology::for_board(&self.board);
        if expected != self.topology {
            return Err(ConfigError::TopologyMismatch {
                expected: format!("{expected} for n={} a={}", self.board.n, self.board.a),
                found: self.topology.to_string(),
            }
            .into());
        }
        Ok(ValueNetwork::from_parts(self.topology, &self.w_ih, &self.b_h, &self.w_ho, self.b_o)?)
    }

    /// Like [`Snapshot::network`], additionally requiring a specific board.
    pub fn network_for(&self, board: &BoardConfig) -> Result<ValueNetwork> {
        if self.board.n != board.n || self.board.a != board.a {
            return Err(ConfigError::TopologyMismatch {
                expected: Topology::for_board(board).to_string(),
                found: format!("{} (n={} a={})", self.topology, self.board.n, self.board.a),
            }
            .into());
        }
        self.network()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let json = serde_json::to_string(self).map_err(|e| Error::Json { path: path.into(), source: e })?;
        fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Snapshot> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(Error::MissingSnapshot(path.into())),
            Err(e) => return Err(Error::io(path, e)),
        };
        serde_json::from_str(&text).map_err(|e| Error::Json { path: path.into(), source: e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::ValueFunction;

    #[test]
    fn file_round_trip_is_bit_exact() {
        let board = BoardConfig::default();
        let net = ValueNetwork::init(Topology::for_board(&board), 9);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        let prov = Provenance { batch_id: "b1".into(), stage: 3, rng_seed: 42 };
        Snapshot::capture(&net, board, prov.clone()).save(&path).unwrap();
        let loaded = Snapshot::load(&path).unwrap();
        assert_eq!(loaded.provenance, prov);
        let back = loaded.network().unwrap();
        assert_eq!(back.params(), net.params());
        assert_eq!(back.fingerprint(), net.fingerprint());
    }

    #[test]
    fn json_layout() {
        let board = BoardConfig { n: 4, a: 1, beta: 2 };
        let net = ValueNetwork::zeros(Topology::for_board(&board));
        let v: serde_json::Value = serde_json::to_value(Snapshot::capture(&net, board, Provenance::default())).unwrap();
        assert_eq!(v["format"], "valuenet-v1");
        assert_eq!(v["topology"]["inputs"], 24);
        assert_eq!(v["topology"]["hidden"], 12);
        assert_eq!(v["activation"]["output"], "identity");
        assert_eq!(v["w_ih"].as_array().unwrap().len(), 12);
        assert_eq!(v["w_ih"][0].as_array().unwrap().len(), 24);
    }

    #[test]
    fn rejects_topology_mismatch() {
        let board = BoardConfig::default();
        let net = ValueNetwork::zeros(Topology::for_board(&board));
        let mut snap = Snapshot::capture(&net, board, Provenance::default());
        snap.board = BoardConfig { n: 6, a: 1, beta: 3 };
        assert!(matches!(snap.network(), Err(Error::Config(ConfigError::TopologyMismatch { .. }))));
        let snap = Snapshot::capture(&net, board, Provenance::default());
        assert!(snap.network_for(&BoardConfig { n: 6, a: 1, beta: 3 }).is_err());
        assert!(matches!(Snapshot::load(Path::new("/nonexistent/x.json")), Err(Error::MissingSnapshot(_))));
    }
}
