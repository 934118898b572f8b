//! Two-layer value network and the TD(lambda) update with accumulating traces.
//!
//! The network maps a feature vector to a scalar afterstate value:
//! `b_o + sum_j w_ho[j] * sigmoid(b_h[j] + sum_i w_ih[j][i] * x[i])`.
//! The output unit is linear so that it can regress the +/-100 terminal rewards.
//!
//! All weights live in one flat buffer laid out as `[w_ih | b_h | w_ho | b_o]`,
//! with `w_ih` stored row-major by hidden unit. Traces and gradients use the
//! same layout, which lets [`td_step`] work on any [`ValueFunction`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::NetError;
use crate::game::BoardConfig;

const INIT_RANGE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub inputs: usize,
    pub hidden: usize,
}

impl Topology {
    /// `n^2 - 2a^2 + 10` inputs and half as many hidden units, rounded up.
    pub fn for_board(config: &BoardConfig) -> Topology {
        let inputs = config.n * config.n - 2 * config.a * config.a + 10;
        Topology { inputs, hidden: inputs.div_ceil(2) }
    }

    pub fn param_count(&self) -> usize {
        self.hidden * self.inputs + 2 * self.hidden + 1
    }

    fn b_h_offset(&self) -> usize {
        self.hidden * self.inputs
    }

    fn w_ho_offset(&self) -> usize {
        self.b_h_offset() + self.hidden
    }

    fn b_o_offset(&self) -> usize {
        self.w_ho_offset() + self.hidden
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}-1", self.inputs, self.hidden)
    }
}

/// A differentiable scalar function of a feature vector with a flat parameter buffer.
pub trait ValueFunction {
    fn params(&self) -> &[f64];
    fn params_mut(&mut self) -> &mut [f64];
    fn value(&self, x: &[f64]) -> Result<f64, NetError>;
    /// Writes the gradient of the value with respect to every parameter into
    /// `grad` and returns the value.
    fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> Result<f64, NetError>;
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueNetwork {
    topology: Topology,
    params: Vec<f64>,
}

impl ValueNetwork {
    /// Weights drawn uniformly from [-0.1, 0.1]; the same seed gives the same network.
    pub fn init(topology: Topology, seed: u64) -> ValueNetwork {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = (0..topology.param_count()).map(|_| rng.gen_range(-INIT_RANGE..=INIT_RANGE)).collect();
        ValueNetwork { topology, params }
    }

    pub fn zeros(topology: Topology) -> ValueNetwork {
        ValueNetwork { topology, params: vec![0.0; topology.param_count()] }
    }

    pub fn from_parts(
        topology: Topology,
        w_ih: &[Vec<f64>],
        b_h: &[f64],
        w_ho: &[f64],
        b_o: f64,
    ) -> Result<ValueNetwork, NetError> {
        let shape_ok = w_ih.len() == topology.hidden
            && w_ih.iter().all(|row| row.len() == topology.inputs)
            && b_h.len() == topology.hidden
            && w_ho.len() == topology.hidden;
        if !shape_ok {
            return Err(NetError::DimensionMismatch {
                expected: topology.param_count(),
                got: w_ih.iter().map(Vec::len).sum::<usize>() + b_h.len() + w_ho.len() + 1,
            });
        }
        let mut params = Vec::with_capacity(topology.param_count());
        w_ih.iter().for_each(|row| params.extend_from_slice(row));
        params.extend_from_slice(b_h);
        params.extend_from_slice(w_ho);
        params.push(b_o);
        let net = ValueNetwork { topology, params };
        if let Some(bad) = net.params.iter().find(|w| !w.is_finite()) {
            return Err(NetError::NumericFault(format!("non-finite weight {bad}")));
        }
        Ok(net)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn w_ih(&self, hidden: usize, input: usize) -> f64 {
        self.params[hidden * self.topology.inputs + input]
    }

    pub fn w_ih_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.params[..self.topology.b_h_offset()].chunks(self.topology.inputs)
    }

    pub fn b_h(&self) -> &[f64] {
        &self.params[self.topology.b_h_offset()..self.topology.w_ho_offset()]
    }

    pub fn w_ho(&self) -> &[f64] {
        &self.params[self.topology.w_ho_offset()..self.topology.b_o_offset()]
    }

    pub fn b_o(&self) -> f64 {
        self.params[self.topology.b_o_offset()]
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.params.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    /// SHA-256 over the topology and the exact bit patterns of all weights.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.topology.inputs as u64).to_le_bytes());
        hasher.update((self.topology.hidden as u64).to_le_bytes());
        for w in &self.params {
            hasher.update(w.to_bits().to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    fn check_input(&self, x: &[f64]) -> Result<(), NetError> {
        if x.len() != self.topology.inputs {
            return Err(NetError::DimensionMismatch { expected: self.topology.inputs, got: x.len() });
        }
        Ok(())
    }

    fn hidden_activations(&self, x: &[f64]) -> Vec<f64> {
        self.w_ih_rows()
            .zip(self.b_h())
            .map(|(row, b)| sigmoid(b + row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>()))
            .collect()
    }
}

impl ValueFunction for ValueNetwork {
    fn params(&self) -> &[f64] {
        &self.params
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn value(&self, x: &[f64]) -> Result<f64, NetError> {
        self.check_input(x)?;
        let h = self.hidden_activations(x);
        Ok(self.b_o() + self.w_ho().iter().zip(&h).map(|(w, hj)| w * hj).sum::<f64>())
    }

    fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> Result<f64, NetError> {
        self.check_input(x)?;
        let t = self.topology;
        assert_eq!(grad.len(), t.param_count(), "gradient buffer has the wrong length");
        let h = self.hidden_activations(x);
        let value = self.b_o() + self.w_ho().iter().zip(&h).map(|(w, hj)| w * hj).sum::<f64>();

        let (g_ih, rest) = grad.split_at_mut(t.b_h_offset());
        let (g_bh, rest) = rest.split_at_mut(t.hidden);
        let (g_ho, g_bo) = rest.split_at_mut(t.hidden);
        g_bo[0] = 1.0;
        for j in 0..t.hidden {
            g_ho[j] = h[j];
            // d sigmoid / dz = h (1 - h)
            let dz = self.w_ho()[j] * h[j] * (1.0 - h[j]);
            g_bh[j] = dz;
            for (g, xi) in g_ih[j * t.inputs..(j + 1) * t.inputs].iter_mut().zip(x) {
                *g = dz * xi;
            }
        }
        Ok(value)
    }
}

/// Learning constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TdParams {
    pub lambda: f64,
    pub gamma: f64,
    pub alpha: f64,
    /// Probability of taking the best-valued move.
    pub epsilon_best: f64,
    /// Largest tolerated absolute weight before training is halted.
    pub weight_alarm: f64,
}

impl Default for TdParams {
    fn default() -> Self {
        TdParams { lambda: 0.5, gamma: 1.0, alpha: 0.01, epsilon_best: 0.9, weight_alarm: 1e6 }
    }
}

impl TdParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(format!("lambda must lie in [0,1], got {}", self.lambda));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(format!("gamma must lie in (0,1], got {}", self.gamma));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.epsilon_best) {
            return Err(format!("epsilon_best must lie in [0,1], got {}", self.epsilon_best));
        }
        if self.weight_alarm.is_nan() || self.weight_alarm <= 0.0 {
            return Err(format!("weight_alarm must be positive, got {}", self.weight_alarm));
        }
        Ok(())
    }
}

/// Eligibility traces, one per parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Traces(Vec<f64>);

impl Traces {
    pub fn for_function(f: &impl ValueFunction) -> Traces {
        Traces(vec![0.0; f.params().len()])
    }

    pub fn reset(&mut self) {
        self.0.iter_mut().for_each(|e| *e = 0.0);
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdOutcome {
    pub v_prev: f64,
    pub delta: f64,
}

/// One TD(lambda) update:
///
/// ```text
/// delta = reward + gamma * v_next - V(x_prev)      (v_next dropped at terminal)
/// e     = gamma * lambda * e + grad V(x_prev)
/// w     = w + alpha * delta * e
/// ```
///
/// A terminal update ends the episode, so the traces are cleared after it.
/// The update is all-or-nothing: on a numeric fault neither the weights nor
/// the traces are modified.
pub fn td_step<V: ValueFunction>(
    net: &mut V,
    traces: &mut Traces,
    params: &TdParams,
    x_prev: &[f64],
    reward: f64,
    v_next: f64,
    terminal: bool,
) -> Result<TdOutcome, NetError> {
    let n = net.params().len();
    assert_eq!(traces.0.len(), n, "traces do not match the value function");
    if !reward.is_finite() || (!terminal && !v_next.is_finite()) {
        return Err(NetError::NumericFault(format!("non-finite TD target (reward {reward}, v_next {v_next})")));
    }
    let mut grad = vec![0.0; n];
    let v_prev = net.value_and_gradient(x_prev, &mut grad)?;
    let target = if terminal { reward } else { reward + params.gamma * v_next };
    let delta = target - v_prev;
    if !delta.is_finite() {
        return Err(NetError::NumericFault(format!("non-finite TD error (V(x_prev) = {v_prev})")));
    }

    let decay = params.gamma * params.lambda;
    let new_traces: Vec<f64> = traces.0.iter().zip(&grad).map(|(e, g)| decay * e + g).collect();
    let step = params.alpha * delta;
    let new_params: Vec<f64> = net.params().iter().zip(&new_traces).map(|(w, e)| w + step * e).collect();

    if let Some((i, w)) = new_params.iter().enumerate().find(|(_, w)| !w.is_finite() || w.abs() > params.weight_alarm) {
        return Err(NetError::NumericFault(format!(
            "weight {i} would become {w} (alarm threshold {})",
            params.weight_alarm
        )));
    }
    traces.0 = new_traces;
    if terminal {
        traces.reset();
    }
    net.params_mut().copy_from_slice(&new_params);
    Ok(TdOutcome { v_prev, delta })
}
