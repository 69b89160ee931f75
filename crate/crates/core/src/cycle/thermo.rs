// SPDX-License-Identifier: Apache-2.0

//! Work and heat bookkeeping with H_c = Δ(t)|2⟩⟨2|.
//!
//! On a sampled trajectory the midpoint rule is used for both integrals:
//!
//! ```text
//! δW_k = −½(P₂(t_k) + P₂(t_{k+1}))·(Δ(t_{k+1}) − Δ(t_k))
//! δQ_k =  ½(Δ(t_k) + Δ(t_{k+1}))·(P₂(t_{k+1}) − P₂(t_k))
//! ```
//!
//! δQ_k > 0 steps feed Q_in, δQ_k < 0 steps feed Q_out. W > 0 means the
//! engine delivers work. With these two rules δQ_k − δW_k telescopes to
//! U(t_{k+1}) − U(t_k), U = P₂Δ.

use serde::{Deserialize, Serialize};

use super::integrate::TrajectoryPoint;

#[inline]
pub(crate) fn step_work(p2_a: f64, p2_b: f64, delta_a: f64, delta_b: f64) -> f64 {
    -0.5 * (p2_a + p2_b) * (delta_b - delta_a)
}

#[inline]
pub(crate) fn step_heat(p2_a: f64, p2_b: f64, delta_a: f64, delta_b: f64) -> f64 {
    0.5 * (delta_a + delta_b) * (p2_b - p2_a)
}

/// W = −∫P₂ dΔ over time-ordered samples.
pub fn accumulate_work(samples: &[TrajectoryPoint]) -> f64 {
    samples
        .windows(2)
        .map(|w| step_work(w[0].p2, w[1].p2, w[0].delta, w[1].delta))
        .sum()
}

/// (Q_in, Q_out) = positive and negative parts of ∫Δ dP₂.
pub fn accumulate_heat(samples: &[TrajectoryPoint]) -> (f64, f64) {
    let mut acc = HeatSplit::default();
    for w in samples.windows(2) {
        acc.add(step_heat(w[0].p2, w[1].p2, w[0].delta, w[1].delta));
    }
    (acc.q_in, acc.q_out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct HeatSplit {
    pub q_in: f64,
    pub q_out: f64,
}

impl HeatSplit {
    #[inline]
    pub fn add(&mut self, dq: f64) {
        if dq > 0.0 {
            self.q_in += dq;
        } else if dq < 0.0 {
            self.q_out += dq;
        }
    }
}

/// Cycle-level energy balance. Energies in rad/s (ħ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermoLedger {
    pub w_net: f64,
    pub q_in: f64,
    pub q_out: f64,
    pub delta_u: f64,
    /// W_net / Q_in; `None` when Q_in = 0.
    pub eta: Option<f64>,
}

impl ThermoLedger {
    pub fn new(w_net: f64, q_in: f64, q_out: f64, delta_u: f64) -> Self {
        Self {
            w_net,
            q_in,
            q_out,
            delta_u,
            eta: (q_in > 0.0).then(|| w_net / q_in),
        }
    }

    /// ΔU − (Q_in + Q_out − W)
    pub fn first_law_residual(&self) -> f64 {
        self.delta_u - (self.q_in + self.q_out - self.w_net)
    }
}
