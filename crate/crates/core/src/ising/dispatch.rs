// Copyright 2026 The pauliflow Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Chooses between the classical block approximation and the truncated path
//! estimate according to the SWAP overhead of a QAOA layout.

use serde::Serialize;

use super::{approx_ground_energy_with_side, block_side_for, energy_observable, IsingModel, MAX_BLOCK_SIDE};
use crate::circuit::{qaoa_sparseness_bound, Circuit, QaoaLayout};
use crate::engine::{expectation_truncated, plan_cutoff, EngineOptions};
use crate::error::{invalid, Result};
use crate::pauli::ProductState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Classical block approximation of the ground energy.
    #[serde(rename = "a")]
    Classical,
    /// Truncated Pauli-path estimate of the noisy energy.
    #[serde(rename = "b")]
    PathEstimate,
}

#[derive(Clone, Debug)]
pub struct DispatchOptions {
    /// Layouts with `λ ≤ lambda_threshold` take the classical branch.
    pub lambda_threshold: usize,
    pub p: f64,
    /// Target accuracy per spin.
    pub epsilon: f64,
    /// Constant in the `a·ln n` floor of the cutoff.
    pub a: f64,
    /// Cutoff used when no guaranteed cutoff exists; `None` means unbounded.
    pub fallback_ell: Option<usize>,
    pub engine: EngineOptions,
}

impl Default for DispatchOptions {
    fn default() -> Self {
        Self { lambda_threshold: 4, p: 0.1, epsilon: 1.0, a: 1.0, fallback_ell: None, engine: EngineOptions::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DispatchReport {
    pub branch: Branch,
    pub lambda: usize,
    pub lambda_threshold: usize,
    pub energy: f64,
    /// Bound on the error of `energy` that applies to this branch.
    pub bound: f64,
    /// Branch a: block side used.
    pub block_side: Option<usize>,
    /// Branch b: sparseness parameter and noise threshold.
    pub q: Option<f64>,
    pub p_star: Option<f64>,
    pub ell: Option<usize>,
    /// False when the bound does not come with the efficiency guarantee.
    pub guaranteed: bool,
    pub note: String,
}

/// Branch a when `λ ≤ λ_threshold` (ties included), branch b otherwise.
pub fn theorem2_dispatch(
    model: &IsingModel,
    circuit: &Circuit,
    layout: &QaoaLayout,
    opts: &DispatchOptions,
) -> Result<DispatchReport> {
    if layout.final_placement.len() != model.num_spins() {
        return Err(invalid("layout was not built from this model"));
    }
    let lambda = layout.lambda;
    if lambda <= opts.lambda_threshold {
        let placed = match model.placement() {
            Some(_) => model.clone(),
            None => model.clone().with_placement(layout.initial_placement.clone())?,
        };
        let wanted = block_side_for(&placed, opts.epsilon)?;
        let side = wanted.min(MAX_BLOCK_SIDE);
        let approx = approx_ground_energy_with_side(&placed, side)?;
        let note = if side < wanted {
            format!("accuracy target needs block side {wanted}; capped at {MAX_BLOCK_SIDE}")
        } else {
            String::new()
        };
        return Ok(DispatchReport {
            branch: Branch::Classical,
            lambda,
            lambda_threshold: opts.lambda_threshold,
            energy: approx.energy,
            bound: approx.bound,
            block_side: Some(side),
            q: None,
            p_star: None,
            ell: None,
            guaranteed: side == wanted,
            note,
        });
    }
    let q = qaoa_sparseness_bound(layout)?;
    let p_star = 1.0 - (-q).exp2();
    let obs = layout.physical_observable(&energy_observable(model)?)?;
    let n = circuit.num_qubits();
    let total_eps = opts.epsilon * model.num_spins() as f64;
    let (ell, guaranteed, note) = if opts.p > p_star {
        let plan = plan_cutoff(n, circuit.depth(), total_eps, opts.p, q, opts.a, obs.len())?;
        (Some(plan.ell), true, String::new())
    } else {
        (
            opts.fallback_ell,
            false,
            format!("p = {} is not above p* = {p_star}; no efficient cutoff guaranteed", opts.p),
        )
    };
    let est = expectation_truncated(circuit, &obs, &ProductState::plus(n), opts.p, ell, Some(q), &opts.engine)?;
    Ok(DispatchReport {
        branch: Branch::PathEstimate,
        lambda,
        lambda_threshold: opts.lambda_threshold,
        energy: est.value,
        bound: est.bound.map_or(0.0, |b| b.total),
        block_side: None,
        q: Some(q),
        p_star: Some(p_star),
        ell,
        guaranteed,
        note,
    })
}
