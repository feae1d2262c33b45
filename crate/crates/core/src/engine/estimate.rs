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

//! Truncated expectation values, cutoff selection and ensemble statistics.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{traverse, Compiled, EngineOptions, WeightPolynomial};
use crate::circuit::{sample_random_model, Architecture, Circuit, GatePolicy};
use crate::error::{invalid, Error, Result};
use crate::pauli::{Observable, PauliString, ProductState};

#[derive(Clone, Debug, Serialize)]
pub struct TermEstimate {
    pub coeff: f64,
    pub pauli: String,
    pub value: f64,
    pub paths: u64,
    pub fw: WeightPolynomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBudget {
    pub q: f64,
    /// `n·d·(2^Q (1 − p))^ℓ` for a single Pauli term.
    pub per_term: f64,
    /// `Σ_k |a_k|` times the per-term bound.
    pub total: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncatedEstimate {
    pub value: f64,
    pub ell: Option<usize>,
    pub p: f64,
    pub terms: Vec<TermEstimate>,
    pub bound: Option<ErrorBudget>,
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("noise rate p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `Σ_k a_k Σ_{w ≤ ℓ} F_w^{(k)} (1 − p)^w`. With a certified `q` and a finite
/// cutoff the truncation bound is attached.
pub fn expectation_truncated(
    circuit: &Circuit,
    obs: &Observable,
    state: &ProductState,
    p: f64,
    cutoff: Option<usize>,
    q: Option<f64>,
    opts: &EngineOptions,
) -> Result<TruncatedEstimate> {
    check_p(p)?;
    let c = Compiled::new(circuit)?;
    let mut terms = Vec::with_capacity(obs.len());
    let mut total = super::Neumaier::default();
    for (a, pauli) in obs.terms() {
        let acc = traverse(&c, pauli, Some(state), cutoff, opts)?;
        let fw = acc.polynomial();
        let value = fw.at_noise(p);
        total.add(a * value);
        terms.push(TermEstimate { coeff: *a, pauli: pauli.to_string(), value, paths: acc.stats.total(), fw });
    }
    let bound = q.map(|q| {
        let per_term = match cutoff {
            None => 0.0,
            Some(ell) => {
                let nd = (circuit.num_qubits() * circuit.depth()) as f64;
                nd * ((q.exp2() * (1.0 - p)).powi(ell as i32))
            }
        };
        ErrorBudget { q, per_term, total: per_term * obs.l1_norm() }
    });
    Ok(TruncatedEstimate { value: total.value(), ell: cutoff, p, terms, bound })
}

/// `ℓ = ⌈max(ln(nd/ε) / ln(1/(2^Q(1−p))), a·ln n)⌉`, natural logarithms.
pub fn choose_cutoff(n: usize, d: usize, epsilon: f64, p: f64, q: f64, a: f64) -> Result<usize> {
    check_p(p)?;
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(invalid("epsilon must be positive"));
    }
    if !(q >= 0.0 && q.is_finite()) {
        return Err(invalid(format!("Q = {q} must be non-negative")));
    }
    let r = q.exp2() * (1.0 - p);
    if r >= 1.0 {
        return Err(Error::BelowThreshold { p, threshold: 1.0 - (-q).exp2() });
    }
    let first = if r == 0.0 { 0.0 } else { ((n * d) as f64 / epsilon).ln() / (1.0 / r).ln() };
    let second = a * (n as f64).ln();
    Ok(first.max(second).max(0.0).ceil() as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct CutoffPlan {
    pub ell: usize,
    pub epsilon: f64,
    /// `ε/√g` for `g` observable terms.
    pub epsilon_per_term: f64,
    pub threshold: f64,
}

/// Cutoff meeting total precision `ε` over `g` terms.
pub fn plan_cutoff(n: usize, d: usize, epsilon: f64, p: f64, q: f64, a: f64, g: usize) -> Result<CutoffPlan> {
    let per = epsilon / (g.max(1) as f64).sqrt();
    Ok(CutoffPlan {
        ell: choose_cutoff(n, d, per, p, q, a)?,
        epsilon,
        epsilon_per_term: per,
        threshold: 1.0 - (-q).exp2(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomModelStats {
    pub trials: usize,
    pub ell: usize,
    pub q: f64,
    pub mean: f64,
    pub std_dev: f64,
    /// Three standard errors of the mean.
    pub allowance: f64,
    /// `(1 + Q)^ℓ`.
    pub bound: f64,
    pub within_bound: bool,
    pub samples: Vec<u64>,
}

/// Monte-Carlo mean of `Σ_{w ≤ ℓ} N_w` over the random ensemble. Trial `i`
/// uses the `i`-th output of a ChaCha8 stream seeded with `seed`.
#[allow(clippy::too_many_arguments)]
pub fn random_model_statistics(
    arch: &Architecture,
    q: f64,
    policy: &dyn GatePolicy,
    obs: &PauliString,
    trials: usize,
    ell: usize,
    seed: u64,
    opts: &EngineOptions,
) -> Result<RandomModelStats> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| rng.next_u64()).collect();
    let inner = EngineOptions { parallel: false, ..opts.clone() };
    let run = |s: &u64| -> Result<u64> {
        let c = sample_random_model(arch, q, policy, *s)?;
        Ok(super::count_paths_with(&c, obs, Some(ell), &inner)?.total())
    };
    let samples: Vec<u64> = if opts.parallel {
        seeds.par_iter().map(run).collect::<Result<_>>()?
    } else {
        seeds.iter().map(run).collect::<Result<_>>()?
    };
    let n = trials as f64;
    let mean = samples.iter().map(|&v| v as f64).sum::<f64>() / n;
    let var = if trials > 1 {
        samples.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std_dev = var.sqrt();
    let allowance = 3.0 * std_dev / n.sqrt();
    let bound = (1.0 + q).powi(ell as i32);
    Ok(RandomModelStats {
        trials,
        ell,
        q,
        mean,
        std_dev,
        allowance,
        bound,
        within_bound: mean <= bound + allowance,
        samples,
    })
}

/// `f(s)` for an explicit path `s_0..s_d`.
pub fn path_amplitude(circuit: &Circuit, path: &[PauliString], state: &ProductState) -> Result<f64> {
    let c = Compiled::new(circuit)?;
    if path.len() != c.depth() + 1 {
        return Err(Error::DimensionMismatch { expected: c.depth() + 1, got: path.len() });
    }
    if let Some(s) = path.iter().find(|s| s.num_qubits() != c.n) {
        return Err(Error::DimensionMismatch { expected: c.n, got: s.num_qubits() });
    }
    let mut amp = 1.0;
    for t in 1..=c.depth() {
        let (input, output) = (&path[t], &path[t - 1]);
        let mut covered = vec![false; c.n];
        for op in &c.layers[t - 1] {
            let i = input.local_index(&op.qubits);
            let o = output.local_index(&op.qubits) as u16;
            amp *= c.tables[op.table].row(i).iter().find(|e| e.1 == o).map_or(0.0, |e| e.0);
            for &q in &op.qubits {
                covered[q] = true;
            }
        }
        if (0..c.n).any(|q| !covered[q] && input.letter(q) != output.letter(q)) {
            return Ok(0.0);
        }
        if amp == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(amp * state.expectation(&path[0])?)
}

/// `E[f(s) f(s′)]` over a finite mixture of circuits with probabilities.
pub fn orthogonality_probe(
    ensemble: &[(f64, Circuit)],
    state: &ProductState,
    s: &[PauliString],
    s_prime: &[PauliString],
) -> Result<f64> {
    let total: f64 = ensemble.iter().map(|e| e.0).sum();
    if ensemble.iter().any(|e| e.0 < 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(invalid("ensemble probabilities must be non-negative and sum to 1"));
    }
    let mut acc = super::Neumaier::default();
    for (prob, c) in ensemble {
        if *prob == 0.0 {
            continue;
        }
        acc.add(prob * path_amplitude(c, s, state)? * path_amplitude(c, s_prime, state)?);
    }
    Ok(acc.value())
}
