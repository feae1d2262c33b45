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

//! Enumeration of non-zero Pauli paths by depth-first Heisenberg propagation.
//!
//! Starting from `s_d = O` the traversal conjugates one gate at a time, from
//! the last layer to the first, branching wherever a gate maps the current
//! letters to several Pauli strings. A path `s_0..s_d` has weight
//! `Σ_{i=0..d} |s_i|` and amplitude `f(s) = Π_t c_t · tr(s_0 ρ_0)`.

mod estimate;
mod weights;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use smallvec::SmallVec;

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliTransfer, ProductState};

pub use estimate::{
    choose_cutoff, expectation_truncated, orthogonality_probe, path_amplitude, plan_cutoff, random_model_statistics,
    CutoffPlan, ErrorBudget, RandomModelStats, TermEstimate, TruncatedEstimate,
};
pub use weights::{Neumaier, WeightPolynomial};

/// Frontier size the serial pre-expansion aims for before parallel work starts.
/// Fixed so results do not depend on the thread count.
const FRONTIER_TARGET: usize = 256;
const ABORT_CHECK_INTERVAL: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Prune with `⌈w/D^j⌉` lower bounds on the remaining strings instead of 1.
    pub light_cone: bool,
    /// Abort once this many leaves have been visited.
    pub max_paths: Option<u64>,
    /// Use rayon over a fixed frontier. Off gives the same numbers serially.
    pub parallel: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self { light_cone: false, max_paths: None, parallel: true }
    }
}

/// Counts gathered during a traversal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathStats {
    /// `N_w`: emitted paths per weight.
    pub counts: BTreeMap<usize, u64>,
    /// Largest `Σ_k T_k(s_k)` seen among paths of each weight.
    pub max_magic: BTreeMap<usize, usize>,
    /// Sum of `Σ_k T_k(s_k)` over all emitted paths.
    pub magic_total: u64,
    /// Branches cut by the weight bound.
    pub pruned: u64,
    /// Leaves whose initial-state overlap vanished.
    pub zero_overlap: u64,
}

impl PathStats {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    /// `Σ_{lo ≤ w ≤ hi} N_w`.
    pub fn count_between(&self, lo: usize, hi: usize) -> u64 {
        if lo > hi {
            return 0;
        }
        self.counts.range(lo..=hi).map(|(_, n)| n).sum()
    }

    fn record(&mut self, weight: usize, magic: usize) {
        *self.counts.entry(weight).or_default() += 1;
        let m = self.max_magic.entry(weight).or_default();
        *m = (*m).max(magic);
        self.magic_total += magic as u64;
    }

    pub fn merge(&mut self, other: &PathStats) {
        for (&w, &n) in &other.counts {
            *self.counts.entry(w).or_default() += n;
        }
        for (&w, &m) in &other.max_magic {
            let e = self.max_magic.entry(w).or_default();
            *e = (*e).max(m);
        }
        self.magic_total += other.magic_total;
        self.pruned += other.pruned;
        self.zero_overlap += other.zero_overlap;
    }
}

/// One emitted path.
#[derive(Debug)]
pub struct PathRecord<'a> {
    /// `s_0..s_d`.
    pub strings: &'a [PauliString],
    pub weight: usize,
    /// Product of transition coefficients.
    pub amplitude: f64,
    /// `tr(s_0 ρ_0)`.
    pub overlap: f64,
    /// `f(s) = amplitude · overlap`.
    pub value: f64,
    /// `Σ_k T_k(s_k)`.
    pub magic: usize,
}

struct Op {
    qubits: SmallVec<[usize; 3]>,
    table: usize,
    magic: bool,
}

/// Circuit lowered to transfer tables, layers in application order.
pub(crate) struct Compiled {
    n: usize,
    layers: Vec<Vec<Op>>,
    tables: Vec<PauliTransfer>,
    /// Largest gate arity of each layer, for the light-cone bound.
    arity: Vec<usize>,
}

impl Compiled {
    pub(crate) fn new(circuit: &Circuit) -> Result<Self> {
        circuit.ensure_valid()?;
        let lattice = circuit.lattice();
        let mut tables: Vec<PauliTransfer> = Vec::new();
        let mut named: Vec<(GateName, usize)> = Vec::new();
        let mut layers = Vec::with_capacity(circuit.depth());
        let mut arity = Vec::with_capacity(circuit.depth());
        for layer in circuit.layers() {
            let mut ops = Vec::with_capacity(layer.len());
            let mut d = 1;
            for gate in layer {
                let key = match &gate.kind {
                    GateKind::Clifford(g) => Some(GateName::Clifford(*g)),
                    GateKind::T => Some(GateName::T),
                    GateKind::Unitary(_) => None,
                };
                let table = match key.and_then(|k| named.iter().find(|(n, _)| *n == k)) {
                    Some(&(_, i)) => i,
                    None => {
                        let t = gate.kind.transfer()?;
                        tables.push(t);
                        if let Some(k) = key {
                            named.push((k, tables.len() - 1));
                        }
                        tables.len() - 1
                    }
                };
                let magic = gate.qubits.len() == 1 && !tables[table].is_clifford();
                d = d.max(gate.qubits.len());
                ops.push(Op {
                    qubits: gate.qubits.iter().map(|&c| lattice.index(c)).collect(),
                    table,
                    magic,
                });
            }
            layers.push(ops);
            arity.push(d);
        }
        Ok(Self { n: circuit.num_qubits(), layers, tables, arity })
    }

    fn depth(&self) -> usize {
        self.layers.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum GateName {
    Clifford(crate::pauli::CliffordGate),
    T,
}

#[derive(Clone)]
struct Frame {
    /// Layer being conjugated, 1-based; the string under construction is `s_{layer-1}`.
    layer: usize,
    gate: usize,
    string: PauliString,
    amplitude: f64,
    /// Weight of the completed strings `s_layer..s_d`.
    weight: usize,
    magic: usize,
}

/// Per-traversal accumulators.
#[derive(Default)]
struct Acc {
    fw: Vec<Neumaier>,
    stats: PathStats,
    leaves: u64,
}

impl Acc {
    fn merge(&mut self, other: &Acc) {
        if self.fw.len() < other.fw.len() {
            self.fw.resize(other.fw.len(), Neumaier::default());
        }
        for (a, b) in self.fw.iter_mut().zip(&other.fw) {
            a.merge(b);
        }
        self.stats.merge(&other.stats);
        self.leaves += other.leaves;
    }

    fn polynomial(&self) -> WeightPolynomial {
        WeightPolynomial::new(self.fw.iter().map(Neumaier::value).collect())
    }
}

struct Walker<'a> {
    c: &'a Compiled,
    state: Option<&'a ProductState>,
    cutoff: usize,
    opts: &'a EngineOptions,
    visited: &'a AtomicU64,
    abort: &'a AtomicBool,
}

enum Step {
    Continue(Frame),
    Leaf(Frame),
    Done,
}

impl Walker<'_> {
    /// Smallest possible weight of `s_{j-1}..s_0` given `|s_j| = w`.
    fn remaining_bound(&self, j: usize, w: usize) -> usize {
        if !self.opts.light_cone {
            return j;
        }
        let mut total = 0;
        let mut cur = w;
        for layer in (1..=j).rev() {
            cur = cur.div_ceil(self.c.arity[layer - 1]).max(1);
            total += cur;
        }
        total
    }

    /// Finishes the string at a layer boundary: weight bookkeeping and pruning.
    fn close_layer(&self, mut f: Frame, acc: &mut Acc) -> Step {
        let w = f.string.weight();
        debug_assert!(w > 0, "unitary conjugation never produces the identity from a non-identity string");
        if w == 0 {
            return Step::Done;
        }
        f.weight += w;
        f.layer -= 1;
        f.gate = 0;
        if f.weight + self.remaining_bound(f.layer, w) > self.cutoff {
            acc.stats.pruned += 1;
            return Step::Done;
        }
        if f.layer == 0 {
            Step::Leaf(f)
        } else {
            Step::Continue(f)
        }
    }

    /// Runs the subtree under `root`, which must sit at a layer boundary or inside a layer.
    fn run(
        &self,
        root: Frame,
        acc: &mut Acc,
        mut path: Option<&mut Vec<PauliString>>,
        visit: &mut dyn FnMut(&PathRecord),
    ) -> Result<()> {
        let mut stack = vec![root];
        while let Some(mut f) = stack.pop() {
            loop {
                if f.layer == 0 {
                    self.leaf(&f, acc, path.as_deref_mut(), visit)?;
                    break;
                }
                if f.gate == 0 {
                    if let Some(p) = path.as_deref_mut() {
                        p[f.layer] = f.string.clone();
                    }
                }
                let ops = &self.c.layers[f.layer - 1];
                if f.gate == ops.len() {
                    match self.close_layer(f, acc) {
                        Step::Continue(next) | Step::Leaf(next) => {
                            f = next;
                            continue;
                        }
                        Step::Done => break,
                    }
                }
                let op = &ops[f.gate];
                let idx = f.string.local_index(&op.qubits);
                f.gate += 1;
                if idx == 0 {
                    continue;
                }
                if op.magic {
                    f.magic += 1;
                }
                let row = self.c.tables[op.table].row(idx);
                for &(coeff, out) in row[1..].iter().rev() {
                    let mut child = f.clone();
                    child.string.set_local_index(&op.qubits, out as usize);
                    child.amplitude *= coeff;
                    stack.push(child);
                }
                let (coeff, out) = row[0];
                f.string.set_local_index(&op.qubits, out as usize);
                f.amplitude *= coeff;
            }
        }
        Ok(())
    }

    fn leaf(
        &self,
        f: &Frame,
        acc: &mut Acc,
        path: Option<&mut Vec<PauliString>>,
        visit: &mut dyn FnMut(&PathRecord),
    ) -> Result<()> {
        acc.leaves += 1;
        if acc.leaves.is_multiple_of(ABORT_CHECK_INTERVAL) {
            self.check_limit(ABORT_CHECK_INTERVAL)?;
        }
        let overlap = match self.state {
            Some(s) => s.expectation_unchecked(&f.string),
            None => 1.0,
        };
        if overlap == 0.0 {
            acc.stats.zero_overlap += 1;
            return Ok(());
        }
        let value = f.amplitude * overlap;
        debug_assert!(value.abs() <= 1.0 + 1e-9);
        acc.stats.record(f.weight, f.magic);
        if acc.fw.len() <= f.weight {
            acc.fw.resize(f.weight + 1, Neumaier::default());
        }
        acc.fw[f.weight].add(value);
        if let Some(p) = path {
            p[0] = f.string.clone();
            visit(&PathRecord {
                strings: p,
                weight: f.weight,
                amplitude: f.amplitude,
                overlap,
                value,
                magic: f.magic,
            });
        }
        Ok(())
    }

    fn check_limit(&self, add: u64) -> Result<()> {
        let total = self.visited.fetch_add(add, Ordering::Relaxed) + add;
        if self.abort.load(Ordering::Relaxed) {
            return Err(Error::PathLimitExceeded(total));
        }
        if let Some(limit) = self.opts.max_paths {
            if total > limit {
                self.abort.store(true, Ordering::Relaxed);
                return Err(Error::PathLimitExceeded(total));
            }
        }
        Ok(())
    }

    /// Breadth-first expansion, one gate at a time, until the frontier reaches
    /// [`FRONTIER_TARGET`] or every frame is at a leaf.
    fn frontier(&self, root: Frame, acc: &mut Acc) -> Vec<Frame> {
        let mut frontier = vec![root];
        while frontier.len() < FRONTIER_TARGET && frontier.iter().any(|f| f.layer > 0) {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for mut f in frontier {
                if f.layer == 0 {
                    next.push(f);
                    continue;
                }
                let ops = &self.c.layers[f.layer - 1];
                if f.gate == ops.len() {
                    match self.close_layer(f, acc) {
                        Step::Continue(g) | Step::Leaf(g) => next.push(g),
                        Step::Done => {}
                    }
                    continue;
                }
                let op = &ops[f.gate];
                let idx = f.string.local_index(&op.qubits);
                f.gate += 1;
                if idx == 0 {
                    next.push(f);
                    continue;
                }
                if op.magic {
                    f.magic += 1;
                }
                for &(coeff, out) in self.c.tables[op.table].row(idx) {
                    let mut child = f.clone();
                    child.string.set_local_index(&op.qubits, out as usize);
                    child.amplitude *= coeff;
                    next.push(child);
                }
            }
            frontier = next;
        }
        frontier
    }
}

fn root_frame(c: &Compiled, obs: &PauliString, cutoff: usize, acc: &mut Acc) -> Result<Option<Frame>> {
    if obs.num_qubits() != c.n {
        return Err(Error::DimensionMismatch { expected: c.n, got: obs.num_qubits() });
    }
    if obs.is_identity() {
        return Err(Error::IdentityObservable);
    }
    let d = c.depth();
    let w = obs.weight();
    if w + d > cutoff {
        acc.stats.pruned += 1;
        return Ok(None);
    }
    Ok(Some(Frame { layer: d, gate: 0, string: obs.clone(), amplitude: 1.0, weight: w, magic: 0 }))
}

fn cutoff_value(cutoff: Option<usize>) -> usize {
    cutoff.unwrap_or(usize::MAX / 2)
}

/// Full traversal returning the raw accumulators.
fn traverse(
    c: &Compiled,
    obs: &PauliString,
    state: Option<&ProductState>,
    cutoff: Option<usize>,
    opts: &EngineOptions,
) -> Result<Acc> {
    if let Some(s) = state {
        if s.num_qubits() != c.n {
            return Err(Error::DimensionMismatch { expected: c.n, got: s.num_qubits() });
        }
    }
    let cutoff = cutoff_value(cutoff);
    let mut acc = Acc::default();
    let Some(root) = root_frame(c, obs, cutoff, &mut acc)? else {
        return Ok(acc);
    };
    let visited = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let walker = Walker { c, state, cutoff, opts, visited: &visited, abort: &abort };
    let frontier = walker.frontier(root, &mut acc);
    let run_one = |f: Frame| -> Result<Acc> {
        let mut local = Acc::default();
        walker.run(f, &mut local, None, &mut |_| {})?;
        Ok(local)
    };
    let parts: Vec<Result<Acc>> = if opts.parallel {
        frontier.into_par_iter().map(run_one).collect()
    } else {
        frontier.into_iter().map(run_one).collect()
    };
    for part in parts {
        acc.merge(&part?);
    }
    walker.check_limit(acc.leaves % ABORT_CHECK_INTERVAL)?;
    Ok(acc)
}

/// Streams every non-zero path with weight at most `cutoff` to `visit`, in a
/// fixed depth-first order.
pub fn enumerate(
    circuit: &Circuit,
    obs: &PauliString,
    state: &ProductState,
    cutoff: Option<usize>,
    mut visit: impl FnMut(&PathRecord),
) -> Result<PathStats> {
    let c = Compiled::new(circuit)?;
    if state.num_qubits() != c.n {
        return Err(Error::DimensionMismatch { expected: c.n, got: state.num_qubits() });
    }
    let cutoff = cutoff_value(cutoff);
    let mut acc = Acc::default();
    let Some(root) = root_frame(&c, obs, cutoff, &mut acc)? else {
        return Ok(acc.stats);
    };
    let visited = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let opts = EngineOptions { parallel: false, ..Default::default() };
    let walker = Walker { c: &c, state: Some(state), cutoff, opts: &opts, visited: &visited, abort: &abort };
    let mut path = vec![PauliString::identity(c.n); c.depth() + 1];
    walker.run(root, &mut acc, Some(&mut path), &mut visit)?;
    Ok(acc.stats)
}

/// `F_w` for `w ≤ cutoff`.
pub fn accumulate_fw(
    circuit: &Circuit,
    obs: &PauliString,
    state: &ProductState,
    cutoff: Option<usize>,
) -> Result<WeightPolynomial> {
    Ok(accumulate_fw_with(circuit, obs, state, cutoff, &EngineOptions::default())?.0)
}

pub fn accumulate_fw_with(
    circuit: &Circuit,
    obs: &PauliString,
    state: &ProductState,
    cutoff: Option<usize>,
    opts: &EngineOptions,
) -> Result<(WeightPolynomial, PathStats)> {
    let c = Compiled::new(circuit)?;
    let acc = traverse(&c, obs, Some(state), cutoff, opts)?;
    Ok((acc.polynomial(), acc.stats))
}

/// Path counts independent of the input state: every path with non-zero
/// transition amplitude is counted.
pub fn count_paths(circuit: &Circuit, obs: &PauliString, cutoff: Option<usize>) -> Result<PathStats> {
    count_paths_with(circuit, obs, cutoff, &EngineOptions::default())
}

pub fn count_paths_with(
    circuit: &Circuit,
    obs: &PauliString,
    cutoff: Option<usize>,
    opts: &EngineOptions,
) -> Result<PathStats> {
    let c = Compiled::new(circuit)?;
    Ok(traverse(&c, obs, None, cutoff, opts)?.stats)
}
