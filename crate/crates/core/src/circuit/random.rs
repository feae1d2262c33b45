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

//! The random circuit ensemble: fixed slot skeleton, free single-qubit slots
//! picked by a policy with probability `Q`.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Circuit, Coord, Gate, GateKind, Lattice};
use crate::error::{invalid, Error, Result};
use crate::pauli::CliffordGate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    One(Coord),
    Two(Coord, Coord),
}

impl Slot {
    fn sites(&self) -> Vec<Coord> {
        match *self {
            Slot::One(a) => vec![a],
            Slot::Two(a, b) => vec![a, b],
        }
    }
}

/// Gate skeleton: positions and arities, no gate content.
#[derive(Clone, Debug, PartialEq)]
pub struct Architecture {
    lattice: Lattice,
    layers: Vec<Vec<Slot>>,
}

impl Architecture {
    pub fn new(lattice: Lattice, layers: Vec<Vec<Slot>>) -> Result<Self> {
        let arch = Self { lattice, layers };
        // Validate through a placeholder circuit with the same supports.
        arch.fill(|slot| match slot {
            Slot::One(_) => GateKind::Clifford(CliffordGate::H),
            Slot::Two(..) => GateKind::Clifford(CliffordGate::Cz),
        })
        .ensure_valid()?;
        Ok(arch)
    }

    /// Odd layers hold a single-qubit slot on every site. Even layers cycle
    /// through four dimer coverings (horizontal/vertical, two offsets); sites left
    /// uncovered get single-qubit slots.
    pub fn brickwork(lattice: Lattice, depth: usize) -> Self {
        let mut layers = Vec::with_capacity(depth);
        for t in 1..=depth {
            if t % 2 == 1 {
                layers.push(lattice.coords().map(Slot::One).collect());
                continue;
            }
            let pattern = (t / 2 - 1) % 4;
            let horizontal = pattern < 2;
            let offset = pattern % 2;
            let mut used = vec![false; lattice.num_qubits()];
            let mut layer = Vec::new();
            for c in lattice.coords() {
                let (along, limit) = if horizontal { (c.x, lattice.lx) } else { (c.y, lattice.ly) };
                if along % 2 == offset && along + 1 < limit {
                    let partner = if horizontal { Coord::new(c.x + 1, c.y) } else { Coord::new(c.x, c.y + 1) };
                    used[lattice.index(c)] = true;
                    used[lattice.index(partner)] = true;
                    layer.push(Slot::Two(c, partner));
                }
            }
            for c in lattice.coords() {
                if !used[lattice.index(c)] {
                    layer.push(Slot::One(c));
                }
            }
            layers.push(layer);
        }
        Self { lattice, layers }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<Slot>] {
        &self.layers
    }

    pub fn single_qubit_slots(&self) -> usize {
        self.layers.iter().flatten().filter(|s| matches!(s, Slot::One(_))).count()
    }

    fn fill(&self, mut pick: impl FnMut(&Slot) -> GateKind) -> Circuit {
        let layers = self
            .layers
            .iter()
            .map(|l| l.iter().map(|s| Gate::new(pick(s), s.sites())).collect())
            .collect();
        Circuit::new(self.lattice, layers)
    }
}

/// Chooses gate content for the random ensemble.
pub trait GatePolicy: Sync {
    fn name(&self) -> &'static str;

    /// Gate for a free single-qubit slot.
    fn free_gate(&self, rng: &mut dyn RngCore) -> GateKind;

    /// Gate for a constrained single-qubit slot.
    fn constrained_gate(&self, rng: &mut dyn RngCore) -> CliffordGate {
        *CliffordGate::SINGLE_QUBIT.choose(rng).expect("non-empty")
    }

    fn two_qubit_gate(&self, rng: &mut dyn RngCore) -> CliffordGate {
        *CliffordGate::TWO_QUBIT.choose(rng).expect("non-empty")
    }
}

/// Adversarial choice: every free slot becomes a T gate.
#[derive(Clone, Copy, Debug, Default)]
pub struct AlwaysTWhenFree;

impl GatePolicy for AlwaysTWhenFree {
    fn name(&self) -> &'static str {
        "always-t"
    }

    fn free_gate(&self, _rng: &mut dyn RngCore) -> GateKind {
        GateKind::T
    }
}

/// Free slots draw uniformly from the six single-qubit Cliffords and T.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformCliffordOrT;

impl GatePolicy for UniformCliffordOrT {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn free_gate(&self, rng: &mut dyn RngCore) -> GateKind {
        let i = rng.gen_range(0..=CliffordGate::SINGLE_QUBIT.len());
        match CliffordGate::SINGLE_QUBIT.get(i) {
            Some(&g) => GateKind::Clifford(g),
            None => GateKind::T,
        }
    }
}

pub fn policy_by_name(name: &str) -> Result<&'static dyn GatePolicy> {
    match name {
        "always-t" => Ok(&AlwaysTWhenFree),
        "uniform" => Ok(&UniformCliffordOrT),
        other => Err(invalid(format!("unknown policy {other:?}; expected always-t or uniform"))),
    }
}

/// Draws one member of the ensemble. Slots are visited layer by layer in
/// skeleton order, so a fixed seed reproduces the circuit exactly.
pub fn sample_random_model(arch: &Architecture, q: f64, policy: &dyn GatePolicy, seed: u64) -> Result<Circuit> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidArgument(format!("Q = {q} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(arch.fill(|slot| match slot {
        Slot::One(_) => {
            if rng.gen_bool(q) {
                policy.free_gate(&mut rng)
            } else {
                GateKind::Clifford(policy.constrained_gate(&mut rng))
            }
        }
        Slot::Two(..) => GateKind::Clifford(policy.two_qubit_gate(&mut rng)),
    }))
}
