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

//! QAOA-style circuits for Ising models with a SWAP embedding.
//!
//! Each variational layer runs the cost unitary as alternating computing blocks
//! and SWAP layers, `V_1 S_1 V_2 … S_λ V_{λ+1}`, then the mixer. Odd layers run
//! the SWAP schedule forward and even layers run it backwards, so placements
//! return to the start after every pair of layers. An edge is implemented in the
//! first computing block whose placement makes its spins lattice neighbours.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use super::{Circuit, Coord, Gate, GateKind, Lattice};
use crate::error::{invalid, Error, Result};
use crate::ising::IsingModel;
use crate::pauli::{CliffordGate, Letter, Observable, PauliString, UnitaryMatrix};

/// Angles for one variational layer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QaoaParams {
    pub gamma: f64,
    pub alpha: f64,
}

/// Initial spin placement and the SWAP layers of one cost unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub placement: Vec<Coord>,
    pub swap_layers: Vec<Vec<(Coord, Coord)>>,
}

impl Embedding {
    pub fn new(placement: Vec<Coord>, swap_layers: Vec<Vec<(Coord, Coord)>>) -> Self {
        Self { placement, swap_layers }
    }

    /// Spin `i` on lattice site `i`, no SWAPs.
    pub fn native(lattice: Lattice, spins: usize) -> Self {
        Self::new((0..spins).map(|q| lattice.coord(q)).collect(), Vec::new())
    }

    /// Boustrophedon path through the lattice: row 0 left to right, row 1 right
    /// to left, and so on. Consecutive sites are neighbours.
    pub fn snake(lattice: Lattice) -> Vec<Coord> {
        let mut out = Vec::with_capacity(lattice.num_qubits());
        for y in 0..lattice.ly {
            for i in 0..lattice.lx {
                let x = if y % 2 == 0 { i } else { lattice.lx - 1 - i };
                out.push(Coord::new(x, y));
            }
        }
        out
    }

    /// Spins along the snake with `spins` rounds of odd-even transpositions.
    /// Every pair of spins is adjacent at some point of the schedule.
    pub fn linear_swap_network(lattice: Lattice, spins: usize) -> Result<Self> {
        let path = Self::snake(lattice);
        if spins > path.len() {
            return Err(invalid(format!("{spins} spins do not fit on {} sites", path.len())));
        }
        let path = &path[..spins];
        let swap_layers = (0..spins)
            .map(|round| {
                (round % 2..spins.saturating_sub(1))
                    .step_by(2)
                    .map(|i| (path[i], path[i + 1]))
                    .collect::<Vec<_>>()
            })
            .filter(|l| !l.is_empty())
            .collect();
        Ok(Self::new(path.to_vec(), swap_layers))
    }

    fn validate(&self, lattice: Lattice, spins: usize) -> Result<()> {
        if self.placement.len() != spins {
            return Err(Error::DimensionMismatch { expected: spins, got: self.placement.len() });
        }
        for (i, &c) in self.placement.iter().enumerate() {
            if !lattice.contains(c) || self.placement[..i].contains(&c) {
                return Err(invalid(format!("placement site {c} is outside the lattice or reused")));
            }
        }
        for (li, layer) in self.swap_layers.iter().enumerate() {
            let mut used = Vec::new();
            for &(a, b) in layer {
                if !lattice.contains(a) || !lattice.contains(b) || a.manhattan(b) != 1 {
                    return Err(invalid(format!("SWAP layer {li}: {a}-{b} is not a lattice edge")));
                }
                if used.contains(&a) || used.contains(&b) {
                    return Err(invalid(format!("SWAP layer {li}: overlapping pairs")));
                }
                used.extend([a, b]);
            }
        }
        Ok(())
    }
}

/// Constant-depth mixer block.
#[derive(Clone, Debug, PartialEq)]
pub enum Mixer {
    /// `Rx(2α)` on every placed spin.
    TransverseField,
    /// Fixed gate layers on lattice sites, repeated every variational layer.
    Custom(Vec<Vec<Gate>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerRole {
    Field,
    Computing,
    Permuting,
    Mixer,
}

#[derive(Clone, Debug, Serialize)]
pub struct VariationalLayer {
    pub params: QaoaParams,
    /// Depth of each computing block `V_{j,k}`, including empty ones.
    pub computing_depths: Vec<usize>,
    pub permuting_depth: usize,
    pub mixer_depth: usize,
    /// Total computing depth `c_j`: cost blocks plus mixer.
    pub c: usize,
    /// First and last circuit layer (1-based, inclusive); equal-start/end-1 when empty.
    pub first_layer: usize,
    pub last_layer: usize,
    /// `(i, j, block)`: the block index in which edge `(i, j)` was applied.
    pub edge_blocks: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QaoaLayout {
    pub layers: Vec<VariationalLayer>,
    /// SWAP depth of one cost unitary.
    pub lambda: usize,
    pub roles: Vec<LayerRole>,
    pub initial_placement: Vec<Coord>,
    pub final_placement: Vec<Coord>,
    pub lattice_size: [usize; 2],
}

impl QaoaLayout {
    pub fn max_c(&self) -> usize {
        self.layers.iter().map(|l| l.c).max().unwrap_or(0)
    }

    /// Moves a spin-indexed observable onto the lattice qubits holding each spin
    /// at the end of the circuit.
    pub fn physical_observable(&self, obs: &Observable) -> Result<Observable> {
        let lattice = Lattice::new(self.lattice_size[0], self.lattice_size[1]);
        let spins = self.final_placement.len();
        if obs.num_qubits() != spins {
            return Err(Error::DimensionMismatch { expected: spins, got: obs.num_qubits() });
        }
        let terms = obs
            .terms()
            .iter()
            .map(|(a, p)| {
                let mut out = PauliString::identity(lattice.num_qubits());
                for q in p.support() {
                    out.set(lattice.index(self.final_placement[q]), p.letter(q));
                }
                (*a, out)
            })
            .collect();
        Observable::new(terms)
    }
}

/// `max_j c_j·2^{c_j} / λ`.
pub fn qaoa_sparseness_bound(layout: &QaoaLayout) -> Result<f64> {
    let cs: Vec<usize> = layout.layers.iter().map(|l| l.c).collect();
    sparseness_bound_from(&cs, layout.lambda)
}

pub fn sparseness_bound_from(cs: &[usize], lambda: usize) -> Result<f64> {
    if lambda == 0 {
        return Err(Error::NoSwapLayers);
    }
    let worst = cs.iter().map(|&c| c as f64 * (c as f64).exp2()).fold(0.0, f64::max);
    Ok(worst / lambda as f64)
}

const ANGLE_TOL: f64 = 1e-12;

/// `Rz(θ) = exp(-iθZ/2)`, replaced by `S`, `Z`, `S†` or nothing at multiples of π/2.
fn rz(theta: f64) -> Option<GateKind> {
    let r = theta.rem_euclid(TAU);
    let near = |v: f64| (r - v).abs() < ANGLE_TOL;
    if near(0.0) || near(TAU) {
        None
    } else if near(FRAC_PI_2) {
        Some(GateKind::Clifford(CliffordGate::S))
    } else if near(PI) {
        Some(GateKind::Clifford(CliffordGate::Z))
    } else if near(3.0 * FRAC_PI_2) {
        Some(GateKind::Clifford(CliffordGate::Sdg))
    } else {
        Some(GateKind::Unitary(UnitaryMatrix::rotation(Letter::Z, theta)))
    }
}

fn rx(theta: f64) -> Option<GateKind> {
    let r = theta.rem_euclid(TAU);
    if r < ANGLE_TOL || TAU - r < ANGLE_TOL {
        None
    } else {
        Some(GateKind::Unitary(UnitaryMatrix::rotation(Letter::X, theta)))
    }
}

struct Builder {
    lattice: Lattice,
    layers: Vec<Vec<Gate>>,
    roles: Vec<LayerRole>,
}

impl Builder {
    fn push(&mut self, layer: Vec<Gate>, role: LayerRole) -> usize {
        if layer.is_empty() {
            return 0;
        }
        self.layers.push(layer);
        self.roles.push(role);
        1
    }

    /// Emits `exp(-iγ Σ J Z_a Z_b)` over `edges` on the current placement.
    fn zz_block(&mut self, edges: &[(usize, usize, f64)], pos: &[Coord], gamma: f64) -> usize {
        let mut matchings: Vec<Vec<(usize, usize, f64)>> = Vec::new();
        for &e in edges {
            match matchings
                .iter_mut()
                .find(|m| m.iter().all(|&(a, b, _)| a != e.0 && a != e.1 && b != e.0 && b != e.1))
            {
                Some(m) => m.push(e),
                None => matchings.push(vec![e]),
            }
        }
        let mut depth = 0;
        for m in matchings {
            let cnots: Vec<Gate> = m
                .iter()
                .map(|&(a, b, _)| Gate::clifford(CliffordGate::Cnot, &[pos[a], pos[b]]))
                .collect();
            let rots: Vec<Gate> = m
                .iter()
                .filter_map(|&(_, b, j)| rz(2.0 * gamma * j).map(|k| Gate::new(k, vec![pos[b]])))
                .collect();
            depth += self.push(cnots.clone(), LayerRole::Computing);
            depth += self.push(rots, LayerRole::Computing);
            depth += self.push(cnots, LayerRole::Computing);
        }
        depth
    }
}

/// Builds the layered circuit and its layout. Spin `i` starts on
/// `embedding.placement[i]`.
pub fn build_qaoa(
    model: &IsingModel,
    lattice: Lattice,
    params: &[QaoaParams],
    embedding: &Embedding,
    mixer: &Mixer,
) -> Result<(Circuit, QaoaLayout)> {
    let spins = model.num_spins();
    embedding.validate(lattice, spins)?;
    if let Mixer::Custom(block) = mixer {
        Circuit::new(lattice, block.clone()).ensure_valid()?;
    }
    let mut b = Builder { lattice, layers: Vec::new(), roles: Vec::new() };
    let mut pos = embedding.placement.clone();
    let mut out_layers = Vec::with_capacity(params.len());
    let lambda = embedding.swap_layers.len();

    for (j, &prm) in params.iter().enumerate() {
        let first_layer = b.layers.len() + 1;
        let schedule: Vec<&Vec<(Coord, Coord)>> = if j % 2 == 0 {
            embedding.swap_layers.iter().collect()
        } else {
            embedding.swap_layers.iter().rev().collect()
        };
        let mut done = vec![false; model.edges().len()];
        let mut edge_blocks = Vec::new();
        let mut computing_depths = Vec::with_capacity(schedule.len() + 1);
        for block in 0..=schedule.len() {
            let mut ready = Vec::new();
            for (e, &edge) in model.edges().iter().enumerate() {
                if !done[e] && pos[edge.0].manhattan(pos[edge.1]) == 1 {
                    done[e] = true;
                    edge_blocks.push((edge.0, edge.1, block));
                    ready.push(edge);
                }
            }
            let mut depth = 0;
            if block == 0 {
                let fields: Vec<Gate> = model
                    .fields()
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &h)| rz(2.0 * prm.gamma * h).map(|k| Gate::new(k, vec![pos[i]])))
                    .collect();
                depth += b.push(fields, LayerRole::Field);
            }
            depth += b.zz_block(&ready, &pos, prm.gamma);
            computing_depths.push(depth);
            if let Some(swaps) = schedule.get(block) {
                let gates = swaps.iter().map(|&(x, y)| Gate::clifford(CliffordGate::Swap, &[x, y])).collect();
                b.layers.push(gates);
                b.roles.push(LayerRole::Permuting);
                for p in pos.iter_mut() {
                    if let Some(&(x, y)) = swaps.iter().find(|&&(x, y)| *p == x || *p == y) {
                        *p = if *p == x { y } else { x };
                    }
                }
            }
        }
        if let Some(e) = done.iter().position(|d| !d) {
            let (a, c, _) = model.edges()[e];
            return Err(Error::MissingEdge(a, c));
        }
        let mixer_depth = match mixer {
            Mixer::TransverseField => {
                let layer: Vec<Gate> = pos
                    .iter()
                    .filter_map(|&s| rx(2.0 * prm.alpha).map(|k| Gate::new(k, vec![s])))
                    .collect();
                b.push(layer, LayerRole::Mixer)
            }
            Mixer::Custom(block) => block.iter().map(|l| b.push(l.clone(), LayerRole::Mixer)).sum(),
        };
        let c = computing_depths.iter().sum::<usize>() + mixer_depth;
        out_layers.push(VariationalLayer {
            params: prm,
            computing_depths,
            permuting_depth: lambda,
            mixer_depth,
            c,
            first_layer,
            last_layer: b.layers.len(),
            edge_blocks,
        });
    }
    let circuit = Circuit::new(b.lattice, b.layers);
    circuit.ensure_valid()?;
    let layout = QaoaLayout {
        layers: out_layers,
        lambda,
        roles: b.roles,
        initial_placement: embedding.placement.clone(),
        final_placement: pos,
        lattice_size: [lattice.lx, lattice.ly],
    };
    Ok((circuit, layout))
}
