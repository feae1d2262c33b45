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

//! Layered circuits on a 2D square lattice.

mod json;
pub mod qaoa;
pub mod random;
pub mod sparseness;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{CliffordGate, PauliTransfer, UnitaryMatrix};

pub use json::{CircuitJson, GateJson};
pub use qaoa::{build_qaoa, qaoa_sparseness_bound, Embedding, Mixer, QaoaLayout, QaoaParams};
pub use random::{sample_random_model, AlwaysTWhenFree, Architecture, GatePolicy, Slot, UniformCliffordOrT};
pub use sparseness::{check_sparseness, max_magic_fraction, verify_witness, FractionScan, SparsenessReport, SparsenessStatus};

/// A lattice site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Coord {
    pub x: usize,
    pub y: usize,
}

impl Coord {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn manhattan(self, other: Coord) -> usize {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

impl From<[usize; 2]> for Coord {
    fn from([x, y]: [usize; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Coord> for [usize; 2] {
    fn from(c: Coord) -> Self {
        [c.x, c.y]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Dimensions of the square lattice. Qubit index of `(x, y)` is `x + lx·y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub lx: usize,
    pub ly: usize,
}

impl Lattice {
    pub const fn new(lx: usize, ly: usize) -> Self {
        Self { lx, ly }
    }

    pub fn num_qubits(&self) -> usize {
        self.lx * self.ly
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x < self.lx && c.y < self.ly
    }

    pub fn index(&self, c: Coord) -> usize {
        c.x + self.lx * c.y
    }

    pub fn coord(&self, q: usize) -> Coord {
        Coord::new(q % self.lx, q / self.lx)
    }

    pub fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.num_qubits()).map(|q| self.coord(q))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    Clifford(CliffordGate),
    T,
    Unitary(UnitaryMatrix),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Clifford(g) => g.arity(),
            GateKind::T => 1,
            GateKind::Unitary(u) => u.num_qubits(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Clifford(g) => g.name(),
            GateKind::T => "T",
            GateKind::Unitary(_) => "U",
        }
    }

    pub fn unitary(&self) -> UnitaryMatrix {
        match self {
            GateKind::Clifford(g) => g.unitary(),
            GateKind::T => crate::pauli::t_matrix(),
            GateKind::Unitary(u) => u.clone(),
        }
    }

    pub fn transfer(&self) -> Result<PauliTransfer> {
        match self {
            GateKind::Clifford(g) => Ok(PauliTransfer::from_clifford(*g)),
            GateKind::T => Ok(PauliTransfer::t_gate()),
            GateKind::Unitary(u) => PauliTransfer::from_unitary(u),
        }
    }

    /// Non-Clifford single-qubit gates: T and generic rotations that branch.
    /// These are what the sparseness analysis counts as magic.
    pub fn is_magic(&self) -> bool {
        match self {
            GateKind::Clifford(_) => false,
            GateKind::T => true,
            GateKind::Unitary(u) => {
                u.num_qubits() == 1 && PauliTransfer::from_unitary(u).map(|t| !t.is_clifford()).unwrap_or(true)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<Coord>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<Coord>) -> Self {
        Self { kind, qubits }
    }

    pub fn clifford(g: CliffordGate, qubits: &[Coord]) -> Self {
        Self::new(GateKind::Clifford(g), qubits.to_vec())
    }

    pub fn t(q: Coord) -> Self {
        Self::new(GateKind::T, vec![q])
    }

    pub fn unitary(u: UnitaryMatrix, qubits: &[Coord]) -> Self {
        Self::new(GateKind::Unitary(u), qubits.to_vec())
    }
}

/// A problem found by [`Circuit::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutsideLattice { layer: usize, gate: usize, site: Coord },
    Arity { layer: usize, gate: usize, expected: usize, got: usize },
    RepeatedSite { layer: usize, gate: usize, site: Coord },
    Overlap { layer: usize, site: Coord },
    NonLocal { layer: usize, gate: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutsideLattice { layer, gate, site } => {
                write!(f, "layer {layer} gate {gate}: site {site} outside the lattice")
            }
            Violation::Arity { layer, gate, expected, got } => {
                write!(f, "layer {layer} gate {gate}: expects {expected} qubits, got {got}")
            }
            Violation::RepeatedSite { layer, gate, site } => {
                write!(f, "layer {layer} gate {gate}: site {site} repeated")
            }
            Violation::Overlap { layer, site } => write!(f, "layer {layer}: site {site} used by two gates"),
            Violation::NonLocal { layer, gate } => {
                write!(f, "layer {layer} gate {gate}: support is not nearest-neighbour connected")
            }
        }
    }
}

/// `d` layers of gates with disjoint supports. Layers are numbered from 1 in
/// reports; `layers[0]` is applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    lattice: Lattice,
    layers: Vec<Vec<Gate>>,
}

impl Circuit {
    pub fn new(lattice: Lattice, layers: Vec<Vec<Gate>>) -> Self {
        Self { lattice, layers }
    }

    /// Constructs and rejects on any violation.
    pub fn validated(lattice: Lattice, layers: Vec<Vec<Gate>>) -> Result<Self> {
        let c = Self::new(lattice, layers);
        c.ensure_valid()?;
        Ok(c)
    }

    pub fn empty(lattice: Lattice) -> Self {
        Self::new(lattice, Vec::new())
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn num_qubits(&self) -> usize {
        self.lattice.num_qubits()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn push_layer(&mut self, layer: Vec<Gate>) {
        self.layers.push(layer);
    }

    pub fn extend(&mut self, other: Circuit) {
        self.layers.extend(other.layers);
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (li, layer) in self.layers.iter().enumerate() {
            let layer_no = li + 1;
            let mut used = vec![false; self.num_qubits()];
            for (gi, gate) in layer.iter().enumerate() {
                let expected = gate.kind.arity();
                if gate.qubits.len() != expected {
                    out.push(Violation::Arity {
                        layer: layer_no,
                        gate: gi,
                        expected,
                        got: gate.qubits.len(),
                    });
                }
                let mut inside = true;
                for (i, &site) in gate.qubits.iter().enumerate() {
                    if !self.lattice.contains(site) {
                        out.push(Violation::OutsideLattice { layer: layer_no, gate: gi, site });
                        inside = false;
                        continue;
                    }
                    if gate.qubits[..i].contains(&site) {
                        out.push(Violation::RepeatedSite { layer: layer_no, gate: gi, site });
                        continue;
                    }
                    let q = self.lattice.index(site);
                    if used[q] {
                        out.push(Violation::Overlap { layer: layer_no, site });
                    }
                    used[q] = true;
                }
                if inside && !support_connected(&gate.qubits) {
                    out.push(Violation::NonLocal { layer: layer_no, gate: gi });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<_> = v.iter().map(ToString::to_string).collect();
            Err(Error::InvalidCircuit(msgs.join("; ")))
        }
    }

    /// Positions of every T gate, keyed by 1-based layer number.
    pub fn t_census(&self) -> BTreeMap<usize, Vec<Coord>> {
        self.census(|k| matches!(k, GateKind::T))
    }

    /// Like [`Circuit::t_census`] but also counting non-Clifford single-qubit rotations.
    pub fn magic_census(&self) -> BTreeMap<usize, Vec<Coord>> {
        self.census(GateKind::is_magic)
    }

    fn census(&self, pred: impl Fn(&GateKind) -> bool) -> BTreeMap<usize, Vec<Coord>> {
        let mut map = BTreeMap::new();
        for (li, layer) in self.layers.iter().enumerate() {
            let sites: Vec<Coord> = layer
                .iter()
                .filter(|g| pred(&g.kind))
                .flat_map(|g| g.qubits.iter().copied())
                .collect();
            if !sites.is_empty() {
                map.insert(li + 1, sites);
            }
        }
        map
    }

    pub fn is_clifford(&self) -> bool {
        self.layers
            .iter()
            .flatten()
            .all(|g| g.kind.transfer().map(|t| t.is_clifford()).unwrap_or(false))
    }
}

fn support_connected(sites: &[Coord]) -> bool {
    if sites.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; sites.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..sites.len() {
            if !seen[j] && sites[i].manhattan(sites[j]) == 1 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: usize, y: usize) -> Coord {
        Coord::new(x, y)
    }

    #[test]
    fn empty_circuit_is_valid() {
        assert!(Circuit::empty(Lattice::new(2, 2)).validate().is_empty());
    }

    #[test]
    fn overlapping_gates_are_reported() {
        let circuit = Circuit::new(
            Lattice::new(2, 1),
            vec![vec![Gate::clifford(CliffordGate::H, &[c(0, 0)]), Gate::t(c(0, 0))]],
        );
        assert_eq!(circuit.validate(), vec![Violation::Overlap { layer: 1, site: c(0, 0) }]);
    }

    #[test]
    fn non_adjacent_two_qubit_gate_is_reported() {
        let circuit = Circuit::new(
            Lattice::new(3, 1),
            vec![vec![Gate::clifford(CliffordGate::Cnot, &[c(0, 0), c(2, 0)])]],
        );
        assert_eq!(circuit.validate(), vec![Violation::NonLocal { layer: 1, gate: 0 }]);
    }

    #[test]
    fn arity_and_bounds_are_checked() {
        let circuit = Circuit::new(
            Lattice::new(2, 1),
            vec![vec![
                Gate::clifford(CliffordGate::Cz, &[c(0, 0)]),
                Gate::clifford(CliffordGate::X, &[c(5, 0)]),
            ]],
        );
        let v = circuit.validate();
        assert!(matches!(v[0], Violation::Arity { expected: 2, got: 1, .. }));
        assert!(matches!(v[1], Violation::OutsideLattice { .. }));
    }

    #[test]
    fn three_qubit_line_is_local() {
        let v = crate::counterexample::v_gate();
        let ok = Circuit::new(Lattice::new(3, 1), vec![vec![Gate::unitary(v.clone(), &[c(0, 0), c(1, 0), c(2, 0)])]]);
        assert!(ok.is_valid());
        let bent = Circuit::new(Lattice::new(2, 2), vec![vec![Gate::unitary(v, &[c(0, 0), c(1, 1), c(0, 1)])]]);
        assert!(bent.is_valid());
    }

    #[test]
    fn t_census_reports_positions_by_layer() {
        let clifford = Circuit::new(Lattice::new(1, 1), vec![vec![Gate::clifford(CliffordGate::H, &[c(0, 0)])]]);
        assert!(clifford.t_census().is_empty());
        let one_t = Circuit::new(Lattice::new(1, 1), vec![vec![Gate::t(c(0, 0))]]);
        assert_eq!(one_t.t_census(), BTreeMap::from([(1, vec![c(0, 0)])]));
        let cex = crate::counterexample::circuit(2).unwrap();
        assert!(cex.t_census().is_empty());
    }

    #[test]
    fn rotations_count_as_magic_unless_clifford() {
        use crate::pauli::Letter;
        assert!(GateKind::Unitary(UnitaryMatrix::rotation(Letter::Z, 0.3)).is_magic());
        assert!(!GateKind::Unitary(UnitaryMatrix::rotation(Letter::Z, std::f64::consts::FRAC_PI_2)).is_magic());
        assert!(GateKind::T.is_magic());
        assert!(!GateKind::Unitary(crate::counterexample::v_gate()).is_magic());
    }
}
