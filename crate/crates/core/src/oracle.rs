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

//! Dense reference simulators: density matrices with depolarizing noise, a
//! pure-state simulator, and untruncated Pauli-path evaluation.
//!
//! Basis index bit `q` is qubit `q`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::engine::{accumulate_fw_with, EngineOptions};
use crate::error::{invalid, Error, Result};
use crate::pauli::{Observable, PauliString, ProductState, UnitaryMatrix};

pub const MAX_DENSE_QUBITS: usize = 10;
/// Path budget for [`exact_pauli_transfer`].
pub const MAX_TRANSFER_PATHS: u64 = 1 << 24;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    /// Row-major `2^n × 2^n`.
    data: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge { what: "dense qubit count", size: n, limit: MAX_DENSE_QUBITS });
    }
    Ok(())
}

impl DensityMatrix {
    pub fn from_product_state(state: &ProductState) -> Result<Self> {
        let n = state.num_qubits();
        check_size(n)?;
        let mut data = vec![Complex64::new(1.0, 0.0)];
        let mut dim = 1;
        for r in state.bloch() {
            let q = [
                [Complex64::new((1.0 + r[2]) / 2.0, 0.0), Complex64::new(r[0] / 2.0, -r[1] / 2.0)],
                [Complex64::new(r[0] / 2.0, r[1] / 2.0), Complex64::new((1.0 - r[2]) / 2.0, 0.0)],
            ];
            // New qubit becomes the most significant bit.
            let nd = dim * 2;
            let mut next = vec![ZERO; nd * nd];
            for (a, row) in q.iter().enumerate() {
                for (b, &v) in row.iter().enumerate() {
                    for i in 0..dim {
                        for j in 0..dim {
                            next[(a * dim + i) * nd + (b * dim + j)] = v * data[i * dim + j];
                        }
                    }
                }
            }
            data = next;
            dim = nd;
        }
        Ok(Self { n, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim(), self.dim(), &self.data)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `ρ → U ρ U†` with `U` acting on `qubits` (local bit `i` on `qubits[i]`).
    pub fn apply_unitary(&mut self, u: &UnitaryMatrix, qubits: &[usize]) {
        let dim = self.dim();
        let k = qubits.len();
        let local = 1 << k;
        let m = u.matrix();
        let mask: usize = qubits.iter().map(|&q| 1 << q).sum();
        let offsets: Vec<usize> = (0..local)
            .map(|l| qubits.iter().enumerate().filter(|(i, _)| (l >> i) & 1 == 1).map(|(_, &q)| 1 << q).sum())
            .collect();
        let mut buf = vec![ZERO; local];
        // Left multiplication, column by column.
        for col in 0..dim {
            for base in (0..dim).filter(|b| b & mask == 0) {
                for (l, &o) in offsets.iter().enumerate() {
                    buf[l] = self.data[(base | o) * dim + col];
                }
                for (a, &o) in offsets.iter().enumerate() {
                    let mut s = ZERO;
                    for (b, &v) in buf.iter().enumerate() {
                        s += m[(a, b)] * v;
                    }
                    self.data[(base | o) * dim + col] = s;
                }
            }
        }
        // Right multiplication by U†, row by row.
        for row in 0..dim {
            for base in (0..dim).filter(|b| b & mask == 0) {
                for (l, &o) in offsets.iter().enumerate() {
                    buf[l] = self.data[row * dim + (base | o)];
                }
                for (a, &o) in offsets.iter().enumerate() {
                    let mut s = ZERO;
                    for (b, &v) in buf.iter().enumerate() {
                        s += v * m[(a, b)].conj();
                    }
                    self.data[row * dim + (base | o)] = s;
                }
            }
        }
    }

    /// `(1 − p) ρ + p · I/2 ⊗ tr_q ρ` on qubit `q`.
    pub fn depolarize(&mut self, q: usize, p: f64) {
        let dim = self.dim();
        let bit = 1 << q;
        for r in (0..dim).filter(|r| r & bit == 0) {
            for c in (0..dim).filter(|c| c & bit == 0) {
                let a = self.data[r * dim + c];
                let d = self.data[(r | bit) * dim + (c | bit)];
                let mix = (a + d) * (p / 2.0);
                self.data[r * dim + c] = a * (1.0 - p) + mix;
                self.data[(r | bit) * dim + (c | bit)] = d * (1.0 - p) + mix;
                self.data[r * dim + (c | bit)] *= 1.0 - p;
                self.data[(r | bit) * dim + c] *= 1.0 - p;
            }
        }
    }

    pub fn depolarize_all(&mut self, p: f64) {
        for q in 0..self.n {
            self.depolarize(q, p);
        }
    }

    /// `tr(P ρ)`.
    pub fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let dim = self.dim();
        let (mut x, mut z, mut ny) = (0usize, 0usize, 0u32);
        for q in 0..self.n {
            let (bx, bz) = p.letter(q).bits();
            x |= (bx as usize) << q;
            z |= (bz as usize) << q;
            ny += (bx && bz) as u32;
        }
        let phase = Complex64::i().powu(ny);
        let mut s = ZERO;
        for r in 0..dim {
            let sign = if (r & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            s += self.data[r * dim + (r ^ x)] * sign;
        }
        (s * phase).re
    }

    pub fn expectation(&self, obs: &Observable) -> f64 {
        obs.terms().iter().map(|(a, p)| a * self.pauli_expectation(p)).sum()
    }

    /// Largest violation of trace one, hermiticity and positivity.
    pub fn physicality_defect(&self) -> f64 {
        let m = self.to_matrix();
        let trace = (self.trace() - Complex64::new(1.0, 0.0)).norm();
        let herm = (&m - m.adjoint()).camax();
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eig = h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        trace.max(herm).max((-min_eig).max(0.0))
    }
}

fn check_inputs(circuit: &Circuit, state: &ProductState, obs: &Observable, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("noise rate p = {p} outside [0, 1]")));
    }
    circuit.ensure_valid()?;
    let n = circuit.num_qubits();
    for got in [state.num_qubits(), obs.num_qubits()] {
        if got != n {
            return Err(Error::DimensionMismatch { expected: n, got });
        }
    }
    Ok(())
}

fn qubit_indices(circuit: &Circuit, gate: &crate::circuit::Gate) -> Vec<usize> {
    gate.qubits.iter().map(|&c| circuit.lattice().index(c)).collect()
}

/// Final density matrix of noise, then each layer followed by noise.
pub fn evolve_noisy(circuit: &Circuit, state: &ProductState, p: f64) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::from_product_state(state)?;
    rho.depolarize_all(p);
    for layer in circuit.layers() {
        for gate in layer {
            rho.apply_unitary(&gate.kind.unitary(), &qubit_indices(circuit, gate));
        }
        rho.depolarize_all(p);
    }
    Ok(rho)
}

/// `tr(O Φ(ρ_0))` by dense density-matrix simulation.
pub fn exact_noisy_expectation(circuit: &Circuit, state: &ProductState, obs: &Observable, p: f64) -> Result<f64> {
    check_inputs(circuit, state, obs, p)?;
    check_size(circuit.num_qubits())?;
    Ok(evolve_noisy(circuit, state, p)?.expectation(obs))
}

/// Noiseless expectation by state-vector simulation. Every qubit of `state`
/// must be pure.
pub fn pure_expectation(circuit: &Circuit, state: &ProductState, obs: &Observable) -> Result<f64> {
    check_inputs(circuit, state, obs, 0.0)?;
    let n = circuit.num_qubits();
    if n > 20 {
        return Err(Error::TooLarge { what: "state-vector qubit count", size: n, limit: 20 });
    }
    let mut psi = vec![Complex64::new(1.0, 0.0)];
    for r in state.bloch() {
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(invalid("state-vector simulation needs pure single-qubit states"));
        }
        let theta = r[2].clamp(-1.0, 1.0).acos();
        let phi = r[1].atan2(r[0]);
        let a = Complex64::new((theta / 2.0).cos(), 0.0);
        let b = Complex64::from_polar((theta / 2.0).sin(), phi);
        psi = [a, b].iter().flat_map(|&amp| psi.iter().map(move |&v| amp * v)).collect();
    }
    for layer in circuit.layers() {
        for gate in layer {
            let qs = qubit_indices(circuit, gate);
            let u = gate.kind.unitary();
            let m = u.matrix();
            let mask: usize = qs.iter().map(|&q| 1 << q).sum();
            let local = 1 << qs.len();
            let offsets: Vec<usize> = (0..local)
                .map(|l| qs.iter().enumerate().filter(|(i, _)| (l >> i) & 1 == 1).map(|(_, &q)| 1 << q).sum())
                .collect();
            let mut buf = vec![ZERO; local];
            for base in (0..psi.len()).filter(|b| b & mask == 0) {
                for (l, &o) in offsets.iter().enumerate() {
                    buf[l] = psi[base | o];
                }
                for (a, &o) in offsets.iter().enumerate() {
                    psi[base | o] = (0..local).map(|b| m[(a, b)] * buf[b]).sum();
                }
            }
        }
    }
    let mut total = 0.0;
    for (coeff, pauli) in obs.terms() {
        let (mut x, mut z, mut ny) = (0usize, 0usize, 0u32);
        for q in 0..n {
            let (bx, bz) = pauli.letter(q).bits();
            x |= (bx as usize) << q;
            z |= (bz as usize) << q;
            ny += (bx && bz) as u32;
        }
        let phase = Complex64::i().powu(ny);
        // ⟨ψ|P|ψ⟩ with P|c⟩ = i^{#Y} (−1)^{c·z} |c ⊕ x⟩.
        let s: Complex64 = (0..psi.len())
            .map(|c| {
                let sign = if (c & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                psi[c ^ x].conj() * psi[c] * sign
            })
            .sum();
        total += coeff * (s * phase).re;
    }
    Ok(total)
}

/// Untruncated path sum with `(1 − p)^{|s|}` damping. Aborts past
/// [`MAX_TRANSFER_PATHS`] paths.
pub fn exact_pauli_transfer(circuit: &Circuit, obs: &Observable, state: &ProductState, p: f64) -> Result<f64> {
    check_inputs(circuit, state, obs, p)?;
    let opts = EngineOptions { max_paths: Some(MAX_TRANSFER_PATHS), ..Default::default() };
    let mut total = crate::engine::Neumaier::default();
    for (a, pauli) in obs.terms() {
        let (fw, _) = accumulate_fw_with(circuit, pauli, state, None, &opts)?;
        total.add(a * fw.at_noise(p));
    }
    Ok(total.value())
}

#[derive(Clone, Debug, Serialize)]
pub struct ChannelReport {
    pub p: f64,
    /// Output Bloch components for X, Y, Z unit inputs, divided by the input.
    pub damping: [f64; 3],
    /// Deviation of the maximally mixed state after the channel.
    pub identity_defect: f64,
    pub max_deviation: f64,
}

impl ChannelReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Output Bloch vector of one depolarized qubit.
pub fn depolarize_bloch(p: f64, r: [f64; 3]) -> Result<[f64; 3]> {
    let state = ProductState::new(vec![r])?;
    let mut rho = DensityMatrix::from_product_state(&state)?;
    rho.depolarize(0, p);
    let e = |l| rho.pauli_expectation(&PauliString::from_letters(&[l]));
    use crate::pauli::Letter;
    Ok([e(Letter::X), e(Letter::Y), e(Letter::Z)])
}

/// Checks that the single-qubit channel fixes `I/2` and scales each Bloch
/// component by `1 − p`.
pub fn depolarize_channel_check(p: f64) -> Result<ChannelReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("noise rate p = {p} outside [0, 1]")));
    }
    let mut damping = [0.0; 3];
    let mut dev: f64 = 0.0;
    for axis in 0..3 {
        let mut r = [0.0; 3];
        r[axis] = 1.0;
        let out = depolarize_bloch(p, r)?;
        damping[axis] = out[axis];
        for (i, v) in out.iter().enumerate() {
            let want = if i == axis { 1.0 - p } else { 0.0 };
            dev = dev.max((v - want).abs());
        }
    }
    let mixed = depolarize_bloch(p, [0.0; 3])?;
    let identity_defect = mixed.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(ChannelReport { p, damping, identity_defect, max_deviation: dev.max(identity_defect) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Coord, Gate, Lattice};
    use crate::pauli::{CliffordGate, Letter};

    fn z0(n: usize) -> Observable {
        Observable::single(PauliString::single(n, 0, Letter::Z).unwrap())
    }

    #[test]
    fn zero_layer_circuit_damps_once() {
        let c = Circuit::empty(Lattice::new(1, 1));
        for p in [0.0, 0.2, 1.0] {
            let v = exact_noisy_expectation(&c, &ProductState::zeros(1), &z0(1), p).unwrap();
            assert!((v - (1.0 - p)).abs() < 1e-14);
        }
    }

    #[test]
    fn v_gate_value() {
        let c = crate::counterexample::circuit(1).unwrap();
        let v = exact_noisy_expectation(&c, &ProductState::zeros(3), &z0(3), 0.1).unwrap();
        assert!((v - 0.88695).abs() < 1e-12);
        let t = exact_pauli_transfer(&c, &z0(3), &ProductState::zeros(3), 0.1).unwrap();
        assert!((t - v).abs() < 1e-12);
    }

    #[test]
    fn dense_matches_pure_at_zero_noise() {
        let l = Lattice::new(2, 1);
        let c = Circuit::validated(
            l,
            vec![
                vec![Gate::clifford(CliffordGate::H, &[Coord::new(0, 0)]), Gate::t(Coord::new(1, 0))],
                vec![Gate::clifford(CliffordGate::Cnot, &[Coord::new(0, 0), Coord::new(1, 0)])],
                vec![Gate::t(Coord::new(1, 0))],
            ],
        )
        .unwrap();
        let s = ProductState::new(vec![[0.6, 0.0, 0.8], [0.0, 1.0, 0.0]]).unwrap();
        let o = Observable::parse(2, "0.5:X0Y1, -1:Z1, 0.25:Y0").unwrap();
        let a = exact_noisy_expectation(&c, &s, &o, 0.0).unwrap();
        let b = pure_expectation(&c, &s, &o).unwrap();
        assert!((a - b).abs() < 1e-12);
        let rho = evolve_noisy(&c, &s, 0.2).unwrap();
        assert!(rho.physicality_defect() < 1e-10);
    }

    #[test]
    fn channel_action() {
        let r = depolarize_channel_check(0.0).unwrap();
        assert!(r.passed(1e-15) && r.damping == [1.0; 3]);
        let r = depolarize_channel_check(1.0).unwrap();
        assert!(r.passed(1e-15) && r.damping == [0.0; 3]);
        let out = depolarize_bloch(0.3, [1.0, 0.0, 0.0]).unwrap();
        assert!((out[0] - 0.7).abs() < 1e-15 && out[1] == 0.0 && out[2] == 0.0);
    }

    #[test]
    fn too_many_qubits() {
        let c = Circuit::empty(Lattice::new(11, 1));
        assert!(exact_noisy_expectation(&c, &ProductState::zeros(11), &z0(11), 0.1).is_err());
    }
}
