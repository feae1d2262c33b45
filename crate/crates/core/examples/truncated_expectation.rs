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

//! Truncated expectation of a small Clifford+T circuit at several cutoffs,
//! compared with the exact noisy value.

use pauliflow::circuit::Circuit;
use pauliflow::engine::{expectation_truncated, EngineOptions};
use pauliflow::oracle::exact_noisy_expectation;
use pauliflow::pauli::{Observable, ProductState};

fn main() -> pauliflow::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/clifford_t_2x2.json");
    let circuit = Circuit::load(path)?;
    let n = circuit.num_qubits();
    let obs = Observable::parse(n, "X0, 0.5:Z1Z3")?;
    let state = ProductState::new(vec![[0.48, 0.6, 0.64]; n])?;
    let p = 0.2;
    let exact = exact_noisy_expectation(&circuit, &state, &obs, p)?;
    println!("exact  {exact:+.10}");
    for ell in [10, 12, 14, 16, 18, 20, 24] {
        let est = expectation_truncated(&circuit, &obs, &state, p, Some(ell), None, &EngineOptions::default())?;
        println!("ell={ell:<3} {:+.10}  |delta| = {:.2e}", est.value, (est.value - exact).abs());
    }
    Ok(())
}
