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

//! Density-matrix oracle next to the full path sum on a random brickwork
//! circuit, across noise rates.

use pauliflow::circuit::{sample_random_model, Architecture, Lattice, UniformCliffordOrT};
use pauliflow::engine::accumulate_fw;
use pauliflow::oracle::{evolve_noisy, exact_noisy_expectation};
use pauliflow::pauli::{Letter, Observable, PauliString, ProductState};

fn main() -> pauliflow::Result<()> {
    let arch = Architecture::brickwork(Lattice::new(3, 2), 5);
    let c = sample_random_model(&arch, 0.5, &UniformCliffordOrT, 21)?;
    let pauli = PauliString::single(6, 2, Letter::Y)?;
    let state = ProductState::new(vec![[0.48, 0.6, 0.64]; 6])?;
    let fw = accumulate_fw(&c, &pauli, &state, None)?;
    println!("F_w = {:?}", fw.to_map());
    let obs = Observable::single(pauli);
    for p in [0.0, 0.05, 0.1, 0.3, 1.0] {
        let exact = exact_noisy_expectation(&c, &state, &obs, p)?;
        let rho = evolve_noisy(&c, &state, p)?;
        println!(
            "p={p:<4} oracle {exact:+.12} paths {:+.12} trace {:.3} physicality defect {:.1e}",
            fw.at_noise(p),
            rho.trace().re,
            rho.physicality_defect()
        );
    }
    Ok(())
}
