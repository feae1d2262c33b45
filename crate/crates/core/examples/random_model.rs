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

//! Mean path count of the random T-doped brickwork ensemble against the
//! `(1 + Q)^ℓ` bound.

use pauliflow::circuit::{Architecture, Lattice, UniformCliffordOrT};
use pauliflow::engine::{random_model_statistics, EngineOptions};
use pauliflow::pauli::{Letter, PauliString};

fn main() -> pauliflow::Result<()> {
    let arch = Architecture::brickwork(Lattice::new(3, 3), 4);
    let obs = PauliString::single(9, 4, Letter::X)?;
    for q in [0.1, 0.3, 0.6] {
        for ell in [8, 12, 16] {
            let s = random_model_statistics(&arch, q, &UniformCliffordOrT, &obs, 200, ell, 7, &EngineOptions::default())?;
            println!("Q={q:.1} ell={ell:<2} mean {:>7.3} +- {:.3}  bound {:>9.3}", s.mean, s.allowance, s.bound);
        }
    }
    Ok(())
}
