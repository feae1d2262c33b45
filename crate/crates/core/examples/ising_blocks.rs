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

//! Exact and block-approximate ground energies of a random `±1` grid model.

use pauliflow::circuit::Lattice;
use pauliflow::ising::{approx_ground_energy_with_side, exact_ground_energy, IsingModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> pauliflow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let model = IsingModel::grid(Lattice::new(5, 5), |_, _| if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
    let exact = exact_ground_energy(&model)?;
    println!("exact E0 = {}", exact.energy);
    for l in 1..=5 {
        let a = approx_ground_energy_with_side(&model, l)?;
        println!(
            "L={l}: E0' = {:>5} error {:>4} bound {:>6.1} ({} blocks, {} edges dropped)",
            a.energy,
            a.energy - exact.energy,
            a.bound,
            a.blocks,
            a.dropped_edges
        );
    }
    Ok(())
}
