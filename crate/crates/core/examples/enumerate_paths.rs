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

//! Enumerates the Pauli paths of a one-T-gate circuit and prints each path with
//! its weight and value.

use pauliflow::circuit::{Circuit, Coord, Gate, Lattice};
use pauliflow::engine::enumerate;
use pauliflow::pauli::{PauliString, ProductState};

fn main() -> pauliflow::Result<()> {
    let c = Circuit::validated(Lattice::new(1, 1), vec![vec![Gate::t(Coord::new(0, 0))]])?;
    let obs: PauliString = "X".parse()?;
    let state = ProductState::new(vec![[2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]])?;
    let stats = enumerate(&c, &obs, &state, None, |r| {
        let strings: Vec<String> = r.strings.iter().map(ToString::to_string).collect();
        println!("{:<8} weight {} magic {} f = {:+.6}", strings.join(" <- "), r.weight, r.magic, r.value);
    })?;
    println!("N_w = {:?}", stats.counts);
    Ok(())
}
