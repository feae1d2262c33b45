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

//! Builds QAOA circuits for a lattice-native model and for `K_{3,3}` routed
//! through a SWAP network, then lets the dispatcher choose the branch.

use pauliflow::circuit::{build_qaoa, Embedding, Lattice, Mixer, QaoaParams};
use pauliflow::ising::{theorem2_dispatch, DispatchOptions, IsingModel};

fn main() -> pauliflow::Result<()> {
    let params = [QaoaParams { gamma: 0.4, alpha: 0.3 }];

    let lat = Lattice::new(3, 3);
    let grid = IsingModel::grid(lat, |a, b| if (a.x + b.y) % 2 == 0 { 1.0 } else { -1.0 });
    let (c, layout) = build_qaoa(&grid, lat, &params, &Embedding::native(lat, 9), &Mixer::TransverseField)?;
    let opts = DispatchOptions { epsilon: 1.5, ..Default::default() };
    let r = theorem2_dispatch(&grid, &c, &layout, &opts)?;
    println!("3x3 grid: lambda {} -> {:?}, energy {:.3} +- {:.3}", r.lambda, r.branch, r.energy, r.bound);

    let lat = Lattice::new(3, 2);
    let edges = (0..3).flat_map(|a| (3..6).map(move |b| (a, b, 1.0))).collect();
    let k33 = IsingModel::new(6, edges, vec![0.0; 6])?;
    let (c, layout) = build_qaoa(&k33, lat, &params, &Embedding::linear_swap_network(lat, 6)?, &Mixer::TransverseField)?;
    let r = theorem2_dispatch(&k33, &c, &layout, &DispatchOptions::default())?;
    println!(
        "K33:      lambda {} -> {:?}, noisy energy {:.6}, Q = {:.1}, depth {}",
        r.lambda,
        r.branch,
        r.energy,
        r.q.unwrap_or(f64::NAN),
        c.depth()
    );
    println!("          {}", r.note);
    Ok(())
}
