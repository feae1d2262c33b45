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

//! Checks a Clifford+T circuit for `(Q, k)`-sparseness and reports the largest
//! magic fraction over connected point sets.

use pauliflow::circuit::{check_sparseness, max_magic_fraction, Circuit};

fn main() -> pauliflow::Result<()> {
    let c = Circuit::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/clifford_t_2x2.json"))?;
    let cap = 8;
    for k in [2, 4, 6] {
        let scan = max_magic_fraction(&c, k, cap)?;
        println!("k={k}: max magic fraction {:.3} (exhaustive: {})", scan.max_fraction, scan.exhaustive);
        for q in [0.25, 0.5] {
            let r = check_sparseness(&c, q, k, cap)?;
            println!("    Q={q}: {:?} after {} subsets", r.status, r.subsets_checked);
        }
    }
    Ok(())
}
