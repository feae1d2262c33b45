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

//! Truncation error of the majority-vote counterexample: single blocks, then
//! the mixed observable over a sweep of cutoffs.

use pauliflow::counterexample::{default_g, mixed_observable_error, truncation_error, verify_properties};

fn main() -> pauliflow::Result<()> {
    let p = 0.1;
    for k in [1, 4, 8, 16] {
        let row: Vec<String> = (0..=4 * k).step_by(k.max(2)).map(|l| format!("{:+.4}", truncation_error(k, l, p))).collect();
        let ok = verify_properties(k, p)?.all_passed();
        println!("k={k:<2} E(ell) = {}  properties {}", row.join(" "), if ok { "ok" } else { "FAILED" });
    }
    let n = 3 << 14;
    let g = default_g(n);
    println!("n = {n}, g = {g}");
    let mut prev: Option<f64> = None;
    for ell in (32..=60).step_by(2) {
        let m = mixed_observable_error(n, g, ell, p)?;
        let Some((k, _)) = m.witness else { continue };
        let ratio = prev.map_or(String::new(), |v| format!("ratio {:.2}", m.value.abs() / v));
        println!("ell={ell}: E = {:+.6}  witness k = {k}  {ratio}", m.value);
        prev = Some(m.value.abs());
    }
    Ok(())
}
