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

//! Roots of weight polynomials and a fragility certificate for a polynomial
//! with a cluster of small real roots.

use pauliflow::counterexample::analytic_polynomial;
use pauliflow::engine::WeightPolynomial;
use pauliflow::poly::{check_radius_bounds, find_roots, fragility_certificate, l2_norm, Fragility, FragilityOptions};

fn main() -> pauliflow::Result<()> {
    for k in 1..=3 {
        let f = analytic_polynomial(k);
        let r = find_roots(&f)?;
        let mags: Vec<String> = r.roots.iter().map(|z| format!("{:.4}", z.norm())).collect();
        let radius_ok = check_radius_bounds(&f, &r)?.iter().all(|c| c.holds);
        println!("k={k}: |F|_2 = {:.4}, |roots| = [{}], radius bounds {}", l2_norm(&f), mags.join(", "), radius_ok);
    }

    let roots: Vec<f64> = (0..12).map(|i| -0.4 + 0.8 * i as f64 / 11.0).chain([-3.0]).collect();
    let mut q = WeightPolynomial::from_terms([(0, 1.0)]);
    for r in &roots {
        q = q.mul(&WeightPolynomial::from_terms([(0, -r), (1, 1.0)]));
    }
    let opts = FragilityOptions { radius: 0.5, epsilon: 0.2, g_threshold: 12, ..Default::default() };
    match fragility_certificate(&q, &opts)? {
        Fragility::Certificate(c) => {
            println!("certificate verified: {}, slope at 1 = {:.3}", c.verified, c.slope_at_one);
            for p in c.points.iter().step_by(40) {
                println!("  x = {:.3}: |Q| = {:.3e} <= {:.3e}", p.x, p.value, p.envelope);
            }
        }
        Fragility::Inapplicable { reason } => println!("inapplicable: {reason}"),
    }
    Ok(())
}
