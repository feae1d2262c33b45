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

//! The majority-vote circuit on which weight truncation fails.
//!
//! The circuit is one layer of `V` gates on rows of a `3 × m` lattice, gate `i`
//! on qubits `3i, 3i+1, 3i+2`. The observable `O_k` places `Z` on the first
//! qubit of each of the first `k` gates, i.e. 0-based qubits `0, 3, …, 3(k−1)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, Coord, Gate, Lattice};
use crate::engine::WeightPolynomial;
use crate::error::{invalid, Result};
use crate::pauli::{Letter, Observable, PauliString, UnitaryMatrix};

/// `1 − √(2/3)`: the largest noise rate for which the magnitude property applies.
pub fn magnitude_threshold() -> f64 {
    1.0 - (2.0f64 / 3.0).sqrt()
}

/// Permutation exchanging `|100⟩` and `|011⟩`, fixing the rest. Qubit 1 is
/// local bit 0, so these are basis indices 1 and 6.
pub fn v_gate() -> UnitaryMatrix {
    let mut m = vec![Complex64::new(0.0, 0.0); 64];
    for col in 0..8usize {
        let row = match col {
            1 => 6,
            6 => 1,
            c => c,
        };
        m[row * 8 + col] = Complex64::new(1.0, 0.0);
    }
    UnitaryMatrix::from_row_major(&m).expect("permutation matrices are unitary")
}

/// `m` parallel V gates on a `3 × m` lattice.
pub fn circuit(m: usize) -> Result<Circuit> {
    if m == 0 {
        return Err(invalid("need at least one V gate"));
    }
    let v = v_gate();
    let layer = (0..m)
        .map(|y| Gate::unitary(v.clone(), &[Coord::new(0, y), Coord::new(1, y), Coord::new(2, y)]))
        .collect();
    Circuit::validated(Lattice::new(3, m), vec![layer])
}

/// `O_k` on `3m` qubits.
pub fn observable(m: usize, k: usize) -> Result<PauliString> {
    if k == 0 || k > m {
        return Err(invalid(format!("need 1 <= k <= {m}, got {k}")));
    }
    let sites: Vec<(usize, Letter)> = (0..k).map(|i| (3 * i, Letter::Z)).collect();
    PauliString::from_sparse(3 * m, &sites)
}

fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ln_binomial(n: usize, r: usize) -> f64 {
    let r = r.min(n - r);
    (0..r).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// Closed-form `F_w` for `O_k`.
pub fn analytic_fw(k: usize, w: usize) -> f64 {
    if k == 0 || w % 2 == 1 || w < 2 * k || w > 4 * k {
        return 0.0;
    }
    let j = 2 * k - w / 2;
    let sign = if (w / 2 - k).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * 1.5f64.powi(j as i32) * 0.5f64.powi((w / 2 - k) as i32) * binomial(k, j)
}

pub fn analytic_polynomial(k: usize) -> WeightPolynomial {
    WeightPolynomial::from_terms((2 * k..=4 * k).step_by(2).map(|w| (w, analytic_fw(k, w))))
}

/// `F_w x^w` evaluated in log space, for large `k`.
fn term(k: usize, w: usize, x: f64) -> f64 {
    let j = 2 * k - w / 2;
    let sign = if (w / 2 - k).is_multiple_of(2) { 1.0 } else { -1.0 };
    if x == 0.0 {
        return 0.0;
    }
    let ln = j as f64 * (1.5 * x * x).ln() + (k - j) as f64 * (0.5 * x.powi(4)).ln() + ln_binomial(k, j);
    sign * ln.exp()
}

/// `E^(ℓ) = Σ_{w > ℓ} F_w (1 − p)^w` for `O_k`. Sums whichever of the tail or
/// the complementary head has fewer terms; the full sum is `(3x²/2 − x⁴/2)^k`.
pub fn truncation_error(k: usize, ell: usize, p: f64) -> f64 {
    let x = 1.0 - p;
    if ell >= 4 * k {
        return 0.0;
    }
    let full = (1.5 * x * x - 0.5 * x.powi(4)).powi(k as i32);
    if ell < 2 * k {
        return full;
    }
    let first_tail = if ell.is_multiple_of(2) { ell + 2 } else { ell + 1 };
    let tail_terms = (4 * k - first_tail) / 2 + 1;
    let head_terms = (ell - 2 * k) / 2 + 1;
    if tail_terms <= head_terms {
        (first_tail..=4 * k).step_by(2).map(|w| term(k, w, x)).sum()
    } else {
        full - (2 * k..=ell).step_by(2).map(|w| term(k, w, x)).sum::<f64>()
    }
}

/// Terminating hypergeometric form of `E^(ℓ)`, defined for even `ℓ` with
/// `2k − 2 ≤ ℓ < 4k`.
pub fn truncation_error_hypergeometric(k: usize, ell: usize, p: f64) -> Option<f64> {
    if ell % 2 == 1 || ell + 2 < 2 * k || ell >= 4 * k {
        return None;
    }
    let x = 1.0 - p;
    let half = ell / 2;
    let j0 = 2 * k - half - 1;
    // 2F1(1, b; c; z) with b = −j0 ≤ 0 terminates after j0 + 1 terms.
    let b = -(j0 as f64);
    let c = 2.0 + half as f64 - k as f64;
    let z = x * x / 3.0;
    let mut sum = 0.0;
    let mut t = 1.0;
    for i in 0..=j0 {
        sum += t;
        let i = i as f64;
        t *= (b + i) / (c + i) * z;
    }
    // Leading sign −(−1)^{(ℓ−2k)/2}; only the parity of the exponent matters.
    let parity = (half as i64 - k as i64).rem_euclid(2);
    let lead = if parity == 0 { -1.0 } else { 1.0 };
    let mag = 0.5f64.powi(k as i32) * 3f64.powi(j0 as i32) * x.powi(ell as i32 + 2) * binomial(k, j0);
    Some(lead * mag * sum)
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub property: u8,
    pub ell: Option<usize>,
    pub w: Option<usize>,
    pub passed: bool,
    pub observed: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub k: usize,
    pub p: f64,
    pub checks: Vec<PropertyCheck>,
    /// Set when `p` is at or above the magnitude threshold.
    pub property5_skipped: bool,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const REL_TOL: f64 = 1e-10;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * (1.0 + b.abs())
}

/// Checks the five truncation-error properties over `ℓ = 0..=4k+2`.
///
/// The sign property is checked for even `ℓ` with `2k < ℓ < 4k` against
/// `−(−1)^{(ℓ−2k)/2}`, the sign of the leading tail term. At `ℓ = 4k` the tail
/// is empty.
pub fn verify_properties(k: usize, p: f64) -> Result<PropertyReport> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p = {p} outside [0, 1]")));
    }
    let x = 1.0 - p;
    let mut checks = Vec::new();
    for w in 0..2 * k {
        let f = analytic_fw(k, w);
        checks.push(PropertyCheck { property: 1, ell: None, w: Some(w), passed: f == 0.0, observed: f, expected: 0.0 });
    }
    let full = (1.5 * x * x - 0.5 * x.powi(4)).powi(k as i32);
    let skip5 = p >= magnitude_threshold();
    for ell in 0..=4 * k + 2 {
        let e = truncation_error(k, ell, p);
        if ell < 2 * k {
            checks.push(PropertyCheck { property: 2, ell: Some(ell), w: None, passed: close(e, full), observed: e, expected: full });
        }
        if ell > 4 * k {
            checks.push(PropertyCheck { property: 3, ell: Some(ell), w: None, passed: e == 0.0, observed: e, expected: 0.0 });
        }
        if ell % 2 == 0 && ell > 2 * k && ell < 4 * k && x > 0.0 {
            let expected = if ((ell - 2 * k) / 2).is_multiple_of(2) { -1.0 } else { 1.0 };
            checks.push(PropertyCheck {
                property: 4,
                ell: Some(ell),
                w: None,
                passed: e.signum() == expected && e != 0.0,
                observed: e.signum(),
                expected,
            });
        }
        if !skip5 && ell > 2 * k && 4 * ell <= 9 * k {
            let floor = (1.5 * x * x).powi(k as i32) - 1.0;
            checks.push(PropertyCheck {
                property: 5,
                ell: Some(ell),
                w: None,
                passed: e.abs() >= floor - 1e-12 * floor.abs().max(1.0),
                observed: e.abs(),
                expected: floor,
            });
        }
    }
    Ok(PropertyReport { k, p, checks, property5_skipped: skip5 })
}

/// `g(n) = ⌈(log₂ n)²⌉`.
pub fn default_g(n: usize) -> usize {
    let l = (n as f64).log2();
    (l * l).ceil() as usize
}

fn check_mixed(n: usize, g: usize) -> Result<()> {
    if !n.is_multiple_of(3) {
        return Err(invalid(format!("n = {n} is not a multiple of 3")));
    }
    if g == 0 || 12 * g > n {
        return Err(invalid(format!("g = {g} needs 12g <= n, but n = {n}")));
    }
    Ok(())
}

/// `(1/g) Σ_{k=1..g} O_{4k}` on `n` qubits.
pub fn mixed_observable(n: usize, g: usize) -> Result<Observable> {
    check_mixed(n, g)?;
    let terms = (1..=g)
        .map(|k| observable(n / 3, 4 * k).map(|o| (1.0 / g as f64, o)))
        .collect::<Result<Vec<_>>>()?;
    Observable::new(terms)
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedError {
    pub ell: usize,
    pub g: usize,
    /// `E_C^(ℓ) = (1/g) Σ_k E^(ℓ)_{4k}`.
    pub value: f64,
    /// `(k, |E^(ℓ)_{4k}|/g)` maximising over `8k < ℓ < 9k`.
    pub witness: Option<(usize, f64)>,
}

/// Truncation error of the mixed observable.
pub fn mixed_observable_error(n: usize, g: usize, ell: usize, p: f64) -> Result<MixedError> {
    check_mixed(n, g)?;
    let gf = g as f64;
    let value = (1..=g).map(|k| truncation_error(4 * k, ell, p)).sum::<f64>() / gf;
    let witness = (1..=g)
        .filter(|&k| 8 * k < ell && ell < 9 * k)
        .map(|k| (k, truncation_error(4 * k, ell, p).abs() / gf))
        .fold(None, |best: Option<(usize, f64)>, c| match best {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        });
    Ok(MixedError { ell, g, value, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::accumulate_fw;
    use crate::pauli::{conjugate_generic, ProductState};

    #[test]
    fn v_gate_expands_z1() {
        let z1 = PauliString::from_letters(&[Letter::Z, Letter::I, Letter::I]);
        let mut terms: Vec<(String, f64)> = conjugate_generic(&v_gate(), &[0, 1, 2], &z1)
            .unwrap()
            .into_iter()
            .map(|t| (t.string.to_string(), t.coeff))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let expected = [("IIZ", 0.5), ("IZI", 0.5), ("ZII", 0.5), ("ZZZ", -0.5)];
        assert_eq!(terms.len(), 4);
        for ((s, c), (es, ec)) in terms.iter().zip(expected) {
            assert_eq!(s, es);
            assert!((c - ec).abs() < 1e-12);
        }
    }

    #[test]
    fn v_gate_is_an_involution_fixing_111() {
        let v = v_gate();
        let sq = v.matrix() * v.matrix();
        assert!((sq - nalgebra::DMatrix::<Complex64>::identity(8, 8)).norm() < 1e-15);
        assert_eq!(v.matrix()[(7, 7)], Complex64::new(1.0, 0.0));
        assert_eq!(v.matrix()[(6, 1)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(analytic_fw(1, 2), 1.5);
        assert_eq!(analytic_fw(1, 4), -0.5);
        assert_eq!(analytic_fw(2, 4), 2.25);
        assert_eq!(analytic_fw(2, 6), -1.5);
        assert_eq!(analytic_fw(2, 5), 0.0);
        // Independent oracle: the k-th power of the single-gate polynomial.
        let base = WeightPolynomial::from_terms([(2, 1.5), (4, -0.5)]);
        for k in 1..=10 {
            let conv = base.pow(k as u32);
            for w in 0..=4 * k + 1 {
                assert!((conv.coeff(w) - analytic_fw(k, w)).abs() < 1e-9 * (1.0 + conv.coeff(w).abs()));
            }
        }
    }

    #[test]
    fn fw_sums_to_one() {
        for k in 1..=30 {
            let f = analytic_polynomial(k);
            let scale: f64 = f.coeffs().iter().map(|c| c.abs()).sum();
            assert!((f.eval(1.0) - 1.0).abs() < 1e-14 * scale, "k = {k}");
        }
    }

    #[test]
    fn engine_matches_closed_form_small() {
        for k in 1..=3 {
            let c = circuit(k).unwrap();
            let fw = accumulate_fw(&c, &observable(k, k).unwrap(), &ProductState::zeros(3 * k), None).unwrap();
            for w in 0..=4 * k + 2 {
                assert!((fw.coeff(w) - analytic_fw(k, w)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn truncation_error_examples() {
        let p = 0.1;
        let x: f64 = 0.9;
        assert!((truncation_error(1, 0, p) - (1.5 * x * x - 0.5 * x.powi(4))).abs() < 1e-15);
        assert_eq!(truncation_error(3, 13, p), 0.0);
        assert!((truncation_error(1, 2, p) + 0.32805).abs() < 1e-12);
        assert_eq!(truncation_error(5, 13, p), truncation_error(5, 12, p));
    }

    #[test]
    fn head_and_tail_agree() {
        for k in 1..=15 {
            for ell in 2 * k..4 * k {
                let x = 0.85f64;
                let tail: f64 = (ell + 1..=4 * k).map(|w| analytic_fw(k, w) * x.powi(w as i32)).sum();
                let e = truncation_error(k, ell, 0.15);
                assert!((tail - e).abs() < 1e-9 * (1.0 + tail.abs()), "k={k} ell={ell}");
            }
        }
    }

    #[test]
    fn hypergeometric_form_agrees() {
        for k in 1usize..=14 {
            for ell in ((2 * k - 2)..4 * k).filter(|l| l % 2 == 0) {
                if let Some(h) = truncation_error_hypergeometric(k, ell, 0.1) {
                    let e = truncation_error(k, ell, 0.1);
                    assert!((h - e).abs() <= 1e-10 * e.abs().max(1e-300), "k={k} ell={ell}: {h} vs {e}");
                }
            }
        }
    }

    #[test]
    fn properties_hold_at_k6() {
        let r = verify_properties(6, 0.1).unwrap();
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(!r.property5_skipped);
    }

    #[test]
    fn magnitude_boundary_at_k1_p0() {
        let e = truncation_error(1, 2, 0.0);
        assert_eq!(e.abs(), 0.5);
        assert_eq!(e.abs(), 1.5 - 1.0);
    }

    #[test]
    fn high_noise_skips_property5() {
        let r = verify_properties(4, 0.25).unwrap();
        assert!(r.property5_skipped);
        assert!(r.checks.iter().all(|c| c.property != 5));
    }

    #[test]
    fn g_and_mixed_observable() {
        assert_eq!(default_g(3 << 14), 243);
        assert!(mixed_observable(36, default_g(36)).is_err());
        let o = mixed_observable(36, 2).unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o.terms()[1].1.weight(), 8);
        assert_eq!(mixed_observable_error(3 << 14, 243, 16 * 243 + 1, 0.1).unwrap().value, 0.0);
    }
}
