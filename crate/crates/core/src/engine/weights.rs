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

//! Weight polynomials `Σ_w F_w x^w` with `x = 1 − p`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::default();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Dense coefficients `F_0..F_M`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WeightPolynomial {
    coeffs: Vec<f64>,
}

impl WeightPolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut coeffs = Vec::new();
        for (w, f) in terms {
            if coeffs.len() <= w {
                coeffs.resize(w + 1, 0.0);
            }
            coeffs[w] += f;
        }
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeff(&self, w: usize) -> f64 {
        self.coeffs.get(w).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Largest `w` with `F_w ≠ 0`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Smallest `w` with `F_w ≠ 0`.
    pub fn lowest(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().copied().enumerate().filter(|&(_, c)| c != 0.0)
    }

    pub fn to_map(&self) -> BTreeMap<usize, f64> {
        self.nonzero().collect()
    }

    /// `Σ F_w x^w` by Horner's rule.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Noisy value `Σ F_w (1 − p)^w`.
    pub fn at_noise(&self, p: f64) -> f64 {
        self.eval(1.0 - p)
    }

    /// Keeps weights `w ≤ ell`.
    pub fn truncated(&self, ell: usize) -> Self {
        Self::new(self.coeffs.iter().copied().take(ell + 1).collect())
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * a).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|w| self.coeff(w) + other.coeff(w)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.nonzero() {
            for (j, b) in other.nonzero() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::new(vec![1.0]), |acc, _| acc.mul(self))
    }

    /// Rows `w,F_w,N_w` for every weight with a non-zero coefficient or count.
    pub fn to_csv(&self, counts: Option<&BTreeMap<usize, u64>>) -> String {
        let mut weights: Vec<usize> = self.nonzero().map(|(w, _)| w).collect();
        if let Some(c) = counts {
            weights.extend(c.keys().copied());
        }
        weights.sort_unstable();
        weights.dedup();
        let mut s = String::from("w,F_w,N_w\n");
        for w in weights {
            let n = counts.and_then(|c| c.get(&w)).copied().unwrap_or(0);
            let _ = writeln!(s, "{w},{:.17e},{n}", self.coeff(w));
        }
        s
    }
}
