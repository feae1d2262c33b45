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

//! Truncated Pauli-path estimation of expectation values in circuits with
//! single-qubit depolarizing noise.
//!
//! The observable is propagated backwards through the circuit as a sum over
//! Pauli paths. Depolarizing noise of rate `p` damps a path of Pauli weight
//! `w` by `(1 − p)^w`, so the noisy expectation value is the polynomial
//! `Σ_w F_w (1 − p)^w`, and dropping paths above a weight cutoff `ℓ` gives a
//! controllable approximation when magic gates are sparse.
//!
//! ```
//! use pauliflow::counterexample;
//! use pauliflow::engine::accumulate_fw;
//! use pauliflow::pauli::ProductState;
//!
//! let circuit = counterexample::circuit(1).unwrap();
//! let obs = counterexample::observable(1, 1).unwrap();
//! let fw = accumulate_fw(&circuit, &obs, &ProductState::zeros(3), None).unwrap();
//! assert!((fw.at_noise(0.1) - 0.88695).abs() < 1e-12);
//! ```

pub mod circuit;
pub mod cli;
pub mod counterexample;
pub mod engine;
pub mod error;
pub mod ising;
pub mod oracle;
pub mod pauli;
pub mod poly;

pub use error::{Error, Result};
