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

use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("{gate} acts on {expected} qubits, got {got}")]
    Arity {
        gate: String,
        expected: usize,
        got: usize,
    },

    #[error("gate support repeats qubit {0}")]
    RepeatedQubit(usize),

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("matrix dimension {0} is not 2^D with 1 <= D <= 3")]
    BadMatrixDimension(usize),

    #[error("transition amplitude has imaginary residue {0:.3e}")]
    ImaginaryAmplitude(f64),

    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("observable must not be the identity")]
    IdentityObservable,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("path enumeration aborted after {0} paths")]
    PathLimitExceeded(u64),

    #[error("noise rate {p} is not above the threshold {threshold}; no efficient cutoff guaranteed")]
    BelowThreshold { p: f64, threshold: f64 },

    #[error("layout has no SWAP layers; sparseness bound inapplicable")]
    NoSwapLayers,

    #[error("embedding never makes edge ({0}, {1}) adjacent")]
    MissingEdge(usize, usize),

    #[error("{what} too large: {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("zero polynomial has no roots")]
    ZeroPolynomial,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::QubitOutOfRange { .. } => "qubit_out_of_range",
            Error::Arity { .. } => "arity",
            Error::RepeatedQubit(_) => "repeated_qubit",
            Error::NonUnitary { .. } => "non_unitary",
            Error::BadMatrixDimension(_) => "bad_matrix_dimension",
            Error::ImaginaryAmplitude(_) => "imaginary_amplitude",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::IdentityObservable => "identity_observable",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidCircuit(_) => "invalid_circuit",
            Error::PathLimitExceeded(_) => "path_limit_exceeded",
            Error::BelowThreshold { .. } => "below_threshold",
            Error::NoSwapLayers => "no_swap_layers",
            Error::MissingEdge(..) => "missing_edge",
            Error::TooLarge { .. } => "too_large",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
