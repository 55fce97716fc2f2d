// Copyright 2026 The csq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CsqError>;

#[derive(Debug, Error)]
pub enum CsqError {
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n_qubits} qubits exceeds the dense-matrix cap of {cap}")]
    MatrixCap { n_qubits: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operator is not Hermitian (imaginary part {0:e})")]
    NotHermitian(f64),

    #[error("generators are not GF(2)-independent")]
    DependentGenerators,

    #[error("generators {0} and {1} do not commute")]
    NonCommutingGenerators(usize, usize),

    #[error("generator {generator} has expectation {expectation:.6} in the reference state; no definite sector")]
    AmbiguousSector { generator: usize, expectation: f64 },

    #[error("term set is contextual")]
    Contextual,

    #[error("vector norm {0} is not 1")]
    NonUnitVector(f64),

    #[error("representatives {0} and {1} do not anticommute")]
    NotAnticommuting(usize, usize),

    #[error("weight vector is zero")]
    ZeroWeights,

    #[error("reference state has zero overlap with the stabilizer sector")]
    ZeroOverlap,

    #[error("invalid generator subset: {0}")]
    InvalidSubset(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("excitation index sets overlap at orbital {0}")]
    OverlappingIndices(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator pool is empty")]
    EmptyPool,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_qubits(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(CsqError::DimensionMismatch { expected, found })
    }
}
