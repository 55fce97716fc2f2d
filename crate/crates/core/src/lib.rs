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

//! Contextual-subspace methods for qubit Hamiltonians.

pub mod bits;
pub mod circuits;
pub mod contextual;
pub mod dense;
pub mod error;
pub mod gf2;
pub mod io;
pub mod noncontextual;
pub mod partitioning;
pub mod pauli;
pub mod simulator;
pub mod tapering;
pub mod vqe;

pub use bits::Bits;
pub use error::{CsqError, Result};
pub use pauli::{Pauli, PauliSum, PauliTerm, Rotation, RotationSequence};
