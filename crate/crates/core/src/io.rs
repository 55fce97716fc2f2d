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

//! JSON file formats.
//!
//! Operators (Hamiltonians, pools, ansatz operators):
//!
//! ```json
//! {"n_qubits": 2, "terms": [{"pauli": "XZ", "re": 0.5, "im": 0.0}]}
//! ```
//!
//! Strings use the characters `IXYZ` only, qubit 0 leftmost; every string
//! carries phase 0 and the coefficient holds any sign. For ansatz files the
//! real part is the angle `θ` of `e^{iθP}`.
//!
//! States are either `{"bits": "0110"}` or
//! `{"n_qubits": 2, "amplitudes": [[re, im], ...]}` with basis index bit
//! `n−1−q` holding qubit `q`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CsqError, Result};
use crate::pauli::{Pauli, PauliSum, PauliTerm};
use crate::simulator::{format_bitstring, parse_bitstring, StateVector};
use crate::tapering::Reference;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub pauli: String,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub n_qubits: usize,
    pub terms: Vec<TermRecord>,
}

fn parse_plain(s: &str, n_qubits: usize) -> Result<PauliTerm> {
    if s.chars().count() != n_qubits {
        return Err(CsqError::Parse(format!(
            "Pauli string {s:?} has length {}, expected {n_qubits}",
            s.chars().count()
        )));
    }
    let paulis = s
        .chars()
        .map(|c| Pauli::from_char(c).ok_or_else(|| CsqError::Parse(format!("invalid Pauli character {c:?} in {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(PauliTerm::from_paulis(&paulis))
}

impl OperatorFile {
    pub fn to_sum(&self) -> Result<PauliSum> {
        let terms = self
            .terms
            .iter()
            .map(|r| {
                if !r.re.is_finite() || !r.im.is_finite() {
                    return Err(CsqError::NonFinite(format!("coefficient of {}", r.pauli)));
                }
                Ok((parse_plain(&r.pauli, self.n_qubits)?, Complex64::new(r.re, r.im)))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliSum::from_terms(self.n_qubits, terms)
    }

    /// Terms in file order without merging, for ordered ansatz operators.
    pub fn to_ordered_terms(&self) -> Result<Vec<(PauliTerm, f64)>> {
        self.terms
            .iter()
            .map(|r| Ok((parse_plain(&r.pauli, self.n_qubits)?, r.re)))
            .collect()
    }

    pub fn from_sum(s: &PauliSum) -> Self {
        Self {
            n_qubits: s.n_qubits(),
            terms: s
                .iter()
                .map(|(t, c)| TermRecord {
                    pauli: t.to_string(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn from_ordered_terms(n_qubits: usize, terms: &[(PauliTerm, f64)]) -> Self {
        Self {
            n_qubits,
            terms: terms
                .iter()
                .map(|(t, th)| {
                    let sign = if t.phase() == 2 { -1.0 } else { 1.0 };
                    TermRecord {
                        pauli: t.positive().to_string(),
                        re: sign * th,
                        im: 0.0,
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Bits { bits: String },
    Amplitudes { n_qubits: usize, amplitudes: Vec<[f64; 2]> },
}

impl StateFile {
    pub fn to_reference(&self) -> Result<Reference> {
        match self {
            StateFile::Bits { bits } => Ok(Reference::Bits(parse_bitstring(bits)?)),
            StateFile::Amplitudes { n_qubits, amplitudes } => {
                let amps = amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                Ok(Reference::State(StateVector::from_amplitudes(*n_qubits, amps)?))
            }
        }
    }

    pub fn from_state(s: &StateVector) -> Self {
        StateFile::Amplitudes {
            n_qubits: s.n_qubits(),
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn from_reference(r: &Reference) -> Self {
        match r {
            Reference::Bits(b) => StateFile::Bits {
                bits: format_bitstring(b),
            },
            Reference::State(s) => Self::from_state(s),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

pub fn read_operator(path: &Path) -> Result<PauliSum> {
    read_json::<OperatorFile>(path)?.to_sum()
}

/// Reads an operator and checks that it is Hermitian.
pub fn read_hamiltonian(path: &Path) -> Result<PauliSum> {
    let h = read_operator(path)?;
    h.ensure_hermitian()?;
    Ok(h)
}

pub fn write_operator(path: &Path, s: &PauliSum) -> Result<()> {
    write_json(path, &OperatorFile::from_sum(s))
}

pub fn read_state(path: &Path) -> Result<Reference> {
    read_json::<StateFile>(path)?.to_reference()
}
