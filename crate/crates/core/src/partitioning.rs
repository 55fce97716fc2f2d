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

//! Sequence-of-rotations unitary partitioning: maps `C(r) = Σ r_i C_i`
//! over pairwise anticommuting strings onto `C_1`.

use crate::error::{check_qubits, CsqError, Result};
use crate::pauli::{apply_rotation_sequence, Pauli, PauliSum, PauliTerm, Rotation, RotationSequence};

/// Pairwise anticommuting Hermitian strings with unit weight vector.
#[derive(Clone, Debug, PartialEq)]
pub struct AnticommutingSet {
    reps: Vec<PauliTerm>,
    weights: Vec<f64>,
}

impl AnticommutingSet {
    /// Validates anticommutation and normalizes the weights.
    pub fn new(reps: Vec<PauliTerm>, weights: Vec<f64>) -> Result<Self> {
        if reps.is_empty() {
            return Err(CsqError::InvalidArgument("empty anticommuting set".into()));
        }
        check_qubits(reps.len(), weights.len())?;
        let n = reps[0].n_qubits();
        for (i, a) in reps.iter().enumerate() {
            check_qubits(n, a.n_qubits())?;
            if !a.is_hermitian() {
                return Err(CsqError::InvalidArgument(format!("{a} is not Hermitian")));
            }
            for (j, b) in reps.iter().enumerate().skip(i + 1) {
                if !a.symplectic_product(b) {
                    return Err(CsqError::NotAnticommuting(i, j));
                }
            }
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(CsqError::NonFinite("partitioning weight".into()));
        }
        let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(CsqError::ZeroWeights);
        }
        Ok(Self {
            reps,
            weights: weights.iter().map(|w| w / norm).collect(),
        })
    }

    pub fn reps(&self) -> &[PauliTerm] {
        &self.reps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_qubits(&self) -> usize {
        self.reps[0].n_qubits()
    }

    /// `C(r)` as a sum.
    pub fn combination(&self) -> PauliSum {
        PauliSum::from_terms(
            self.n_qubits(),
            self.reps.iter().zip(&self.weights).map(|(t, &w)| (t.clone(), w.into())),
        )
        .expect("consistent qubit count")
    }
}

/// Builds `U_C` with `U_C C(r) U_C† = C_1`.
///
/// Weight `r_k` is folded into the running coefficient of `C_1` by the
/// rotation about `P_k = i C_k C_1` with `2θ_k = atan2(r_k, a)`, `a` the
/// running coefficient. The result has `M − 1` rotations.
pub fn build_uc(set: &AnticommutingSet) -> Result<(RotationSequence, PauliTerm)> {
    let c1 = set.reps[0].positive();
    let sign1 = if set.reps[0].phase() == 2 { -1.0 } else { 1.0 };
    let mut a = set.weights[0] * sign1;
    let mut seq = RotationSequence::new();
    for (ck, &wk) in set.reps.iter().zip(&set.weights).skip(1) {
        let b = if ck.phase() == 2 { -wk } else { wk };
        let ck = ck.positive();
        let p = ck.multiply(&c1)?;
        let p = p.with_phase(p.phase() + 1);
        seq.push(Rotation::new(p, 0.5 * b.atan2(a))?);
        a = a.hypot(b);
    }
    // Only reachable for M = 1 with a negative weight: flip the sign.
    if a < 0.0 {
        seq.push(Rotation::new(flip_partner(&c1), std::f64::consts::FRAC_PI_2)?);
    }
    Ok((seq, c1))
}

/// Some string anticommuting with `p` (which must be non-identity).
fn flip_partner(p: &PauliTerm) -> PauliTerm {
    let n = p.n_qubits();
    let q = (0..n).find(|&q| p.pauli_at(q) != Pauli::I).unwrap_or(0);
    let other = if p.pauli_at(q) == Pauli::Z { Pauli::X } else { Pauli::Z };
    PauliTerm::single(n, q, other)
}

/// `U s U†`; may grow the term count by up to `2^{M−1}`.
pub fn conjugate_sum_by_uc(s: &PauliSum, seq: &RotationSequence) -> Result<PauliSum> {
    apply_rotation_sequence(s, seq)
}
