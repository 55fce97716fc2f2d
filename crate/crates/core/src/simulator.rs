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

//! Dense statevector backend: gate application, exact and sampled
//! expectation values, qubit-wise commuting measurement groups.

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::circuits::{Circuit, Gate};
use crate::dense::{self, Matrix};
use crate::error::{check_qubits, CsqError, Result};
use crate::pauli::{Pauli, PauliSum, PauliTerm};

/// Largest register the statevector backend will allocate.
pub const STATEVECTOR_QUBIT_CAP: usize = 26;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis_index(n_qubits, 0)
    }

    pub fn basis_index(n_qubits: usize, index: usize) -> Result<Self> {
        dense::check_cap(n_qubits, STATEVECTOR_QUBIT_CAP)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(CsqError::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = vec![Complex64::default(); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational basis state; `bits[q]` is the value of qubit `q`.
    pub fn basis(bits: &Bits) -> Result<Self> {
        Self::basis_index(bits.len(), bits_to_index(bits))
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        dense::check_cap(n_qubits, STATEVECTOR_QUBIT_CAP)?;
        check_qubits(1 << n_qubits, amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 1e-300 || !norm.is_finite() {
            return Err(CsqError::InvalidArgument("state has zero or non-finite norm".into()));
        }
        Ok(Self {
            n_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Returns the basis bit string when the state is a single basis vector
    /// up to phase (within `tol`).
    pub fn as_basis_state(&self, tol: f64) -> Option<Bits> {
        let (idx, a) = self
            .amplitudes
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))?;
        ((1.0 - a.norm_sqr()).abs() < tol).then(|| index_to_bits(self.n_qubits, idx))
    }

    #[inline]
    fn bit(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn apply_single(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let mask = self.bit(qubit);
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n_qubits {
                return Err(CsqError::IndexOutOfRange {
                    index: q,
                    len: self.n_qubits,
                });
            }
        }
        let zero = Complex64::default();
        let one = Complex64::new(1.0, 0.0);
        match *gate {
            Gate::H { qubit } => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_single(qubit, [[h, h], [h, -h]]);
            }
            Gate::S { qubit } => self.apply_single(qubit, [[one, zero], [zero, Complex64::i()]]),
            Gate::Sdg { qubit } => self.apply_single(qubit, [[one, zero], [zero, -Complex64::i()]]),
            Gate::X { qubit } => self.apply_single(qubit, [[zero, one], [one, zero]]),
            Gate::Rz { qubit, angle } => self.apply_single(
                qubit,
                [
                    [Complex64::from_polar(1.0, angle / 2.0), zero],
                    [zero, Complex64::from_polar(1.0, -angle / 2.0)],
                ],
            ),
            Gate::Cnot { control, target } => {
                let (cm, tm) = (self.bit(control), self.bit(target));
                for i in 0..self.amplitudes.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amplitudes.swap(i, i | tm);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        check_qubits(self.n_qubits, c.n_qubits())?;
        for g in c.gates() {
            self.apply_gate(g)?;
        }
        if c.global_phase() != 0.0 {
            let ph = Complex64::from_polar(1.0, c.global_phase());
            self.amplitudes.iter_mut().for_each(|a| *a *= ph);
        }
        Ok(())
    }

    /// `P|ψ⟩` as a new vector (not normalized if `P` carries no phase
    /// issues; Pauli operators are unitary so the norm is preserved).
    pub fn apply_pauli(&self, p: &PauliTerm) -> Result<StateVector> {
        check_qubits(self.n_qubits, p.n_qubits())?;
        let mut out = vec![Complex64::default(); self.amplitudes.len()];
        for (b, a) in self.amplitudes.iter().enumerate() {
            let (b2, c) = p.apply_to_basis(b);
            out[b2] = c * a;
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }

    /// `|ψ⟩ ↦ e^{iθP}|ψ⟩ = cos θ|ψ⟩ + i sin θ P|ψ⟩` for Hermitian `P`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliTerm, theta: f64) -> Result<()> {
        if !p.is_hermitian() {
            return Err(CsqError::InvalidArgument(format!("{p} is not Hermitian")));
        }
        let moved = self.apply_pauli(p)?;
        let (s, c) = theta.sin_cos();
        let is = Complex64::new(0.0, s);
        for (a, m) in self.amplitudes.iter_mut().zip(moved.amplitudes) {
            *a = *a * c + is * m;
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation_term(&self, p: &PauliTerm) -> Result<Complex64> {
        check_qubits(self.n_qubits, p.n_qubits())?;
        Ok(self.expectation_term_unchecked(p))
    }

    fn expectation_term_unchecked(&self, p: &PauliTerm) -> Complex64 {
        let (xm, zm, y) = p.masks();
        let base = crate::pauli::i_pow(((p.phase() as u32 + y) % 4) as u8);
        let mut acc = Complex64::default();
        for (b, a) in self.amplitudes.iter().enumerate() {
            let v = a.conj() * self.amplitudes[b ^ xm];
            // ⟨b|P|b⊕x⟩ = base · (-1)^{z·(b⊕x)}
            if ((b ^ xm) & zm).count_ones() % 2 == 1 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        acc * base
    }
}

pub fn bits_to_index(bits: &Bits) -> usize {
    let n = bits.len();
    bits.ones().fold(0, |acc, q| acc | (1 << (n - 1 - q)))
}

pub fn index_to_bits(n_qubits: usize, index: usize) -> Bits {
    Bits::from_bools((0..n_qubits).map(|q| (index >> (n_qubits - 1 - q)) & 1 == 1))
}

/// Parses a bit string such as `0110` (qubit 0 first).
pub fn parse_bitstring(s: &str) -> Result<Bits> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CsqError::Parse(format!("invalid bit {c:?} in {s:?}"))),
        })
        .collect::<Result<Vec<_>>>()
        .map(Bits::from_bools)
}

pub fn format_bitstring(bits: &Bits) -> String {
    bits.iter().map(|b| if b { '1' } else { '0' }).collect()
}

/// Exact `⟨ψ|H|ψ⟩` for Hermitian `H`.
pub fn expectation(h: &PauliSum, state: &StateVector) -> Result<f64> {
    check_qubits(state.n_qubits, h.n_qubits())?;
    h.ensure_hermitian()?;
    Ok(h.iter()
        .map(|(t, c)| (c * state.expectation_term_unchecked(t)).re)
        .sum())
}

/// Terms grouped so that each group is measurable in one product basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QwcGrouping {
    /// Indices into the sum's term list.
    pub groups: Vec<Vec<usize>>,
    /// Per group, the measured Pauli on each qubit (`I` where no member
    /// acts; measured in Z).
    pub bases: Vec<Vec<Pauli>>,
}

impl QwcGrouping {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// Greedy largest-first colouring of the graph whose edges join terms that
/// do not commute qubit-wise. Ties go to the lower term index.
pub fn qwc_grouping(h: &PauliSum) -> QwcGrouping {
    let terms: Vec<&PauliTerm> = h.pauli_terms().collect();
    let n = terms.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if !terms[i].qubitwise_commutes(terms[j]) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| adj[b].len().cmp(&adj[a].len()).then(a.cmp(&b)));
    let mut colour = vec![usize::MAX; n];
    let mut n_colours = 0;
    for &v in &order {
        let mut used = vec![false; n_colours + 1];
        for &u in &adj[v] {
            if colour[u] != usize::MAX {
                used[colour[u]] = true;
            }
        }
        let c = used.iter().position(|&u| !u).expect("one free colour");
        colour[v] = c;
        n_colours = n_colours.max(c + 1);
    }
    let mut groups = vec![Vec::new(); n_colours];
    for (v, &c) in colour.iter().enumerate() {
        groups[c].push(v);
    }
    let bases = groups
        .iter()
        .map(|g| {
            let mut basis = vec![Pauli::I; h.n_qubits()];
            for &t in g {
                for (q, p) in terms[t].paulis().enumerate() {
                    if p != Pauli::I {
                        basis[q] = p;
                    }
                }
            }
            basis
        })
        .collect();
    QwcGrouping { groups, bases }
}

/// Shot-based estimate of `⟨H⟩`: `shots_per_group` samples per QWC group,
/// drawn in the group's rotated basis.
pub fn sampled_expectation(h: &PauliSum, state: &StateVector, shots_per_group: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sampled_expectation_with_rng(h, state, shots_per_group, &mut rng)
}

pub fn sampled_expectation_with_rng<R: Rng>(
    h: &PauliSum,
    state: &StateVector,
    shots_per_group: usize,
    rng: &mut R,
) -> Result<f64> {
    check_qubits(state.n_qubits, h.n_qubits())?;
    h.ensure_hermitian()?;
    if shots_per_group == 0 {
        return Err(CsqError::InvalidArgument("shots per group must be at least 1".into()));
    }
    let grouping = qwc_grouping(h);
    let terms = h.terms();
    let mut total = 0.0;
    for (group, basis) in grouping.groups.iter().zip(&grouping.bases) {
        let measured: Vec<&(PauliTerm, Complex64)> = group.iter().map(|&i| &terms[i]).collect();
        if measured.iter().all(|(t, _)| t.is_identity()) {
            total += measured.iter().map(|(_, c)| c.re).sum::<f64>();
            continue;
        }
        let mut rotated = state.clone();
        for (q, p) in basis.iter().enumerate() {
            match p {
                Pauli::X => rotated.apply_gate(&Gate::H { qubit: q })?,
                Pauli::Y => {
                    rotated.apply_gate(&Gate::Sdg { qubit: q })?;
                    rotated.apply_gate(&Gate::H { qubit: q })?;
                }
                _ => {}
            }
        }
        let dist = WeightedIndex::new(rotated.probabilities())
            .map_err(|e| CsqError::InvalidArgument(format!("sampling distribution: {e}")))?;
        let mut counts = vec![0u64; 1 << state.n_qubits];
        for _ in 0..shots_per_group {
            counts[dist.sample(rng)] += 1;
        }
        for (t, c) in measured {
            let support = t.x().or(t.z());
            let mask = bits_to_index(&support);
            let signed: i64 = counts
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(b, &k)| {
                    if (b & mask).count_ones() % 2 == 1 {
                        -(k as i64)
                    } else {
                        k as i64
                    }
                })
                .sum();
            total += c.re * signed as f64 / shots_per_group as f64;
        }
    }
    Ok(total)
}

/// Independent random stream for realization `index` derived from `seed`.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RmseRow {
    pub shots: usize,
    pub rmse: f64,
}

/// Root-mean-square error of the sampled estimator against the exact
/// expectation, over `realizations` independent streams, for each shot
/// count in `shots`.
pub fn rmse_experiment(
    h: &PauliSum,
    state: &StateVector,
    shots: &[usize],
    realizations: usize,
    seed: u64,
) -> Result<Vec<RmseRow>> {
    let exact = expectation(h, state)?;
    let mut rows = Vec::with_capacity(shots.len());
    for (si, &s) in shots.iter().enumerate() {
        let mut sq = 0.0;
        for r in 0..realizations {
            let mut rng = realization_rng(seed, (si * realizations + r) as u64);
            let est = sampled_expectation_with_rng(h, state, s, &mut rng)?;
            sq += (est - exact).powi(2);
        }
        rows.push(RmseRow {
            shots: s,
            rmse: (sq / realizations as f64).sqrt(),
        });
    }
    Ok(rows)
}

/// Least-squares slope `m` of `log10(rmse) = m·log10(S) + c`.
pub fn log_log_slope(rows: &[RmseRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.rmse > 0.0)
        .map(|r| ((r.shots as f64).log10(), r.rmse.log10()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Lowest eigenpair of `H` by dense diagonalization.
pub fn exact_ground_state(h: &PauliSum) -> Result<(f64, StateVector)> {
    h.ensure_hermitian()?;
    let m = h.to_matrix()?;
    let (values, vectors) = dense::hermitian_eigen(&m);
    let psi: Vec<Complex64> = vectors.column(0).iter().copied().collect();
    let state = StateVector::from_amplitudes(h.n_qubits(), psi)?;
    Ok((values[0], state))
}

/// Lowest eigenvalue of `H`.
pub fn ground_energy(h: &PauliSum) -> Result<f64> {
    h.ensure_hermitian()?;
    Ok(dense::hermitian_eigenvalues(&h.to_matrix()?)[0])
}

/// `‖Hψ − εψ‖`.
pub fn eigen_residual(h: &Matrix, energy: f64, state: &StateVector) -> f64 {
    let psi = nalgebra::DVector::from_column_slice(state.amplitudes());
    (h * &psi - psi * Complex64::new(energy, 0.0)).norm()
}
