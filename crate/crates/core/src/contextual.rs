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

//! Contextual subspace Hamiltonians: stabilizer subsets of `G̃ = G ∪ {C(r)}`,
//! projected ansatz pools and references, and greedy relaxation ordering.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::circuits::Gate;
use crate::error::{check_qubits, CsqError, Result};
use crate::noncontextual::{self, NoncontextualModel, NoncontextualState, Strategy};
use crate::partitioning::{build_uc, AnticommutingSet};
use crate::pauli::{apply_rotation_sequence, Pauli, PauliSum, PauliTerm, RotationSequence};
use crate::simulator::{ground_energy, index_to_bits, StateVector};
use crate::tapering::{build_stabilizer_map, project_rotated, Reference};

/// Error threshold for chemical accuracy, in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;

/// A Hamiltonian together with its noncontextual model and optimum.
#[derive(Clone, Debug)]
pub struct ContextualProblem {
    full_h: PauliSum,
    model: NoncontextualModel,
    nc_state: NoncontextualState,
    nc_energy: f64,
    uc: RotationSequence,
    uc_target: Option<PauliTerm>,
    target_pauli: Pauli,
}

impl ContextualProblem {
    /// Selects the noncontextual part with `strategy`, decomposes and
    /// optimizes it.
    pub fn new(full_h: &PauliSum, strategy: Strategy) -> Result<Self> {
        let (nc, _) = noncontextual::split_hamiltonian(full_h, strategy)?;
        let model = noncontextual::decompose_sum(&nc)?;
        let (state, energy) = noncontextual::optimize(&model);
        Self::from_parts(full_h.clone(), model, state, energy, Pauli::Z)
    }

    pub fn from_parts(
        full_h: PauliSum,
        model: NoncontextualModel,
        nc_state: NoncontextualState,
        nc_energy: f64,
        target_pauli: Pauli,
    ) -> Result<Self> {
        full_h.ensure_hermitian()?;
        check_qubits(full_h.n_qubits(), model.n_qubits())?;
        let (uc, uc_target) = if model.n_classes() == 0 {
            (RotationSequence::new(), None)
        } else {
            let set = AnticommutingSet::new(model.class_reps().to_vec(), nc_state.r.clone())?;
            let (seq, t) = build_uc(&set)?;
            (seq, Some(t))
        };
        Ok(Self {
            full_h,
            model,
            nc_state,
            nc_energy,
            uc,
            uc_target,
            target_pauli,
        })
    }

    pub fn with_target_pauli(mut self, p: Pauli) -> Self {
        self.target_pauli = p;
        self
    }

    pub fn full_h(&self) -> &PauliSum {
        &self.full_h
    }

    pub fn model(&self) -> &NoncontextualModel {
        &self.model
    }

    pub fn nc_state(&self) -> &NoncontextualState {
        &self.nc_state
    }

    /// `ε0^nc`.
    pub fn nc_energy(&self) -> f64 {
        self.nc_energy
    }

    pub fn uc(&self) -> &RotationSequence {
        &self.uc
    }

    pub fn n_qubits(&self) -> usize {
        self.full_h.n_qubits()
    }

    /// `|G̃|`; index `|G|` denotes `C(r)` when the model has classes.
    pub fn n_stabilizers(&self) -> usize {
        self.model.generators().len() + usize::from(self.uc_target.is_some())
    }

    /// Index of `C(r)` in `G̃`, if present.
    pub fn cr_index(&self) -> Option<usize> {
        self.uc_target.as_ref().map(|_| self.model.generators().len())
    }

    pub fn all_stabilizers(&self) -> Vec<usize> {
        (0..self.n_stabilizers()).collect()
    }

    /// Projection data for the stabilizer subset `f` (indices into `G̃`).
    pub fn subspace(&self, f: &[usize]) -> Result<ContextualSubspace> {
        let k = self.n_stabilizers();
        let mut sorted = f.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CsqError::InvalidSubset(format!("repeated index in {f:?}")));
        }
        if let Some(&bad) = sorted.iter().find(|&&i| i >= k) {
            return Err(CsqError::InvalidSubset(format!("index {bad} outside 0..{k}")));
        }
        let n = self.n_qubits();
        let gens = self.model.generators();
        let mut stabs = Vec::with_capacity(sorted.len());
        let mut nu = Vec::with_capacity(sorted.len());
        let mut rotations = RotationSequence::new();
        for &i in &sorted {
            if i < gens.len() {
                stabs.push(gens[i].clone());
                nu.push(self.nc_state.nu[i]);
            } else {
                rotations.extend(&self.uc);
                stabs.push(self.uc_target.clone().expect("index checked"));
                nu.push(1);
            }
        }
        let fixed = if stabs.is_empty() {
            Vec::new()
        } else {
            let map = build_stabilizer_map(&stabs, self.target_pauli)?;
            rotations.extend(map.rotations());
            map.target_qubits().to_vec()
        };
        let sim: Vec<usize> = (0..n).filter(|q| !fixed.contains(q)).collect();
        let rotated = apply_rotation_sequence(&self.full_h, &rotations)?;
        let hamiltonian = project_rotated(&rotated, &fixed, self.target_pauli, &nu)?;
        let nc_rot = apply_rotation_sequence(&self.model.hamiltonian(), &rotations)?;
        let nc_energy = project_rotated(&nc_rot, &fixed, self.target_pauli, &nu)?
            .identity_coefficient()
            .re;
        Ok(ContextualSubspace {
            n_qubits: n,
            subset: sorted,
            rotations,
            fixed_qubits: fixed,
            sim_qubits: sim,
            nu,
            target_pauli: self.target_pauli,
            hamiltonian,
            nc_energy,
        })
    }
}

/// Contextual subspace for one stabilizer subset `F`.
#[derive(Clone, Debug)]
pub struct ContextualSubspace {
    n_qubits: usize,
    subset: Vec<usize>,
    rotations: RotationSequence,
    fixed_qubits: Vec<usize>,
    sim_qubits: Vec<usize>,
    nu: Vec<i8>,
    target_pauli: Pauli,
    hamiltonian: PauliSum,
    nc_energy: f64,
}

impl ContextualSubspace {
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// `U_F`, with `U_C` first when `C(r) ∈ F`.
    pub fn rotations(&self) -> &RotationSequence {
        &self.rotations
    }

    /// `I_fix`, aligned with [`subset`](Self::subset).
    pub fn fixed_qubits(&self) -> &[usize] {
        &self.fixed_qubits
    }

    pub fn sim_qubits(&self) -> &[usize] {
        &self.sim_qubits
    }

    /// `ν′`, aligned with [`subset`](Self::subset).
    pub fn nu(&self) -> &[i8] {
        &self.nu
    }

    pub fn target_pauli(&self) -> Pauli {
        self.target_pauli
    }

    /// Contextual subspace Hamiltonian on `I_sim`.
    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    /// Constant left by projecting the noncontextual part alone.
    pub fn nc_energy(&self) -> f64 {
        self.nc_energy
    }

    pub fn n_sim(&self) -> usize {
        self.sim_qubits.len()
    }

    fn project(&self, s: &PauliSum) -> Result<PauliSum> {
        check_qubits(self.n_qubits, s.n_qubits())?;
        let rotated = apply_rotation_sequence(s, &self.rotations)?;
        project_rotated(&rotated, &self.fixed_qubits, self.target_pauli, &self.nu)
    }
}

/// `ε0^nc(F)·1 + π(H_c′)`, obtained by projecting the full Hamiltonian.
pub fn build_contextual_hamiltonian(problem: &ContextualProblem, f: &[usize]) -> Result<PauliSum> {
    Ok(problem.subspace(f)?.hamiltonian)
}

/// Projects an ansatz pool. Terms that become the identity are dropped and
/// coinciding terms are merged.
pub fn project_ansatz_pool(pool: &PauliSum, sub: &ContextualSubspace) -> Result<PauliSum> {
    let projected = sub.project(pool)?;
    let kept = projected.iter().filter(|(t, _)| !t.is_identity()).cloned();
    PauliSum::from_terms(projected.n_qubits(), kept)
}

/// Reference state restricted to the contextual subspace.
#[derive(Clone, Debug)]
pub struct ProjectedReference {
    pub state: StateVector,
    /// Set when the projected state is a computational basis state.
    pub bits: Option<Bits>,
    /// `‖P_ν U |ref⟩‖²`.
    pub weight: f64,
}

/// `P_ν′ U_F |ref⟩`, normalized and restricted to `I_sim`.
pub fn project_reference(reference: &Reference, sub: &ContextualSubspace) -> Result<ProjectedReference> {
    check_qubits(sub.n_qubits, reference.n_qubits())?;
    let mut psi = match reference {
        Reference::Bits(b) => StateVector::basis(b)?,
        Reference::State(s) => s.clone(),
    };
    for r in sub.rotations.iter() {
        psi.apply_pauli_rotation(r.generator(), r.angle())?;
    }
    // Bring σ_p eigenstates on fixed qubits to the computational basis.
    for &q in &sub.fixed_qubits {
        match sub.target_pauli {
            Pauli::X => psi.apply_gate(&Gate::H { qubit: q })?,
            Pauli::Y => {
                psi.apply_gate(&Gate::Sdg { qubit: q })?;
                psi.apply_gate(&Gate::H { qubit: q })?;
            }
            _ => {}
        }
    }
    let n = sub.n_qubits;
    let m = sub.sim_qubits.len();
    let mut out = vec![Complex64::default(); 1 << m];
    for (idx, a) in psi.amplitudes().iter().enumerate() {
        let bits = index_to_bits(n, idx);
        let matches = sub
            .fixed_qubits
            .iter()
            .zip(&sub.nu)
            .all(|(&q, &v)| bits.get(q) == (v < 0));
        if matches {
            let j = sub
                .sim_qubits
                .iter()
                .fold(0usize, |acc, &q| (acc << 1) | usize::from(bits.get(q)));
            out[j] = *a;
        }
    }
    let weight: f64 = out.iter().map(|a| a.norm_sqr()).sum();
    if weight < 1e-12 {
        return Err(CsqError::ZeroOverlap);
    }
    let state = StateVector::from_amplitudes(m, out)?;
    let bits = state.as_basis_state(1e-10);
    Ok(ProjectedReference { state, bits, weight })
}

/// Energy estimate for a contextual subspace Hamiltonian.
pub trait Evaluator: Sync {
    fn evaluate(&self, h: &PauliSum) -> Result<f64>;
}

/// Dense diagonalization.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactEvaluator;

impl Evaluator for ExactEvaluator {
    fn evaluate(&self, h: &PauliSum) -> Result<f64> {
        ground_energy(h)
    }
}

/// One link of a relaxation chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxationStep {
    /// Enforced stabilizers `F` (indices into `G̃`).
    pub subset: Vec<usize>,
    /// Stabilizers relaxed at this step.
    pub removed: Vec<usize>,
    pub n_sim: usize,
    pub energy: f64,
    /// Subsets evaluated to choose this step.
    pub evaluations: usize,
}

/// Greedy chain `F_0 = G̃ ⊃ F_1 ⊃ … ⊃ ∅`, removing `depth` stabilizers per
/// step (fewer on the last) and keeping the removal with the lowest energy.
/// Ties go to the lexicographically first removal.
pub fn relaxation_order(
    problem: &ContextualProblem,
    depth: usize,
    evaluator: &dyn Evaluator,
) -> Result<Vec<RelaxationStep>> {
    if depth == 0 {
        return Err(CsqError::InvalidArgument("relaxation depth must be at least 1".into()));
    }
    let mut current = problem.all_stabilizers();
    let start = problem.subspace(&current)?;
    let mut chain = vec![RelaxationStep {
        subset: current.clone(),
        removed: Vec::new(),
        n_sim: start.n_sim(),
        energy: evaluator.evaluate(start.hamiltonian())?,
        evaluations: 1,
    }];
    while !current.is_empty() {
        let size = depth.min(current.len());
        let candidates: Vec<Vec<usize>> = current.iter().copied().combinations(size).collect();
        let results = candidates
            .par_iter()
            .map(|removed| {
                let keep: Vec<usize> = current.iter().copied().filter(|i| !removed.contains(i)).collect();
                let sub = problem.subspace(&keep)?;
                Ok((evaluator.evaluate(sub.hamiltonian())?, sub.n_sim(), keep))
            })
            .collect::<Result<Vec<_>>>()?;
        let (best, _) = results.iter().enumerate().fold(
            (0, f64::INFINITY),
            |(bi, be), (i, r)| if r.0 < be { (i, r.0) } else { (bi, be) },
        );
        let (energy, n_sim, keep) = results[best].clone();
        chain.push(RelaxationStep {
            subset: keep.clone(),
            removed: candidates[best].clone(),
            n_sim,
            energy,
            evaluations: candidates.len(),
        });
        current = keep;
    }
    Ok(chain)
}

/// First chain step whose error against `exact` is below `threshold`.
pub fn minimum_qubit_step(chain: &[RelaxationStep], exact: f64, threshold: f64) -> Option<&RelaxationStep> {
    chain.iter().find(|s| (s.energy - exact).abs() < threshold)
}

/// Chain step with `n_sim` closest to (and not above) `qubits`, falling
/// back to the smallest available subspace.
pub fn step_for_qubits(chain: &[RelaxationStep], qubits: usize) -> Option<&RelaxationStep> {
    chain
        .iter()
        .filter(|s| s.n_sim <= qubits)
        .max_by_key(|s| s.n_sim)
        .or_else(|| chain.first())
}

/// Distinct subsets visited by a chain, for bookkeeping.
pub fn chain_subsets(chain: &[RelaxationStep]) -> BTreeSet<Vec<usize>> {
    chain.iter().map(|s| s.subset.clone()).collect()
}
