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

//! VQE with parameter-shift gradients and Adam, qubit-ADAPT-VQE, and
//! Jordan-Wigner excitation pools.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_qubits, CsqError, Result};
use crate::pauli::{Pauli, PauliSum, PauliTerm};
use crate::simulator::{expectation, StateVector};

/// Shift used by the parameter-shift rule for `e^{iθP}`.
pub const SHIFT: f64 = std::f64::consts::FRAC_PI_4;

/// Deduplicated, canonically ordered Hermitian Pauli strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorPool {
    operators: Vec<PauliTerm>,
}

impl OperatorPool {
    /// Signs are dropped; identity strings are rejected.
    pub fn new(terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut set = BTreeSet::new();
        let mut n = None;
        for t in terms {
            if let Some(n) = n {
                check_qubits(n, t.n_qubits())?;
            }
            n = Some(t.n_qubits());
            if t.is_identity() {
                return Err(CsqError::InvalidArgument("identity in operator pool".into()));
            }
            if !t.is_hermitian() {
                return Err(CsqError::InvalidArgument(format!("{t} is not Hermitian")));
            }
            set.insert(t.positive());
        }
        Ok(Self {
            operators: set.into_iter().collect(),
        })
    }

    /// Pool from the strings of a sum, skipping the identity.
    pub fn from_sum(s: &PauliSum) -> Result<Self> {
        Self::new(s.pauli_terms().filter(|t| !t.is_identity()).cloned())
    }

    /// Every non-identity string on `n` qubits.
    pub fn complete(n: usize) -> Result<Self> {
        let all = (1..(1usize << (2 * n))).map(|m| {
            let paulis: Vec<Pauli> = (0..n)
                .map(|q| Pauli::from_bits((m >> (2 * q)) & 1 == 1, (m >> (2 * q + 1)) & 1 == 1))
                .collect();
            PauliTerm::from_paulis(&paulis)
        });
        Self::new(all)
    }

    pub fn operators(&self) -> &[PauliTerm] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

/// `a_j = ½(X_j + iY_j) ⊗ Z_{<j}` (`creation` gives `a_j†`).
pub fn jw_ladder(n_qubits: usize, j: usize, creation: bool) -> Result<PauliSum> {
    if j >= n_qubits {
        return Err(CsqError::IndexOutOfRange {
            index: j,
            len: n_qubits,
        });
    }
    let string = |p: Pauli| {
        let mut ps = vec![Pauli::I; n_qubits];
        ps[..j].fill(Pauli::Z);
        ps[j] = p;
        PauliTerm::from_paulis(&ps)
    };
    let y = if creation { -0.5 } else { 0.5 };
    PauliSum::from_terms(
        n_qubits,
        [
            (string(Pauli::X), Complex64::new(0.5, 0.0)),
            (string(Pauli::Y), Complex64::new(0.0, y)),
        ],
    )
}

/// Hermitian generator `i(T − T†)` of the excitation
/// `T = a†_{v_1}⋯a†_{v_k} a_{o_k}⋯a_{o_1}`.
pub fn jw_excitation(n_qubits: usize, occupied: &[usize], virtuals: &[usize]) -> Result<PauliSum> {
    check_qubits(occupied.len(), virtuals.len())?;
    let all: Vec<usize> = occupied.iter().chain(virtuals).copied().collect();
    if let Some((_, &i)) = all.iter().enumerate().find(|(k, i)| all[..*k].contains(i)) {
        return Err(CsqError::OverlappingIndices(i));
    }
    let mut t = PauliSum::scalar(n_qubits, Complex64::new(1.0, 0.0));
    for &v in virtuals {
        t = t.multiply(&jw_ladder(n_qubits, v, true)?)?;
    }
    for &o in occupied.iter().rev() {
        t = t.multiply(&jw_ladder(n_qubits, o, false)?)?;
    }
    let anti = t.add(&t.adjoint().scale(Complex64::new(-1.0, 0.0)))?;
    Ok(anti.scale(Complex64::i()))
}

/// Pauli strings of all excitations up to `max_rank` from `occupied` into
/// `virtuals`, one pool entry per distinct string.
pub fn jw_excitation_pool(
    occupied: &[usize],
    virtuals: &[usize],
    max_rank: usize,
    n_qubits: usize,
) -> Result<OperatorPool> {
    if max_rank == 0 || max_rank > 3 {
        return Err(CsqError::InvalidArgument("excitation rank must be 1, 2 or 3".into()));
    }
    for &i in occupied.iter().chain(virtuals) {
        if i >= n_qubits {
            return Err(CsqError::IndexOutOfRange {
                index: i,
                len: n_qubits,
            });
        }
    }
    if let Some(&i) = occupied.iter().find(|i| virtuals.contains(i)) {
        return Err(CsqError::OverlappingIndices(i));
    }
    let mut terms = Vec::new();
    for rank in 1..=max_rank {
        for occ in occupied.iter().copied().combinations(rank) {
            for vir in virtuals.iter().copied().combinations(rank) {
                let g = jw_excitation(n_qubits, &occ, &vir)?;
                terms.extend(g.pauli_terms().cloned());
            }
        }
    }
    OperatorPool::new(terms)
}

/// `(∏_k e^{iθ_k/n_T P_k})^{n_T} |ref⟩` with `P_1` applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzState {
    pub terms: Vec<PauliTerm>,
    pub thetas: Vec<f64>,
    pub reference: StateVector,
    pub trotter_number: usize,
}

impl AnsatzState {
    pub fn new(reference: StateVector) -> Self {
        Self {
            terms: Vec::new(),
            thetas: Vec::new(),
            reference,
            trotter_number: 1,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.reference.n_qubits()
    }

    pub fn n_params(&self) -> usize {
        self.thetas.len()
    }

    pub fn push(&mut self, term: PauliTerm, theta: f64) -> Result<()> {
        check_qubits(self.n_qubits(), term.n_qubits())?;
        if !term.is_hermitian() {
            return Err(CsqError::InvalidArgument(format!("{term} is not Hermitian")));
        }
        self.terms.push(term);
        self.thetas.push(theta);
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        check_qubits(self.terms.len(), self.thetas.len())?;
        if self.trotter_number == 0 {
            return Err(CsqError::InvalidArgument("Trotter number must be at least 1".into()));
        }
        if let Some(t) = self.thetas.iter().find(|t| !t.is_finite()) {
            return Err(CsqError::NonFinite(format!("parameter {t}")));
        }
        Ok(())
    }

    /// `(term, θ)` pairs for circuit emission.
    pub fn operator(&self) -> Vec<(PauliTerm, f64)> {
        self.terms.iter().cloned().zip(self.thetas.iter().copied()).collect()
    }

    /// The prepared state. `shift = (slot, δ)` adds `δ` to the angle of one
    /// application, where slot `r·K + k` is term `k` in Trotter step `r`.
    fn prepare_shifted(&self, shift: Option<(usize, f64)>) -> Result<StateVector> {
        let mut psi = self.reference.clone();
        let nt = self.trotter_number as f64;
        let k = self.terms.len();
        for r in 0..self.trotter_number {
            for (i, (p, th)) in self.terms.iter().zip(&self.thetas).enumerate() {
                let mut angle = th / nt;
                if let Some((slot, d)) = shift {
                    if slot == r * k + i {
                        angle += d;
                    }
                }
                psi.apply_pauli_rotation(p, angle)?;
            }
        }
        Ok(psi)
    }

    pub fn prepare(&self) -> Result<StateVector> {
        self.validate()?;
        self.prepare_shifted(None)
    }
}

fn finite(e: f64) -> Result<f64> {
    if e.is_finite() {
        Ok(e)
    } else {
        Err(CsqError::NonFinite(format!("energy {e}")))
    }
}

/// `⟨H⟩` in the ansatz state.
pub fn energy(h: &PauliSum, ansatz: &AnsatzState) -> Result<f64> {
    check_qubits(h.n_qubits(), ansatz.n_qubits())?;
    finite(expectation(h, &ansatz.prepare()?)?)
}

/// `∂⟨H⟩/∂θ_k` by the parameter-shift rule, summed over the `n_T`
/// occurrences of `θ_k` with weight `1/n_T`. Uses `2·n_T` evaluations.
pub fn gradient(h: &PauliSum, ansatz: &AnsatzState, k: usize) -> Result<f64> {
    check_qubits(h.n_qubits(), ansatz.n_qubits())?;
    ansatz.validate()?;
    if k >= ansatz.n_params() {
        return Err(CsqError::IndexOutOfRange {
            index: k,
            len: ansatz.n_params(),
        });
    }
    let m = ansatz.terms.len();
    let mut g = 0.0;
    for r in 0..ansatz.trotter_number {
        let slot = r * m + k;
        let plus = expectation(h, &ansatz.prepare_shifted(Some((slot, SHIFT)))?)?;
        let minus = expectation(h, &ansatz.prepare_shifted(Some((slot, -SHIFT)))?)?;
        g += plus - minus;
    }
    finite(g / ansatz.trotter_number as f64)
}

/// Full gradient and the number of energy evaluations it took.
pub fn full_gradient(h: &PauliSum, ansatz: &AnsatzState) -> Result<(Vec<f64>, usize)> {
    let g = (0..ansatz.n_params())
        .map(|k| gradient(h, ansatz, k))
        .collect::<Result<Vec<_>>>()?;
    Ok((g, 2 * ansatz.trotter_number * ansatz.n_params()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Exit when the gradient's largest entry falls below this.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            gradient_tolerance: 1e-6,
            max_iterations: 500,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Cumulative energy evaluations, gradients included.
    pub nfev: usize,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    /// Best parameters seen.
    pub thetas: Vec<f64>,
    pub energy: f64,
    pub trace: Vec<TracePoint>,
    pub iterations: usize,
    /// True when the gradient tolerance was met.
    pub converged: bool,
    pub nfev: usize,
}

/// Adam from `ansatz.thetas`. The returned parameters are the best seen, so
/// the final energy never exceeds the initial one.
pub fn vqe_minimize(h: &PauliSum, ansatz: &AnsatzState, config: &AdamConfig) -> Result<VqeResult> {
    let mut work = ansatz.clone();
    let mut nfev = 1;
    let e0 = energy(h, &work)?;
    let mut trace = vec![TracePoint { nfev, energy: e0 }];
    let (mut best_e, mut best_t) = (e0, work.thetas.clone());
    let k = work.n_params();
    let (mut m, mut v) = (vec![0.0; k], vec![0.0; k]);
    let mut converged = k == 0;
    let mut iterations = 0;
    while !converged && iterations < config.max_iterations {
        let (g, used) = full_gradient(h, &work)?;
        nfev += used;
        if g.iter().fold(0.0f64, |a, x| a.max(x.abs())) < config.gradient_tolerance {
            converged = true;
            break;
        }
        iterations += 1;
        let t = iterations as i32;
        for i in 0..k {
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
            let mh = m[i] / (1.0 - config.beta1.powi(t));
            let vh = v[i] / (1.0 - config.beta2.powi(t));
            work.thetas[i] -= config.learning_rate * mh / (vh.sqrt() + config.epsilon);
        }
        let e = energy(h, &work)?;
        nfev += 1;
        trace.push(TracePoint { nfev, energy: e });
        if e < best_e {
            best_e = e;
            best_t = work.thetas.clone();
        }
    }
    Ok(VqeResult {
        thetas: best_t,
        energy: best_e,
        trace,
        iterations,
        converged,
        nfev,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptConfig {
    /// Stop when the largest pool gradient falls below this.
    pub gradient_threshold: f64,
    /// Stop when `|E − target|` falls below [`accuracy`](Self::accuracy).
    pub target_energy: Option<f64>,
    pub accuracy: f64,
    pub max_cycles: usize,
    pub trotter_number: usize,
    pub adam: AdamConfig,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            gradient_threshold: 1e-3,
            target_energy: None,
            accuracy: crate::contextual::CHEMICAL_ACCURACY,
            max_cycles: 30,
            trotter_number: 1,
            adam: AdamConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub cycle: usize,
    /// Pool index appended this cycle; `None` for the reference row.
    pub selected: Option<usize>,
    pub max_gradient: f64,
    pub energy: f64,
    /// Cumulative energy evaluations.
    pub nfev: usize,
    pub abs_error: Option<f64>,
    pub inner_converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    GradientThreshold,
    TargetReached,
    CycleLimit,
}

#[derive(Clone, Debug)]
pub struct AdaptResult {
    pub ansatz: AnsatzState,
    pub cycles: Vec<CycleRecord>,
    pub termination: Termination,
    /// Cycles whose optimum lies above the previous one.
    pub warnings: Vec<String>,
    pub energy: f64,
}

/// `|G_P(0)|` for appending each pool operator to `ansatz`.
pub fn screen_pool(h: &PauliSum, ansatz: &AnsatzState, pool: &OperatorPool) -> Result<Vec<f64>> {
    pool.operators()
        .par_iter()
        .map(|p| {
            let mut trial = ansatz.clone();
            trial.push(p.clone(), 0.0)?;
            gradient(h, &trial, trial.n_params() - 1)
        })
        .collect()
}

/// qubit-ADAPT-VQE: repeatedly append the pool operator with the largest
/// gradient at zero angle and re-optimize all parameters, warm-started.
pub fn adapt_vqe(
    h: &PauliSum,
    pool: &OperatorPool,
    reference: &StateVector,
    config: &AdaptConfig,
) -> Result<AdaptResult> {
    if pool.is_empty() {
        return Err(CsqError::EmptyPool);
    }
    check_qubits(h.n_qubits(), reference.n_qubits())?;
    check_qubits(h.n_qubits(), pool.operators()[0].n_qubits())?;
    let mut ansatz = AnsatzState::new(reference.clone());
    ansatz.trotter_number = config.trotter_number;
    let mut e = energy(h, &ansatz)?;
    let mut nfev = 1;
    let err = |e: f64| config.target_energy.map(|t| (e - t).abs());
    let mut cycles = vec![CycleRecord {
        cycle: 0,
        selected: None,
        max_gradient: f64::NAN,
        energy: e,
        nfev,
        abs_error: err(e),
        inner_converged: true,
    }];
    let mut warnings = Vec::new();
    let reached = |e: f64| err(e).is_some_and(|d| d < config.accuracy);
    if reached(e) {
        return Ok(AdaptResult {
            ansatz,
            cycles,
            termination: Termination::TargetReached,
            warnings,
            energy: e,
        });
    }
    let mut termination = Termination::CycleLimit;
    for cycle in 1..=config.max_cycles {
        let grads = screen_pool(h, &ansatz, pool)?;
        nfev += 2 * config.trotter_number * pool.len();
        let (best, gmax) = grads.iter().enumerate().fold(
            (0, -1.0),
            |(bi, bg), (i, g)| if g.abs() > bg { (i, g.abs()) } else { (bi, bg) },
        );
        if gmax < config.gradient_threshold {
            termination = Termination::GradientThreshold;
            break;
        }
        ansatz.push(pool.operators()[best].clone(), 0.0)?;
        let res = vqe_minimize(h, &ansatz, &config.adam)?;
        nfev += res.nfev;
        ansatz.thetas = res.thetas;
        if res.energy > e + 1e-12 {
            warnings.push(format!("cycle {cycle}: energy rose from {e:.12} to {:.12}", res.energy));
        }
        e = res.energy;
        cycles.push(CycleRecord {
            cycle,
            selected: Some(best),
            max_gradient: gmax,
            energy: e,
            nfev,
            abs_error: err(e),
            inner_converged: res.converged,
        });
        if reached(e) {
            termination = Termination::TargetReached;
            break;
        }
    }
    Ok(AdaptResult {
        ansatz,
        cycles,
        termination,
        warnings,
        energy: e,
    })
}
