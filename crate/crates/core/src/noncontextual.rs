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

//! Noncontextual sub-Hamiltonians: detection, greedy selection, the
//! `S ∪ C₁ ∪ … ∪ C_M` decomposition and the classical objective `η(ν, r)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CsqError, Result};
use crate::gf2::Gf2Basis;
use crate::pauli::{PauliSum, PauliTerm};
use crate::tapering::symplectic_vector;

/// Largest generator count scanned exhaustively by [`optimize`].
pub const EXHAUSTIVE_LIMIT: usize = 24;
/// Proposal budget for the annealing fallback.
pub const ANNEALING_PROPOSALS: usize = 100_000;
/// Tolerance on `|r| = 1`.
pub const UNIT_TOLERANCE: f64 = 1e-10;

/// Indices split into universally commuting terms and commutation classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub symmetry: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

/// Splits `terms` into `S` and equivalence classes, or returns `None` when
/// commutation is not transitive on the non-symmetry part.
pub fn partition(terms: &[PauliTerm]) -> Option<Partition> {
    let n = terms.len();
    let anti: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| terms[i].symplectic_product(&terms[j])).collect())
        .collect();
    let mut symmetry = Vec::new();
    let mut rest = Vec::new();
    for (i, row) in anti.iter().enumerate() {
        if row.iter().any(|&a| a) {
            rest.push(i);
        } else {
            symmetry.push(i);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in &rest {
        match classes.iter_mut().find(|c| !anti[c[0]][i]) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    for (a, ca) in classes.iter().enumerate() {
        for (b, cb) in classes.iter().enumerate() {
            for &i in ca {
                for &j in cb {
                    if anti[i][j] == (a == b) {
                        return None;
                    }
                }
            }
        }
    }
    Some(Partition { symmetry, classes })
}

/// True iff commutation is an equivalence relation once the universally
/// commuting terms are removed.
pub fn is_noncontextual(terms: &[PauliTerm]) -> bool {
    partition(terms).is_some()
}

/// Order in which candidate terms are offered to the greedy selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// All diagonal terms first, then the rest by decreasing magnitude.
    #[default]
    DiagGreedy,
    /// Strictly by decreasing magnitude.
    MagnitudeGreedy,
}

impl FromStr for Strategy {
    type Err = CsqError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diag-greedy" => Ok(Strategy::DiagGreedy),
            "magnitude-greedy" => Ok(Strategy::MagnitudeGreedy),
            _ => Err(CsqError::Parse(format!("unknown strategy {s:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::DiagGreedy => "diag-greedy",
            Strategy::MagnitudeGreedy => "magnitude-greedy",
        })
    }
}

fn by_magnitude(a: &(PauliTerm, Complex64), b: &(PauliTerm, Complex64)) -> Ordering {
    b.1.norm().total_cmp(&a.1.norm()).then_with(|| a.0.cmp(&b.0))
}

/// Greedy noncontextual subset of `h`. Terms are offered in strategy order
/// and kept whenever the running set stays noncontextual.
pub fn select_noncontextual_subset(h: &PauliSum, strategy: Strategy) -> Vec<(PauliTerm, Complex64)> {
    let mut order: Vec<(PauliTerm, Complex64)> = h.terms().to_vec();
    order.sort_by(by_magnitude);
    if strategy == Strategy::DiagGreedy {
        order.sort_by_key(|(t, _)| !t.is_diagonal());
    }
    let mut kept: Vec<(PauliTerm, Complex64)> = Vec::new();
    let mut strings: Vec<PauliTerm> = Vec::new();
    for (t, c) in order {
        strings.push(t.clone());
        if is_noncontextual(&strings) {
            kept.push((t, c));
        } else {
            strings.pop();
        }
    }
    kept
}

/// Splits `h` into the selected noncontextual part and the remainder.
pub fn split_hamiltonian(h: &PauliSum, strategy: Strategy) -> Result<(PauliSum, PauliSum)> {
    let nc = select_noncontextual_subset(h, strategy);
    let keys: std::collections::BTreeSet<&PauliTerm> = nc.iter().map(|(t, _)| t).collect();
    let rest: Vec<_> = h.iter().filter(|(t, _)| !keys.contains(t)).cloned().collect();
    Ok((
        PauliSum::from_terms(h.n_qubits(), nc)?,
        PauliSum::from_terms(h.n_qubits(), rest)?,
    ))
}

/// One term of the model written as `ω · [C_i] · Π_{j∈mask} G_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub term: PauliTerm,
    pub coeff: f64,
    /// Class index, or `None` for symmetry terms.
    pub class: Option<usize>,
    pub omega: i8,
    /// Bit `j` set when `G_j` appears in the product.
    pub mask: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoncontextualModel {
    n_qubits: usize,
    symmetry_terms: Vec<(PauliTerm, f64)>,
    classes: Vec<Vec<(PauliTerm, f64)>>,
    generators: Vec<PauliTerm>,
    class_reps: Vec<PauliTerm>,
    table: Vec<TermEntry>,
}

/// Assignment `(ν, r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoncontextualState {
    pub nu: Vec<i8>,
    pub r: Vec<f64>,
}

fn product(terms: impl IntoIterator<Item = PauliTerm>, n: usize) -> PauliTerm {
    terms
        .into_iter()
        .fold(PauliTerm::identity(n), |acc, t| acc.mul_unchecked(&t))
}

/// Builds the model for a noncontextual Hermitian term list.
///
/// Class representatives are the largest-magnitude members (ties broken by
/// canonical order); classes are sorted by representative magnitude.
pub fn decompose(terms: &[(PauliTerm, Complex64)]) -> Result<NoncontextualModel> {
    let n = terms
        .first()
        .map(|(t, _)| t.n_qubits())
        .ok_or_else(|| CsqError::InvalidArgument("empty noncontextual set".into()))?;
    let sum = PauliSum::from_terms(n, terms.iter().cloned())?;
    sum.ensure_hermitian()?;
    let real: Vec<(PauliTerm, f64)> = sum.iter().map(|(t, c)| (t.clone(), c.re)).collect();
    let strings: Vec<PauliTerm> = real.iter().map(|(t, _)| t.clone()).collect();
    let part = partition(&strings).ok_or(CsqError::Contextual)?;

    let cmp = |a: &(PauliTerm, f64), b: &(PauliTerm, f64)| b.1.abs().total_cmp(&a.1.abs()).then_with(|| a.0.cmp(&b.0));
    let symmetry_terms: Vec<(PauliTerm, f64)> = part.symmetry.iter().map(|&i| real[i].clone()).collect();
    let mut classes: Vec<Vec<(PauliTerm, f64)>> = part
        .classes
        .iter()
        .map(|c| {
            let mut members: Vec<_> = c.iter().map(|&i| real[i].clone()).collect();
            members.sort_by(cmp);
            members
        })
        .collect();
    classes.sort_by(|a, b| cmp(&a[0], &b[0]));
    let class_reps: Vec<PauliTerm> = classes.iter().map(|c| c[0].0.clone()).collect();

    // S' = S ∪ {C_i c : c ∈ C_i}; its independent members form G.
    let mut basis = Gf2Basis::new(2 * n);
    let mut generators = Vec::new();
    let s_prime = symmetry_terms.iter().map(|(t, _)| t.clone()).chain(
        classes
            .iter()
            .zip(&class_reps)
            .flat_map(|(c, rep)| c.iter().map(move |(t, _)| rep.mul_unchecked(t).positive())),
    );
    for t in s_prime {
        if basis.insert(&symplectic_vector(&t)).is_some() {
            generators.push(t);
        }
    }
    if generators.len() > 64 {
        return Err(CsqError::InvalidArgument(format!(
            "{} generators exceed the supported 64",
            generators.len()
        )));
    }

    let mut table = Vec::with_capacity(real.len());
    let entries = symmetry_terms.iter().map(|e| (e, None)).chain(
        classes
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |e| (e, Some(i)))),
    );
    for ((t, coeff), class) in entries {
        let rest = match class {
            Some(i) => class_reps[i].mul_unchecked(t),
            None => t.clone(),
        };
        let comb = basis
            .express(&symplectic_vector(&rest))
            .expect("every term lies in the generated group");
        let mask = comb.ones().fold(0u64, |m, j| m | (1 << j));
        let lead = class.map(|i| class_reps[i].clone());
        let prod = product(lead.into_iter().chain(comb.ones().map(|j| generators[j].clone())), n);
        debug_assert_eq!(&prod.positive(), t);
        let omega = match prod.phase() {
            0 => 1,
            2 => -1,
            _ => unreachable!("product of commuting Hermitian strings is Hermitian"),
        };
        table.push(TermEntry {
            term: t.clone(),
            coeff: *coeff,
            class,
            omega,
            mask,
        });
    }
    Ok(NoncontextualModel {
        n_qubits: n,
        symmetry_terms,
        classes,
        generators,
        class_reps,
        table,
    })
}

/// Decomposes the noncontextual part of a sum.
pub fn decompose_sum(h: &PauliSum) -> Result<NoncontextualModel> {
    decompose(h.terms())
}

fn nu_bits(nu: &[i8]) -> u64 {
    nu.iter()
        .enumerate()
        .fold(0, |m, (j, &v)| if v < 0 { m | (1 << j) } else { m })
}

fn nu_from_bits(bits: u64, k: usize) -> Vec<i8> {
    (0..k).map(|j| if (bits >> j) & 1 == 1 { -1 } else { 1 }).collect()
}

impl NoncontextualModel {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn symmetry_terms(&self) -> &[(PauliTerm, f64)] {
        &self.symmetry_terms
    }

    /// Classes with their representative first.
    pub fn classes(&self) -> &[Vec<(PauliTerm, f64)>] {
        &self.classes
    }

    pub fn generators(&self) -> &[PauliTerm] {
        &self.generators
    }

    pub fn class_reps(&self) -> &[PauliTerm] {
        &self.class_reps
    }

    pub fn table(&self) -> &[TermEntry] {
        &self.table
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn n_terms(&self) -> usize {
        self.table.len()
    }

    pub fn hamiltonian(&self) -> PauliSum {
        PauliSum::from_terms(
            self.n_qubits,
            self.table
                .iter()
                .map(|e| (e.term.clone(), Complex64::new(e.coeff, 0.0))),
        )
        .expect("consistent qubit count")
    }

    /// `(a, b)` with `η(ν, r) = a + b·r` for the sector encoded by `bits`.
    fn linear_form(&self, bits: u64) -> (f64, Vec<f64>) {
        let mut a = 0.0;
        let mut b = vec![0.0; self.classes.len()];
        for e in &self.table {
            let sign = if (e.mask & bits).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            let v = e.coeff * e.omega as f64 * sign;
            match e.class {
                Some(i) => b[i] += v,
                None => a += v,
            }
        }
        (a, b)
    }

    fn sector_minimum(&self, bits: u64) -> f64 {
        let (a, b) = self.linear_form(bits);
        a - b.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn check_state(&self, state: &NoncontextualState) -> Result<()> {
        if state.nu.len() != self.generators.len() {
            return Err(CsqError::DimensionMismatch {
                expected: self.generators.len(),
                found: state.nu.len(),
            });
        }
        if state.r.len() != self.classes.len() {
            return Err(CsqError::DimensionMismatch {
                expected: self.classes.len(),
                found: state.r.len(),
            });
        }
        if state.nu.iter().any(|&v| v != 1 && v != -1) {
            return Err(CsqError::InvalidArgument("ν entries must be +1 or -1".into()));
        }
        if !state.r.is_empty() {
            let norm = state.r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_TOLERANCE {
                return Err(CsqError::NonUnitVector(norm));
            }
        }
        Ok(())
    }

    /// Expectation `⟨G_j⟩` per generator and `⟨C_i⟩ = r_i` per class, as a
    /// consistent classical assignment.
    pub fn eta(&self, state: &NoncontextualState) -> Result<f64> {
        self.check_state(state)?;
        let (a, b) = self.linear_form(nu_bits(&state.nu));
        Ok(a + b.iter().zip(&state.r).map(|(x, y)| x * y).sum::<f64>())
    }

    fn state_for(&self, bits: u64) -> (NoncontextualState, f64) {
        let (a, b) = self.linear_form(bits);
        let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = if b.is_empty() {
            Vec::new()
        } else if norm > 0.0 {
            b.iter().map(|x| -x / norm).collect()
        } else {
            let mut e = vec![0.0; b.len()];
            e[0] = 1.0;
            e
        };
        let state = NoncontextualState {
            nu: nu_from_bits(bits, self.generators.len()),
            r,
        };
        (state, a - norm)
    }
}

/// Settings for [`optimize`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub exhaustive_limit: usize,
    pub proposals: usize,
    pub seed: u64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            exhaustive_limit: EXHAUSTIVE_LIMIT,
            proposals: ANNEALING_PROPOSALS,
            seed: 0,
        }
    }
}

/// Minimizes `η`. Exhaustive over `ν` up to the configured limit, annealing
/// above it; `r` is solved in closed form per `ν`.
pub fn optimize(model: &NoncontextualModel) -> (NoncontextualState, f64) {
    optimize_with(model, &OptimizeConfig::default())
}

pub fn optimize_with(model: &NoncontextualModel, config: &OptimizeConfig) -> (NoncontextualState, f64) {
    let k = model.generators.len();
    let best = if k <= config.exhaustive_limit {
        (0u64..(1u64 << k))
            .into_par_iter()
            .map(|bits| (model.sector_minimum(bits), bits))
            .reduce(
                || (f64::INFINITY, u64::MAX),
                |x, y| match x.0.total_cmp(&y.0) {
                    Ordering::Less => x,
                    Ordering::Greater => y,
                    Ordering::Equal => (x.0, x.1.min(y.1)),
                },
            )
            .1
    } else {
        anneal(model, config)
    };
    model.state_for(best)
}

fn anneal(model: &NoncontextualModel, config: &OptimizeConfig) -> u64 {
    let k = model.generators.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut cur = rng.gen::<u64>() & full;
    let mut e_cur = model.sector_minimum(cur);
    let (mut best, mut e_best) = (cur, e_cur);
    let scale = model.table.iter().map(|e| e.coeff.abs()).sum::<f64>().max(1e-12);
    let (t0, t1) = (scale, scale * 1e-6);
    let steps = config.proposals.max(1);
    let cool = (t1 / t0).powf(1.0 / steps as f64);
    let mut t = t0;
    for _ in 0..steps {
        let cand = cur ^ (1u64 << rng.gen_range(0..k));
        let e = model.sector_minimum(cand);
        if e <= e_cur || rng.gen::<f64>() < ((e_cur - e) / t).exp() {
            cur = cand;
            e_cur = e;
            if e < e_best {
                best = cur;
                e_best = e;
            }
        }
        t *= cool;
    }
    best
}
