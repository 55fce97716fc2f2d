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

//! Term-wise Z2 symmetries, the Clifford map onto single-qubit Paulis, and
//! the stabilizer subspace projection.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{check_qubits, CsqError, Result};
use crate::gf2::{self, Gf2Basis};
use crate::pauli::{apply_rotation_sequence, Pauli, PauliSum, PauliTerm, Rotation, RotationSequence};
use crate::simulator::StateVector;

/// Smallest `|⟨G⟩|` accepted when reading a sector off a reference state.
pub const SECTOR_THRESHOLD: f64 = 0.99;

/// `(x | z)` as one vector of length `2N`.
pub(crate) fn symplectic_vector(p: &PauliTerm) -> Bits {
    p.x().concat(p.z())
}

pub(crate) fn from_symplectic(v: &Bits) -> PauliTerm {
    let n = v.len() / 2;
    let x = Bits::from_bools((0..n).map(|i| v.get(i)));
    let z = Bits::from_bools((n..2 * n).map(|i| v.get(i)));
    PauliTerm::from_parts(x, z, 0).expect("equal halves")
}

/// Basis of the Pauli strings commuting with every term of `h`.
///
/// The result is the GF(2) kernel of the commutation relation; its members
/// need not commute with each other. Use [`commuting_generators`] to pick a
/// set usable for tapering.
pub fn find_symmetry_generators(h: &PauliSum) -> Vec<PauliTerm> {
    let n = h.n_qubits();
    // ⟨t, P⟩ = t_z·P_x + t_x·P_z, so row t is (t_z | t_x) acting on (P_x | P_z).
    let rows: Vec<Bits> = h.pauli_terms().map(|t| t.z().concat(t.x())).collect();
    gf2::null_space(&rows, 2 * n).iter().map(from_symplectic).collect()
}

/// Maximal pairwise-commuting subset of the span of `gens`, built by
/// symplectic Gram-Schmidt. Diagonal strings are processed first and kept
/// in preference to their anticommuting partners.
pub fn commuting_generators(gens: &[PauliTerm]) -> Vec<PauliTerm> {
    let mut pool: Vec<PauliTerm> = gens.iter().filter(|g| g.is_diagonal()).cloned().collect();
    pool.extend(gens.iter().filter(|g| !g.is_diagonal()).cloned());
    let mut pool: Vec<PauliTerm> = pool.into_iter().map(|g| g.positive()).collect();
    let mut out = Vec::new();
    while !pool.is_empty() {
        let u = pool.remove(0);
        match pool.iter().position(|w| u.symplectic_product(w)) {
            None => out.push(u),
            Some(j) => {
                let w = pool.remove(j);
                for v in &mut pool {
                    let mut vec = symplectic_vector(v);
                    if v.symplectic_product(&w) {
                        vec.xor_assign(&symplectic_vector(&u));
                    }
                    if v.symplectic_product(&u) {
                        vec.xor_assign(&symplectic_vector(&w));
                    }
                    *v = from_symplectic(&vec);
                }
                out.push(u);
            }
        }
    }
    out
}

/// Clifford map sending each generator to a single-qubit Pauli.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerMap {
    n_qubits: usize,
    generators: Vec<PauliTerm>,
    rotations: RotationSequence,
    target_qubits: Vec<usize>,
    target_pauli: Pauli,
}

impl StabilizerMap {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn generators(&self) -> &[PauliTerm] {
        &self.generators
    }

    pub fn rotations(&self) -> &RotationSequence {
        &self.rotations
    }

    /// `target_qubits()[i]` is the qubit generator `i` is mapped onto.
    pub fn target_qubits(&self) -> &[usize] {
        &self.target_qubits
    }

    pub fn target_pauli(&self) -> Pauli {
        self.target_pauli
    }

    /// Qubits left after projection, ascending.
    pub fn free_qubits(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| !self.target_qubits.contains(q)).collect()
    }
}

/// Eigenvalue assignment `ν`, one entry per generator of a map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub nu: Vec<i8>,
}

impl Sector {
    pub fn new(nu: Vec<i8>) -> Result<Self> {
        if nu.iter().any(|&v| v != 1 && v != -1) {
            return Err(CsqError::InvalidArgument("sector entries must be +1 or -1".into()));
        }
        Ok(Self { nu })
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    /// All `2^k` sectors for `k` generators, `+1` first.
    pub fn all(k: usize) -> impl Iterator<Item = Sector> {
        (0u64..(1u64 << k)).map(move |m| Sector {
            nu: (0..k).map(|i| if (m >> i) & 1 == 1 { -1 } else { 1 }).collect(),
        })
    }
}

fn ensure_independent_commuting(gens: &[PauliTerm]) -> Result<()> {
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            if gens[i].symplectic_product(&gens[j]) {
                return Err(CsqError::NonCommutingGenerators(i, j));
            }
        }
    }
    let vecs: Vec<Bits> = gens.iter().map(symplectic_vector).collect();
    if gf2::rank(&vecs) != gens.len() {
        return Err(CsqError::DependentGenerators);
    }
    Ok(())
}

/// Single-qubit Pauli on `q` other than `p`, used as an auxiliary rotation
/// axis.
fn other_pauli(p: Pauli) -> Pauli {
    match p {
        Pauli::X => Pauli::Z,
        _ => Pauli::X,
    }
}

fn rotate(seq: &mut RotationSequence, g: &mut PauliTerm, axis: PauliTerm, angle: f64) -> Result<()> {
    let r = Rotation::new(axis, angle)?;
    *g = RotationSequence::from_rotations(vec![r.clone()]).conjugate_term(g)?;
    seq.push(r);
    Ok(())
}

/// Builds `U` with `U G U† = σ_p` on a distinct qubit for every generator.
///
/// Generators are handled in order; each goes to the lowest unused qubit on
/// which its current image acts. At most three Clifford rotations are used
/// per generator.
pub fn build_stabilizer_map(gens: &[PauliTerm], target: Pauli) -> Result<StabilizerMap> {
    if target == Pauli::I {
        return Err(CsqError::InvalidArgument("target Pauli must be X, Y or Z".into()));
    }
    let Some(n) = gens.first().map(PauliTerm::n_qubits) else {
        return Err(CsqError::InvalidArgument("no generators given".into()));
    };
    for g in gens {
        check_qubits(n, g.n_qubits())?;
        if !g.is_hermitian() || g.is_identity() {
            return Err(CsqError::InvalidArgument(format!("{g} is not a valid stabilizer")));
        }
    }
    ensure_independent_commuting(gens)?;
    let mut seq = RotationSequence::new();
    let mut used = vec![false; n];
    let mut targets = Vec::with_capacity(gens.len());
    for g in gens {
        let mut img = seq.conjugate_term(g)?;
        let q = (0..n)
            .find(|&q| !used[q] && img.pauli_at(q) != Pauli::I)
            .ok_or(CsqError::DependentGenerators)?;
        let t = PauliTerm::single(n, q, target);
        let aux = PauliTerm::single(n, q, other_pauli(target));
        if img.positive() != t {
            if img.pauli_at(q) == target {
                rotate(&mut seq, &mut img, aux.clone(), FRAC_PI_4)?;
            }
            if img.positive() != t {
                // e^{iπ/4 R} g e^{-iπ/4 R} = iRg = T for R = -i T g.
                let r = t.multiply(&img)?;
                let r = r.with_phase(r.phase() + 3);
                rotate(&mut seq, &mut img, r, FRAC_PI_4)?;
            }
        }
        if img != t {
            rotate(&mut seq, &mut img, aux, FRAC_PI_2)?;
        }
        debug_assert_eq!(img, t);
        used[q] = true;
        targets.push(q);
    }
    Ok(StabilizerMap {
        n_qubits: n,
        generators: gens.iter().map(PauliTerm::positive).collect(),
        rotations: seq,
        target_qubits: targets,
        target_pauli: target,
    })
}

fn sector_from_expectations(values: impl Iterator<Item = f64>) -> Result<Sector> {
    let mut nu = Vec::new();
    for (generator, e) in values.enumerate() {
        if e.abs() < SECTOR_THRESHOLD {
            return Err(CsqError::AmbiguousSector {
                generator,
                expectation: e,
            });
        }
        nu.push(if e > 0.0 { 1 } else { -1 });
    }
    Ok(Sector { nu })
}

/// Reads `ν` off a statevector as `⟨G⟩`.
pub fn assign_sector(map: &StabilizerMap, state: &StateVector) -> Result<Sector> {
    check_qubits(map.n_qubits, state.n_qubits())?;
    let values = map
        .generators
        .iter()
        .map(|g| state.expectation_term(g).map(|c| c.re))
        .collect::<Result<Vec<_>>>()?;
    sector_from_expectations(values.into_iter())
}

/// Reads `ν` off a computational basis state.
pub fn assign_sector_bits(map: &StabilizerMap, bits: &Bits) -> Result<Sector> {
    check_qubits(map.n_qubits, bits.len())?;
    sector_from_expectations(map.generators.iter().map(|g| basis_expectation(g, bits)))
}

/// `⟨b|P|b⟩` for a Hermitian string.
pub(crate) fn basis_expectation(p: &PauliTerm, bits: &Bits) -> f64 {
    if !p.is_diagonal() {
        return 0.0;
    }
    let odd = (p.z().and_count(bits) + p.phase() as u32 / 2) % 2 == 1;
    if odd {
        -1.0
    } else {
        1.0
    }
}

/// Projection of `U s U†` onto the sector: strings with anything other than
/// `I` or `σ_p` on a stabilized qubit are dropped, `σ_p` there is replaced by
/// `ν`, and stabilized qubits are removed.
pub fn project(s: &PauliSum, map: &StabilizerMap, sector: &Sector) -> Result<PauliSum> {
    check_qubits(map.n_qubits, s.n_qubits())?;
    check_qubits(map.target_qubits.len(), sector.len())?;
    let rotated = apply_rotation_sequence(s, &map.rotations)?;
    project_rotated(&rotated, &map.target_qubits, map.target_pauli, &sector.nu)
}

/// Projection step alone, for sums already in the rotated frame.
pub(crate) fn project_rotated(rotated: &PauliSum, qubits: &[usize], target: Pauli, nu: &[i8]) -> Result<PauliSum> {
    let n_out = rotated.n_qubits() - qubits.len();
    let mut out = Vec::with_capacity(rotated.len());
    'terms: for (t, c) in rotated.iter() {
        let mut sign = 1.0;
        for (&q, &v) in qubits.iter().zip(nu) {
            match t.pauli_at(q) {
                Pauli::I => {}
                p if p == target => sign *= v as f64,
                _ => continue 'terms,
            }
        }
        out.push((t.remove_qubits(qubits), c * sign));
    }
    PauliSum::from_terms(n_out, out)
}

/// Reference for sector selection.
#[derive(Clone, Debug)]
pub enum Reference {
    Bits(Bits),
    State(StateVector),
}

impl Reference {
    pub fn n_qubits(&self) -> usize {
        match self {
            Reference::Bits(b) => b.len(),
            Reference::State(s) => s.n_qubits(),
        }
    }

    pub fn sector(&self, map: &StabilizerMap) -> Result<Sector> {
        match self {
            Reference::Bits(b) => assign_sector_bits(map, b),
            Reference::State(s) => assign_sector(map, s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Tapered {
    pub reduced: PauliSum,
    /// `None` when the Hamiltonian has no nontrivial symmetry.
    pub map: Option<StabilizerMap>,
    pub sector: Sector,
}

impl Tapered {
    pub fn removed_qubits(&self) -> usize {
        self.sector.len()
    }
}

/// Finds symmetries, maps them to `target` on distinct qubits, picks the
/// sector from `reference` and projects.
pub fn taper_hamiltonian(h: &PauliSum, reference: &Reference, target: Pauli) -> Result<Tapered> {
    h.ensure_hermitian()?;
    check_qubits(h.n_qubits(), reference.n_qubits())?;
    let gens = commuting_generators(&find_symmetry_generators(h));
    if gens.is_empty() {
        return Ok(Tapered {
            reduced: h.clone(),
            map: None,
            sector: Sector { nu: Vec::new() },
        });
    }
    let map = build_stabilizer_map(&gens, target)?;
    let sector = reference.sector(&map)?;
    let reduced = project(h, &map, &sector)?;
    Ok(Tapered {
        reduced,
        map: Some(map),
        sector,
    })
}

/// Reduced Hamiltonians for every sector of `map`.
pub fn all_sector_reductions(h: &PauliSum, map: &StabilizerMap) -> Result<Vec<(Sector, PauliSum)>> {
    let rotated = apply_rotation_sequence(h, &map.rotations)?;
    Sector::all(map.generators.len())
        .map(|s| {
            let r = project_rotated(&rotated, &map.target_qubits, map.target_pauli, &s.nu)?;
            Ok((s, r))
        })
        .collect()
}

/// True when `p` lies in the GF(2) span of `gens` (signs ignored).
pub fn span_contains(gens: &[PauliTerm], p: &PauliTerm) -> bool {
    let Some(first) = gens.first() else {
        return p.is_identity();
    };
    let mut basis = Gf2Basis::new(2 * first.n_qubits());
    for g in gens {
        basis.insert(&symplectic_vector(g));
    }
    basis.contains(&symplectic_vector(p))
}
