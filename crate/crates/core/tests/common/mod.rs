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

//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_4;

use csq::pauli::{apply_rotation_sequence, Pauli, PauliSum, PauliTerm, Rotation, RotationSequence};
use csq::Bits;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_pauli<R: Rng>(rng: &mut R, n: usize) -> PauliTerm {
    let ps: Vec<Pauli> = (0..n)
        .map(|_| match rng.gen_range(0..4) {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        })
        .collect();
    PauliTerm::from_paulis(&ps)
}

pub fn random_nonidentity<R: Rng>(rng: &mut R, n: usize) -> PauliTerm {
    loop {
        let p = random_pauli(rng, n);
        if !p.is_identity() {
            return p;
        }
    }
}

pub fn random_hamiltonian<R: Rng>(rng: &mut R, n: usize, n_terms: usize) -> PauliSum {
    let terms: Vec<(PauliTerm, Complex64)> = (0..n_terms)
        .map(|_| (random_pauli(rng, n), Complex64::new(rng.gen_range(-1.0..1.0), 0.0)))
        .collect();
    PauliSum::from_terms(n, terms).unwrap()
}

/// Random Clifford rotation sequence of `len` π/4 steps.
pub fn random_clifford<R: Rng>(rng: &mut R, n: usize, len: usize) -> RotationSequence {
    let mut seq = RotationSequence::new();
    for _ in 0..len {
        let k = rng.gen_range(1..4) as f64;
        seq.push(Rotation::new(random_nonidentity(rng, n), k * FRAC_PI_4).unwrap());
    }
    seq
}

/// Hamiltonian commuting term-wise with `k` hidden independent Z2
/// symmetries: terms are drawn to commute with diagonal symmetries on the
/// first qubits, then everything is scrambled by a random Clifford.
pub fn planted_symmetry_hamiltonian<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    n_terms: usize,
) -> (PauliSum, Vec<PauliTerm>) {
    let syms: Vec<PauliTerm> = (0..k)
        .map(|j| {
            let mut z = Bits::zeros(n);
            z.set(j, true);
            for q in k..n {
                if rng.gen_bool(0.5) {
                    z.set(q, true);
                }
            }
            PauliTerm::from_parts(Bits::zeros(n), z, 0).unwrap()
        })
        .collect();
    let mut terms = Vec::new();
    while terms.len() < n_terms {
        let p = random_pauli(rng, n);
        if syms.iter().all(|s| !s.symplectic_product(&p)) {
            terms.push((p, Complex64::new(rng.gen_range(-1.0..1.0), 0.0)));
        }
    }
    let h = PauliSum::from_terms(n, terms).unwrap();
    let u = random_clifford(rng, n, 2 * n);
    let h = apply_rotation_sequence(&h, &u).unwrap();
    let syms = syms.iter().map(|s| u.conjugate_term(s).unwrap()).collect();
    (h, syms)
}

/// Random noncontextual Hamiltonian: Z symmetries on qubits `1..n` times
/// anticommuting representatives drawn from `{X, Y, Z}` on qubit 0,
/// scrambled by a random Clifford.
pub fn planted_noncontextual_hamiltonian<R: Rng>(rng: &mut R, n: usize) -> PauliSum {
    let sym_product = |rng: &mut R| {
        let mut z = Bits::zeros(n);
        for q in 1..n {
            if rng.gen_bool(0.5) {
                z.set(q, true);
            }
        }
        PauliTerm::from_parts(Bits::zeros(n), z, 0).unwrap()
    };
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=n) {
        terms.push((sym_product(rng), Complex64::new(rng.gen_range(-1.0..1.0), 0.0)));
    }
    let n_classes = rng.gen_range(1..=3);
    for rep in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().take(n_classes) {
        let c = PauliTerm::single(n, 0, rep);
        for _ in 0..rng.gen_range(1..=3) {
            let member = c.multiply(&sym_product(rng)).unwrap();
            terms.push((member, Complex64::new(rng.gen_range(-1.0..1.0), 0.0)));
        }
    }
    let h = PauliSum::from_terms(n, terms).unwrap();
    apply_rotation_sequence(&h, &random_clifford(rng, n, 2 * n)).unwrap()
}
