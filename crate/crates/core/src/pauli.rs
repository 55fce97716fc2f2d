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

//! Symplectic Pauli algebra with exact phase tracking.
//!
//! A [`PauliTerm`] stores an N-qubit Pauli string as two bit vectors `x` and
//! `z` plus a phase exponent `k`, and represents the operator
//! `i^k · σ(x_0, z_0) ⊗ … ⊗ σ(x_{N-1}, z_{N-1})` where
//! `σ(0,0) = I`, `σ(1,0) = X`, `σ(0,1) = Z` and `σ(1,1) = Y`. The phase
//! therefore counts powers of `i` applied to the positive-sign (Hermitian)
//! string; `Y` is never written as `XZ`.
//!
//! Qubit 0 is the leftmost character of a Pauli string and the most
//! significant bit of a computational-basis index.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::dense::{self, Matrix};
use crate::error::{check_qubits, CsqError, Result};

/// Coefficients below this magnitude are removed by [`PauliSum::simplify`].
pub const DROP_TOLERANCE: f64 = 1e-12;
/// Largest imaginary coefficient part tolerated for a Hermitian sum.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// `i^k` for `k` taken mod 4.
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    n_qubits: usize,
    x: Bits,
    z: Bits,
    phase: u8,
}

impl PauliTerm {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            x: Bits::zeros(n_qubits),
            z: Bits::zeros(n_qubits),
            phase: 0,
        }
    }

    pub fn from_parts(x: Bits, z: Bits, phase: u8) -> Result<Self> {
        check_qubits(x.len(), z.len())?;
        Ok(Self {
            n_qubits: x.len(),
            x,
            z,
            phase: phase % 4,
        })
    }

    pub fn single(n_qubits: usize, qubit: usize, pauli: Pauli) -> Self {
        let mut t = Self::identity(n_qubits);
        t.set_pauli(qubit, pauli);
        t
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut t = Self::identity(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            t.set_pauli(q, p);
        }
        t
    }

    fn set_pauli(&mut self, qubit: usize, pauli: Pauli) {
        let (x, z) = pauli.bits();
        self.x.set(qubit, x);
        self.z.set(qubit, z);
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn x(&self) -> &Bits {
        &self.x
    }

    #[inline]
    pub fn z(&self) -> &Bits {
        &self.z
    }

    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// The scalar `i^phase`.
    pub fn phase_factor(&self) -> Complex64 {
        i_pow(self.phase)
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self {
            phase: phase % 4,
            ..self.clone()
        }
    }

    /// Same string with phase exponent 0.
    pub fn positive(&self) -> Self {
        self.with_phase(0)
    }

    pub fn negated(&self) -> Self {
        self.with_phase(self.phase + 2)
    }

    pub fn pauli_at(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x.get(qubit), self.z.get(qubit))
    }

    pub fn paulis(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n_qubits).map(move |q| self.pauli_at(q))
    }

    /// Qubits acted on by a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones() as usize
    }

    /// True when the string part is the identity (any phase).
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// True when the string contains only I and Z.
    pub fn is_diagonal(&self) -> bool {
        self.x.is_zero()
    }

    /// Hermitian iff the phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// Product `self · other` with the accumulated phase.
    pub fn multiply(&self, other: &PauliTerm) -> Result<PauliTerm> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliTerm) -> PauliTerm {
        // σ(x,z) = i^{x·z} X^x Z^z, and Z^a X^b = (-1)^{a·b} X^b Z^a.
        let x = self.x.xor(&other.x);
        let z = self.z.xor(&other.z);
        let k = self.x.and_count(&self.z) as i64
            + other.x.and_count(&other.z) as i64
            + 2 * self.z.and_count(&other.x) as i64
            - x.and_count(&z) as i64
            + self.phase as i64
            + other.phase as i64;
        PauliTerm {
            n_qubits: self.n_qubits,
            x,
            z,
            phase: k.rem_euclid(4) as u8,
        }
    }

    /// Symplectic inner product `x_a·z_b + z_a·x_b mod 2`.
    #[inline]
    pub fn symplectic_product(&self, other: &PauliTerm) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) % 2 == 1
    }

    pub fn commutes(&self, other: &PauliTerm) -> Result<bool> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        Ok(!self.symplectic_product(other))
    }

    /// Qubit-wise commutation: on every qubit the two factors are equal or
    /// one of them is the identity.
    pub fn qubitwise_commutes(&self, other: &PauliTerm) -> bool {
        (0..self.n_qubits).all(|q| {
            let a = self.pauli_at(q);
            let b = other.pauli_at(q);
            a == Pauli::I || b == Pauli::I || a == b
        })
    }

    /// Removes the given qubit positions from the string, keeping the phase.
    pub fn remove_qubits(&self, qubits: &[usize]) -> PauliTerm {
        let x = self.x.remove_positions(qubits);
        PauliTerm {
            n_qubits: x.len(),
            x,
            z: self.z.remove_positions(qubits),
            phase: self.phase,
        }
    }

    /// Tensor product `self ⊗ other` (self on the leading qubits).
    pub fn tensor(&self, other: &PauliTerm) -> PauliTerm {
        PauliTerm {
            n_qubits: self.n_qubits + other.n_qubits,
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
            phase: (self.phase + other.phase) % 4,
        }
    }

    /// Action on a computational basis index: `P|b⟩ = c |b'⟩`.
    ///
    /// Only valid for `n_qubits < usize::BITS`.
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        let (xm, zm, y_count) = self.masks();
        let sign = if (zm & b).count_ones() % 2 == 1 { 2 } else { 0 };
        (b ^ xm, i_pow(((self.phase as u32 + y_count + sign) % 4) as u8))
    }

    /// `(x_mask, z_mask, number of Y factors)` in basis-index bit order.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let n = self.n_qubits;
        let mut xm = 0usize;
        let mut zm = 0usize;
        for q in self.x.ones() {
            xm |= 1 << (n - 1 - q);
        }
        for q in self.z.ones() {
            zm |= 1 << (n - 1 - q);
        }
        (xm, zm, self.x.and_count(&self.z))
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        dense::check_cap(self.n_qubits, dense::MATRIX_QUBIT_CAP)?;
        Ok(dense::pauli_matrix(self))
    }

    /// Canonical string key ordering: `(x, z)` lexicographic, then phase.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Ord for PauliTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x
            .cmp(&other.x)
            .then_with(|| self.z.cmp(&other.z))
            .then_with(|| self.phase.cmp(&other.phase))
    }
}

impl PartialOrd for PauliTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for p in self.paulis() {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliTerm {
    type Err = CsqError;

    /// Parses strings such as `XIZY`, `-ZZ`, `iX` or `-iY`. An optional
    /// leading `+` is accepted.
    fn from_str(s: &str) -> Result<Self> {
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else {
            (0, s)
        };
        let paulis = body
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| CsqError::Parse(format!("invalid Pauli character {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliTerm::from_paulis(&paulis).with_phase(phase))
    }
}

impl Serialize for PauliTerm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliTerm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A coefficient-weighted sum of Pauli strings on a fixed number of qubits.
///
/// Stored terms always carry phase 0; phases of inserted terms are absorbed
/// into their coefficients. A zero-qubit sum is a scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(PauliTerm, Complex64)>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn scalar(n_qubits: usize, value: Complex64) -> Self {
        Self::zero(n_qubits).plus_term(PauliTerm::identity(n_qubits), value)
    }

    /// Builds and simplifies a sum. Fails when any term has the wrong
    /// qubit count.
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliTerm, Complex64)>,
    {
        let mut out = Vec::new();
        for (t, c) in terms {
            check_qubits(n_qubits, t.n_qubits())?;
            let c = c * t.phase_factor();
            out.push((t.positive(), c));
        }
        Ok(Self { n_qubits, terms: out }.simplify())
    }

    /// Convenience constructor from `(pauli string, real coefficient)` pairs.
    pub fn from_real_strs(terms: &[(&str, f64)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(s, c)| Ok((s.parse::<PauliTerm>()?, Complex64::new(*c, 0.0))))
            .collect::<Result<Vec<_>>>()?;
        let n = parsed
            .first()
            .map(|(t, _)| t.n_qubits())
            .ok_or_else(|| CsqError::InvalidArgument("empty term list".into()))?;
        Self::from_terms(n, parsed)
    }

    fn plus_term(mut self, t: PauliTerm, c: Complex64) -> Self {
        let c = c * t.phase_factor();
        self.terms.push((t.positive(), c));
        self.simplify()
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(PauliTerm, Complex64)] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = &(PauliTerm, Complex64)> {
        self.terms.iter()
    }

    pub fn pauli_terms(&self) -> impl Iterator<Item = &PauliTerm> {
        self.terms.iter().map(|(t, _)| t)
    }

    /// Merges duplicate strings, drops coefficients below
    /// [`DROP_TOLERANCE`] and sorts terms canonically.
    pub fn simplify(&self) -> PauliSum {
        let mut merged: BTreeMap<PauliTerm, Complex64> = BTreeMap::new();
        let mut sorted: Vec<&(PauliTerm, Complex64)> = self.terms.iter().collect();
        // Sum duplicates in a fixed order so the result does not depend on
        // the input order beyond floating-point ties.
        sorted.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then(a.1.re.total_cmp(&b.1.re))
                .then(a.1.im.total_cmp(&b.1.im))
        });
        for (t, c) in sorted {
            let c = *c * t.phase_factor();
            *merged.entry(t.positive()).or_default() += c;
        }
        PauliSum {
            n_qubits: self.n_qubits,
            terms: merged.into_iter().filter(|(_, c)| c.norm() >= DROP_TOLERANCE).collect(),
        }
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        Ok(PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
        .simplify())
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * factor)).collect(),
        }
        .simplify()
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        let mut out = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.push((a.mul_unchecked(b), ca * cb));
            }
        }
        PauliSum::from_terms(self.n_qubits, out)
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c.conj())).collect(),
        }
    }

    /// Largest imaginary coefficient part.
    pub fn max_imaginary(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.im.abs()).fold(0.0, f64::max)
    }

    /// Hermitian when every coefficient is real within
    /// [`HERMITIAN_TOLERANCE`].
    pub fn is_hermitian(&self) -> bool {
        self.max_imaginary() <= HERMITIAN_TOLERANCE
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let im = self.max_imaginary();
        if im <= HERMITIAN_TOLERANCE {
            Ok(())
        } else {
            Err(CsqError::NotHermitian(im))
        }
    }

    /// Coefficient of the identity string.
    pub fn identity_coefficient(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|(t, _)| t.is_identity())
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    pub fn coefficient_of(&self, term: &PauliTerm) -> Complex64 {
        let key = term.positive();
        self.terms
            .iter()
            .find(|(t, _)| *t == key)
            .map(|(_, c)| *c * term.phase_factor().conj())
            .unwrap_or_default()
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    /// Max coefficient distance between two sums after simplification.
    pub fn distance(&self, other: &PauliSum) -> Result<f64> {
        let diff = self.add(&other.scale(Complex64::new(-1.0, 0.0)))?;
        Ok(diff.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max))
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        self.to_matrix_with_cap(dense::MATRIX_QUBIT_CAP)
    }

    pub fn to_matrix_with_cap(&self, cap: usize) -> Result<Matrix> {
        dense::check_cap(self.n_qubits, cap)?;
        Ok(dense::sum_matrix(self))
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}·{}", c.re, t)?;
            } else {
                write!(f, "({}{:+}i)·{}", c.re, c.im, t)?;
            }
        }
        Ok(())
    }
}

/// One conjugation step `A ↦ e^{iθQ} A e^{-iθQ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    generator: PauliTerm,
    angle: f64,
    clifford: bool,
}

impl Rotation {
    /// The generator must be Hermitian; a negative sign is folded into the
    /// angle so the stored generator always has phase 0.
    pub fn new(generator: PauliTerm, angle: f64) -> Result<Self> {
        if !generator.is_hermitian() {
            return Err(CsqError::InvalidArgument(format!(
                "rotation generator {generator} is not Hermitian"
            )));
        }
        if !angle.is_finite() {
            return Err(CsqError::NonFinite(format!("rotation angle {angle}")));
        }
        let angle = if generator.phase() == 2 { -angle } else { angle };
        let steps = angle / FRAC_PI_4;
        let clifford = (steps - steps.round()).abs() < 1e-12;
        Ok(Self {
            generator: generator.positive(),
            angle,
            clifford,
        })
    }

    pub fn generator(&self) -> &PauliTerm {
        &self.generator
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// True when the angle is a multiple of π/4, so Pauli strings map to
    /// single Pauli strings.
    pub fn is_clifford(&self) -> bool {
        self.clifford
    }

    fn clifford_steps(&self) -> u8 {
        ((self.angle / FRAC_PI_4).round() as i64).rem_euclid(8) as u8
    }
}

/// Result of conjugating a single Pauli string.
#[derive(Clone, Debug, PartialEq)]
pub enum Conjugated {
    Term(PauliTerm),
    Sum(PauliSum),
}

impl Conjugated {
    pub fn into_sum(self) -> PauliSum {
        match self {
            Conjugated::Term(t) => {
                let n = t.n_qubits();
                PauliSum::from_terms(n, [(t, Complex64::new(1.0, 0.0))]).expect("qubit count matches")
            }
            Conjugated::Sum(s) => s,
        }
    }
}

/// Conjugates `p` by `e^{iθQ}`.
///
/// Commuting strings are returned unchanged. Anticommuting strings map to
/// `cos(2θ)·p + i·sin(2θ)·Q·p`, which collapses to a single string when θ is
/// a multiple of π/4.
pub fn clifford_conjugate(p: &PauliTerm, rotation: &Rotation) -> Result<Conjugated> {
    check_qubits(p.n_qubits(), rotation.generator.n_qubits())?;
    Ok(conjugate_unchecked(p, rotation))
}

fn conjugate_unchecked(p: &PauliTerm, rotation: &Rotation) -> Conjugated {
    let q = &rotation.generator;
    if !q.symplectic_product(p) {
        return Conjugated::Term(p.clone());
    }
    let qp = q.mul_unchecked(p);
    if rotation.clifford {
        // 2θ = kπ/2: (cos 2θ, sin 2θ) ∈ {(1,0), (0,1), (-1,0), (0,-1)}.
        return Conjugated::Term(match rotation.clifford_steps() % 4 {
            0 => p.clone(),
            1 => qp.with_phase(qp.phase() + 1),
            2 => p.negated(),
            _ => qp.with_phase(qp.phase() + 3),
        });
    }
    let (s, c) = (2.0 * rotation.angle).sin_cos();
    let n = p.n_qubits();
    Conjugated::Sum(
        PauliSum::from_terms(n, [(p.clone(), Complex64::new(c, 0.0)), (qp, Complex64::new(0.0, s))])
            .expect("qubit count matches"),
    )
}

/// Ordered list of rotations; the first entry is applied first, so the
/// represented unitary is `U = R_k ⋯ R_1`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RotationSequence {
    rotations: Vec<Rotation>,
}

impl RotationSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rotations(rotations: Vec<Rotation>) -> Self {
        Self { rotations }
    }

    pub fn push(&mut self, rotation: Rotation) {
        self.rotations.push(rotation);
    }

    pub fn extend(&mut self, other: &RotationSequence) {
        self.rotations.extend(other.rotations.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rotation> {
        self.rotations.iter()
    }

    pub fn is_clifford(&self) -> bool {
        self.rotations.iter().all(Rotation::is_clifford)
    }

    /// Conjugates a single string through a Clifford-only sequence.
    pub fn conjugate_term(&self, p: &PauliTerm) -> Result<PauliTerm> {
        let mut cur = p.clone();
        for r in &self.rotations {
            check_qubits(cur.n_qubits(), r.generator.n_qubits())?;
            match conjugate_unchecked(&cur, r) {
                Conjugated::Term(t) => cur = t,
                Conjugated::Sum(_) => {
                    return Err(CsqError::InvalidArgument(
                        "non-Clifford rotation in Clifford-only conjugation".into(),
                    ))
                }
            }
        }
        Ok(cur)
    }

    /// Dense matrix of `U`.
    pub fn to_matrix(&self, n_qubits: usize) -> Result<Matrix> {
        dense::check_cap(n_qubits, dense::MATRIX_QUBIT_CAP)?;
        let mut u = Matrix::identity(1 << n_qubits, 1 << n_qubits);
        for r in &self.rotations {
            check_qubits(n_qubits, r.generator.n_qubits())?;
            let g = dense::pauli_matrix(&r.generator);
            let step = dense::pauli_exponential(&g, r.angle);
            u = step * u;
        }
        Ok(u)
    }
}

impl<'a> IntoIterator for &'a RotationSequence {
    type Item = &'a Rotation;
    type IntoIter = std::slice::Iter<'a, Rotation>;

    fn into_iter(self) -> Self::IntoIter {
        self.rotations.iter()
    }
}

/// `s ↦ U s U†` for the unitary represented by `sequence`.
pub fn apply_rotation_sequence(s: &PauliSum, sequence: &RotationSequence) -> Result<PauliSum> {
    let mut cur = s.clone();
    for r in sequence {
        check_qubits(cur.n_qubits(), r.generator.n_qubits())?;
        let mut next = Vec::with_capacity(cur.len());
        for (t, c) in cur.iter() {
            match conjugate_unchecked(t, r) {
                Conjugated::Term(t) => next.push((t, *c)),
                Conjugated::Sum(sum) => {
                    next.extend(sum.iter().map(|(t2, c2)| (t2.clone(), c * c2)));
                }
            }
        }
        cur = PauliSum::from_terms(cur.n_qubits(), next)?;
    }
    Ok(cur)
}
