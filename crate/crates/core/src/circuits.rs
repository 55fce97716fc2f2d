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

//! Gate-level circuits for exponentiated Pauli strings and first-order
//! Trotter products.
//!
//! `RZ(φ)` follows the convention `diag(e^{iφ/2}, e^{-iφ/2}) = e^{i(φ/2)Z}`,
//! so `RZ(2θ) = e^{iθZ}`. `S = diag(1, i)` and `Sdg = S†`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dense::{self, Matrix};
use crate::error::{check_qubits, CsqError, Result};
use crate::pauli::{Pauli, PauliTerm};
use crate::simulator::StateVector;

/// Cap for [`circuit_unitary`].
pub const UNITARY_QUBIT_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    H { qubit: usize },
    S { qubit: usize },
    Sdg { qubit: usize },
    X { qubit: usize },
    Cnot { control: usize, target: usize },
    Rz { qubit: usize, angle: f64 },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { qubit }
            | Gate::S { qubit }
            | Gate::Sdg { qubit }
            | Gate::X { qubit }
            | Gate::Rz { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// True when `self` followed by `next` is the identity.
    fn cancels_with(&self, next: &Gate) -> bool {
        use Gate::*;
        match (self, next) {
            (H { qubit: a }, H { qubit: b }) | (X { qubit: a }, X { qubit: b }) => a == b,
            (S { qubit: a }, Sdg { qubit: b }) | (Sdg { qubit: a }, S { qubit: b }) => a == b,
            (
                Cnot {
                    control: c1,
                    target: t1,
                },
                Cnot {
                    control: c2,
                    target: t2,
                },
            ) => c1 == c2 && t1 == t2,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    /// Global phase φ: the circuit implements `e^{iφ} · (gate product)`.
    #[serde(default)]
    global_phase: f64,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            global_phase: 0.0,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n_qubits {
                return Err(CsqError::IndexOutOfRange {
                    index: q,
                    len: self.n_qubits,
                });
            }
        }
        match gate {
            Gate::Cnot { control, target } if control == target => {
                return Err(CsqError::InvalidArgument(format!(
                    "CNOT control and target are both qubit {control}"
                )))
            }
            Gate::Rz { angle, .. } if !angle.is_finite() => {
                return Err(CsqError::NonFinite(format!("RZ angle {angle}")))
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        self.gates.extend_from_slice(&other.gates);
        self.global_phase += other.global_phase;
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    /// OpenQASM 2.0 text over `h, s, sdg, x, cx, rz`.
    ///
    /// qelib1's `rz(λ)` is `diag(e^{-iλ/2}, e^{iλ/2})` up to global phase,
    /// the opposite sign to [`Gate::Rz`], so angles are negated on export.
    pub fn to_openqasm(&self) -> String {
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.n_qubits);
        for g in &self.gates {
            let _ = match *g {
                Gate::H { qubit } => writeln!(out, "h q[{qubit}];"),
                Gate::S { qubit } => writeln!(out, "s q[{qubit}];"),
                Gate::Sdg { qubit } => writeln!(out, "sdg q[{qubit}];"),
                Gate::X { qubit } => writeln!(out, "x q[{qubit}];"),
                Gate::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
                Gate::Rz { qubit, angle } => writeln!(out, "rz({:.17}) q[{qubit}];", -angle),
            };
        }
        out
    }
}

/// Circuit for `e^{iθP}` up to global phase.
///
/// X and Y factors are rotated into Z (`X = HZH`, `Y = SHZHS†`), the parity
/// of the active qubits is accumulated onto the highest-index active qubit
/// by an ascending CNOT cascade, `RZ(2θ)` is applied there and everything
/// is undone. An identity string yields an empty circuit whose global phase
/// records `e^{±iθ}`.
pub fn exp_pauli_circuit(p: &PauliTerm, theta: f64) -> Result<Circuit> {
    if !theta.is_finite() {
        return Err(CsqError::NonFinite(format!("rotation angle {theta}")));
    }
    if !p.is_hermitian() {
        return Err(CsqError::InvalidArgument(format!("{p} is not Hermitian")));
    }
    let theta = if p.phase() == 2 { -theta } else { theta };
    let n = p.n_qubits();
    let mut c = Circuit::new(n);
    let active = p.support();
    if active.is_empty() {
        c.global_phase = theta;
        return Ok(c);
    }
    for &q in &active {
        match p.pauli_at(q) {
            Pauli::X => c.gates.push(Gate::H { qubit: q }),
            Pauli::Y => {
                c.gates.push(Gate::Sdg { qubit: q });
                c.gates.push(Gate::H { qubit: q });
            }
            _ => {}
        }
    }
    let cascade: Vec<Gate> = active
        .windows(2)
        .map(|w| Gate::Cnot {
            control: w[0],
            target: w[1],
        })
        .collect();
    c.gates.extend_from_slice(&cascade);
    c.gates.push(Gate::Rz {
        qubit: *active.last().expect("non-empty"),
        angle: 2.0 * theta,
    });
    c.gates.extend(cascade.iter().rev().copied());
    for &q in &active {
        match p.pauli_at(q) {
            Pauli::X => c.gates.push(Gate::H { qubit: q }),
            Pauli::Y => {
                c.gates.push(Gate::H { qubit: q });
                c.gates.push(Gate::S { qubit: q });
            }
            _ => {}
        }
    }
    Ok(c)
}

/// First-order Trotter circuit `(∏_k e^{i θ_k/n_T P_k})^{n_T}` with the
/// product taken in input order.
pub fn trotter_circuit(terms: &[(PauliTerm, f64)], trotter_number: usize) -> Result<Circuit> {
    if trotter_number < 1 {
        return Err(CsqError::InvalidArgument("Trotter number must be at least 1".into()));
    }
    let n = terms
        .first()
        .map(|(p, _)| p.n_qubits())
        .ok_or_else(|| CsqError::InvalidArgument("empty term list".into()))?;
    let mut block = Circuit::new(n);
    for (p, theta) in terms {
        check_qubits(n, p.n_qubits())?;
        block.append(&exp_pauli_circuit(p, theta / trotter_number as f64)?)?;
    }
    let mut c = Circuit::new(n);
    for _ in 0..trotter_number {
        c.append(&block)?;
    }
    Ok(c)
}

/// Removes adjacent inverse pairs (`HH`, `XX`, `S S†`, `S† S`, repeated
/// CNOT) acting on the same qubits with nothing in between on those wires.
/// Cancellation cascades, so `H S S† H` vanishes entirely.
pub fn cancel_adjacent(c: &Circuit) -> Circuit {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(c.gates.len());
    // Per-qubit stack of indices into `out` for live gates.
    let mut wires: Vec<Vec<usize>> = vec![Vec::new(); c.n_qubits];
    for g in &c.gates {
        let qs = g.qubits();
        let last = wires[qs[0]].last().copied();
        let cancel = last.is_some_and(|idx| {
            let prev = out[idx].as_ref().expect("live gate");
            prev.qubits() == qs && qs.iter().all(|&q| wires[q].last() == Some(&idx)) && prev.cancels_with(g)
        });
        if cancel {
            let idx = last.expect("checked");
            out[idx] = None;
            for &q in &qs {
                wires[q].pop();
            }
        } else {
            out.push(Some(*g));
            for &q in &qs {
                wires[q].push(out.len() - 1);
            }
        }
    }
    Circuit {
        n_qubits: c.n_qubits,
        global_phase: c.global_phase,
        gates: out.into_iter().flatten().collect(),
    }
}

/// Dense unitary of a circuit, including its global phase.
pub fn circuit_unitary(c: &Circuit) -> Result<Matrix> {
    dense::check_cap(c.n_qubits, UNITARY_QUBIT_CAP)?;
    let dim = 1usize << c.n_qubits;
    let mut u = Matrix::zeros(dim, dim);
    for b in 0..dim {
        let mut s = StateVector::basis_index(c.n_qubits, b)?;
        s.apply_circuit(c)?;
        for (r, a) in s.amplitudes().iter().enumerate() {
            u[(r, b)] = *a;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn p(s: &str) -> PauliTerm {
        s.parse().unwrap()
    }

    #[test]
    fn single_z_is_one_rz() {
        let c = exp_pauli_circuit(&p("Z"), 0.3).unwrap();
        assert_eq!(c.gates(), &[Gate::Rz { qubit: 0, angle: 0.6 }]);
        // Even parity picks up e^{iθ}.
        let u = circuit_unitary(&c).unwrap();
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, -0.3)).norm() < 1e-15);
    }

    #[test]
    fn all_y_saturates_gate_bound() {
        assert_eq!(exp_pauli_circuit(&p("YYY"), 0.1).unwrap().len(), 17);
    }

    #[test]
    fn identity_records_phase() {
        let c = exp_pauli_circuit(&p("II"), 0.4).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.global_phase(), 0.4);
        let u = circuit_unitary(&c).unwrap();
        assert!((u[(3, 3)] - Complex64::from_polar(1.0, 0.4)).norm() < 1e-15);
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(exp_pauli_circuit(&p("X"), f64::INFINITY).is_err());
        assert!(trotter_circuit(&[(p("X"), 0.1)], 0).is_err());
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::Cnot { control: 1, target: 1 }).is_err());
        assert!(c.push(Gate::H { qubit: 2 }).is_err());
        assert!(c
            .push(Gate::Rz {
                qubit: 0,
                angle: f64::NAN
            })
            .is_err());
    }

    #[test]
    fn cancel_examples() {
        let c = Circuit::from_gates(1, vec![Gate::H { qubit: 0 }, Gate::H { qubit: 0 }]).unwrap();
        assert!(cancel_adjacent(&c).is_empty());
        let c = Circuit::from_gates(1, vec![Gate::S { qubit: 0 }, Gate::Sdg { qubit: 0 }]).unwrap();
        assert!(cancel_adjacent(&c).is_empty());
        let c = Circuit::from_gates(
            1,
            vec![
                Gate::H { qubit: 0 },
                Gate::S { qubit: 0 },
                Gate::Sdg { qubit: 0 },
                Gate::H { qubit: 0 },
            ],
        )
        .unwrap();
        assert!(cancel_adjacent(&c).is_empty());
    }

    #[test]
    fn cancel_respects_intervening_two_qubit_gates() {
        let c = Circuit::from_gates(
            2,
            vec![
                Gate::H { qubit: 0 },
                Gate::Cnot { control: 0, target: 1 },
                Gate::H { qubit: 0 },
            ],
        )
        .unwrap();
        assert_eq!(cancel_adjacent(&c).len(), 3);
    }

    #[test]
    fn empty_and_x_unitaries() {
        let u = circuit_unitary(&Circuit::new(2)).unwrap();
        assert!((u - Matrix::identity(4, 4)).norm() < 1e-15);
        let c = Circuit::from_gates(1, vec![Gate::X { qubit: 0 }]).unwrap();
        let u = circuit_unitary(&c).unwrap();
        assert!((u - p("X").to_matrix().unwrap()).norm() < 1e-15);
        assert!(circuit_unitary(&Circuit::new(11)).is_err());
    }

    #[test]
    fn openqasm_uses_fixed_gate_set() {
        let c = exp_pauli_circuit(&p("XY"), 0.25).unwrap();
        let qasm = c.to_openqasm();
        assert!(qasm.starts_with("OPENQASM 2.0;"));
        for line in qasm.lines().skip(3) {
            let op = line.split([' ', '(']).next().unwrap();
            assert!(["h", "s", "sdg", "x", "cx", "rz"].contains(&op), "{line}");
        }
        assert!(qasm.contains("rz(-0.5"));
    }
}
