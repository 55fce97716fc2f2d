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

//! Dense complex matrices used as verification oracles at small qubit
//! counts.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{CsqError, Result};
use crate::pauli::{PauliSum, PauliTerm};

pub type Matrix = DMatrix<Complex64>;

/// Default cap for Pauli-sum matrices and exact diagonalization.
pub const MATRIX_QUBIT_CAP: usize = 12;

pub(crate) fn check_cap(n_qubits: usize, cap: usize) -> Result<()> {
    if n_qubits > cap {
        Err(CsqError::MatrixCap { n_qubits, cap })
    } else {
        Ok(())
    }
}

pub(crate) fn pauli_matrix(p: &PauliTerm) -> Matrix {
    let dim = 1usize << p.n_qubits();
    let mut m = Matrix::zeros(dim, dim);
    for b in 0..dim {
        let (b2, c) = p.apply_to_basis(b);
        m[(b2, b)] = c;
    }
    m
}

pub(crate) fn sum_matrix(s: &PauliSum) -> Matrix {
    let dim = 1usize << s.n_qubits();
    let mut m = Matrix::zeros(dim, dim);
    for (t, coeff) in s.iter() {
        for b in 0..dim {
            let (b2, c) = t.apply_to_basis(b);
            m[(b2, b)] += c * coeff;
        }
    }
    m
}

/// `e^{iθP}` for a matrix with `P² = 1`.
pub fn pauli_exponential(p: &Matrix, theta: f64) -> Matrix {
    let dim = p.nrows();
    Matrix::identity(dim, dim) * Complex64::new(theta.cos(), 0.0) + p * Complex64::new(0.0, theta.sin())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `e^{i t H}` for Hermitian `H`, via its eigen-decomposition.
pub fn expm_i_hermitian(h: &Matrix, t: f64) -> Matrix {
    let (values, vectors) = hermitian_eigen(h);
    let phases = DVector::from_iterator(values.len(), values.iter().map(|&l| Complex64::from_polar(1.0, t * l)));
    &vectors * Matrix::from_diagonal(&phases) * vectors.adjoint()
}

/// Largest singular value.
pub fn operator_norm(m: &Matrix) -> f64 {
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// `|Tr(A†B)| / dim`; equals 1 exactly when the unitaries agree up to a
/// global phase.
pub fn phase_insensitive_fidelity(a: &Matrix, b: &Matrix) -> f64 {
    (a.adjoint() * b).trace().norm() / a.nrows() as f64
}

/// `‖U†U − I‖_F`.
pub fn unitarity_residual(u: &Matrix) -> f64 {
    let dim = u.nrows();
    (u.adjoint() * u - Matrix::identity(dim, dim)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_ascending() {
        let h = PauliSum::from_real_strs(&[("Z", 0.5), ("X", 0.5)]).unwrap();
        let (vals, vecs) = hermitian_eigen(&h.to_matrix().unwrap());
        let r = 0.5f64.hypot(0.5);
        assert!((vals[0] + r).abs() < 1e-12 && (vals[1] - r).abs() < 1e-12);
        assert!(unitarity_residual(&vecs) < 1e-12);
    }

    #[test]
    fn expm_matches_pauli_exponential() {
        let x = "X".parse::<PauliTerm>().unwrap().to_matrix().unwrap();
        let a = expm_i_hermitian(&x, 0.37);
        let b = pauli_exponential(&x, 0.37);
        assert!((a - b).norm() < 1e-12);
    }
}
