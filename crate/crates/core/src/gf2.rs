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

//! Linear algebra over GF(2): incremental bases with combination tracking,
//! rank, and null spaces via Gaussian elimination.

use crate::bits::Bits;

/// Row-reduced span of inserted vectors.
///
/// Each accepted vector receives an index in insertion order; [`express`]
/// writes any vector in the span as a combination of those indices.
///
/// [`express`]: Gf2Basis::express
#[derive(Clone, Debug)]
pub struct Gf2Basis {
    width: usize,
    // (reduced vector, combination of accepted indices, pivot column)
    rows: Vec<(Bits, Bits, usize)>,
}

impl Gf2Basis {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &Bits) -> (Bits, Bits) {
        let mut v = v.clone();
        let mut comb = Bits::zeros(self.width);
        for (row, c, pivot) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
                comb.xor_assign(c);
            }
        }
        (v, comb)
    }

    /// Inserts `v`; returns its index when independent of the current span.
    pub fn insert(&mut self, v: &Bits) -> Option<usize> {
        debug_assert_eq!(v.len(), self.width);
        let (v, mut comb) = self.reduce(v);
        let pivot = v.first_one()?;
        let index = self.rows.len();
        comb.flip(index);
        for (row, c, _) in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&v);
                c.xor_assign(&comb);
            }
        }
        self.rows.push((v, comb, pivot));
        Some(index)
    }

    pub fn contains(&self, v: &Bits) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Combination (over accepted indices) summing to `v`, if `v` is in the
    /// span.
    pub fn express(&self, v: &Bits) -> Option<Bits> {
        let (rest, comb) = self.reduce(v);
        rest.is_zero().then_some(comb)
    }
}

pub fn rank(vectors: &[Bits]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut basis = Gf2Basis::new(first.len());
    vectors.iter().filter(|v| basis.insert(v).is_some()).count()
}

/// Basis of `{x : A x = 0}` where `rows` are the rows of `A`, each of
/// length `n_cols`. Pivots are chosen at the lowest available column, and
/// one basis vector is returned per free column in ascending order.
pub fn null_space(rows: &[Bits], n_cols: usize) -> Vec<Bits> {
    let mut m: Vec<Bits> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n_cols {
        let Some(sel) = (r..m.len()).find(|&i| m[i].get(col)) else {
            continue;
        };
        m.swap(r, sel);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; n_cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n_cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = Bits::zeros(n_cols);
            v.set(free, true);
            for (row, &p) in m.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Bits {
        Bits::from_bools(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn insert_detects_dependence() {
        let mut basis = Gf2Basis::new(3);
        assert_eq!(basis.insert(&b("110")), Some(0));
        assert_eq!(basis.insert(&b("011")), Some(1));
        assert_eq!(basis.insert(&b("101")), None);
        assert_eq!(basis.rank(), 2);
    }

    #[test]
    fn express_returns_combination() {
        let mut basis = Gf2Basis::new(4);
        basis.insert(&b("1100"));
        basis.insert(&b("0110"));
        basis.insert(&b("0001"));
        let comb = basis.express(&b("1011")).unwrap();
        assert_eq!(comb.ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(basis.express(&b("1000")).is_none());
    }

    #[test]
    fn null_space_vectors_annihilate_rows() {
        let rows = vec![b("1100"), b("0110")];
        let ns = null_space(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert_eq!(r.and_count(v) % 2, 0);
            }
        }
        assert_eq!(rank(&ns), 2);
    }

    #[test]
    fn null_space_of_empty_matrix_is_everything() {
        assert_eq!(null_space(&[], 3).len(), 3);
    }
}
