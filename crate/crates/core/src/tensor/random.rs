// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random matrices and states for unit tests.

use rand::Rng;

use super::matrix::{ComplexMatrix, C64};

pub(crate) fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}

pub(crate) fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

pub(crate) fn random_density<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    let p = a.matmul_adjoint(&a);
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}
