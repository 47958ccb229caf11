// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Standard single-site operators.
//!
//! Qubit basis: index 0 is the excited state (sigma_z = +1), index 1 is the
//! ground state. Bosonic modes use the Fock basis |0>, |1>, ...

use super::matrix::{ComplexMatrix, C64};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
}

/// Qubit lowering operator |1><0| (excited to ground).
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]])
}

/// Qubit raising operator |0><1|.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]])
}

/// Bosonic annihilation operator truncated to `levels` Fock states.
pub fn annihilation(levels: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(levels, levels);
    for n in 1..levels {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation(levels: usize) -> ComplexMatrix {
    annihilation(levels).adjoint()
}

pub fn number(levels: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..levels).map(|n| C64::new(n as f64, 0.0)).collect();
    ComplexMatrix::from_diag(&diag)
}

/// Unit column vector e_k of length `dim`.
pub fn basis_vector(dim: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Projector |k><k|.
pub fn projector(dim: usize, k: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m[(k, k)] = C64::new(1.0, 0.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let i2 = ComplexMatrix::identity(2);
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            assert_eq!(p.matmul(&p), i2);
        }
        let xy = pauli_x().matmul(&pauli_y());
        assert_eq!(xy, pauli_z().scale(C64::new(0.0, 1.0)));
        // sigma_z sigma_- = -sigma_-: lowering lands in the ground state
        assert_eq!(pauli_z().matmul(&sigma_minus()), sigma_minus().scale_real(-1.0));
        assert_eq!(sigma_plus(), sigma_minus().adjoint());
    }

    #[test]
    fn boson_commutator_below_cutoff() {
        let a = annihilation(5);
        let comm = a.commutator(&creation(5));
        for n in 0..4 {
            assert!((comm[(n, n)].re - 1.0).abs() < 1e-14);
        }
        assert!(creation(5).matmul(&a).max_abs_diff(&number(5)) < 1e-14);
    }
}
