// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra: matrices, states, exponentials, eigensystems
//! and tensor-product plumbing.

mod density;
mod eig;
mod expm;
mod matrix;
pub mod operators;
mod ops;
#[cfg(test)]
pub(crate) mod random;

pub use density::{diagnose, DensityMatrix, StateDiagnostics, EIGENVALUE_TOL, HERMITICITY_TOL, TRACE_TOL};
pub use eig::{herm_eig, HermitianEigen};
pub use expm::{expm, expm_unitary};
pub use matrix::{ComplexMatrix, C64};
pub(crate) use matrix::{I, ONE, ZERO};
pub use ops::{embed, kron, kron_all, kron_vec, mat_power, partial_trace, solve};
