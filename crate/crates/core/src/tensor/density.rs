// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

use super::eig::herm_eig;
use super::matrix::{ComplexMatrix, C64};
use super::ops::kron;
use crate::error::{Error, Result};

/// Hermiticity tolerance for a valid state.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Trace tolerance for a valid state.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest admissible eigenvalue.
pub const EIGENVALUE_TOL: f64 = 1e-9;

/// Validity figures of a candidate state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    /// True when all three figures are within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.trace_deviation <= tol && self.hermiticity_deviation <= tol && self.min_eigenvalue >= -tol
    }
}

/// Trace deviation, Hermiticity deviation and minimum eigenvalue of `rho`.
///
/// The eigenvalue is taken from the Hermitian part so the call never fails on
/// a slightly non-Hermitian input.
pub fn diagnose(rho: &ComplexMatrix) -> Result<StateDiagnostics> {
    rho.require_square()?;
    let hermiticity_deviation = rho.hermiticity_defect();
    let trace_deviation = (rho.trace() - C64::new(1.0, 0.0)).norm();
    let eig = herm_eig(&rho.hermitian_part())?;
    Ok(StateDiagnostics {
        trace_deviation,
        hermiticity_deviation,
        min_eigenvalue: eig.values[0],
    })
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates `m` against the default tolerances.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let d = diagnose(&m)?;
        if d.hermiticity_deviation > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian: deviation {:e}",
                d.hermiticity_deviation
            )));
        }
        if d.trace_deviation > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace deviates from 1 by {:e}",
                d.trace_deviation
            )));
        }
        if d.min_eigenvalue < -EIGENVALUE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                d.min_eigenvalue
            )));
        }
        Ok(Self(m))
    }

    /// Wraps without validation. Callers must guarantee validity.
    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// |psi><psi| for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero or non-finite norm".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(ComplexMatrix::outer(&v, &v)))
    }

    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Dimension(format!("basis index {k} outside dimension {dim}")));
        }
        Ok(Self(super::operators::projector(dim, k)))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("dimension must be positive".into()));
        }
        Ok(Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64)))
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let diag: Vec<C64> = populations.iter().map(|&p| C64::new(p, 0.0)).collect();
        Self::new(ComplexMatrix::from_diag(&diag))
    }

    /// Thermal qubit state (1 - xi)/2 |0><0| + (1 + xi)/2 |1><1| with bias xi in [-1, 1].
    pub fn thermal_qubit(xi: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&xi) {
            return Err(Error::InvalidParameter(format!("thermal bias {xi} outside [-1, 1]")));
        }
        Self::diagonal(&[0.5 * (1.0 - xi), 0.5 * (1.0 + xi)])
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self(kron(&self.0, &other.0))
    }

    /// <k|rho|k>.
    pub fn population(&self, k: usize) -> f64 {
        self.0[(k, k)].re
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        diagnose(&self.0).expect("density matrix is square")
    }

    /// Expectation value Tr(rho * op).
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        assert_eq!(op.rows(), self.dim());
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.0[(i, j)] * op[(j, i)];
            }
        }
        acc
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagnostics_examples() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let d = mixed.diagnostics();
        assert_eq!((d.trace_deviation, d.hermiticity_deviation), (0.0, 0.0));
        assert!((d.min_eigenvalue - 0.5).abs() < 1e-15);

        let pure = DensityMatrix::basis_state(2, 0).unwrap().diagnostics();
        assert_eq!(pure.min_eigenvalue, 0.0);

        let bad = ComplexMatrix::from_real_rows(&[[1.1, 0.0], [0.0, -0.1]]);
        let d = diagnose(&bad).unwrap();
        assert!((d.min_eigenvalue + 0.1).abs() < 1e-15);
        assert!(!d.is_valid(1e-9));
        assert!(DensityMatrix::new(bad).is_err());
    }

    #[test]
    fn rejects_bad_trace_and_hermiticity() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let nh = ComplexMatrix::from_rows(&[
            [C64::new(0.5, 0.0), C64::new(0.1, 0.0)],
            [C64::new(0.0, 0.0), C64::new(0.5, 0.0)],
        ]);
        assert!(DensityMatrix::new(nh).is_err());
    }

    #[test]
    fn thermal_qubit_bias() {
        let t = DensityMatrix::thermal_qubit(1.0).unwrap();
        assert_eq!(t.population(1), 1.0);
        assert!(DensityMatrix::thermal_qubit(1.5).is_err());
    }
}
