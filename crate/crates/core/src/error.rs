// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |a - a^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("singular matrix in linear solve")]
    Singular,

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("moment condition violated for ancilla {ancilla}: residual {residual:e}")]
    MomentCondition { ancilla: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("integrator exceeded {0} steps")]
    TooManySteps(usize),

    #[error("positivity violated at t = {t}: min eigenvalue {min_eigenvalue:e}")]
    Positivity { t: f64, min_eigenvalue: f64 },

    #[error("Fock truncation leakage {population:e} in factor {factor} at step {step}")]
    Leakage {
        factor: usize,
        step: usize,
        population: f64,
    },

    #[error("time grid must be uniform and start at 0")]
    NonUniformGrid,

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("insufficient decay: {0}")]
    InsufficientDecay(String),
}

pub type Result<T> = std::result::Result<T, Error>;
