// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Memoryless composite collision models.
//!
//! Exact discrete collision dynamics, the continuous-time GKSL limit, exactly
//! solvable lossy-cavity, dephasing and multi-Lorentzian models, and the
//! spectral-density side of their microscopic equivalents.

pub mod dephasing;
pub mod engine;
pub mod error;
pub mod lindblad;
pub mod lossy_cavity;
pub mod multi_lorentzian;
pub mod ode;
pub mod quad;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{ComplexMatrix, DensityMatrix, C64};
