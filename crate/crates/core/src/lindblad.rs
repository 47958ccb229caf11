// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Continuous-time GKSL limit of a collision model.
//!
//! With γ = g²τ held fixed as τ → 0 every ancilla contributes the dissipator
//! γ Σ_μν (A ρ A† − ½{A†A, ρ}) with A_μν = √p_ν ⟨μ|w|ν⟩.

use crate::engine::{moment_residual, CompositeModel, MOMENT_TOL};
use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions};
use crate::tensor::{diagnose, embed, herm_eig, ComplexMatrix, DensityMatrix, StateDiagnostics, C64, I, ZERO};

/// Populations below this are treated as zero when extracting jumps.
pub const POPULATION_CUTOFF: f64 = 1e-14;
/// Integration aborts when an output eigenvalue drops below minus this value.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Jump operators of one ancilla with their common rate γ = g²τ.
#[derive(Debug, Clone)]
pub struct JumpOperatorSet {
    pub ops: Vec<ComplexMatrix>,
    pub rate: f64,
}

/// Jump operators for coupling `w` on (target ⊗ ancilla) and ancilla state `eta`.
///
/// The returned operators act on the target subsystem.
pub fn jump_operators(w: &ComplexMatrix, eta: &DensityMatrix, g: f64, tau: f64) -> Result<JumpOperatorSet> {
    let residual = moment_residual(w, eta)?;
    if residual > MOMENT_TOL {
        return Err(Error::MomentCondition { ancilla: 0, residual });
    }
    let eig = herm_eig(eta.matrix())?;
    let basis: Vec<Vec<C64>> = (0..eta.dim()).map(|k| eig.vector(k)).collect();
    jump_operators_in_basis(w, &eig.values, &basis, g, tau)
}

/// Jump operators for an explicit eigen-decomposition η = Σ p_k |v_k⟩⟨v_k|.
///
/// Any orthonormal basis of a degenerate eigenspace yields the same dissipator.
pub fn jump_operators_in_basis(
    w: &ComplexMatrix,
    populations: &[f64],
    basis: &[Vec<C64>],
    g: f64,
    tau: f64,
) -> Result<JumpOperatorSet> {
    let r = populations.len();
    if r == 0 || basis.len() != r || basis.iter().any(|v| v.len() != r) {
        return Err(Error::Dimension("eigenbasis does not match population count".into()));
    }
    let n = w.require_square()?;
    if n % r != 0 {
        return Err(Error::Dimension("coupling operator and ancilla disagree".into()));
    }
    if !(g.is_finite() && tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidParameter(
            "coupling rate and collision time must be finite".into(),
        ));
    }
    let d = n / r;
    let scale = w.max_abs();
    let mut ops = Vec::new();
    for (nu, &p) in populations.iter().enumerate() {
        if p <= POPULATION_CUTOFF {
            continue;
        }
        let sp = p.sqrt();
        for bra in basis {
            let mut a = ComplexMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    let mut acc = ZERO;
                    for (x, bx) in bra.iter().enumerate() {
                        if *bx == ZERO {
                            continue;
                        }
                        for (y, ky) in basis[nu].iter().enumerate() {
                            acc += bx.conj() * w[(i * r + x, j * r + y)] * ky;
                        }
                    }
                    a[(i, j)] = acc * sp;
                }
            }
            if a.max_abs() > 1e-15 * scale {
                ops.push(a);
            }
        }
    }
    Ok(JumpOperatorSet { ops, rate: g * g * tau })
}

/// Matrix-free GKSL generator.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    hamiltonian: ComplexMatrix,
    dissipators: Vec<JumpOperatorSet>,
    // H - (i/2) Σ γ A†A
    h_eff: ComplexMatrix,
}

impl Liouvillian {
    /// Jump operators must already act on the full space of `hamiltonian`.
    pub fn new(hamiltonian: ComplexMatrix, dissipators: Vec<JumpOperatorSet>) -> Result<Self> {
        let n = hamiltonian.require_square()?;
        let defect = hamiltonian.hermiticity_defect();
        if defect > 1e-12 * hamiltonian.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        let mut h_eff = hamiltonian.clone();
        for set in &dissipators {
            if !(set.rate >= 0.0 && set.rate.is_finite()) {
                return Err(Error::InvalidParameter(format!("rate {} must be >= 0", set.rate)));
            }
            for a in &set.ops {
                if a.rows() != n || a.cols() != n {
                    return Err(Error::Dimension(format!(
                        "jump operator is {}x{}, Hamiltonian is {n}x{n}",
                        a.rows(),
                        a.cols()
                    )));
                }
                if !a.is_finite() {
                    return Err(Error::NonFinite);
                }
                let ada = a.adjoint().matmul(a);
                h_eff -= &ada.scale(I * (0.5 * set.rate));
            }
        }
        Ok(Self {
            hamiltonian,
            dissipators,
            h_eff,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn dissipators(&self) -> &[JumpOperatorSet] {
        &self.dissipators
    }

    /// L(ρ) for an arbitrary square operator ρ.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let hr = self.h_eff.matmul(rho);
        let rh = rho.matmul_adjoint(&self.h_eff);
        let mut out = (&hr - &rh).scale(-I);
        for set in &self.dissipators {
            if set.rate == 0.0 {
                continue;
            }
            for a in &set.ops {
                let t = a.matmul(rho).matmul_adjoint(a);
                for (o, v) in out.data_mut().iter_mut().zip(t.data()) {
                    *o += v * set.rate;
                }
            }
        }
        out
    }
}

/// Generator of the continuous-time limit of `model`.
pub fn liouvillian(model: &CompositeModel) -> Result<Liouvillian> {
    let dims = model.system_dims();
    let mut dissipators = Vec::with_capacity(model.ancillas().len());
    for (i, anc) in model.ancillas().iter().enumerate() {
        let local =
            jump_operators(anc.coupling_op(), anc.eta(), anc.coupling_rate(), model.tau()).map_err(|e| match e {
                Error::MomentCondition { residual, .. } => Error::MomentCondition { ancilla: i, residual },
                other => other,
            })?;
        let factor = model.target_factor(i);
        let ops = local
            .ops
            .iter()
            .map(|a| embed(a, &dims, &[factor]))
            .collect::<Result<Vec<_>>>()?;
        dissipators.push(JumpOperatorSet { ops, rate: local.rate });
    }
    Liouvillian::new(model.hamiltonian().clone(), dissipators)
}

/// Integrates dρ/dt = L(ρ) and returns states at every grid time (grid starts at 0).
pub fn integrate_me(l: &Liouvillian, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Vec<DensityMatrix>> {
    integrate_me_with(l, rho0, t_grid, &OdeOptions::with_tolerances(1e-10, 1e-12))
}

/// As [`integrate_me`] with explicit tolerances.
pub fn integrate_me_with(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<DensityMatrix>> {
    let n = l.dim();
    if rho0.dim() != n {
        return Err(Error::Dimension(format!(
            "state dimension {} vs generator {n}",
            rho0.dim()
        )));
    }
    if t_grid.first().is_some_and(|&t| t != 0.0) {
        return Err(Error::InvalidParameter("time grid must start at 0".into()));
    }
    let mut scratch = ComplexMatrix::zeros(n, n);
    let raw = integrate(
        |_, y, dy| {
            scratch.data_mut().copy_from_slice(y);
            dy.copy_from_slice(l.apply(&scratch).data());
        },
        rho0.matrix().data(),
        t_grid,
        opts,
    )?;
    raw.into_iter()
        .zip(t_grid)
        .map(|(data, &t)| {
            let m = ComplexMatrix::from_vec(n, n, data)?.hermitian_part();
            let d = diagnose(&m)?;
            if d.min_eigenvalue < -POSITIVITY_TOL {
                return Err(Error::Positivity {
                    t,
                    min_eigenvalue: d.min_eigenvalue,
                });
            }
            Ok(DensityMatrix::new_unchecked(m))
        })
        .collect()
}

/// Outcome of [`validate_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateCheck {
    pub diagnostics: StateDiagnostics,
    pub valid: bool,
}

/// Trace deviation, Hermiticity deviation and minimum eigenvalue, with a verdict at `tol`.
pub fn validate_state(rho: &ComplexMatrix, tol: f64) -> Result<StateCheck> {
    let diagnostics = diagnose(rho)?;
    Ok(StateCheck {
        diagnostics,
        valid: diagnostics.is_valid(tol),
    })
}
