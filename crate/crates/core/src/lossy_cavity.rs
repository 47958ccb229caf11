// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Qubit S coupled to a lossy cavity mode S_1 that leaks into bosonic ancillas.
//!
//! H_S = Δ α†α + G(σ₋α† + σ₊α), ancilla coupling g(α b† + α† b), vacuum
//! ancillas. One excitation is conserved, so the dynamics closes on the
//! amplitudes ε (qubit excited) and β (one photon in S_1).

use crate::engine::{AncillaSpec, CompositeModel};
use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions};
use crate::tensor::operators::{annihilation, creation, number, sigma_minus, sigma_plus};
use crate::tensor::{kron, ComplexMatrix, DensityMatrix, C64, I, ONE, ZERO};

/// Discrete-model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyCavityParams {
    pub delta: f64,
    pub big_g: f64,
    pub small_g: f64,
    pub tau: f64,
}

impl LossyCavityParams {
    pub fn new(delta: f64, big_g: f64, small_g: f64, tau: f64) -> Result<Self> {
        let p = Self {
            delta,
            big_g,
            small_g,
            tau,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with g = sqrt(γ/τ), so that g²τ = γ.
    pub fn for_rate(delta: f64, big_g: f64, gamma: f64, tau: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need gamma >= 0 and tau > 0, got {gamma}, {tau}"
            )));
        }
        Self::new(delta, big_g, (gamma / tau).sqrt(), tau)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.delta, self.big_g, self.small_g, self.tau]
            .iter()
            .all(|x| x.is_finite());
        if !finite || self.tau <= 0.0 || self.big_g < 0.0 || self.small_g < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lossy cavity needs tau > 0, G >= 0, g >= 0 (got tau={}, G={}, g={})",
                self.tau, self.big_g, self.small_g
            )));
        }
        Ok(())
    }

    /// Ω = ½ sqrt(Δ² + 4G²).
    pub fn omega(&self) -> f64 {
        0.5 * self.delta.hypot(2.0 * self.big_g)
    }

    /// z = cos Ωτ + i (Δ/2Ω) sin Ωτ, finite at Ω = 0.
    pub fn z(&self) -> C64 {
        let w = self.omega();
        C64::new((w * self.tau).cos(), 0.5 * self.delta * self.tau * sinc(w * self.tau))
    }

    /// γ = g²τ.
    pub fn gamma(&self) -> f64 {
        self.small_g * self.small_g * self.tau
    }
}

/// sin(x)/x.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// sin(z)/z for complex z.
pub(crate) fn csinc(z: C64) -> C64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        ONE - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Single-excitation amplitudes: ε on the qubit, β_j on the auxiliary modes.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    pub eps: C64,
    pub betas: Vec<C64>,
}

impl AmplitudeVector {
    pub fn new(eps: C64, betas: Vec<C64>) -> Self {
        Self { eps, betas }
    }

    /// |ε|² + Σ|β_j|².
    pub fn norm_sqr(&self) -> f64 {
        self.eps.norm_sqr() + self.betas.iter().map(|b| b.norm_sqr()).sum::<f64>()
    }

    pub fn excited_population(&self) -> f64 {
        self.eps.norm_sqr()
    }
}

/// Entries of exp(-i H τ) on {|e,0>, |g,1>}, without the global phase e^{-iΔτ/2}.
fn jc_block(p: &LossyCavityParams) -> (C64, C64) {
    let off = -I * p.big_g * p.tau * sinc(p.omega() * p.tau);
    (p.z(), off)
}

/// 2x2 transfer matrix acting on (ε, β).
pub fn transfer_matrix(p: &LossyCavityParams) -> ComplexMatrix {
    let phase = C64::from_polar(1.0, -0.5 * p.delta * p.tau);
    let (z, off) = jc_block(p);
    let cg = (p.small_g * p.tau).cos();
    ComplexMatrix::from_rows(&[[phase * z, phase * off], [phase * off * cg, phase * z.conj() * cg]])
}

/// Full one-step unitary on {|e,0,0>, |g,1,0>, |g,0,1_n>}.
///
/// Its third row maps (ε, β, 0) to the amplitude left in the fresh ancilla.
pub fn appendix_a_unitary(p: &LossyCavityParams) -> ComplexMatrix {
    let phase = C64::from_polar(1.0, -0.5 * p.delta * p.tau);
    let (z, off) = jc_block(p);
    let (sg, cg) = (p.small_g * p.tau).sin_cos();
    let leak = -I * sg;
    ComplexMatrix::from_rows(&[
        [phase * z, phase * off, ZERO],
        [phase * off * cg, phase * z.conj() * cg, leak],
        [phase * off * leak, phase * z.conj() * leak, C64::new(cg, 0.0)],
    ])
}

fn check_initial(eps0: C64, beta0: C64) -> Result<()> {
    let n = eps0.norm_sqr() + beta0.norm_sqr();
    if !(n <= 1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "initial amplitudes have norm² {n} > 1"
        )));
    }
    Ok(())
}

/// (ε, β) after k = 0..=n steps.
pub fn amplitude_trajectory(p: &LossyCavityParams, n: usize, eps0: C64, beta0: C64) -> Result<Vec<AmplitudeVector>> {
    p.validate()?;
    check_initial(eps0, beta0)?;
    let m = transfer_matrix(p);
    let mut out = Vec::with_capacity(n + 1);
    let (mut e, mut b) = (eps0, beta0);
    out.push(AmplitudeVector::new(e, vec![b]));
    for _ in 0..n {
        let e2 = m[(0, 0)] * e + m[(0, 1)] * b;
        let b2 = m[(1, 0)] * e + m[(1, 1)] * b;
        e = e2;
        b = b2;
        out.push(AmplitudeVector::new(e, vec![b]));
    }
    Ok(out)
}

/// Trajectory together with the amplitudes λ_k deposited in each used ancilla.
#[derive(Debug, Clone)]
pub struct LeakageTrajectory {
    pub amplitudes: Vec<AmplitudeVector>,
    /// lambdas[k - 1] is the amplitude of ancilla k after its collision.
    pub lambdas: Vec<C64>,
}

impl LeakageTrajectory {
    /// |ε|² + |β|² + Σ_{j ≤ k} |λ_j|² after step k.
    pub fn total_norm(&self, k: usize) -> f64 {
        self.amplitudes[k].norm_sqr() + self.lambdas[..k].iter().map(|l| l.norm_sqr()).sum::<f64>()
    }
}

/// As [`amplitude_trajectory`], also recording the leaked ancilla amplitudes.
pub fn amplitude_trajectory_with_leakage(
    p: &LossyCavityParams,
    n: usize,
    eps0: C64,
    beta0: C64,
) -> Result<LeakageTrajectory> {
    p.validate()?;
    check_initial(eps0, beta0)?;
    let u = appendix_a_unitary(p);
    let mut amplitudes = Vec::with_capacity(n + 1);
    let mut lambdas = Vec::with_capacity(n);
    let (mut e, mut b) = (eps0, beta0);
    amplitudes.push(AmplitudeVector::new(e, vec![b]));
    for _ in 0..n {
        let v = u.mul_vec(&[e, b, ZERO]);
        e = v[0];
        b = v[1];
        lambdas.push(v[2]);
        amplitudes.push(AmplitudeVector::new(e, vec![b]));
    }
    Ok(LeakageTrajectory { amplitudes, lambdas })
}

/// Closed-form ε(t) of the continuous model with ε(0) = 1, β(0) = 0.
pub fn analytic_excited_amplitude(delta: f64, big_g: f64, gamma: f64, t: f64) -> C64 {
    let w1 = C64::new(delta, -0.5 * gamma);
    let d = (w1 * w1 + 4.0 * big_g * big_g).sqrt();
    let half = 0.5 * t;
    let prefactor = C64::from_polar((-0.25 * gamma * t).exp(), -0.5 * delta * t);
    // (ω₁/δ) sin(δt/2) = ω₁ (t/2) sinc(δt/2)
    prefactor * ((d * half).cos() + I * w1 * half * csinc(d * half))
}

/// Integrates ε̇ = −iGβ, β̇ = −i(Δ − iγ/2)β − iGε from (1, 0).
pub fn amplitude_ode_solve(delta: f64, big_g: f64, gamma: f64, t_grid: &[f64]) -> Result<Vec<AmplitudeVector>> {
    if t_grid.first().is_some_and(|&t| t != 0.0) {
        return Err(Error::InvalidParameter("time grid must start at 0".into()));
    }
    let w1 = C64::new(delta, -0.5 * gamma);
    let sol = integrate(
        |_, y, dy| {
            dy[0] = -I * big_g * y[1];
            dy[1] = -I * w1 * y[1] - I * big_g * y[0];
        },
        &[ONE, ZERO],
        t_grid,
        &OdeOptions::with_tolerances(1e-12, 1e-14),
    )?;
    Ok(sol
        .into_iter()
        .map(|y| AmplitudeVector::new(y[0], vec![y[1]]))
        .collect())
}

/// Collision-engine realization with `levels` Fock states per bosonic mode.
///
/// Factors: qubit S, cavity S_1; one bosonic ancilla per step. S_1 is
/// monitored for leakage into its top level.
pub fn composite_model(p: &LossyCavityParams, levels: usize) -> Result<CompositeModel> {
    p.validate()?;
    if levels < 2 {
        return Err(Error::InvalidParameter("bosonic modes need at least 2 levels".into()));
    }
    let a = annihilation(levels);
    let ad = creation(levels);
    let h = &kron(&ComplexMatrix::identity(2), &number(levels)).scale_real(p.delta)
        + &(&kron(&sigma_minus(), &ad) + &kron(&sigma_plus(), &a)).scale_real(p.big_g);
    let w = &kron(&a, &ad) + &kron(&ad, &a);
    let vacuum = DensityMatrix::basis_state(levels, 0)?;
    let spec = AncillaSpec::new(vacuum, w, p.small_g)?;
    let model = CompositeModel::new(2, vec![levels], h, vec![spec], p.tau)?;
    if levels > 2 {
        model.with_truncated_modes(vec![1])
    } else {
        Ok(model)
    }
}

/// Single-excitation state ε|e,0> + β|g,1> on the engine space.
pub fn single_excitation_state(eps: C64, beta: C64, levels: usize) -> Result<DensityMatrix> {
    let mut psi = vec![ZERO; 2 * levels];
    psi[0] = eps; // |e> ⊗ |0>
    psi[levels + 1] = beta; // |g> ⊗ |1>
    DensityMatrix::pure(&psi)
}

/// One row of a discrete-versus-continuous comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationSample {
    pub step: usize,
    pub t: f64,
    pub discrete: f64,
    pub continuous: f64,
}

impl PopulationSample {
    pub fn deviation(&self) -> f64 {
        (self.discrete - self.continuous).abs()
    }
}

/// |ε^(n)|² against |ε(nτ)|² with γ = g²τ, starting from the excited qubit.
pub fn population_comparison(p: &LossyCavityParams, n: usize) -> Result<Vec<PopulationSample>> {
    let traj = amplitude_trajectory(p, n, ONE, ZERO)?;
    let gamma = p.gamma();
    Ok(traj
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let t = k as f64 * p.tau;
            PopulationSample {
                step: k,
                t,
                discrete: a.excited_population(),
                continuous: analytic_excited_amplitude(p.delta, p.big_g, gamma, t).norm_sqr(),
            }
        })
        .collect())
}
