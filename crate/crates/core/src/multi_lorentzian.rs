// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Qubit S coupled to two lossy bosonic modes S_1, S_2 with a mutual
//! exchange c; the reduced dynamics of S is that of a two-Lorentzian reservoir.

use crate::engine::{AncillaSpec, CompositeModel};
use crate::error::{Error, Result};
use crate::lossy_cavity::AmplitudeVector;
use crate::ode::{integrate, OdeOptions};
use crate::spectral::{LorentzianTerm, SpectralDensity};
use crate::tensor::operators::{annihilation, creation, number, sigma_minus, sigma_plus};
use crate::tensor::{expm, kron_all, ComplexMatrix, DensityMatrix, C64, I, ONE, ZERO};

/// Continuous-time parameters, γ_i = g_i²τ.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TriParams {
    pub delta1: f64,
    pub delta2: f64,
    pub big_g1: f64,
    pub big_g2: f64,
    pub c: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl TriParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.delta1,
            self.delta2,
            self.big_g1,
            self.big_g2,
            self.c,
            self.gamma1,
            self.gamma2,
        ];
        if !all.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if self.big_g1 < 0.0 || self.big_g2 < 0.0 || self.gamma1 < 0.0 || self.gamma2 < 0.0 {
            return Err(Error::InvalidParameter(
                "rates G_i and gamma_i must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Discrete parameters with collision time τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriDiscreteParams {
    pub delta1: f64,
    pub delta2: f64,
    pub big_g1: f64,
    pub big_g2: f64,
    pub c: f64,
    pub small_g1: f64,
    pub small_g2: f64,
    pub tau: f64,
}

impl TriDiscreteParams {
    /// g_i = sqrt(γ_i/τ).
    pub fn from_continuous(p: &TriParams, tau: f64) -> Result<Self> {
        p.validate()?;
        let d = Self {
            delta1: p.delta1,
            delta2: p.delta2,
            big_g1: p.big_g1,
            big_g2: p.big_g2,
            c: p.c,
            small_g1: (p.gamma1 / tau).sqrt(),
            small_g2: (p.gamma2 / tau).sqrt(),
            tau,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "collision time {} must be positive",
                self.tau
            )));
        }
        if self.small_g1 < 0.0 || self.small_g2 < 0.0 || !(self.small_g1.is_finite() && self.small_g2.is_finite()) {
            return Err(Error::InvalidParameter(
                "ancilla couplings must be finite and nonnegative".into(),
            ));
        }
        self.continuous().validate()
    }

    pub fn continuous(&self) -> TriParams {
        TriParams {
            delta1: self.delta1,
            delta2: self.delta2,
            big_g1: self.big_g1,
            big_g2: self.big_g2,
            c: self.c,
            gamma1: self.small_g1 * self.small_g1 * self.tau,
            gamma2: self.small_g2 * self.small_g2 * self.tau,
        }
    }
}

/// System Hamiltonian on {|100>, |010>, |001>}.
pub fn single_excitation_hamiltonian(delta1: f64, delta2: f64, big_g1: f64, big_g2: f64, c: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, big_g1, big_g2], [big_g1, delta1, c], [big_g2, c, delta2]])
}

/// One-step map on (ε, β₁, β₂): diag(1, cos g₁τ, cos g₂τ) · exp(−iH₃τ).
pub fn transfer_matrix3(p: &TriDiscreteParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let h = single_excitation_hamiltonian(p.delta1, p.delta2, p.big_g1, p.big_g2, p.c);
    let u = expm(&h.scale(C64::new(0.0, -p.tau)))?;
    let damp = [1.0, (p.small_g1 * p.tau).cos(), (p.small_g2 * p.tau).cos()];
    let mut m = u;
    for (r, d) in damp.iter().enumerate() {
        for col in 0..3 {
            m[(r, col)] *= *d;
        }
    }
    Ok(m)
}

/// (ε, β₁, β₂) after k = 0..=n steps.
pub fn amplitude_trajectory3(p: &TriDiscreteParams, n: usize, init: [C64; 3]) -> Result<Vec<AmplitudeVector>> {
    let norm: f64 = init.iter().map(|a| a.norm_sqr()).sum();
    if norm > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "initial amplitudes have norm² {norm} > 1"
        )));
    }
    let m = transfer_matrix3(p)?;
    let mut v = init.to_vec();
    let mut out = Vec::with_capacity(n + 1);
    out.push(AmplitudeVector::new(v[0], vec![v[1], v[2]]));
    for _ in 0..n {
        v = m.mul_vec(&v);
        out.push(AmplitudeVector::new(v[0], vec![v[1], v[2]]));
    }
    Ok(out)
}

/// Integrates the continuous amplitude equations from (1, 0, 0).
pub fn amplitude_ode3(p: &TriParams, t_grid: &[f64]) -> Result<Vec<AmplitudeVector>> {
    p.validate()?;
    if t_grid.first().is_some_and(|&t| t != 0.0) {
        return Err(Error::InvalidParameter("time grid must start at 0".into()));
    }
    let w1 = C64::new(p.delta1, -0.5 * p.gamma1);
    let w2 = C64::new(p.delta2, -0.5 * p.gamma2);
    let sol = integrate(
        |_, y, dy| {
            dy[0] = -I * (p.big_g1 * y[1] + p.big_g2 * y[2]);
            dy[1] = -I * (w1 * y[1] + p.big_g1 * y[0] + p.c * y[2]);
            dy[2] = -I * (w2 * y[2] + p.big_g2 * y[0] + p.c * y[1]);
        },
        &[ONE, ZERO, ZERO],
        t_grid,
        &OdeOptions::with_tolerances(1e-12, 1e-14),
    )?;
    Ok(sol
        .into_iter()
        .map(|y| AmplitudeVector::new(y[0], vec![y[1], y[2]]))
        .collect())
}

/// Collision-engine realization: factors S, S_1, S_2, one vacuum ancilla per mode per step.
pub fn composite_model(p: &TriDiscreteParams, levels: usize) -> Result<CompositeModel> {
    p.validate()?;
    if levels < 2 {
        return Err(Error::InvalidParameter("bosonic modes need at least 2 levels".into()));
    }
    let id2 = ComplexMatrix::identity(2);
    let idb = ComplexMatrix::identity(levels);
    let (a, ad, n) = (annihilation(levels), creation(levels), number(levels));
    let sm = sigma_minus();
    let sp = sigma_plus();
    let mut h = kron_all(&[&id2, &n, &idb]).scale_real(p.delta1);
    h += &kron_all(&[&id2, &idb, &n]).scale_real(p.delta2);
    h += &(&kron_all(&[&sm, &ad, &idb]) + &kron_all(&[&sp, &a, &idb])).scale_real(p.big_g1);
    h += &(&kron_all(&[&sm, &idb, &ad]) + &kron_all(&[&sp, &idb, &a])).scale_real(p.big_g2);
    h += &(&kron_all(&[&id2, &ad, &a]) + &kron_all(&[&id2, &a, &ad])).scale_real(p.c);
    let w = &kron_all(&[&a, &ad]) + &kron_all(&[&ad, &a]);
    let vacuum = DensityMatrix::basis_state(levels, 0)?;
    let ancillas = vec![
        AncillaSpec::new(vacuum.clone(), w.clone(), p.small_g1)?,
        AncillaSpec::new(vacuum, w, p.small_g2)?,
    ];
    let model = CompositeModel::new(2, vec![levels, levels], h, ancillas, p.tau)?;
    if levels > 2 {
        model.with_truncated_modes(vec![1, 2])
    } else {
        Ok(model)
    }
}

/// ε|100> + β₁|010> + β₂|001> on the engine space.
pub fn single_excitation_state3(amps: [C64; 3], levels: usize) -> Result<DensityMatrix> {
    let mut psi = vec![ZERO; 2 * levels * levels];
    psi[0] = amps[0]; // |e, 0, 0>
    psi[levels * levels + levels] = amps[1]; // |g, 1, 0>
    psi[levels * levels + 1] = amps[2]; // |g, 0, 1>
    DensityMatrix::pure(&psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdCase {
    /// c = 0: two independent Lorentzians.
    A,
    /// G₂ = 0, Δ₁ = Δ₂: S_2 couples to S only through S_1.
    B,
}

/// Where the Lorentzians of the equivalent density are centered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterConvention {
    /// ω₀ + Δ_i, the value that reproduces the amplitude dynamics.
    #[default]
    DetuningShift,
    /// 2Δ_i, independent of ω₀.
    DoubledDetuning,
}

impl CenterConvention {
    pub fn center(self, omega0: f64, delta: f64) -> f64 {
        match self {
            Self::DetuningShift => omega0 + delta,
            Self::DoubledDetuning => 2.0 * delta,
        }
    }
}

/// Decay rates and discriminant of case (b): (λ₊, λ₋, χ), λ± = (γ₁ + γ₂ ± χ)/4.
pub fn case_b_rates(p: &TriParams) -> Result<(f64, f64, f64)> {
    check_case_b(p)?;
    let chi = ((p.gamma1 - p.gamma2).powi(2) - 16.0 * p.c * p.c).sqrt();
    Ok((
        (p.gamma1 + p.gamma2 + chi) / 4.0,
        (p.gamma1 + p.gamma2 - chi) / 4.0,
        chi,
    ))
}

/// Weights (W₊, W₋) of J = W₊/2π L(λ₊) − W₋/2π L(λ₋), with
/// W± = G₁²(γ₁ − γ₂ ± χ)/(χ λ±).
pub fn case_b_weights(p: &TriParams) -> Result<(f64, f64)> {
    let (lp, lm, chi) = case_b_rates(p)?;
    let g2 = p.big_g1 * p.big_g1;
    let d = p.gamma1 - p.gamma2;
    Ok((g2 * (d + chi) / (chi * lp), g2 * (d - chi) / (chi * lm)))
}

/// The weights in their factored form
/// 2G²(8c²(χ ∓ 2γ₂) ± (γ₁ − γ₂)γ₂ · last)/(χ²(4c² + γ₁γ₂)), where `last` is
/// γ₁ − (γ₂ ± χ) when `as_printed` and γ₁ − γ₂ ± χ otherwise.
pub fn factored_case_b_weights(p: &TriParams, as_printed: bool) -> Result<(f64, f64)> {
    let (_, _, chi) = case_b_rates(p)?;
    let (g1, g2, c2) = (p.gamma1, p.gamma2, p.c * p.c);
    let gg = p.big_g1 * p.big_g1;
    let den = chi * chi * (4.0 * c2 + g1 * g2);
    let weight = |s: f64| {
        let last = if as_printed {
            g1 - (g2 + s * chi)
        } else {
            g1 - g2 + s * chi
        };
        2.0 * gg * (8.0 * c2 * (chi - s * 2.0 * g2) + s * (g1 - g2) * g2 * last) / den
    };
    Ok((weight(1.0), weight(-1.0)))
}

fn check_case_b(p: &TriParams) -> Result<()> {
    p.validate()?;
    if p.big_g2 != 0.0 || p.delta1 != p.delta2 {
        return Err(Error::InvalidParameter(
            "case (b) needs G2 = 0 and delta1 = delta2".into(),
        ));
    }
    if !(p.gamma2 > 0.0) || !(p.gamma1 - p.gamma2 > 4.0 * p.c.abs()) {
        return Err(Error::InvalidParameter(format!(
            "case (b) needs gamma2 > 0 and gamma1 - gamma2 > 4|c| (gamma1 = {}, gamma2 = {}, c = {})",
            p.gamma1, p.gamma2, p.c
        )));
    }
    Ok(())
}

/// Spectral density whose memory kernel reproduces ε(t) of [`amplitude_ode3`].
pub fn equivalent_sd(
    p: &TriParams,
    case: SdCase,
    omega0: f64,
    convention: CenterConvention,
) -> Result<SpectralDensity> {
    p.validate()?;
    let terms = match case {
        SdCase::A => {
            if p.c != 0.0 {
                return Err(Error::InvalidParameter("case (a) needs c = 0".into()));
            }
            let mut terms = Vec::new();
            for (g, gamma, delta) in [(p.big_g1, p.gamma1, p.delta1), (p.big_g2, p.gamma2, p.delta2)] {
                if g == 0.0 {
                    continue;
                }
                if !(gamma > 0.0) {
                    return Err(Error::InvalidParameter(
                        "case (a) needs gamma_i > 0 for coupled modes".into(),
                    ));
                }
                let peak = 4.0 * g * g / gamma / (2.0 * std::f64::consts::PI);
                terms.push(LorentzianTerm::new(peak, convention.center(omega0, delta), 0.5 * gamma));
            }
            terms
        }
        SdCase::B => {
            let (lp, lm, _) = case_b_rates(p)?;
            let (wp, wm) = case_b_weights(p)?;
            let center = convention.center(omega0, p.delta1);
            let two_pi = 2.0 * std::f64::consts::PI;
            vec![
                LorentzianTerm::new(wp / two_pi, center, lp),
                LorentzianTerm::new(-wm / two_pi, center, lm),
            ]
        }
    };
    SpectralDensity::lorentzian_sum(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::CollisionEngine;
    use crate::lindblad::{integrate_me, liouvillian};
    use crate::lossy_cavity::{analytic_excited_amplitude, transfer_matrix, LossyCavityParams};
    use crate::ode::uniform_grid;
    use crate::spectral::{solve_volterra, VolterraMethod};

    fn generic() -> TriDiscreteParams {
        TriDiscreteParams {
            delta1: 0.4,
            delta2: -0.7,
            big_g1: 1.1,
            big_g2: 0.6,
            c: 0.35,
            small_g1: 2.0,
            small_g2: 1.3,
            tau: 0.2,
        }
    }

    #[test]
    fn zero_time_and_decoupled_branch() {
        let mut p = generic();
        p.tau = 1e-300;
        let m = transfer_matrix3(&p).unwrap();
        assert!((&m - &ComplexMatrix::identity(3)).max_abs() < 1e-12);

        let q = TriDiscreteParams {
            big_g2: 0.0,
            c: 0.0,
            small_g2: 0.0,
            ..generic()
        };
        let m = transfer_matrix3(&q).unwrap();
        let m2 = transfer_matrix(&LossyCavityParams::new(q.delta1, q.big_g1, q.small_g1, q.tau).unwrap());
        for r in 0..2 {
            for c in 0..2 {
                assert!((m[(r, c)] - m2[(r, c)]).norm() < 1e-13);
            }
            assert!(m[(r, 2)].norm() < 1e-15 && m[(2, r)].norm() < 1e-15);
        }
        assert!((m[(2, 2)] - C64::from_polar(1.0, -q.delta2 * q.tau)).norm() < 1e-14);
    }

    #[test]
    fn transfer_matrix_is_contractive() {
        let m = transfer_matrix3(&generic()).unwrap();
        let mh = m.adjoint().matmul(&m);
        let e = crate::tensor::herm_eig(&mh.hermitian_part()).unwrap();
        assert!(e.values.iter().all(|v| *v <= 1.0 + 1e-12));
    }

    #[test]
    fn engine_matches_transfer_matrix() {
        let p = generic();
        let amps = [C64::new(0.8, 0.0), C64::new(0.0, 0.36), C64::new(0.48, 0.0)];
        let traj = amplitude_trajectory3(&p, 6, amps).unwrap();
        for levels in [2, 3] {
            let engine = CollisionEngine::new(composite_model(&p, levels).unwrap()).unwrap();
            let states = engine
                .evolve(&single_excitation_state3(amps, levels).unwrap(), 6)
                .unwrap();
            let idx = [0, levels * levels + levels, levels * levels + 1];
            for (k, rho) in states.iter().enumerate() {
                let a = &traj[k];
                let expect = [a.eps, a.betas[0], a.betas[1]];
                for i in 0..3 {
                    for j in 0..3 {
                        let want = expect[i] * expect[j].conj();
                        assert!(
                            (rho.matrix()[(idx[i], idx[j])] - want).norm() < 1e-10,
                            "k={k} levels={levels}"
                        );
                    }
                }
                if levels == 3 {
                    let leak = engine.leakage(rho).unwrap();
                    assert!(leak.iter().all(|(_, pop)| *pop < 1e-12));
                }
            }
        }
    }

    #[test]
    fn ode3_limits() {
        let grid = uniform_grid(0.1, 30);
        let none = TriParams {
            gamma1: 1.0,
            gamma2: 2.0,
            c: 0.4,
            ..Default::default()
        };
        assert!(amplitude_ode3(&none, &grid)
            .unwrap()
            .iter()
            .all(|a| (a.eps - ONE).norm() < 1e-12));
        let single = TriParams {
            delta1: 0.3,
            big_g1: 1.0,
            gamma1: 1.5,
            gamma2: 0.7,
            ..Default::default()
        };
        let sol = amplitude_ode3(&single, &grid).unwrap();
        for (t, a) in grid.iter().zip(&sol) {
            assert!((a.eps - analytic_excited_amplitude(0.3, 1.0, 1.5, *t)).norm() < 1e-10);
        }
        let mut prev = 1.0 + 1e-12;
        for a in &sol {
            assert!(a.norm_sqr() <= prev + 1e-12);
            prev = a.norm_sqr();
        }
    }

    #[test]
    fn ode3_matches_master_equation() {
        let d = TriDiscreteParams::from_continuous(
            &TriParams {
                delta1: 0.4,
                delta2: -0.3,
                big_g1: 1.0,
                big_g2: 0.5,
                c: 0.3,
                gamma1: 1.2,
                gamma2: 0.6,
            },
            0.01,
        )
        .unwrap();
        let l = liouvillian(&composite_model(&d, 2).unwrap()).unwrap();
        let rho0 = single_excitation_state3([ONE, ZERO, ZERO], 2).unwrap();
        let grid = uniform_grid(0.25, 12);
        let me = integrate_me(&l, &rho0, &grid).unwrap();
        let ode = amplitude_ode3(&d.continuous(), &grid).unwrap();
        for (r, a) in me.iter().zip(&ode) {
            assert!((r.population(0) - a.eps.norm_sqr()).abs() < 1e-8);
        }
    }

    #[test]
    fn case_a_reproduces_ode3() {
        let p = TriParams {
            delta1: 0.5,
            delta2: -1.0,
            big_g1: 1.0,
            big_g2: 0.7,
            c: 0.0,
            gamma1: 2.0,
            gamma2: 1.0,
        };
        let j = equivalent_sd(&p, SdCase::A, 3.0, CenterConvention::DetuningShift).unwrap();
        let grid = uniform_grid(0.01, 600);
        let v = solve_volterra(&j, 3.0, &grid, VolterraMethod::PseudoMode).unwrap();
        let o = amplitude_ode3(&p, &grid).unwrap();
        let dev = v.iter().zip(&o).map(|(a, b)| (a - b.eps).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-8, "{dev}");
        // the doubled-detuning centers do not
        let j2 = equivalent_sd(&p, SdCase::A, 3.0, CenterConvention::DoubledDetuning).unwrap();
        let v2 = solve_volterra(&j2, 3.0, &grid, VolterraMethod::PseudoMode).unwrap();
        let dev2 = v2.iter().zip(&o).map(|(a, b)| (a - b.eps).norm()).fold(0.0, f64::max);
        assert!(dev2 > 0.1);
    }

    #[test]
    fn case_a_single_mode_peak() {
        let p = TriParams {
            big_g1: 1.0,
            gamma1: 2.0,
            gamma2: 1.0,
            ..Default::default()
        };
        let j = equivalent_sd(&p, SdCase::A, 0.0, CenterConvention::DetuningShift).unwrap();
        assert!((j.eval(0.0) - 4.0 / 2.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!((j.eval(1.0) - 0.5 * j.eval(0.0)).abs() < 1e-15);
    }

    fn case_b() -> TriParams {
        TriParams {
            delta1: 0.0,
            delta2: 0.0,
            big_g1: 1.0,
            big_g2: 0.0,
            c: 0.5,
            gamma1: 4.0,
            gamma2: 1.0,
        }
    }

    #[test]
    fn case_b_weights_values() {
        let (wp, wm) = case_b_weights(&case_b()).unwrap();
        assert!((wp - 1.2944).abs() < 1e-4 && (wm - 0.4944).abs() < 1e-4);
        let (fp, fm) = factored_case_b_weights(&case_b(), false).unwrap();
        assert!((fp - wp).abs() < 1e-12 && (fm - wm).abs() < 1e-12);
        let (pp, pm) = factored_case_b_weights(&case_b(), true).unwrap();
        assert!((pp - wp).abs() > 0.1 || (pm - wm).abs() > 0.1);
        // c → 0 leaves the γ₁/2 Lorentzian alone
        let mut p = case_b();
        p.c = 1e-9;
        let (lp, _, _) = case_b_rates(&p).unwrap();
        let (wp, wm) = case_b_weights(&p).unwrap();
        assert!((lp - 2.0).abs() < 1e-9 && (wp - 1.0).abs() < 1e-8 && wm.abs() < 1e-8);
    }

    #[test]
    fn case_b_reproduces_ode3() {
        let p = case_b();
        let j = equivalent_sd(&p, SdCase::B, 0.0, CenterConvention::DetuningShift).unwrap();
        assert!(j.validation_minimum() >= 0.0);
        let grid = uniform_grid(0.01, 800);
        let v = solve_volterra(&j, 0.0, &grid, VolterraMethod::PseudoMode).unwrap();
        let o = amplitude_ode3(&p, &grid).unwrap();
        let dev = v.iter().zip(&o).map(|(a, b)| (a - b.eps).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-8, "{dev}");
        // the printed factored weights do not
        let (pp, pm) = factored_case_b_weights(&p, true).unwrap();
        let (lp, lm, _) = case_b_rates(&p).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        let printed = SpectralDensity::LorentzianSum(vec![
            LorentzianTerm::new(pp / two_pi, 0.0, lp),
            LorentzianTerm::new(-pm / two_pi, 0.0, lm),
        ]);
        let v2 = solve_volterra(&printed, 0.0, &grid, VolterraMethod::PseudoMode).unwrap();
        let dev2 = v2.iter().zip(&o).map(|(a, b)| (a - b.eps).norm()).fold(0.0, f64::max);
        assert!(dev2 > 1e-2, "{dev2}");
    }

    #[test]
    fn case_preconditions() {
        let mut p = case_b();
        assert!(equivalent_sd(&p, SdCase::A, 0.0, CenterConvention::DetuningShift).is_err());
        p.c = 0.8; // γ₁ − γ₂ = 3 < 4|c|
        assert!(equivalent_sd(&p, SdCase::B, 0.0, CenterConvention::DetuningShift).is_err());
        let mut q = case_b();
        q.big_g2 = 0.1;
        assert!(equivalent_sd(&q, SdCase::B, 0.0, CenterConvention::DetuningShift).is_err());
        q = case_b();
        q.delta2 = 0.1;
        assert!(equivalent_sd(&q, SdCase::B, 0.0, CenterConvention::DetuningShift).is_err());
    }
}
