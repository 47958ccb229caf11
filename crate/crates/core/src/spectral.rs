// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Spectral densities, memory kernels, the spontaneous-emission Volterra
//! equation and the dephasing sine-transform pair.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lossy_cavity::LossyCavityParams;
use crate::ode::{integrate, OdeOptions};
use crate::quad::{self, WynnEpsilon};
use crate::tensor::{C64, ONE, ZERO};

/// w · hw² / ((ω − center)² + hw²); `weight` is the peak value and may be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianTerm {
    pub weight: f64,
    pub center: f64,
    pub half_width: f64,
}

impl LorentzianTerm {
    pub fn new(weight: f64, center: f64, half_width: f64) -> Self {
        Self {
            weight,
            center,
            half_width,
        }
    }

    /// (Γ₀/2π) κ² / ((ω − center)² + κ²).
    pub fn from_rate(gamma0: f64, kappa: f64, center: f64) -> Self {
        Self::new(gamma0 / (2.0 * PI), center, kappa)
    }

    pub fn eval(&self, omega: f64) -> f64 {
        let d = omega - self.center;
        let hw2 = self.half_width * self.half_width;
        self.weight * hw2 / (d * d + hw2)
    }

    /// ∫ J dω over the real line.
    pub fn integral(&self) -> f64 {
        self.weight * PI * self.half_width
    }

    /// ∫ J(ω) e^{i(ω₀ − ω)s} dω for s ≥ 0.
    pub fn kernel(&self, s: f64, omega0: f64) -> C64 {
        let z = C64::new(-self.half_width, omega0 - self.center);
        self.integral() * (z * s).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    LorentzianSum(Vec<LorentzianTerm>),
    /// Σ_j (γ−κ)^j/(γ+κ)^{j+2} · 4G²κ(j+1)² / ((j+1)² + ω²/4κ²), κ = sqrt(γ² − 4G²), on ω ≥ 0.
    DephasingSeries {
        gamma: f64,
        big_g: f64,
        truncation_tol: f64,
    },
}

impl SpectralDensity {
    /// Validated sum of Lorentzians; the total must be nonnegative.
    pub fn lorentzian_sum(terms: Vec<LorentzianTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Ok(Self::LorentzianSum(terms));
        }
        for t in &terms {
            if !(t.half_width > 0.0) || !t.weight.is_finite() || !t.center.is_finite() || !t.half_width.is_finite() {
                return Err(Error::InvalidParameter(format!("invalid Lorentzian term {t:?}")));
            }
        }
        let j = Self::LorentzianSum(terms);
        let min = j.validation_minimum();
        if min < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "spectral density is negative (min {min:e})"
            )));
        }
        Ok(j)
    }

    /// Single Lorentzian with total rate Γ₀ and half-width κ.
    pub fn lorentzian(gamma0: f64, kappa: f64, center: f64) -> Result<Self> {
        Self::lorentzian_sum(vec![LorentzianTerm::from_rate(gamma0, kappa, center)])
    }

    pub fn dephasing_series(gamma: f64, big_g: f64, truncation_tol: f64) -> Result<Self> {
        if !(gamma > 2.0 * big_g.abs()) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dephasing series needs gamma > 2G (gamma = {gamma}, G = {big_g})"
            )));
        }
        if !(truncation_tol > 0.0 && truncation_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "truncation tolerance {truncation_tol} must be in (0, 1)"
            )));
        }
        Ok(Self::DephasingSeries {
            gamma,
            big_g,
            truncation_tol,
        })
    }

    /// Minimum of J on a grid covering every term.
    pub fn validation_minimum(&self) -> f64 {
        match self {
            Self::LorentzianSum(terms) if !terms.is_empty() => {
                let lo = terms
                    .iter()
                    .map(|t| t.center - 50.0 * t.half_width)
                    .fold(f64::INFINITY, f64::min);
                let hi = terms
                    .iter()
                    .map(|t| t.center + 50.0 * t.half_width)
                    .fold(f64::NEG_INFINITY, f64::max);
                let n = 4000;
                let grid = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64);
                grid.chain(terms.iter().map(|t| t.center))
                    .map(|w| self.eval(w))
                    .fold(f64::INFINITY, f64::min)
            }
            _ => 0.0,
        }
    }

    /// Number of series terms needed for the truncation tolerance.
    pub fn series_terms(&self) -> usize {
        match *self {
            Self::DephasingSeries {
                gamma,
                big_g,
                truncation_tol,
            } => {
                let kappa = (gamma * gamma - 4.0 * big_g * big_g).sqrt();
                let r = (gamma - kappa) / (gamma + kappa);
                if r <= 0.0 {
                    1
                } else {
                    // bound on term j relative to term 0 is r^j (j+1)^0
                    ((truncation_tol.ln() / r.ln()).ceil().max(0.0) as usize + 1).min(10_000_000)
                }
            }
            Self::LorentzianSum(ref t) => t.len(),
        }
    }

    pub fn eval(&self, omega: f64) -> f64 {
        match *self {
            Self::LorentzianSum(ref terms) => terms.iter().map(|t| t.eval(omega)).sum(),
            Self::DephasingSeries { gamma, big_g, .. } => {
                if omega < 0.0 || big_g == 0.0 {
                    return 0.0;
                }
                let kappa = (gamma * gamma - 4.0 * big_g * big_g).sqrt();
                let r = (gamma - kappa) / (gamma + kappa);
                let pref = 4.0 * big_g * big_g * kappa / ((gamma + kappa) * (gamma + kappa));
                let x = omega * omega / (4.0 * kappa * kappa);
                let mut rj = 1.0;
                let mut acc = 0.0;
                for j in 0..self.series_terms() {
                    let m = ((j + 1) * (j + 1)) as f64;
                    acc += rj * m / (m + x);
                    rj *= r;
                    if rj == 0.0 {
                        break;
                    }
                }
                pref * acc
            }
        }
    }
}

/// Anything that can be evaluated as J(ω).
pub trait SpectralFunction {
    fn eval(&self, omega: f64) -> f64;

    /// Lower end of the support.
    fn support_start(&self) -> f64 {
        0.0
    }

    /// Interval holding the sharp features, integrated before the tail.
    fn bulk(&self) -> (f64, f64) {
        (0.0, 0.0)
    }
}

impl SpectralFunction for SpectralDensity {
    fn eval(&self, omega: f64) -> f64 {
        SpectralDensity::eval(self, omega)
    }

    fn support_start(&self) -> f64 {
        match self {
            Self::LorentzianSum(_) => f64::NEG_INFINITY,
            Self::DephasingSeries { .. } => 0.0,
        }
    }

    fn bulk(&self) -> (f64, f64) {
        match *self {
            Self::LorentzianSum(ref terms) if !terms.is_empty() => {
                let lo = terms
                    .iter()
                    .map(|t| t.center - 40.0 * t.half_width)
                    .fold(f64::INFINITY, f64::min);
                let hi = terms
                    .iter()
                    .map(|t| t.center + 40.0 * t.half_width)
                    .fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            Self::DephasingSeries { gamma, big_g, .. } => {
                let kappa = (gamma * gamma - 4.0 * big_g * big_g).sqrt();
                (0.0, 40.0 * kappa.max(gamma))
            }
            _ => (0.0, 0.0),
        }
    }
}

impl<F: Fn(f64) -> f64> SpectralFunction for F {
    fn eval(&self, omega: f64) -> f64 {
        self(omega)
    }
}

pub fn eval_sd(j: &SpectralDensity, omega: f64) -> f64 {
    j.eval(omega)
}

/// ∫_a^∞ f(x) dx for f decaying and oscillating with angular frequency `freq`.
///
/// [a, bulk_end] is integrated adaptively; the remainder is split at half
/// periods and the partial sums are Wynn-accelerated.
fn oscillatory_tail<F: FnMut(f64) -> f64>(mut f: F, a: f64, bulk_end: f64, freq: f64, rel_tol: f64) -> Result<f64> {
    let freq = freq.abs();
    let abs_floor = 1e-15;
    if freq == 0.0 {
        let head = if bulk_end > a {
            quad::integrate(&mut f, a, bulk_end, abs_floor, rel_tol)?
        } else {
            0.0
        };
        let start = bulk_end.max(a);
        return Ok(head + quad::integrate_to_infinity(f, start, abs_floor, rel_tol)?);
    }
    let half = PI / freq;
    // align the bulk end to a whole number of half periods
    let n_bulk = ((bulk_end - a) / half).ceil().max(1.0);
    let mut x = a + n_bulk * half;
    let chunks = n_bulk.min(2000.0) as usize;
    let mut head = 0.0;
    let step = (x - a) / chunks as f64;
    for k in 0..chunks {
        let lo = a + k as f64 * step;
        head += quad::integrate(&mut f, lo, lo + step, abs_floor, rel_tol)?;
    }
    let mut wynn = WynnEpsilon::new();
    let mut partial = head;
    let mut est = head;
    for k in 0..4000 {
        let piece = quad::integrate(&mut f, x, x + half, abs_floor, rel_tol)?;
        partial += piece;
        x += half;
        est = wynn.push(partial);
        if k >= 6 && wynn.last_change() <= rel_tol * est.abs() + abs_floor {
            return Ok(est);
        }
        if piece == 0.0 && k >= 2 {
            return Ok(partial);
        }
    }
    if wynn.last_change() <= 1e3 * (rel_tol * est.abs() + abs_floor) {
        Ok(est)
    } else {
        Err(Error::Quadrature("oscillatory tail did not converge".into()))
    }
}

/// K(s) = ∫ J(ω) e^{i(ω₀ − ω)s} dω, closed form for Lorentzian sums.
pub fn memory_kernel(j: &SpectralDensity, dt: f64, omega0: f64) -> Result<C64> {
    if !(dt >= 0.0) {
        return Err(Error::InvalidParameter(format!("kernel lag {dt} must be nonnegative")));
    }
    match j {
        SpectralDensity::LorentzianSum(terms) => Ok(terms.iter().map(|t| t.kernel(dt, omega0)).sum()),
        _ => memory_kernel_quadrature(j, dt, omega0),
    }
}

/// Memory kernel by numerical quadrature over the support of J.
pub fn memory_kernel_quadrature<J: SpectralFunction + ?Sized>(j: &J, dt: f64, omega0: f64) -> Result<C64> {
    let start = j.support_start();
    let (blo, bhi) = j.bulk();
    let tol = 1e-11;
    let part = |phase: fn(f64) -> f64| -> Result<f64> {
        let g = |w: f64| j.eval(w) * phase((omega0 - w) * dt);
        if start.is_finite() {
            oscillatory_tail(g, start, bhi, dt, tol)
        } else {
            // split at the middle of the bulk and fold the left half over
            let mid = 0.5 * (blo + bhi);
            let right = oscillatory_tail(g, mid, bhi, dt, tol)?;
            let left = oscillatory_tail(|s| g(2.0 * mid - s), mid, 2.0 * mid - blo, dt, tol)?;
            Ok(left + right)
        }
    };
    Ok(C64::new(part(f64::cos)?, part(f64::sin)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VolterraMethod {
    /// One damped auxiliary amplitude per Lorentzian term; Lorentzian sums only.
    #[default]
    PseudoMode,
    /// Trapezoidal product integration, O(h²), for any J.
    Trapezoidal,
}

fn grid_step(t_grid: &[f64]) -> Result<f64> {
    if t_grid.is_empty() || t_grid[0] != 0.0 {
        return Err(Error::InvalidParameter("time grid must start at 0".into()));
    }
    if t_grid.len() == 1 {
        return Ok(0.0);
    }
    let h = t_grid[1] - t_grid[0];
    if !(h > 0.0) {
        return Err(Error::NonUniformGrid);
    }
    for (k, &t) in t_grid.iter().enumerate() {
        if (t - k as f64 * h).abs() > 1e-9 * h.max(t.abs()) {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(h)
}

/// Solves ε̇ = −∫₀ᵗ K(t − s) ε(s) ds with ε(0) = 1 on a uniform grid.
pub fn solve_volterra(j: &SpectralDensity, omega0: f64, t_grid: &[f64], method: VolterraMethod) -> Result<Vec<C64>> {
    let h = grid_step(t_grid)?;
    match method {
        VolterraMethod::PseudoMode => {
            let SpectralDensity::LorentzianSum(terms) = j else {
                return Err(Error::InvalidParameter(
                    "pseudo-mode reduction needs a Lorentzian sum".into(),
                ));
            };
            pseudo_mode(terms, omega0, t_grid)
        }
        VolterraMethod::Trapezoidal => {
            let n = t_grid.len();
            let kernel = (0..n)
                .map(|k| memory_kernel(j, k as f64 * h, omega0))
                .collect::<Result<Vec<_>>>()?;
            Ok(trapezoidal_volterra(&kernel, h))
        }
    }
}

fn pseudo_mode(terms: &[LorentzianTerm], omega0: f64, t_grid: &[f64]) -> Result<Vec<C64>> {
    // b_k(t) = ∫ A_k e^{z_k (t − s)} ε(s) ds, ḃ_k = A_k ε + z_k b_k
    let amps: Vec<f64> = terms.iter().map(|t| t.integral()).collect();
    let rates: Vec<C64> = terms
        .iter()
        .map(|t| C64::new(-t.half_width, omega0 - t.center))
        .collect();
    let mut y0 = vec![ZERO; terms.len() + 1];
    y0[0] = ONE;
    let sol = integrate(
        |_, y, dy| {
            let mut d0 = ZERO;
            for k in 0..amps.len() {
                d0 -= y[k + 1];
                dy[k + 1] = amps[k] * y[0] + rates[k] * y[k + 1];
            }
            dy[0] = d0;
        },
        &y0,
        t_grid,
        &OdeOptions::with_tolerances(1e-12, 1e-14),
    )?;
    Ok(sol.into_iter().map(|y| y[0]).collect())
}

/// Trapezoidal rule for both the memory integral and the time derivative.
fn trapezoidal_volterra(kernel: &[C64], h: f64) -> Vec<C64> {
    let n = kernel.len();
    let mut eps = Vec::with_capacity(n);
    eps.push(ONE);
    if n == 1 {
        return eps;
    }
    let k0 = kernel[0];
    let mut f_prev = ZERO; // memory integral at t = 0
    let denom = ONE + 0.25 * h * h * k0;
    for m in 1..n {
        // memory integral at t_m without the implicit ε_m endpoint
        let mut s = 0.5 * kernel[m] * eps[0];
        for (j, e) in eps.iter().enumerate().take(m).skip(1) {
            s += kernel[m - j] * e;
        }
        s *= h;
        let e_m = (eps[m - 1] - 0.5 * h * (f_prev + s)) / denom;
        f_prev = s + 0.5 * h * k0 * e_m;
        eps.push(e_m);
    }
    eps
}

/// Lossy-cavity parameters for a Lorentzian (Γ₀, κ) centered at ω₀ + Δ:
/// g = sqrt(2κ/τ), G = sqrt(Γ₀κ)/2.
pub fn map_lorentzian_to_cm(gamma0: f64, kappa: f64, delta: f64, tau: f64) -> Result<LossyCavityParams> {
    check_lorentzian_inputs(gamma0, kappa, tau)?;
    LossyCavityParams::new(delta, (gamma0 * kappa).sqrt() / 2.0, (2.0 * kappa / tau).sqrt(), tau)
}

/// As [`map_lorentzian_to_cm`] but with G² = Γ₀κ/2, the value for which the
/// cavity memory kernel G² e^{−iΔs − κs} equals the Lorentzian kernel.
pub fn map_lorentzian_to_cm_kernel_matched(gamma0: f64, kappa: f64, delta: f64, tau: f64) -> Result<LossyCavityParams> {
    check_lorentzian_inputs(gamma0, kappa, tau)?;
    LossyCavityParams::new(delta, (0.5 * gamma0 * kappa).sqrt(), (2.0 * kappa / tau).sqrt(), tau)
}

fn check_lorentzian_inputs(gamma0: f64, kappa: f64, tau: f64) -> Result<()> {
    if !(gamma0 > 0.0 && kappa > 0.0 && tau > 0.0) || !(gamma0 * kappa / tau).is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need positive gamma0, kappa and tau (got {gamma0}, {kappa}, {tau})"
        )));
    }
    Ok(())
}

/// Rejects J whose tail ω·J(ω) does not fall off.
fn check_decay<J: SpectralFunction + ?Sized>(j: &J) -> Result<()> {
    let samples: Vec<f64> = (-2..=8).map(|k| 10f64.powi(k)).map(|w| (w * j.eval(w)).abs()).collect();
    let peak = samples.iter().cloned().fold(0.0, f64::max);
    let last = *samples.last().unwrap_or(&0.0);
    if !last.is_finite() || last > 1e-6 * peak {
        return Err(Error::InsufficientDecay(format!(
            "omega * J(omega) = {last:e} at omega = 1e8 (peak {peak:e})"
        )));
    }
    Ok(())
}

/// γ(t) = ∫₀^∞ sin(ωt) J(ω)/ω dω.
pub fn dephasing_rate_from_sd<J: SpectralFunction + ?Sized>(j: &J, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time {t} must be nonnegative")));
    }
    check_decay(j)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = |w: f64| {
        if w == 0.0 {
            t * j.eval(0.0)
        } else {
            (w * t).sin() * j.eval(w) / w
        }
    };
    let (_, hi) = j.bulk();
    oscillatory_tail(f, 0.0, hi.max(0.0), t, 1e-10)
}

/// J(ω) = ω ∫₀^∞ sin(ωt) γ(t) dt from γ sampled on [0, t_max].
///
/// Beyond t_max, γ is replaced by γ∞ + B e^{−λ(t − t_max)} fitted to the last
/// three samples; the constant part is Abel-summed.
pub fn sd_from_dephasing_rate<F: Fn(f64) -> f64>(gamma_fn: F, omega: f64, t_max: f64) -> Result<f64> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!("cutoff {t_max} must be positive")));
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    let d = t_max / 200.0;
    let (g0, g1, g2) = (gamma_fn(t_max - 2.0 * d), gamma_fn(t_max - d), gamma_fn(t_max));
    let scale = (0..=20)
        .map(|k| gamma_fn(t_max * k as f64 / 20.0).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let (d1, d2) = (g1 - g0, g2 - g1);
    let (g_inf, b, lambda) = if d2.abs() <= 1e-14 * scale {
        (g2, 0.0, 0.0)
    } else {
        let q = d2 / d1;
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InsufficientDecay(format!(
                "gamma(t) is not settling at t = {t_max}"
            )));
        }
        let lambda = -q.ln() / d;
        let b = d2 / (1.0 - 1.0 / q);
        (g2 - b, b, lambda)
    };
    if b.abs() > 1e-3 * scale {
        return Err(Error::InsufficientDecay(format!(
            "transient {b:e} still present at t = {t_max}"
        )));
    }
    let w = omega.abs();
    let half = PI / w;
    let chunks = ((t_max / half).ceil() as usize).clamp(1, 100_000);
    let step = t_max / chunks as f64;
    let mut body = 0.0;
    for k in 0..chunks {
        let lo = k as f64 * step;
        body += quad::integrate(|t| (omega * t).sin() * gamma_fn(t), lo, lo + step, 1e-15, 1e-11)?;
    }
    let (s, c) = (omega * t_max).sin_cos();
    let tail = g_inf * c / omega + b * (lambda * s + omega * c) / (lambda * lambda + omega * omega);
    Ok(omega * (body + tail))
}
