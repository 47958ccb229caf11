// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive Dormand–Prince 5(4) integration of complex linear and nonlinear ODEs.

use crate::error::{Error, Result};
use crate::tensor::C64;

/// Step-size control settings.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; chosen from the grid spacing when `None`.
    pub h_init: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: None,
            max_steps: 5_000_000,
        }
    }
}

impl OdeOptions {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates y' = f(t, y) and returns the solution at every grid time.
///
/// `t_grid` must be ascending; the first entry is the initial time. The
/// right-hand side writes the derivative into its third argument.
pub fn integrate<F>(mut rhs: F, y0: &[C64], t_grid: &[f64], opts: &OdeOptions) -> Result<Vec<Vec<C64>>>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    if t_grid.is_empty() {
        return Ok(Vec::new());
    }
    if t_grid.windows(2).any(|w| !(w[1] >= w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter("time grid must be finite and ascending".into()));
    }
    let n = y0.len();
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(y0.to_vec());

    let mut t = t_grid[0];
    let mut y = y0.to_vec();
    let span = t_grid[t_grid.len() - 1] - t;
    if span == 0.0 {
        out.extend(std::iter::repeat_n(y0.to_vec(), t_grid.len() - 1));
        return Ok(out);
    }
    let mut h = opts
        .h_init
        .unwrap_or_else(|| (span / (t_grid.len() as f64)).min(span * 1e-2).max(span * 1e-8));

    let mut k: [Vec<C64>; 7] = std::array::from_fn(|_| vec![C64::new(0.0, 0.0); n]);
    let mut tmp = vec![C64::new(0.0, 0.0); n];
    let mut y_new = vec![C64::new(0.0, 0.0); n];
    rhs(t, &y, &mut k[0]);
    let mut steps = 0usize;

    for &target in &t_grid[1..] {
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::TooManySteps(opts.max_steps));
            }
            let remaining = target - t;
            let last = h >= remaining * (1.0 - 1e-12);
            let hs = if last { remaining } else { h };
            if hs <= f64::EPSILON * t.abs().max(span) {
                return Err(Error::StepSizeUnderflow { t });
            }

            stage(&mut tmp, &y, hs, &[(A21, &k[0])]);
            rhs(t + C2 * hs, &tmp, &mut k[1]);
            stage(&mut tmp, &y, hs, &[(A31, &k[0]), (A32, &k[1])]);
            rhs(t + C3 * hs, &tmp, &mut k[2]);
            stage(&mut tmp, &y, hs, &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])]);
            rhs(t + C4 * hs, &tmp, &mut k[3]);
            stage(
                &mut tmp,
                &y,
                hs,
                &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])],
            );
            rhs(t + C5 * hs, &tmp, &mut k[4]);
            stage(
                &mut tmp,
                &y,
                hs,
                &[(A61, &k[0]), (A62, &k[1]), (A63, &k[2]), (A64, &k[3]), (A65, &k[4])],
            );
            rhs(t + hs, &tmp, &mut k[5]);
            stage(
                &mut y_new,
                &y,
                hs,
                &[(B1, &k[0]), (B3, &k[2]), (B4, &k[3]), (B5, &k[4]), (B6, &k[5])],
            );
            rhs(t + hs, &y_new, &mut k[6]);

            let mut err_sq = 0.0;
            for i in 0..n {
                let e = hs * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
                let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
                err_sq += (e.norm() / sc).powi(2);
            }
            let err = (err_sq / n.max(1) as f64).sqrt();
            steps += 1;

            if err <= 1.0 {
                t = if last { target } else { t + hs };
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // keep the pre-clipping step when the last step was shortened
                h = if last { h.max(hs * fac) } else { hs * fac };
            } else {
                h = hs * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

#[inline]
fn stage(out: &mut [C64], y: &[C64], h: f64, terms: &[(f64, &Vec<C64>)]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (a, k) in terms {
            acc += k[i] * *a;
        }
        *o = y[i] + acc * h;
    }
}

/// Evenly spaced grid 0, dt, ..., n*dt.
pub fn uniform_grid(dt: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 * dt).collect()
}
