// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive Gauss–Kronrod quadrature and Wynn epsilon series acceleration.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

// 15-point Kronrod nodes (non-negative half) with Kronrod and embedded Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_9,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_489_0,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// One 15-point Kronrod estimate on [a, b] with the 7-point Gauss error estimate.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive quadrature of f over the finite interval [a, b].
///
/// Bisects the interval with the largest error estimate until the total
/// estimate drops below max(abs_tol, rel_tol * |I|).
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature("interval must be finite".into()));
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    for _ in 0..2000 {
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (pa, pb, pv, pe) = pieces.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Err(Error::Quadrature(format!(
                "interval [{pa}, {pb}] cannot be bisected further"
            )));
        }
        let (lv, le) = gk15(&mut f, pa, mid);
        let (rv, re) = gk15(&mut f, mid, pb);
        total += lv + rv - pv;
        err += le + re - pe;
        pieces.push((pa, mid, lv, le));
        pieces.push((mid, pb, rv, re));
    }
    // resum to avoid drift from the incremental updates
    let total: f64 = pieces.iter().map(|p| p.2).sum();
    let err: f64 = pieces.iter().map(|p| p.3).sum();
    if !total.is_finite() {
        return Err(Error::Quadrature("non-finite integrand".into()));
    }
    if err > 10.0 * abs_tol.max(rel_tol * total.abs()) {
        return Err(Error::Quadrature(format!("error estimate {err:e} above tolerance")));
    }
    Ok(total)
}

/// Integral over [a, inf) via the substitution x = a + s/(1 - s).
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    integrate(
        |s| {
            if s >= 1.0 {
                return 0.0;
            }
            let d = 1.0 - s;
            let x = a + s / d;
            let v = f(x) / (d * d);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Wynn epsilon table for accelerating a sequence of partial sums.
#[derive(Debug, Default, Clone)]
pub struct WynnEpsilon {
    // last diagonal of the table, eps_{-1} column omitted
    row: Vec<f64>,
    estimates: Vec<f64>,
}

impl WynnEpsilon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the next partial sum and returns the current extrapolated limit.
    pub fn push(&mut self, s: f64) -> f64 {
        let mut new_row = Vec::with_capacity(self.row.len() + 1);
        new_row.push(s);
        let mut prev_prev = 0.0; // eps_{k-1} of the previous row
        for (k, &old) in self.row.iter().enumerate() {
            let diff = new_row[k] - old;
            let val = if diff == 0.0 {
                f64::INFINITY
            } else {
                prev_prev + 1.0 / diff
            };
            prev_prev = old;
            if !val.is_finite() {
                break;
            }
            new_row.push(val);
        }
        self.row = new_row;
        // even columns carry the limit estimates
        let idx = if (self.row.len() - 1).is_multiple_of(2) {
            self.row.len() - 1
        } else {
            self.row.len() - 2
        };
        let est = self.row[idx];
        self.estimates.push(est);
        est
    }

    /// Difference between the last two extrapolated values.
    pub fn last_change(&self) -> f64 {
        match self.estimates.len() {
            0 | 1 => f64::INFINITY,
            n => (self.estimates[n - 1] - self.estimates[n - 2]).abs(),
        }
    }
}
