// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Higham, "The scaling and squaring method for the matrix exponential
//! revisited", SIAM J. Matrix Anal. Appl. 26 (2005).

use super::matrix::{ComplexMatrix, C64};
use super::ops::solve;
use crate::error::Result;

#[allow(clippy::excessive_precision)]
const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn axpy_identity(m: &mut ComplexMatrix, c: f64) {
    for i in 0..m.rows() {
        m[(i, i)] += c;
    }
}

fn lin_comb(terms: &[(f64, &ComplexMatrix)], n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for (c, m) in terms {
        for (o, v) in out.data_mut().iter_mut().zip(m.data()) {
            *o += v * *c;
        }
    }
    out
}

/// Returns (U, V) with the Padé approximant r_m(A) = (V - U)^{-1} (V + U).
fn pade_low(a: &ComplexMatrix, b: &[f64], pows: &[ComplexMatrix]) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    // pows[k] = A^{2(k+1)}
    let mut u_inner = ComplexMatrix::identity(n).scale_real(b[1]);
    let mut v = ComplexMatrix::identity(n).scale_real(b[0]);
    for (k, p) in pows.iter().enumerate() {
        let even = 2 * (k + 1);
        u_inner += &p.scale_real(b[even + 1]);
        v += &p.scale_real(b[even]);
    }
    (a.matmul(&u_inner), v)
}

fn pade13(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let b = &B13;
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let mut inner = lin_comb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    inner = a6.matmul(&inner);
    inner += &lin_comb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2)], n);
    axpy_identity(&mut inner, b[1]);
    let u = a.matmul(&inner);
    let mut v = a6.matmul(&lin_comb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n));
    v += &lin_comb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2)], n);
    axpy_identity(&mut v, b[0]);
    (u, v)
}

fn rational(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve(&(v - u), &(v + u))
}

/// exp(a) to double precision. Errors on non-square input.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let norm = a.norm1();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    for (m, theta) in THETA {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let a2 = a.matmul(a);
            let mut pows = vec![a2.clone()];
            for _ in 1..(m - 1) / 2 {
                let next = pows.last().unwrap().matmul(&a2);
                pows.push(next);
            }
            let (u, v) = pade_low(a, coeffs, &pows);
            return rational(&u, &v);
        }
    }
    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a.scale(C64::new(0.5f64.powi(s), 0.0));
    let (u, v) = pade13(&scaled);
    let mut r = rational(&u, &v)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    Ok(r)
}

/// exp(-i h t) for a Hermitian (or general) generator h.
pub fn expm_unitary(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    expm(&h.scale(C64::new(0.0, -t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::operators::{pauli_x, pauli_z};
    use crate::tensor::random::{random_hermitian, random_matrix};
    use crate::tensor::{I, ZERO};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn series(a: &ComplexMatrix) -> ComplexMatrix {
        // scaled Taylor series with repeated squaring, as an independent reference
        let n = a.rows();
        let s = (a.norm1().max(1.0)).log2().ceil() as i32 + 4;
        let b = a.scale_real(0.5f64.powi(s));
        let mut term = ComplexMatrix::identity(n);
        let mut sum = term.clone();
        for k in 1..40 {
            term = term.matmul(&b).scale_real(1.0 / k as f64);
            sum += &term;
        }
        for _ in 0..s {
            sum = sum.matmul(&sum);
        }
        sum
    }

    #[test]
    fn zero_and_diagonal() {
        assert_eq!(expm(&ComplexMatrix::zeros(3, 3)).unwrap(), ComplexMatrix::identity(3));
        let theta = 0.7;
        let u = expm(&pauli_z().scale(-I * theta)).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, -theta)).norm() < 1e-15);
        assert!((u[(1, 1)] - C64::from_polar(1.0, theta)).norm() < 1e-15);
        assert_eq!(u[(0, 1)], ZERO);
    }

    #[test]
    fn pauli_x_rotation() {
        for theta in [1e-3, 0.3, 1.7, 12.5] {
            let u = expm(&pauli_x().scale(-I * theta)).unwrap();
            let (c, s) = (theta.cos(), theta.sin());
            let expect = ComplexMatrix::from_rows(&[
                [C64::new(c, 0.0), C64::new(0.0, -s)],
                [C64::new(0.0, -s), C64::new(c, 0.0)],
            ]);
            assert!(u.max_abs_diff(&expect) < 1e-14, "theta = {theta}");
        }
    }

    #[test]
    fn matches_series_on_all_pade_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for scale in [1e-3, 0.1, 0.5, 1.5, 4.0, 30.0] {
            let raw = random_matrix(&mut rng, 5, 5);
            let a = raw.scale_real(scale / raw.norm1());
            let e = expm(&a).unwrap();
            let r = series(&a);
            assert!(e.max_abs_diff(&r) <= 1e-12 * r.max_abs().max(1.0), "scale = {scale}");
        }
    }

    #[test]
    fn unitary_for_anti_hermitian_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for dim in [2, 4, 8, 16] {
            let h = random_hermitian(&mut rng, dim).scale_real(7.0);
            let u = expm_unitary(&h, 1.3).unwrap();
            let defect = u.adjoint().matmul(&u).max_abs_diff(&ComplexMatrix::identity(dim));
            assert!(defect < 1e-12, "dim {dim}: {defect:e}");
        }
    }

    #[test]
    fn agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_matrix(&mut rng, 6, 6).scale_real(0.8);
        let na = nalgebra::DMatrix::from_fn(6, 6, |i, j| a[(i, j)]);
        let ne = na.exp();
        let e = expm(&a).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!((e[(i, j)] - ne[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_square() {
        assert!(expm(&ComplexMatrix::zeros(2, 3)).is_err());
    }
}
