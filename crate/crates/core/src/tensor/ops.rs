// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Tensor-product plumbing and small dense solvers.

use super::matrix::{matmul_into, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Kronecker product a ⊗ b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    let cols = ac * bc;
    let od = out.data_mut();
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                let row = (i * br + k) * cols + j * bc;
                for (l, bkl) in b.row(k).iter().enumerate() {
                    od[row + l] = aij * bkl;
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut iter = factors.iter();
    let first = match iter.next() {
        Some(f) => (*f).clone(),
        None => return ComplexMatrix::identity(1),
    };
    iter.fold(first, |acc, f| kron(&acc, f))
}

/// Kronecker product of state vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Offsets into the full index for every multi-index over `factors`.
fn offsets(dims: &[usize], factors: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(out.len() * dims[f]);
        for &base in &out {
            for x in 0..dims[f] {
                next.push(base + x * st[f]);
            }
        }
        out = next;
    }
    out
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<usize> {
    let n = m.require_square()?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dimension("factor dimensions must be positive".into()));
    }
    let prod: usize = dims.iter().product();
    if prod != n {
        return Err(Error::Dimension(format!(
            "factor dimensions {dims:?} multiply to {prod}, matrix is {n}x{n}"
        )));
    }
    Ok(n)
}

/// Traces out every factor not listed in `keep`. Kept factors stay in ascending order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if keep.is_empty() {
        return Err(Error::Dimension("keep set is empty".into()));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(format!("keep index out of range for {dims:?}")));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let ok = offsets(dims, &kept);
    let ot = offsets(dims, &traced);
    let n = m.cols();
    let d = ok.len();
    let src = m.data();
    let mut out = ComplexMatrix::zeros(d, d);
    let od = out.data_mut();
    for (a, &ra) in ok.iter().enumerate() {
        for (b, &rb) in ok.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &ot {
                acc += src[(ra + t) * n + rb + t];
            }
            od[a * d + b] = acc;
        }
    }
    Ok(out)
}

/// Places `op`, acting on the listed factors (in that order), into the full product space.
pub fn embed(op: &ComplexMatrix, dims: &[usize], factors: &[usize]) -> Result<ComplexMatrix> {
    let local: usize = factors.iter().map(|&f| dims.get(f).copied().unwrap_or(0)).product();
    if op.rows() != local || op.cols() != local || factors.is_empty() {
        return Err(Error::Dimension(format!(
            "operator {}x{} does not act on factors {factors:?} of {dims:?}",
            op.rows(),
            op.cols()
        )));
    }
    let mut sorted = factors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != factors.len() {
        return Err(Error::Dimension("repeated factor index".into()));
    }
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !factors.contains(k)).collect();
    let oa = offsets(dims, factors);
    let or = offsets(dims, &rest);
    let n: usize = dims.iter().product();
    let mut out = ComplexMatrix::zeros(n, n);
    let od = out.data_mut();
    for (a, &ra) in oa.iter().enumerate() {
        for (b, &rb) in oa.iter().enumerate() {
            let v = op[(a, b)];
            if v == ZERO {
                continue;
            }
            for &r in &or {
                od[(ra + r) * n + rb + r] = v;
            }
        }
    }
    Ok(out)
}

/// m^n by binary exponentiation.
pub fn mat_power(m: &ComplexMatrix, n: u64) -> Result<ComplexMatrix> {
    let d = m.require_square()?;
    let mut result = ComplexMatrix::identity(d);
    if n == 0 {
        return Ok(result);
    }
    let mut base = m.clone();
    let mut tmp = ComplexMatrix::zeros(d, d);
    let mut e = n;
    loop {
        if e & 1 == 1 {
            matmul_into(&result, &base, &mut tmp);
            std::mem::swap(&mut result, &mut tmp);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        matmul_into(&base, &base, &mut tmp);
        std::mem::swap(&mut base, &mut tmp);
    }
    Ok(result)
}

/// Solves a·x = b with partial-pivoting LU.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    if b.rows() != n {
        return Err(Error::Dimension("right-hand side row count".into()));
    }
    let m = b.cols();
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        if pmax <= scale * 1e-300 {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(k, j)] = x[(p, j)];
                x[(p, j)] = t;
            }
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            if f == ZERO {
                continue;
            }
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= f * v;
            }
            for j in 0..m {
                let v = x[(k, j)];
                x[(i, j)] -= f * v;
            }
        }
    }
    for k in (0..n).rev() {
        let pivot = lu[(k, k)];
        for j in 0..m {
            let mut acc = x[(k, j)];
            for l in k + 1..n {
                acc -= lu[(k, l)] * x[(l, j)];
            }
            x[(k, j)] = acc / pivot;
        }
    }
    Ok(x)
}
