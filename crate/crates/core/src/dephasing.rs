// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Qubit S dispersively coupled to a qubit S_1 that exchanges with thermal
//! qubit ancillas: pure dephasing of S and random telegraph noise.
//!
//! H_S = G σ_z ⊗ σ_1x, ancilla coupling g(σ_1x σ_nx + σ_1y σ_ny).

use crate::engine::{AncillaSpec, CollisionEngine, CompositeModel};
use crate::error::{Error, Result};
use crate::lindblad::{liouvillian, Liouvillian};
use crate::ode::{integrate, OdeOptions};
use crate::tensor::operators::{pauli_x, pauli_y, pauli_z, sigma_minus, sigma_plus};
use crate::tensor::{kron, mat_power, ComplexMatrix, DensityMatrix, C64, I, ONE};

/// Discrete pure-dephasing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingParams {
    pub big_g: f64,
    pub small_g: f64,
    pub tau: f64,
    /// Thermal bias ξ of the ancillas, ξ = 1 is the ancilla ground state.
    pub xi_bias: f64,
}

impl DephasingParams {
    pub fn new(big_g: f64, small_g: f64, tau: f64, xi_bias: f64) -> Result<Self> {
        let p = Self {
            big_g,
            small_g,
            tau,
            xi_bias,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with g = sqrt(γ/τ).
    pub fn for_rate(big_g: f64, gamma: f64, tau: f64, xi_bias: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need gamma >= 0 and tau > 0, got {gamma}, {tau}"
            )));
        }
        Self::new(big_g, (gamma / tau).sqrt(), tau, xi_bias)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.big_g, self.small_g, self.tau, self.xi_bias]
            .iter()
            .all(|x| x.is_finite());
        if !finite || self.tau <= 0.0 || self.xi_bias.abs() > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "dephasing model needs tau > 0 and |xi| <= 1 (got tau={}, xi={})",
                self.tau, self.xi_bias
            )));
        }
        Ok(())
    }

    /// (c_g, c_G, s_g, s_G) with c_X = cos 2Xτ, s_X = sin 2Xτ.
    pub fn trig(&self) -> (f64, f64, f64, f64) {
        let (sg, cg) = (2.0 * self.small_g * self.tau).sin_cos();
        let (s_big, c_big) = (2.0 * self.big_g * self.tau).sin_cos();
        (cg, c_big, sg, s_big)
    }

    /// Discriminant sqrt((c_g − 1)² c_G² − 4 c_g s_G²), possibly imaginary.
    pub fn kappa_d(&self) -> C64 {
        let (cg, c_big, _, s_big) = self.trig();
        C64::new((cg - 1.0).powi(2) * c_big * c_big - 4.0 * cg * s_big * s_big, 0.0).sqrt()
    }

    /// γ = g²τ.
    pub fn gamma(&self) -> f64 {
        self.small_g * self.small_g * self.tau
    }
}

/// Real 16x16 transfer matrix on the basis G_kj = (σ_k ⊗ σ_j)/2, index 4k + j.
#[derive(Clone, PartialEq)]
pub struct PauliTransferMatrix {
    entries: [[f64; 16]; 16],
}

impl std::fmt::Debug for PauliTransferMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PauliTransferMatrix [")?;
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:+.4}")).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

fn pauli(k: usize) -> ComplexMatrix {
    match k {
        0 => ComplexMatrix::identity(2),
        1 => pauli_x(),
        2 => pauli_y(),
        _ => pauli_z(),
    }
}

/// Basis element G_kj, normalized so that Tr(G_a G_b) = δ_ab.
pub fn pauli_basis_element(k: usize, j: usize) -> ComplexMatrix {
    kron(&pauli(k), &pauli(j)).scale_real(0.5)
}

impl PauliTransferMatrix {
    pub fn identity() -> Self {
        let mut entries = [[0.0; 16]; 16];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { entries }
    }

    pub fn from_entries(entries: [[f64; 16]; 16]) -> Self {
        Self { entries }
    }

    /// F_ab = Tr{G_a map(G_b)} for a linear map on two-qubit operators.
    pub fn from_map<F>(mut map: F) -> Result<Self>
    where
        F: FnMut(&ComplexMatrix) -> Result<ComplexMatrix>,
    {
        let basis: Vec<ComplexMatrix> = (0..16).map(|a| pauli_basis_element(a / 4, a % 4)).collect();
        let mut entries = [[0.0; 16]; 16];
        for b in 0..16 {
            let image = map(&basis[b])?;
            for a in 0..16 {
                let v = basis[a].matmul(&image).trace();
                entries[a][b] = v.re;
            }
        }
        Ok(Self { entries })
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    pub fn entries(&self) -> &[[f64; 16]; 16] {
        &self.entries
    }

    pub fn apply(&self, r: &[f64; 16]) -> [f64; 16] {
        let mut out = [0.0; 16];
        for (o, row) in out.iter_mut().zip(&self.entries) {
            *o = row.iter().zip(r).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut entries = [[0.0; 16]; 16];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..16).map(|k| self.entries[i][k] * other.entries[k][j]).sum();
            }
        }
        Self { entries }
    }

    pub fn power(&self, n: u64) -> Self {
        let mut result = Self::identity();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base);
            }
            base = base.matmul(&base);
            e >>= 1;
        }
        result
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Components r_a = Tr{G_a ρ} of a two-qubit operator.
pub fn bloch_vector(rho: &ComplexMatrix) -> [f64; 16] {
    let mut r = [0.0; 16];
    for (a, v) in r.iter_mut().enumerate() {
        *v = pauli_basis_element(a / 4, a % 4).matmul(rho).trace().re;
    }
    r
}

/// ρ = Σ r_a G_a.
pub fn from_bloch_vector(r: &[f64; 16]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (a, &v) in r.iter().enumerate() {
        if v != 0.0 {
            m += &pauli_basis_element(a / 4, a % 4).scale_real(v);
        }
    }
    m
}

/// Entries fed by the ancilla population bias; they scale linearly with ξ.
const SOURCE_ENTRIES: [(usize, usize); 6] = [(3, 0), (7, 4), (7, 9), (11, 5), (11, 8), (15, 12)];

/// Closed-form transfer matrix of one collision step.
pub fn pauli_transfer_matrix(p: &DephasingParams) -> PauliTransferMatrix {
    let (cg, c_big, sg, s_big) = p.trig();
    let sg2 = sg * sg;
    let cg2 = cg * cg;
    let mut f = [[0.0; 16]; 16];
    let diag = [
        1.0,
        cg,
        c_big * cg,
        c_big * cg2,
        c_big,
        c_big * cg,
        cg,
        cg2,
        c_big,
        c_big * cg,
        cg,
        cg2,
        1.0,
        cg,
        c_big * cg,
        c_big * cg2,
    ];
    for (i, d) in diag.iter().enumerate() {
        f[i][i] = *d;
    }
    f[2][15] = -cg * s_big;
    f[3][14] = cg2 * s_big;
    f[4][9] = -s_big;
    f[5][8] = -cg * s_big;
    f[8][5] = s_big;
    f[9][4] = cg * s_big;
    f[14][3] = -cg * s_big;
    f[15][2] = cg2 * s_big;
    let source = [-sg2, -c_big * sg2, s_big * sg2, -s_big * sg2, -c_big * sg2, -sg2];
    for ((r, c), v) in SOURCE_ENTRIES.iter().zip(source) {
        f[*r][*c] = p.xi_bias * v;
    }
    PauliTransferMatrix::from_entries(f)
}

/// Collision-engine realization on S ⊗ S_1 with one qubit ancilla per step.
pub fn composite_model(p: &DephasingParams) -> Result<CompositeModel> {
    p.validate()?;
    let h = kron(&pauli_z(), &pauli_x()).scale_real(p.big_g);
    let w = &kron(&pauli_x(), &pauli_x()) + &kron(&pauli_y(), &pauli_y());
    let spec = AncillaSpec::new(DensityMatrix::thermal_qubit(p.xi_bias)?, w, p.small_g)?;
    CompositeModel::new(2, vec![2], h, vec![spec], p.tau)
}

/// Transfer matrix computed from the collision engine.
pub fn pauli_transfer_matrix_from_engine(p: &DephasingParams) -> Result<PauliTransferMatrix> {
    let engine = CollisionEngine::new(composite_model(p)?)?;
    PauliTransferMatrix::from_map(|op| engine.apply(op))
}

/// The 2x2 block of F on the (σ_x ⊗ 1, σ_y ⊗ σ_x) components.
pub fn coherence_block(p: &DephasingParams) -> ComplexMatrix {
    let (cg, c_big, _, s_big) = p.trig();
    ComplexMatrix::from_real_rows(&[[c_big, -s_big], [cg * s_big, cg * c_big]])
}

/// f_n as the (1,1) entry of the n-th power of the coherence block.
pub fn dephasing_factor_block_power(p: &DephasingParams, n: u64) -> f64 {
    mat_power(&coherence_block(p), n).expect("square block")[(0, 0)].re
}

/// atanh(u)/u.
fn atanh_over(u: C64) -> C64 {
    if u.norm() < 0.05 {
        let u2 = u * u;
        let mut term = ONE;
        let mut acc = ONE;
        for k in 1..=12 {
            term *= u2;
            acc += term / (2 * k + 1) as f64;
        }
        acc
    } else {
        u.atanh() / u
    }
}

/// sinh(z)/z.
fn sinhc(z: C64) -> C64 {
    if z.norm() < 1e-3 {
        let z2 = z * z;
        ONE + z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sinh() / z
    }
}

/// Closed-form dephasing factor after n steps, with S_1 prepared in |1>.
///
/// With λ± = (c_G(1 + c_g) ± κ_d)/2:
/// f_n = ½(λ₊ⁿ + λ₋ⁿ) + ½ c_G (1 − c_g)(λ₊ⁿ − λ₋ⁿ)/κ_d,
/// evaluated without cancellation as κ_d → 0.
pub fn dephasing_factor_discrete(p: &DephasingParams, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (cg, c_big, _, _) = p.trig();
    let kappa = p.kappa_d();
    let m = C64::new(0.5 * c_big * (1.0 + cg), 0.0);
    let skew = 0.5 * c_big * (1.0 - cg);
    let nf = n as f64;
    let n_i = i32::try_from(n).unwrap_or(i32::MAX);
    let (sum, diff_over_kappa) = if m.norm() > 0.0 && (kappa / (2.0 * m)).norm() <= 0.5 {
        // λ± = m(1 ± u), (1 ± u)ⁿ = (1 − u²)^{n/2} e^{±n atanh u}
        let u = kappa / (2.0 * m);
        let x = u * atanh_over(u);
        let envelope = ((0.5 * nf) * ((ONE + u).ln() + (ONE - u).ln())).exp();
        let mn = m.powi(n_i);
        let sum = mn * envelope * (x * nf).cosh();
        // (λ₊ⁿ − λ₋ⁿ)/κ = m^{n−1} envelope sinh(n x)/(2u) with x/u = atanh_over
        let diff = m.powi(n_i - 1) * envelope * nf * sinhc(x * nf) * atanh_over(u);
        (sum, diff)
    } else if kappa.norm() == 0.0 {
        // m = 0 and κ = 0: the block is nilpotent
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    } else {
        let lp = (m * 2.0 + kappa) * 0.5;
        let lm = (m * 2.0 - kappa) * 0.5;
        let (a, b) = (lp.powi(n_i), lm.powi(n_i));
        (0.5 * (a + b), (a - b) / kappa)
    };
    (sum + skew * diff_over_kappa).re
}

/// Continuous-time dephasing factor f(t) = e^{−γt}[cosh κt + γ sinh(κt)/κ], κ = sqrt(γ² − 4G²).
pub fn dephasing_factor_continuous(gamma: f64, big_g: f64, t: f64) -> f64 {
    let k2 = gamma * gamma - 4.0 * big_g * big_g;
    if k2 >= 0.0 {
        let k = k2.sqrt();
        let kt = k * t;
        if kt > 1.0 {
            // e^{−γt} cosh κt written without overflow
            let r = gamma / k;
            0.5 * ((k - gamma) * t).exp() * (1.0 + r) + 0.5 * (-(k + gamma) * t).exp() * (1.0 - r)
        } else {
            (-gamma * t).exp() * (kt.cosh() + gamma * t * sinhc(C64::new(kt, 0.0)).re)
        }
    } else {
        let y = (-k2).sqrt();
        let yt = y * t;
        let sinc = if yt.abs() < 1e-4 {
            1.0 - yt * yt / 6.0
        } else {
            yt.sin() / yt
        };
        (-gamma * t).exp() * (yt.cos() + gamma * t * sinc)
    }
}

/// Time-dependent dephasing rate −ḟ/(2f) = 2G² / (κ coth κt + γ).
pub fn dephasing_rate_continuous(gamma: f64, big_g: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let k2 = gamma * gamma - 4.0 * big_g * big_g;
    // tanh(κt)/κ, real in both regimes
    let tanhc = if k2 > 0.0 {
        let k = k2.sqrt();
        if k * t < 1e-6 {
            t
        } else {
            (k * t).tanh() / k
        }
    } else if k2 < 0.0 {
        let y = (-k2).sqrt();
        if y * t < 1e-6 {
            t
        } else {
            (y * t).tan() / y
        }
    } else {
        t
    };
    2.0 * big_g * big_g * tanhc / (1.0 + gamma * tanhc)
}

/// Integrates the branch equations ρ̇± = −i[±H, ρ±] ± (ρ₋ − ρ₊)/t_c.
///
/// Returns (ρ₊(t), ρ₋(t)) at every grid time; ρ_S = ρ₊ + ρ₋.
pub fn rtn_propagate(
    h_s: &ComplexMatrix,
    t_c: f64,
    rho_plus0: &ComplexMatrix,
    rho_minus0: &ComplexMatrix,
    t_grid: &[f64],
) -> Result<Vec<(ComplexMatrix, ComplexMatrix)>> {
    let d = h_s.require_square()?;
    if !(t_c > 0.0) || !t_c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "correlation time {t_c} must be positive"
        )));
    }
    for m in [rho_plus0, rho_minus0] {
        if m.rows() != d || m.cols() != d {
            return Err(Error::Dimension("branch state does not match the Hamiltonian".into()));
        }
    }
    let total = (rho_plus0.trace() + rho_minus0.trace() - ONE).norm();
    if total > 1e-9 {
        return Err(Error::InvalidState(format!("branch traces sum to 1 + {total:e}")));
    }
    let rate = 1.0 / t_c;
    let nn = d * d;
    let mut y0 = rho_plus0.data().to_vec();
    y0.extend_from_slice(rho_minus0.data());
    let h = h_s.clone();
    let mut a = ComplexMatrix::zeros(d, d);
    let mut b = ComplexMatrix::zeros(d, d);
    let sol = integrate(
        |_, y, dy| {
            a.data_mut().copy_from_slice(&y[..nn]);
            b.data_mut().copy_from_slice(&y[nn..]);
            let ca = h.commutator(&a);
            let cb = h.commutator(&b);
            for i in 0..nn {
                let flow = rate * (y[nn + i] - y[i]);
                dy[i] = -I * ca.data()[i] + flow;
                dy[nn + i] = I * cb.data()[i] - flow;
            }
        },
        &y0,
        t_grid,
        &OdeOptions::with_tolerances(1e-12, 1e-14),
    )?;
    sol.into_iter()
        .map(|y| {
            Ok((
                ComplexMatrix::from_vec(d, d, y[..nn].to_vec())?,
                ComplexMatrix::from_vec(d, d, y[nn..].to_vec())?,
            ))
        })
        .collect()
}

/// Bipartite generator whose S_1 populations flip at rate 1/t_c.
///
/// H = H_S ⊗ σ_1z and unbiased ancillas exchanging with S_1 at γ = 2/t_c.
/// Tracing S_1 reproduces [`rtn_propagate`].
pub fn rtn_liouvillian(h_s: &ComplexMatrix, t_c: f64) -> Result<Liouvillian> {
    let d = h_s.require_square()?;
    if !(t_c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "correlation time {t_c} must be positive"
        )));
    }
    let h = kron(h_s, &pauli_z());
    let w = &kron(&sigma_minus(), &sigma_plus()) + &kron(&sigma_plus(), &sigma_minus());
    let spec = AncillaSpec::new(DensityMatrix::maximally_mixed(2)?, w, (2.0 / t_c).sqrt())?;
    let model = CompositeModel::new(d, vec![2], h, vec![spec], 1.0)?;
    liouvillian(&model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::integrate_me;
    use crate::tensor::{partial_trace, ZERO};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym(x: f64) -> &'static str {
        if x == 0.0 {
            "0"
        } else {
            "*"
        }
    }

    fn printed_table(cg: f64, c_big: f64, sg: f64, s_big: f64) -> [[f64; 16]; 16] {
        let (cg2, sg2) = (cg * cg, sg * sg);
        let mut f = [[0.0; 16]; 16];
        let set = |f: &mut [[f64; 16]; 16], r: usize, c: usize, v: f64| f[r][c] = v;
        set(&mut f, 0, 0, 1.0);
        set(&mut f, 1, 1, cg);
        set(&mut f, 2, 2, c_big * cg);
        set(&mut f, 2, 15, -cg * s_big);
        set(&mut f, 3, 0, -sg2);
        set(&mut f, 3, 3, c_big * cg2);
        set(&mut f, 3, 14, cg2 * s_big);
        set(&mut f, 4, 4, c_big);
        set(&mut f, 4, 9, -s_big);
        set(&mut f, 5, 5, c_big * cg);
        set(&mut f, 5, 8, -cg * s_big);
        set(&mut f, 6, 6, cg);
        set(&mut f, 7, 4, -c_big * sg2);
        set(&mut f, 7, 7, cg2);
        set(&mut f, 7, 9, s_big * sg2);
        set(&mut f, 8, 5, s_big);
        set(&mut f, 8, 8, c_big);
        set(&mut f, 9, 4, cg * s_big);
        set(&mut f, 9, 9, c_big * cg);
        set(&mut f, 10, 10, cg);
        set(&mut f, 11, 5, -s_big * sg2);
        set(&mut f, 11, 8, -c_big * sg2);
        set(&mut f, 11, 11, cg2);
        set(&mut f, 12, 12, 1.0);
        set(&mut f, 13, 13, cg);
        set(&mut f, 14, 3, -cg * s_big);
        set(&mut f, 14, 14, c_big * cg);
        set(&mut f, 15, 2, cg2 * s_big);
        set(&mut f, 15, 12, -sg2);
        set(&mut f, 15, 15, c_big * cg2);
        f
    }

    #[test]
    fn ground_state_ancillas_reproduce_printed_table() {
        let p = DephasingParams::new(0.9, 1.7, 0.23, 1.0).unwrap();
        let (cg, c_big, sg, s_big) = p.trig();
        let printed = PauliTransferMatrix::from_entries(printed_table(cg, c_big, sg, s_big));
        assert!(pauli_transfer_matrix(&p).max_abs_diff(&printed) < 1e-15);
        let engine = pauli_transfer_matrix_from_engine(&p).unwrap();
        assert!(engine.max_abs_diff(&printed) < 1e-12, "{engine:?}");
    }

    #[test]
    fn closed_form_matches_engine_for_any_bias() {
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        for _ in 0..10 {
            let p = DephasingParams::new(
                rng.random_range(0.0..3.0),
                rng.random_range(0.0..3.0),
                rng.random_range(0.01..0.8),
                rng.random_range(-1.0..1.0),
            )
            .unwrap();
            let engine = pauli_transfer_matrix_from_engine(&p).unwrap();
            let closed = pauli_transfer_matrix(&p);
            assert!(engine.max_abs_diff(&closed) < 1e-12, "{p:?}");
            // sparsity pattern is fixed
            for r in 0..16 {
                for c in 0..16 {
                    if closed.entry(r, c) == 0.0 {
                        assert!(
                            engine.entry(r, c).abs() < 1e-12,
                            "({r},{c}) {}",
                            sym(engine.entry(r, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_matrices() {
        let p = DephasingParams::new(0.0, 0.0, 0.4, 0.0).unwrap();
        assert!(pauli_transfer_matrix(&p).max_abs_diff(&PauliTransferMatrix::identity()) < 1e-15);
        let q = DephasingParams::new(1.3, 0.6, 0.4, 0.5).unwrap();
        let f = pauli_transfer_matrix(&q);
        assert_eq!(f.entry(0, 0), 1.0);
        assert!((1..16).all(|c| f.entry(0, c) == 0.0));
    }

    #[test]
    fn transfer_matrix_acts_like_collide() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let p = DephasingParams::new(0.8, 1.2, 0.3, 0.25).unwrap();
        let engine = CollisionEngine::new(composite_model(&p).unwrap()).unwrap();
        let f = pauli_transfer_matrix(&p);
        for _ in 0..5 {
            let a = crate::tensor::random::random_density(&mut rng, 2);
            let b = crate::tensor::random::random_density(&mut rng, 2);
            let rho = DensityMatrix::new(kron(&a, &b)).unwrap();
            let out = engine.collide(&rho).unwrap();
            let r = f.apply(&bloch_vector(rho.matrix()));
            let expect = bloch_vector(out.matrix());
            assert!(r.iter().zip(&expect).all(|(x, y)| (x - y).abs() < 1e-12));
            let back = from_bloch_vector(&r);
            assert!(crate::tensor::diagnose(&back).unwrap().min_eigenvalue > -1e-12);
        }
    }

    #[test]
    fn factor_special_cases() {
        let no_coupling = DephasingParams::new(0.0, 1.1, 0.2, 0.0).unwrap();
        for n in 0..20 {
            assert!((dephasing_factor_discrete(&no_coupling, n) - 1.0).abs() < 1e-14);
        }
        let no_loss = DephasingParams::new(0.7, 0.0, 0.2, 0.0).unwrap();
        for n in 0..50u64 {
            let expect = (2.0 * 0.7 * 0.2 * n as f64).cos();
            assert!(
                (dephasing_factor_discrete(&no_loss, n) - expect).abs() < 1e-12,
                "n = {n}"
            );
        }
        let p = DephasingParams::new(0.7, 1.9, 0.2, 0.0).unwrap();
        assert!((dephasing_factor_discrete(&p, 1) - (2.0 * 0.7 * 0.2f64).cos()).abs() < 1e-14);
        assert!((dephasing_factor_block_power(&p, 1) - (2.0 * 0.7 * 0.2f64).cos()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_block_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for _ in 0..200 {
            let tau = rng.random_range(0.001..0.5);
            let p = DephasingParams::new(
                rng.random_range(0.0..0.5) / tau,
                rng.random_range(0.0..0.5) / tau,
                tau,
                0.0,
            )
            .unwrap();
            for n in [1u64, 2, 7, 50, 100] {
                let a = dephasing_factor_discrete(&p, n);
                let b = dephasing_factor_block_power(&p, n);
                assert!((a - b).abs() < 1e-12, "{p:?} n={n}: {a} vs {b}");
                assert!(a.abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn confluent_discriminant() {
        // choose c_g, then G so that κ_d = 0: c_G²(1−c_g)² = 4 c_g s_G²
        let tau: f64 = 0.1;
        let g = 1.0;
        let cg = (2.0 * g * tau).cos();
        // tan²(2Gτ) = (1−c_g)²/(4c_g)
        let t2 = (1.0 - cg).powi(2) / (4.0 * cg);
        let big_g = t2.sqrt().atan() / (2.0 * tau);
        let p = DephasingParams::new(big_g, g, tau, 0.0).unwrap();
        assert!(p.kappa_d().norm() < 1e-7);
        for n in [1u64, 5, 40, 100] {
            let a = dephasing_factor_discrete(&p, n);
            let b = dephasing_factor_block_power(&p, n);
            assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
        }
        // exactly nilpotent block
        let q = DephasingParams::new(
            std::f64::consts::PI / (4.0 * 0.3),
            std::f64::consts::PI / (4.0 * 0.3),
            0.3,
            0.0,
        )
        .unwrap();
        for n in 1..5u64 {
            assert!((dephasing_factor_discrete(&q, n) - dephasing_factor_block_power(&q, n)).abs() < 1e-12);
        }
    }

    #[test]
    fn continuous_factor_limits() {
        assert_eq!(dephasing_factor_continuous(3.0, 1.0, 0.0), 1.0);
        for t in [0.0, 0.5, 3.0, 40.0] {
            assert!((dephasing_factor_continuous(2.0, 0.0, t) - 1.0).abs() < 1e-12);
        }
        // κ = 0 boundary
        let f = dephasing_factor_continuous(2.0, 1.0, 0.7);
        assert!((f - (-1.4f64).exp() * (1.0 + 1.4)).abs() < 1e-15);
        // complex evaluation agrees in both regimes
        for (gm, g) in [(3.0, 1.0), (1.0, 2.0), (0.5, 0.1)] {
            for t in [0.1, 1.0, 2.5] {
                let k = C64::new(gm * gm - 4.0 * g * g, 0.0).sqrt();
                let c = (-gm * t).exp() * ((k * t).cosh() + gm * (k * t).sinh() / k);
                assert!(c.im.abs() < 1e-12);
                assert!((c.re - dephasing_factor_continuous(gm, g, t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rate_is_log_derivative() {
        let (gm, g) = (3.0, 1.0);
        for t in [0.05, 0.3, 1.0, 2.0] {
            let h = 1e-5;
            let fd = -(dephasing_factor_continuous(gm, g, t + h).ln() - dephasing_factor_continuous(gm, g, t - h).ln())
                / (4.0 * h);
            assert!((fd - dephasing_rate_continuous(gm, g, t)).abs() < 1e-8);
        }
    }

    #[test]
    fn liouvillian_reproduces_continuous_factor() {
        let (gm, g) = (3.0, 1.0);
        let p = DephasingParams::for_rate(g, gm, 0.01, 0.0).unwrap();
        let l = liouvillian(&composite_model(&p).unwrap()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = crate::tensor::kron_vec(&[C64::new(s, 0.0), C64::new(s, 0.0)], &[ZERO, ONE]);
        let rho0 = DensityMatrix::pure(&psi).unwrap();
        let grid: Vec<f64> = (0..=30).map(|k| 0.1 * k as f64).collect();
        let traj = integrate_me(&l, &rho0, &grid).unwrap();
        for (t, r) in grid.iter().zip(&traj) {
            let red = partial_trace(r.matrix(), &[2, 2], &[0]).unwrap();
            let ratio = red[(0, 1)].re / 0.5;
            assert!((ratio - dephasing_factor_continuous(gm, g, *t)).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn rtn_trivial_and_trace() {
        let h = ComplexMatrix::zeros(2, 2);
        let rho = ComplexMatrix::from_real_rows(&[[0.25, 0.2], [0.2, 0.25]]);
        let grid: Vec<f64> = (0..=10).map(|k| 0.5 * k as f64).collect();
        let sol = rtn_propagate(&h, 2.0, &rho, &rho, &grid).unwrap();
        for (a, b) in &sol {
            assert!((&(a + b) - &rho.scale_real(2.0)).max_abs() < 1e-12);
        }
        let hz = pauli_z();
        let p = ComplexMatrix::from_real_rows(&[[0.3, 0.1], [0.1, 0.1]]);
        let m = ComplexMatrix::from_real_rows(&[[0.4, -0.2], [-0.2, 0.2]]);
        for (a, b) in rtn_propagate(&hz, 0.7, &p, &m, &grid).unwrap() {
            assert!(((a.trace() + b.trace()) - ONE).norm() < 1e-12);
        }
        assert!(rtn_propagate(&hz, 0.7, &p, &p, &grid).is_err());
    }

    #[test]
    fn rtn_single_fluctuator_law() {
        let (v, tc) = (1.0, 2.0);
        let h = pauli_z().scale_real(v);
        let rho = ComplexMatrix::from_real_rows(&[[0.25, 0.25], [0.25, 0.25]]);
        let grid: Vec<f64> = (0..=50).map(|k| 0.1 * k as f64).collect();
        let sol = rtn_propagate(&h, tc, &rho, &rho, &grid).unwrap();
        let mu = C64::new(1.0 / (tc * tc) - 4.0 * v * v, 0.0).sqrt();
        for (t, (a, b)) in grid.iter().zip(&sol) {
            let c = (a + b)[(0, 1)];
            let law = 0.5 * (-t / tc).exp() * ((mu * t).cosh() + (mu * t).sinh() / (mu * tc));
            assert!((c - law).norm() < 1e-10, "t = {t}");
        }
    }
}
