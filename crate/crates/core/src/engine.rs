// Copyright 2026 ccm Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact discrete dynamics of composite collision models.
//!
//! The colliding system is S ⊗ S_1 ⊗ … ⊗ S_N. Each step applies the
//! intra-system unitary exp(-i H τ), then one collision per auxiliary with a
//! fresh ancilla in state ξ_i, and finally traces the ancillas out.

use crate::error::{Error, Result};
use crate::tensor::{embed, expm_unitary, kron, partial_trace, ComplexMatrix, DensityMatrix};

/// Largest admissible first moment Tr_R{w ξ}.
pub const MOMENT_TOL: f64 = 1e-10;
/// Largest admissible population in the top level of a truncated mode.
pub const LEAKAGE_TOL: f64 = 1e-8;

/// A reservoir unit colliding with one subsystem.
#[derive(Debug, Clone)]
pub struct AncillaSpec {
    eta: DensityMatrix,
    coupling_op: ComplexMatrix,
    coupling_rate: f64,
}

impl AncillaSpec {
    /// `coupling_op` acts on (target subsystem) ⊗ (ancilla), ancilla last.
    pub fn new(eta: DensityMatrix, coupling_op: ComplexMatrix, coupling_rate: f64) -> Result<Self> {
        if !coupling_rate.is_finite() || coupling_rate < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coupling rate {coupling_rate} must be >= 0"
            )));
        }
        let n = coupling_op.require_square()?;
        if n % eta.dim() != 0 {
            return Err(Error::Dimension(format!(
                "coupling operator dimension {n} is not a multiple of ancilla dimension {}",
                eta.dim()
            )));
        }
        let defect = coupling_op.hermiticity_defect();
        if defect > 1e-12 * coupling_op.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self {
            eta,
            coupling_op,
            coupling_rate,
        })
    }

    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    pub fn eta(&self) -> &DensityMatrix {
        &self.eta
    }

    pub fn coupling_op(&self) -> &ComplexMatrix {
        &self.coupling_op
    }

    pub fn coupling_rate(&self) -> f64 {
        self.coupling_rate
    }

    /// Dimension of the subsystem the ancilla collides with.
    pub fn target_dim(&self) -> usize {
        self.coupling_op.rows() / self.eta.dim()
    }
}

/// Order of the two unitaries within one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CollisionOrder {
    /// exp(-i g w τ) · exp(-i H τ)
    #[default]
    SystemFirst,
    /// exp(-i H τ) · exp(-i g w τ)
    AncillaFirst,
}

/// max-entry norm of Tr_R{w (1 ⊗ ξ)}.
pub fn moment_residual(coupling_op: &ComplexMatrix, eta: &DensityMatrix) -> Result<f64> {
    let r = eta.dim();
    let n = coupling_op.require_square()?;
    if n % r != 0 {
        return Err(Error::Dimension("coupling operator and ancilla state disagree".into()));
    }
    let target = n / r;
    let weighted = coupling_op.matmul(&kron(&ComplexMatrix::identity(target), eta.matrix()));
    Ok(partial_trace(&weighted, &[target, r], &[0])?.max_abs())
}

/// Full description of a memoryless composite collision model.
#[derive(Debug, Clone)]
pub struct CompositeModel {
    dim_s: usize,
    aux_dims: Vec<usize>,
    hamiltonian: ComplexMatrix,
    ancillas: Vec<AncillaSpec>,
    tau: f64,
    truncated: Vec<usize>,
    order: CollisionOrder,
}

impl CompositeModel {
    /// Ancilla i collides with auxiliary i (factor i + 1). Without auxiliaries a
    /// single ancilla collides with S directly.
    pub fn new(
        dim_s: usize,
        aux_dims: Vec<usize>,
        hamiltonian: ComplexMatrix,
        ancillas: Vec<AncillaSpec>,
        tau: f64,
    ) -> Result<Self> {
        if dim_s == 0 || aux_dims.contains(&0) {
            return Err(Error::Dimension("subsystem dimensions must be positive".into()));
        }
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::InvalidParameter(format!("collision time {tau} must be >= 0")));
        }
        let sys_dim = dim_s * aux_dims.iter().product::<usize>();
        let n = hamiltonian.require_square()?;
        if n != sys_dim {
            return Err(Error::Dimension(format!(
                "Hamiltonian is {n}x{n}, composite system has dimension {sys_dim}"
            )));
        }
        let defect = hamiltonian.hermiticity_defect();
        if defect > 1e-12 * hamiltonian.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        let expected = aux_dims.len().max(1);
        if ancillas.len() != expected {
            return Err(Error::Dimension(format!(
                "{} ancillas given, model needs {expected}",
                ancillas.len()
            )));
        }
        let model = Self {
            dim_s,
            aux_dims,
            hamiltonian,
            ancillas,
            tau,
            truncated: Vec::new(),
            order: CollisionOrder::SystemFirst,
        };
        for (i, a) in model.ancillas.iter().enumerate() {
            let target = model.system_dims()[model.target_factor(i)];
            if a.target_dim() != target {
                return Err(Error::Dimension(format!(
                    "ancilla {i} coupling acts on dimension {}, target subsystem has {target}",
                    a.target_dim()
                )));
            }
        }
        for (ancilla, residual) in model.moment_condition_check().into_iter().enumerate() {
            if residual > MOMENT_TOL {
                return Err(Error::MomentCondition { ancilla, residual });
            }
        }
        Ok(model)
    }

    /// Marks system factors as truncated bosonic modes for leakage monitoring.
    pub fn with_truncated_modes(mut self, factors: Vec<usize>) -> Result<Self> {
        let nf = self.system_dims().len();
        if let Some(&bad) = factors.iter().find(|&&f| f >= nf) {
            return Err(Error::Dimension(format!("factor {bad} outside {nf} system factors")));
        }
        self.truncated = factors;
        Ok(self)
    }

    pub fn with_order(mut self, order: CollisionOrder) -> Self {
        self.order = order;
        self
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn aux_dims(&self) -> &[usize] {
        &self.aux_dims
    }

    /// [dim S, dim S_1, ..., dim S_N].
    pub fn system_dims(&self) -> Vec<usize> {
        let mut d = vec![self.dim_s];
        d.extend_from_slice(&self.aux_dims);
        d
    }

    pub fn system_dim(&self) -> usize {
        self.system_dims().iter().product()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn ancillas(&self) -> &[AncillaSpec] {
        &self.ancillas
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn truncated_modes(&self) -> &[usize] {
        &self.truncated
    }

    pub fn order(&self) -> CollisionOrder {
        self.order
    }

    /// System factor that ancilla `i` collides with.
    pub fn target_factor(&self, i: usize) -> usize {
        if self.aux_dims.is_empty() {
            0
        } else {
            i + 1
        }
    }

    /// Per-ancilla first-moment residuals.
    pub fn moment_condition_check(&self) -> Vec<f64> {
        self.ancillas
            .iter()
            .map(|a| moment_residual(&a.coupling_op, &a.eta).unwrap_or(f64::INFINITY))
            .collect()
    }

    /// Rates γ_i = g_i² τ.
    pub fn rates(&self) -> Vec<f64> {
        self.ancillas
            .iter()
            .map(|a| a.coupling_rate * a.coupling_rate * self.tau)
            .collect()
    }

    /// Factor dimensions of the joint system ⊗ ancillas space.
    pub fn joint_dims(&self) -> Vec<usize> {
        let mut d = self.system_dims();
        d.extend(self.ancillas.iter().map(AncillaSpec::dim));
        d
    }
}

/// Unitary of one full step on system ⊗ ancillas.
pub fn step_unitary(model: &CompositeModel) -> Result<ComplexMatrix> {
    let dims = model.joint_dims();
    let n_sys = model.system_dims().len();
    let anc_dim: usize = dims[n_sys..].iter().product();
    let u_s = kron(
        &expm_unitary(model.hamiltonian(), model.tau())?,
        &ComplexMatrix::identity(anc_dim),
    );
    let mut u_w = ComplexMatrix::identity(u_s.rows());
    for (i, a) in model.ancillas().iter().enumerate() {
        let local = expm_unitary(a.coupling_op(), a.coupling_rate() * model.tau())?;
        let full = embed(&local, &dims, &[model.target_factor(i), n_sys + i])?;
        u_w = full.matmul(&u_w);
    }
    Ok(match model.order() {
        CollisionOrder::SystemFirst => u_w.matmul(&u_s),
        CollisionOrder::AncillaFirst => u_s.matmul(&u_w),
    })
}

/// Precomputed stepper for a fixed model.
#[derive(Debug, Clone)]
pub struct CollisionEngine {
    model: CompositeModel,
    unitary: ComplexMatrix,
    ancilla_state: ComplexMatrix,
    joint_dims: Vec<usize>,
    keep: Vec<usize>,
}

impl CollisionEngine {
    pub fn new(model: CompositeModel) -> Result<Self> {
        let unitary = step_unitary(&model)?;
        let ancilla_state = model
            .ancillas()
            .iter()
            .fold(ComplexMatrix::identity(1), |acc, a| kron(&acc, a.eta().matrix()));
        let joint_dims = model.joint_dims();
        let keep = (0..model.system_dims().len()).collect();
        Ok(Self {
            model,
            unitary,
            ancilla_state,
            joint_dims,
            keep,
        })
    }

    pub fn model(&self) -> &CompositeModel {
        &self.model
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// The step map applied to an arbitrary operator on the system space.
    pub fn apply(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.model.system_dim();
        if op.rows() != d || op.cols() != d {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, system dimension is {d}",
                op.rows(),
                op.cols()
            )));
        }
        let joint = kron(op, &self.ancilla_state);
        let evolved = self.unitary.matmul(&joint).matmul_adjoint(&self.unitary);
        partial_trace(&evolved, &self.joint_dims, &self.keep)
    }

    /// One collision step.
    pub fn collide(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply(rho.matrix())?;
        DensityMatrix::new(out.hermitian_part())
    }

    /// Population of the top Fock level of each monitored mode.
    pub fn leakage(&self, rho: &DensityMatrix) -> Result<Vec<(usize, f64)>> {
        let dims = self.model.system_dims();
        self.model
            .truncated_modes()
            .iter()
            .map(|&f| {
                let red = partial_trace(rho.matrix(), &dims, &[f])?;
                Ok((f, red[(dims[f] - 1, dims[f] - 1)].re))
            })
            .collect()
    }

    /// Trajectory [rho0, collide(rho0), ..., collide^n(rho0)].
    pub fn evolve(&self, rho0: &DensityMatrix, n: usize) -> Result<Vec<DensityMatrix>> {
        if rho0.dim() != self.model.system_dim() {
            return Err(Error::Dimension(format!(
                "state dimension {} does not match system dimension {}",
                rho0.dim(),
                self.model.system_dim()
            )));
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(rho0.clone());
        for step in 1..=n {
            let next = self.collide(&out[step - 1])?;
            for (factor, population) in self.leakage(&next)? {
                if population > LEAKAGE_TOL {
                    return Err(Error::Leakage {
                        factor,
                        step,
                        population,
                    });
                }
            }
            out.push(next);
        }
        Ok(out)
    }
}

/// One step of `model` applied to `rho`.
pub fn collide(model: &CompositeModel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    CollisionEngine::new(model.clone())?.collide(rho)
}

/// `n` steps of `model` starting from `rho0`.
pub fn evolve(model: &CompositeModel, rho0: &DensityMatrix, n: usize) -> Result<Vec<DensityMatrix>> {
    CollisionEngine::new(model.clone())?.evolve(rho0, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::operators::{annihilation, creation, pauli_x, pauli_z, sigma_minus, sigma_plus};
    use crate::tensor::random::{random_density, random_hermitian};
    use crate::tensor::C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exchange() -> ComplexMatrix {
        &kron(&sigma_minus(), &sigma_plus()) + &kron(&sigma_plus(), &sigma_minus())
    }

    fn ground_qubit() -> DensityMatrix {
        DensityMatrix::basis_state(2, 1).unwrap()
    }

    #[test]
    fn moment_residual_examples() {
        let a = annihilation(3);
        let w = &kron(&ComplexMatrix::identity(2), &creation(3)) + &kron(&ComplexMatrix::identity(2), &a);
        let vac = DensityMatrix::basis_state(3, 0).unwrap();
        assert_eq!(moment_residual(&w, &vac).unwrap(), 0.0);

        let zz = kron(&pauli_z(), &pauli_z());
        let up = DensityMatrix::basis_state(2, 0).unwrap();
        assert!((moment_residual(&zz, &up).unwrap() - 1.0).abs() < 1e-15);
        let spec = AncillaSpec::new(up, zz, 1.0).unwrap();
        let err = CompositeModel::new(2, vec![], ComplexMatrix::zeros(2, 2), vec![spec], 0.1).unwrap_err();
        assert!(matches!(err, Error::MomentCondition { ancilla: 0, .. }));

        for xi in [-0.8, 0.0, 0.3, 1.0] {
            let eta = DensityMatrix::thermal_qubit(xi).unwrap();
            assert!(moment_residual(&exchange(), &eta).unwrap() < 1e-16);
        }
    }

    #[test]
    fn trivial_steps() {
        let spec = AncillaSpec::new(ground_qubit(), exchange(), 3.0).unwrap();
        let h = pauli_z().scale_real(0.7);
        let m0 = CompositeModel::new(2, vec![], h.clone(), vec![spec.clone()], 0.0).unwrap();
        assert!(step_unitary(&m0).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);

        let free = AncillaSpec::new(ground_qubit(), exchange(), 0.0).unwrap();
        let m1 = CompositeModel::new(2, vec![], h.clone(), vec![free.clone()], 0.4).unwrap();
        let expect = kron(&expm_unitary(&h, 0.4).unwrap(), &ComplexMatrix::identity(2));
        assert!(step_unitary(&m1).unwrap().max_abs_diff(&expect) < 1e-15);

        let still = CompositeModel::new(2, vec![], ComplexMatrix::zeros(2, 2), vec![free], 0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let rho = DensityMatrix::new(random_density(&mut rng, 2)).unwrap();
        let traj = evolve(&still, &rho, 5).unwrap();
        assert_eq!(traj.len(), 6);
        for r in &traj {
            assert!(r.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        }
        assert_eq!(evolve(&still, &rho, 0).unwrap().len(), 1);
    }

    #[test]
    fn single_qubit_exchange_population() {
        let (g, tau) = (1.3, 0.37);
        let spec = AncillaSpec::new(ground_qubit(), exchange(), g).unwrap();
        let model = CompositeModel::new(2, vec![], ComplexMatrix::zeros(2, 2), vec![spec], tau).unwrap();
        let excited = DensityMatrix::basis_state(2, 0).unwrap();
        let out = collide(&model, &excited).unwrap();
        assert!((out.population(0) - (g * tau).cos().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn collide_is_linear_and_trace_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let h = random_hermitian(&mut rng, 4);
        let eta = DensityMatrix::thermal_qubit(0.4).unwrap();
        let spec = AncillaSpec::new(eta, exchange(), 2.0).unwrap();
        let model = CompositeModel::new(2, vec![2], h, vec![spec], 0.2).unwrap();
        let engine = CollisionEngine::new(model).unwrap();
        let r1 = DensityMatrix::new(random_density(&mut rng, 4)).unwrap();
        let r2 = DensityMatrix::new(random_density(&mut rng, 4)).unwrap();
        let a = 0.3;
        let mix = DensityMatrix::new(&r1.matrix().scale_real(a) + &r2.matrix().scale_real(1.0 - a)).unwrap();
        let lhs = engine.collide(&mix).unwrap();
        let rhs = &engine.collide(&r1).unwrap().matrix().scale_real(a)
            + &engine.collide(&r2).unwrap().matrix().scale_real(1.0 - a);
        assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-12);
        let d = lhs.diagnostics();
        assert!(d.trace_deviation < 1e-12 && d.hermiticity_deviation == 0.0 && d.min_eigenvalue > -1e-10);
    }

    #[test]
    fn ordering_irrelevant_when_commuting() {
        // H acts on S only, the ancilla touches S_1 only
        let h = kron(&pauli_z(), &ComplexMatrix::identity(2)).scale_real(0.9);
        let spec = AncillaSpec::new(DensityMatrix::thermal_qubit(0.2).unwrap(), exchange(), 1.7).unwrap();
        let m = CompositeModel::new(2, vec![2], h, vec![spec], 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let rho = DensityMatrix::new(random_density(&mut rng, 4)).unwrap();
        let a = evolve(&m, &rho, 10).unwrap();
        let b = evolve(&m.clone().with_order(CollisionOrder::AncillaFirst), &rho, 10).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.matrix().max_abs_diff(y.matrix()) < 1e-12);
        }
    }

    #[test]
    fn leakage_monitor_trips() {
        // a driven cavity climbs the Fock ladder
        let levels = 3;
        let drive = (&annihilation(levels) + &creation(levels)).scale_real(2.0);
        let w = kron(&drive, &pauli_x());
        let eta = DensityMatrix::maximally_mixed(2).unwrap();
        let spec = AncillaSpec::new(eta, w, 3.0).unwrap();
        let h = kron(&pauli_z(), &ComplexMatrix::identity(levels));
        let model = CompositeModel::new(2, vec![levels], h, vec![spec], 0.5)
            .unwrap()
            .with_truncated_modes(vec![1])
            .unwrap();
        let rho0 = DensityMatrix::basis_state(2 * levels, levels).unwrap();
        assert!(matches!(
            evolve(&model, &rho0, 5),
            Err(Error::Leakage { factor: 1, .. })
        ));
    }

    #[test]
    fn shape_errors() {
        let spec = AncillaSpec::new(ground_qubit(), exchange(), 1.0).unwrap();
        assert!(CompositeModel::new(2, vec![3], ComplexMatrix::zeros(6, 6), vec![spec.clone()], 0.1).is_err());
        assert!(CompositeModel::new(2, vec![], ComplexMatrix::zeros(4, 4), vec![spec.clone()], 0.1).is_err());
        let model = CompositeModel::new(2, vec![], ComplexMatrix::zeros(2, 2), vec![spec], 0.1).unwrap();
        let wrong = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(collide(&model, &wrong).is_err());
        let nh = ComplexMatrix::from_rows(&[[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], [C64::new(0.0, 0.0); 2]]);
        assert!(AncillaSpec::new(ground_qubit(), kron(&nh, &pauli_x()), 1.0).is_err());
    }
}
