//! Scenario execution.

use rayon::prelude::*;

use ccm_core::dephasing::{
    dephasing_factor_continuous, dephasing_factor_discrete, dephasing_rate_continuous, rtn_liouvillian, rtn_propagate,
    DephasingParams,
};
use ccm_core::engine::{AncillaSpec, CollisionEngine, CompositeModel};
use ccm_core::lindblad::{integrate_me, liouvillian, validate_state};
use ccm_core::lossy_cavity::{
    amplitude_trajectory, analytic_excited_amplitude, population_comparison, LossyCavityParams,
};
use ccm_core::multi_lorentzian::{
    amplitude_ode3, amplitude_trajectory3, equivalent_sd, CenterConvention, SdCase, TriDiscreteParams, TriParams,
};
use ccm_core::ode::uniform_grid;
use ccm_core::spectral::{
    map_lorentzian_to_cm, map_lorentzian_to_cm_kernel_matched, sd_from_dephasing_rate, solve_volterra, SpectralDensity,
    VolterraMethod,
};
use ccm_core::tensor::kron;
use ccm_core::tensor::operators::{pauli_x, pauli_z, sigma_minus, sigma_plus};
use ccm_core::{ComplexMatrix, DensityMatrix, C64};

use crate::config::{
    BridgePreset, CaseName, CouplingKind, DephasingConfig, GenericCmConfig, InitialState, LossyCavityConfig,
    MultiLorentzianConfig, RtnConfig, Scenario, ScenarioConfig, SdBridgeConfig,
};
use crate::error::{config_err, CliError, Result};
use crate::report::{Report, Table};

/// Tolerance of the state-validity gate applied to every emitted state.
pub const STATE_TOL: f64 = 1e-9;

/// Rejects a reduced state that is not a density matrix.
fn gate(rho: &ComplexMatrix, what: &str) -> Result<()> {
    let check = validate_state(rho, STATE_TOL)?;
    if !check.valid {
        return Err(CliError::Model(ccm_core::Error::InvalidState(format!(
            "{what}: trace deviation {:e}, min eigenvalue {:e}",
            check.diagnostics.trace_deviation, check.diagnostics.min_eigenvalue
        ))));
    }
    Ok(())
}

/// Qubit state with the given excited population and coherence.
fn qubit(pop: f64, coherence: C64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        [C64::new(pop, 0.0), coherence],
        [coherence.conj(), C64::new(1.0 - pop, 0.0)],
    ])
}

fn steps_for(cfg: &ScenarioConfig, tau: f64, default_steps: usize) -> Result<usize> {
    match cfg.t_max {
        Some(_) => Ok((cfg.t_max_or(1.0)? / tau).round().max(1.0) as usize),
        None => cfg.steps_or(default_steps),
    }
}

fn validity_meta(table: Table, small_g: f64, big_g: f64, tau: f64) -> Table {
    table
        .meta("g", small_g)
        .meta("g_tau", small_g * tau)
        .meta("g_tau_small", small_g * tau < 0.1)
        .meta("big_g_tau_small", big_g * tau < 0.1)
}

fn lossy_table(cfg: &ScenarioConfig, p: &LossyCavityConfig, tau: f64) -> Result<Table> {
    let gamma = p.gamma.unwrap_or(p.big_g);
    let lp = LossyCavityParams::for_rate(p.delta, p.big_g, gamma, tau)?;
    let n = steps_for(cfg, tau, 200)?;
    let mut table = Table::new(
        format!("tau={tau}"),
        &["step", "t", "eps_disc_sq", "eps_cont_sq", "deviation"],
    )
    .meta("tau", tau)
    .meta("gamma", lp.gamma());
    table = validity_meta(table, lp.small_g, lp.big_g, tau);
    for s in population_comparison(&lp, n)? {
        gate(&qubit(s.discrete, C64::new(0.0, 0.0)), "discrete qubit state")?;
        table.push(vec![s.step as f64, s.t, s.discrete, s.continuous, s.deviation()]);
    }
    Ok(table)
}

fn dephasing_table(cfg: &ScenarioConfig, p: &DephasingConfig, tau: f64) -> Result<Table> {
    let dp = DephasingParams::for_rate(p.big_g, p.gamma, tau, p.xi_bias)?;
    let n = match (cfg.t_max, cfg.steps) {
        (None, None) => (3.0 / tau).round().max(1.0) as usize,
        _ => steps_for(cfg, tau, 300)?,
    };
    let mut table = Table::new(format!("tau={tau}"), &["step", "t", "f_n", "f_t", "deviation"])
        .meta("tau", tau)
        .meta("gamma", dp.gamma())
        .meta("kappa_c_real", p.gamma > 2.0 * p.big_g);
    table = validity_meta(table, dp.small_g, dp.big_g, tau);
    for k in 0..=n {
        let t = k as f64 * tau;
        let fd = dephasing_factor_discrete(&dp, k as u64);
        let fc = dephasing_factor_continuous(p.gamma, p.big_g, t);
        gate(&qubit(0.5, C64::new(0.5 * fd, 0.0)), "dephased qubit state")?;
        table.push(vec![k as f64, t, fd, fc, (fd - fc).abs()]);
    }
    Ok(table)
}

fn tri_params(p: &MultiLorentzianConfig) -> TriParams {
    TriParams {
        delta1: p.delta1,
        delta2: p.delta2,
        big_g1: p.big_g1,
        big_g2: p.big_g2,
        c: p.c,
        gamma1: p.gamma1,
        gamma2: p.gamma2,
    }
}

fn sd_case(c: CaseName) -> SdCase {
    match c {
        CaseName::A => SdCase::A,
        CaseName::B => SdCase::B,
    }
}

fn multi_table(cfg: &ScenarioConfig, p: &MultiLorentzianConfig, tau: f64) -> Result<Table> {
    let tp = tri_params(p);
    let dp = TriDiscreteParams::from_continuous(&tp, tau)?;
    let n = match (cfg.t_max, cfg.steps) {
        (None, None) => (5.0 / tau).round().max(1.0) as usize,
        _ => steps_for(cfg, tau, 500)?,
    };
    let grid = uniform_grid(tau, n);
    let disc = amplitude_trajectory3(&dp, n, [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])?;
    let cont = amplitude_ode3(&tp, &grid)?;
    let sd = match p.case {
        Some(c) => {
            let j = equivalent_sd(&tp, sd_case(c), p.omega0, CenterConvention::DetuningShift)?;
            Some(solve_volterra(&j, p.omega0, &grid, VolterraMethod::PseudoMode)?)
        }
        None => None,
    };
    let mut cols = vec!["step", "t", "eps_disc_sq", "eps_cont_sq", "deviation"];
    if sd.is_some() {
        cols.push("eps_sd_sq");
    }
    let mut table = Table::new(format!("tau={tau}"), &cols)
        .meta("tau", tau)
        .meta("gamma1", tp.gamma1)
        .meta("gamma2", tp.gamma2)
        .meta("g1_tau_small", dp.small_g1 * tau < 0.1)
        .meta("g2_tau_small", dp.small_g2 * tau < 0.1);
    for k in 0..=n {
        let (a, b) = (disc[k].eps.norm_sqr(), cont[k].eps.norm_sqr());
        gate(&qubit(a, C64::new(0.0, 0.0)), "discrete qubit state")?;
        let mut row = vec![k as f64, grid[k], a, b, (a - b).abs()];
        if let Some(v) = &sd {
            row.push(v[k].norm_sqr());
        }
        table.push(row);
    }
    Ok(table)
}

fn rtn_report(cfg: &ScenarioConfig) -> Result<Report> {
    let p: RtnConfig = cfg.params()?;
    let t_max = cfg.t_max_or(5.0)?;
    let steps = cfg.steps_or(100)?;
    let grid = uniform_grid(t_max / steps as f64, steps);
    let h = pauli_z().scale_real(p.v);
    let plus = ComplexMatrix::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]);
    let half = plus.scale_real(0.5);
    let branches = rtn_propagate(&h, p.t_c, &half, &half, &grid)?;
    let l = rtn_liouvillian(&h, p.t_c)?;
    let rho0 = DensityMatrix::new(kron(&plus, &ComplexMatrix::identity(2).scale_real(0.5)))?;
    let me = integrate_me(&l, &rho0, &grid)?;
    let mut table = Table::new(
        "rtn",
        &[
            "step",
            "t",
            "coherence_re",
            "coherence_im",
            "me_coherence_re",
            "me_coherence_im",
            "deviation",
        ],
    )
    .meta("v", p.v)
    .meta("t_c", p.t_c)
    .meta("gamma", 2.0 / p.t_c);
    for (k, ((a, b), r)) in branches.iter().zip(&me).enumerate() {
        let rho_s = a + b;
        let red = ccm_core::tensor::partial_trace(r.matrix(), &[2, 2], &[0])?;
        gate(&rho_s, "telegraph-noise state")?;
        gate(r.matrix(), "bipartite state")?;
        let (c1, c2) = (rho_s[(0, 1)], red[(0, 1)]);
        table.push(vec![k as f64, grid[k], c1.re, c1.im, c2.re, c2.im, (c1 - c2).norm()]);
    }
    let mut report = Report::new(Scenario::Rtn.name());
    report.tables.push(table);
    Ok(report)
}

/// Qubit S with H = (ω/2)σ_z colliding with one qubit ancilla per step.
pub fn generic_model(p: &GenericCmConfig, tau: f64) -> Result<CompositeModel> {
    let h = pauli_z().scale_real(0.5 * p.omega);
    let w = match p.coupling {
        CouplingKind::Exchange => &kron(&sigma_minus(), &sigma_plus()) + &kron(&sigma_plus(), &sigma_minus()),
        CouplingKind::Dephasing => kron(&pauli_z(), &pauli_x()),
    };
    let eta = DensityMatrix::thermal_qubit(p.xi)?;
    let spec = AncillaSpec::new(eta, w, p.g)?;
    Ok(CompositeModel::new(2, vec![], h, vec![spec], tau)?)
}

fn generic_initial(p: &GenericCmConfig) -> Result<DensityMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match p.initial {
        InitialState::Excited => DensityMatrix::basis_state(2, 0)?,
        InitialState::Plus => DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)])?,
    })
}

fn generic_table(cfg: &ScenarioConfig, p: &GenericCmConfig, tau: f64) -> Result<Table> {
    let model = generic_model(p, tau)?;
    let n = steps_for(cfg, tau, 100)?;
    let rho0 = generic_initial(p)?;
    let cm = CollisionEngine::new(model.clone())?.evolve(&rho0, n)?;
    let grid = uniform_grid(tau, n);
    let me = integrate_me(&liouvillian(&model)?, &rho0, &grid)?;
    let mut table = Table::new(
        format!("tau={tau}"),
        &[
            "step",
            "t",
            "excited_cm",
            "excited_me",
            "coherence_cm",
            "coherence_me",
            "min_eigenvalue",
        ],
    )
    .meta("tau", tau)
    .meta("gamma", p.g * p.g * tau)
    .meta("g_tau_small", p.g * tau < 0.1);
    for (k, (a, b)) in cm.iter().zip(&me).enumerate() {
        gate(a.matrix(), "collision state")?;
        gate(b.matrix(), "master-equation state")?;
        let min_eig = a.diagnostics().min_eigenvalue.min(b.diagnostics().min_eigenvalue);
        table.push(vec![
            k as f64,
            grid[k],
            a.population(0),
            b.population(0),
            a.matrix()[(0, 1)].norm(),
            b.matrix()[(0, 1)].norm(),
            min_eig,
        ]);
    }
    Ok(table)
}

/// Per-τ tables for the sweepable scenarios, computed in parallel, kept in input order.
fn per_tau<F>(cfg: &ScenarioConfig, default_taus: &[f64], f: F) -> Result<Vec<Table>>
where
    F: Fn(f64) -> Result<Table> + Sync,
{
    let taus = cfg.taus_or(default_taus)?;
    taus.par_iter().map(|&t| f(t)).collect()
}

/// Runs one scenario and returns its tables, filtered to the requested outputs.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Report> {
    let report = match cfg.scenario {
        Scenario::LossyCavity => {
            let p: LossyCavityConfig = cfg.params()?;
            let gamma = p.gamma.unwrap_or(p.big_g);
            let mut r = Report::new(cfg.scenario.name())
                .meta("delta", p.delta)
                .meta("big_g", p.big_g)
                .meta("gamma_target", gamma)
                .meta("time_unit", "1/G");
            r.tables = per_tau(cfg, &[0.1], |tau| lossy_table(cfg, &p, tau))?;
            r
        }
        Scenario::Dephasing => {
            let p: DephasingConfig = cfg.params()?;
            let mut r = Report::new(cfg.scenario.name())
                .meta("big_g", p.big_g)
                .meta("gamma", p.gamma)
                .meta("xi_bias", p.xi_bias)
                .meta("time_unit", "1/G");
            r.tables = per_tau(cfg, &[0.01], |tau| dephasing_table(cfg, &p, tau))?;
            r
        }
        Scenario::MultiLorentzian => {
            let p: MultiLorentzianConfig = cfg.params()?;
            let mut r = Report::new(cfg.scenario.name()).meta("time_unit", "1/G1");
            r.tables = per_tau(cfg, &[0.01], |tau| multi_table(cfg, &p, tau))?;
            r
        }
        Scenario::GenericCm => {
            let p: GenericCmConfig = cfg.params()?;
            let mut r = Report::new(cfg.scenario.name())
                .meta("omega", p.omega)
                .meta("g", p.g)
                .meta("xi", p.xi)
                .meta("time_unit", "1/omega");
            r.tables = per_tau(cfg, &[0.05], |tau| generic_table(cfg, &p, tau))?;
            r
        }
        Scenario::Rtn => rtn_report(cfg)?,
        Scenario::SdBridge => sd_equivalence_report(cfg)?,
    };
    report.select(&cfg.outputs)
}

/// Deviation measure used by the sweep for each scenario.
fn table_deviation(cfg: &ScenarioConfig, tau: f64) -> Result<f64> {
    let table = match cfg.scenario {
        Scenario::LossyCavity => lossy_table(cfg, &cfg.params()?, tau)?,
        Scenario::Dephasing => dephasing_table(cfg, &cfg.params()?, tau)?,
        Scenario::MultiLorentzian => multi_table(cfg, &cfg.params()?, tau)?,
        s => return Err(config_err(format!("scenario {s} has no collision time to sweep"))),
    };
    Ok(table.max_of("deviation").unwrap_or(0.0))
}

/// Max discrete-vs-continuous deviation for every τ, with the empirical order
/// log(dev_i/dev_{i-1}) / log(τ_i/τ_{i-1}).
pub fn convergence_sweep(cfg: &ScenarioConfig) -> Result<Report> {
    if !cfg.scenario.sweepable() {
        return Err(config_err(format!(
            "scenario {} has no collision time to sweep",
            cfg.scenario
        )));
    }
    let taus = cfg.taus_or(&[])?;
    if taus.len() < 2 {
        return Err(config_err("a convergence sweep needs at least two tau values"));
    }
    let devs: Vec<f64> = taus
        .par_iter()
        .map(|&t| table_deviation(cfg, t))
        .collect::<Result<_>>()?;
    let mut table = Table::new("sweep", &["tau", "max_deviation", "order"]);
    if let Some(t) = cfg.t_max {
        table = table.meta("t_max", t);
    } else {
        table = table.meta("steps", cfg.steps.map_or("default".to_string(), |s| s.to_string()));
    }
    for (i, (&tau, &dev)) in taus.iter().zip(&devs).enumerate() {
        let order = if i == 0 {
            f64::NAN
        } else {
            (dev / devs[i - 1]).ln() / (tau / taus[i - 1]).ln()
        };
        table.push(vec![tau, dev, order]);
    }
    let mut r = Report::new(cfg.scenario.name()).meta("sweep", true);
    r.tables.push(table);
    Ok(r)
}

fn lorentzian_bridge(cfg: &ScenarioConfig, p: &SdBridgeConfig) -> Result<Report> {
    let (gamma0, kappa, delta, omega0) = (1.0, 0.5, 0.0, 0.0);
    let tau = cfg.taus_or(&[1e-3])?[0];
    let t_max = cfg.t_max_or(10.0)?;
    let n = (t_max / tau).round() as usize;
    let lp = if p.kernel_matched {
        map_lorentzian_to_cm_kernel_matched(gamma0, kappa, delta, tau)?
    } else {
        map_lorentzian_to_cm(gamma0, kappa, delta, tau)?
    };
    let j = SpectralDensity::lorentzian(gamma0, kappa, omega0 + delta)?;
    let grid = uniform_grid(tau, n);
    let volterra = solve_volterra(&j, omega0, &grid, VolterraMethod::PseudoMode)?;
    let traj = amplitude_trajectory(&lp, n, C64::new(1.0, 0.0), C64::new(0.0, 0.0))?;
    let stride = (n / 1000).max(1);
    let mut table = Table::new(
        "lorentzian_decay",
        &[
            "step",
            "t",
            "cm_sq",
            "closed_form_sq",
            "volterra_sq",
            "dev_closed_volterra",
            "dev_cm_volterra",
        ],
    );
    let (mut d1, mut d2) = (0.0f64, 0.0f64);
    for k in 0..=n {
        let closed = analytic_excited_amplitude(delta, lp.big_g, lp.gamma(), grid[k]);
        let e1 = (closed - volterra[k]).norm();
        let e2 = (traj[k].eps.norm_sqr() - volterra[k].norm_sqr()).abs();
        d1 = d1.max(e1);
        d2 = d2.max(e2);
        if k % stride == 0 {
            table.push(vec![
                k as f64,
                grid[k],
                traj[k].eps.norm_sqr(),
                closed.norm_sqr(),
                volterra[k].norm_sqr(),
                e1,
                e2,
            ]);
        }
    }
    let pass = d1 <= 1e-6 && d2 <= 1e-2;
    let mut r = Report::new(Scenario::SdBridge.name())
        .meta("preset", "lorentzian_decay")
        .meta(
            "coupling_map",
            if p.kernel_matched {
                "G^2 = gamma0 kappa / 2"
            } else {
                "G^2 = gamma0 kappa / 4"
            },
        )
        .meta("big_g", lp.big_g)
        .meta("g", lp.small_g)
        .meta("max_dev_closed_volterra", d1)
        .meta("max_dev_cm_volterra", d2)
        .meta("pass", pass);
    r.tables.push(table);
    Ok(r)
}

fn dephasing_bridge(cfg: &ScenarioConfig) -> Result<Report> {
    let (gamma, big_g) = (3.0, 1.0);
    let tau = cfg.taus_or(&[1e-3])?[0];
    let dp = DephasingParams::for_rate(big_g, gamma, tau, 0.0)?;
    let n = (cfg.t_max_or(3.0)? / tau).round() as usize;
    let stride = (n / 300).max(1);
    let mut ft = Table::new("dephasing_factor", &["step", "t", "f_n", "f_t", "deviation"]);
    let mut dev_f = 0.0f64;
    for k in 0..=n {
        let t = k as f64 * tau;
        let (a, b) = (
            dephasing_factor_discrete(&dp, k as u64),
            dephasing_factor_continuous(gamma, big_g, t),
        );
        dev_f = dev_f.max((a - b).abs());
        if k % stride == 0 {
            ft.push(vec![k as f64, t, a, b, (a - b).abs()]);
        }
    }
    let series = SpectralDensity::dephasing_series(gamma, big_g, 1e-14)?;
    let kc = (gamma * gamma - 4.0 * big_g * big_g).sqrt();
    let t_cut = 20.0 / (2.0 * kc);
    let omegas: Vec<f64> = (0..=100).map(|k| 0.1 * (300f64).powf(k as f64 / 100.0)).collect();
    let transformed: Vec<f64> = omegas
        .par_iter()
        .map(|&w| sd_from_dephasing_rate(|t| dephasing_rate_continuous(gamma, big_g, t), w, t_cut))
        .collect::<std::result::Result<_, _>>()?;
    let mut jt = Table::new(
        "spectral_density",
        &["omega", "j_series", "j_transform", "rel_deviation"],
    );
    let mut dev_j = 0.0f64;
    for (w, jtr) in omegas.iter().zip(&transformed) {
        let js = series.eval(*w);
        let rel = (jtr - js).abs() / js;
        dev_j = dev_j.max(rel);
        jt.push(vec![*w, js, *jtr, rel]);
    }
    let pass = dev_f <= 5e-3 && dev_j <= 1e-3;
    let mut r = Report::new(Scenario::SdBridge.name())
        .meta("preset", "dephasing_series")
        .meta("max_dev_factor", dev_f)
        .meta("max_rel_dev_density", dev_j)
        .meta("pass", pass);
    r.tables.push(ft);
    r.tables.push(jt);
    Ok(r)
}

/// Case presets used by the bridge report.
pub fn multi_preset(case: CaseName) -> TriParams {
    match case {
        CaseName::A => TriParams {
            delta1: 0.5,
            delta2: -1.0,
            big_g1: 1.0,
            big_g2: 0.7,
            c: 0.0,
            gamma1: 2.0,
            gamma2: 1.0,
        },
        CaseName::B => TriParams {
            delta1: 0.0,
            delta2: 0.0,
            big_g1: 1.0,
            big_g2: 0.0,
            c: 0.5,
            gamma1: 4.0,
            gamma2: 1.0,
        },
    }
}

fn multi_bridge(cfg: &ScenarioConfig, case: CaseName) -> Result<Report> {
    let tp = multi_preset(case);
    let tau = cfg.taus_or(&[1e-3])?[0];
    let n = (cfg.t_max_or(8.0)? / tau).round() as usize;
    let grid = uniform_grid(tau, n);
    let dp = TriDiscreteParams::from_continuous(&tp, tau)?;
    let disc = amplitude_trajectory3(&dp, n, [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])?;
    let ode = amplitude_ode3(&tp, &grid)?;
    let j = equivalent_sd(&tp, sd_case(case), 0.0, CenterConvention::DetuningShift)?;
    let vol = solve_volterra(&j, 0.0, &grid, VolterraMethod::PseudoMode)?;
    let stride = (n / 1000).max(1);
    let mut table = Table::new(
        "amplitudes",
        &[
            "step",
            "t",
            "eps_disc_sq",
            "eps_ode_sq",
            "eps_volterra_sq",
            "dev_ode_volterra",
            "dev_disc_ode",
        ],
    );
    let (mut d1, mut d2) = (0.0f64, 0.0f64);
    for k in 0..=n {
        let e1 = (ode[k].eps - vol[k]).norm();
        let e2 = (disc[k].eps.norm_sqr() - ode[k].eps.norm_sqr()).abs();
        d1 = d1.max(e1);
        d2 = d2.max(e2);
        if k % stride == 0 {
            table.push(vec![
                k as f64,
                grid[k],
                disc[k].eps.norm_sqr(),
                ode[k].eps.norm_sqr(),
                vol[k].norm_sqr(),
                e1,
                e2,
            ]);
        }
    }
    let pass = d1 <= 1e-4 && d2 <= 1e-2;
    let preset = match case {
        CaseName::A => "multi_lorentzian_a",
        CaseName::B => "multi_lorentzian_b",
    };
    let mut r = Report::new(Scenario::SdBridge.name())
        .meta("preset", preset)
        .meta("max_dev_ode_volterra", d1)
        .meta("max_dev_disc_ode", d2)
        .meta("pass", pass);
    r.tables.push(table);
    Ok(r)
}

/// Side-by-side collision-model, closed-form and reservoir-oracle curves.
pub fn sd_equivalence_report(cfg: &ScenarioConfig) -> Result<Report> {
    if cfg.scenario != Scenario::SdBridge {
        return Err(config_err(format!(
            "{} is not an sd_bridge configuration",
            cfg.scenario
        )));
    }
    let p: SdBridgeConfig = cfg.params()?;
    match p.preset {
        BridgePreset::LorentzianDecay => lorentzian_bridge(cfg, &p),
        BridgePreset::DephasingSeries => dephasing_bridge(cfg),
        BridgePreset::MultiLorentzianA => multi_bridge(cfg, CaseName::A),
        BridgePreset::MultiLorentzianB => multi_bridge(cfg, CaseName::B),
    }
}

/// Whether a report's `pass` flag is set; reports without one count as passing.
pub fn report_passes(r: &Report) -> bool {
    r.metadata.iter().all(|(k, v)| k != "pass" || v == "true")
}

/// Worst (trace deviation, min eigenvalue) over a generic collision run.
pub fn generic_state_extremes(p: &GenericCmConfig, tau: f64, n: usize) -> Result<(f64, f64)> {
    let model = generic_model(p, tau)?;
    let states = CollisionEngine::new(model)?.evolve(&generic_initial(p)?, n)?;
    let mut worst = (0.0f64, f64::INFINITY);
    for s in &states {
        let d = s.diagnostics();
        worst.0 = worst.0.max(d.trace_deviation);
        worst.1 = worst.1.min(d.min_eigenvalue);
    }
    Ok(worst)
}
