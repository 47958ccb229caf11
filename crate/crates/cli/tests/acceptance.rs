//! End-to-end acceptance criteria.
//!
//! Each criterion writes one PASS/FAIL line to stderr (unbuffered by the
//! test harness, so the lines show up without `--nocapture`). The Lorentzian
//! bridge with the printed mapping is expected to fail; see the README.

use std::io::Write;
use std::time::Instant;

use ccm_cli::check::{
    degenerate_basis_deviation, dephasing_continuum_deviation, dephasing_density_deviation, dephasing_routes_deviation,
    halving_ratios, lorentzian_bridge, lossy_deviation, lossy_engine_deviation, multi_case_deviation, rtn_deviation,
    state_validity_extremes, tri_engine_deviation,
};
use ccm_core::dephasing::DephasingParams;
use ccm_core::lossy_cavity::LossyCavityParams;
use ccm_core::multi_lorentzian::{case_b_rates, case_b_weights, SdCase, TriDiscreteParams, TriParams};
use ccm_core::tensor::expm;
use ccm_core::{ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: usize,
    name: &'static str,
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

fn report(o: &Outcome) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "{} criterion {:>2} {:<28} {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.id,
        o.name,
        o.detail
    );
    for n in &o.notes {
        let _ = writeln!(err, "     {n}");
    }
}

fn coarse_and_fine_steps() -> Outcome {
    let start = Instant::now();
    let devs: Vec<(f64, f64)> = [2.0, 1.0, 0.5, 0.1]
        .iter()
        .map(|&t| (t, lossy_deviation(t, 200).unwrap()))
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let fine = devs[3].1;
    let coarse = devs[0].1;
    Outcome {
        id: 1,
        name: "coarse_and_fine_steps",
        passed: fine <= 0.01 && coarse >= 0.05 && elapsed < 1.0,
        detail: format!("dev(tau=0.1)={fine:.3e} dev(tau=2)={coarse:.3e} runtime={elapsed:.3}s"),
        notes: Vec::new(),
    }
}

fn brute_force() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (delta, g, tau) in [(0.0, 1.5, 0.3), (0.7, 2.2, 0.25), (-0.4, 0.9, 0.6)] {
        let p = LossyCavityParams::new(delta, 1.0, g, tau).unwrap();
        for levels in [2, 3] {
            worst = worst.max(lossy_engine_deviation(&p, 6, levels).unwrap());
        }
    }
    let base = TriParams {
        delta1: 0.4,
        delta2: -0.6,
        big_g1: 1.0,
        big_g2: 0.5,
        c: 0.3,
        gamma1: 2.0,
        gamma2: 1.0,
    };
    for tau in [0.1, 0.3] {
        let p = TriDiscreteParams::from_continuous(&base, tau).unwrap();
        for levels in [2, 3] {
            worst = worst.max(tri_engine_deviation(&p, 6, levels).unwrap());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome {
        id: 2,
        name: "brute_force_oracle",
        passed: worst <= 1e-10 && elapsed < 10.0,
        detail: format!("max_dev={worst:.3e} runtime={elapsed:.3}s"),
        notes: Vec::new(),
    }
}

fn convergence() -> Outcome {
    let ratios = halving_ratios(0.02, 3, 10.0).unwrap();
    Outcome {
        id: 3,
        name: "convergence_order",
        passed: ratios.len() >= 3 && ratios.iter().all(|r| (1.5..=2.5).contains(r)),
        detail: format!("ratios={ratios:.4?}"),
        notes: Vec::new(),
    }
}

fn dephasing_routes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut worst = 0.0f64;
    let draws = 20;
    for _ in 0..draws {
        let tau = rng.random_range(0.01..1.0);
        let gt: f64 = rng.random_range(0.0..0.5);
        let big: f64 = rng.random_range(0.0..0.5);
        let xi = rng.random_range(-1.0..1.0);
        let p = DephasingParams::new(big / tau, gt / tau, tau, xi).unwrap();
        worst = worst.max(dephasing_routes_deviation(&p, 100).unwrap());
    }
    Outcome {
        id: 4,
        name: "dephasing_cross_checks",
        passed: worst <= 1e-10,
        detail: format!("draws={draws} max_dev={worst:.3e}"),
        notes: Vec::new(),
    }
}

fn dephasing_continuum() -> Outcome {
    let dev = dephasing_continuum_deviation(3.0, 1.0, 1e-3, 3.0).unwrap();
    Outcome {
        id: 5,
        name: "dephasing_continuum",
        passed: dev <= 5e-3,
        detail: format!("max_dev={dev:.3e}"),
        notes: Vec::new(),
    }
}

fn dephasing_density() -> Outcome {
    let omegas: Vec<f64> = (0..=60).map(|k| 0.1 * 300f64.powf(k as f64 / 60.0)).collect();
    let dev = dephasing_density_deviation(3.0, 1.0, &omegas).unwrap();
    Outcome {
        id: 6,
        name: "dephasing_density",
        passed: dev <= 1e-3,
        detail: format!("max_rel_dev={dev:.3e}"),
        notes: Vec::new(),
    }
}

fn lorentzian() -> Outcome {
    let b = lorentzian_bridge(1.0, 0.5, 0.0, 1e-3, 1e-3, 10.0, false).unwrap();
    let passed = b.volterra_vs_closed <= 1e-6 && b.cm_vs_volterra <= 1e-2 && b.cm_vs_closed <= 1e-2;
    let k = lorentzian_bridge(1.0, 0.5, 0.0, 1e-3, 1e-3, 10.0, true).unwrap();
    Outcome {
        id: 7,
        name: "lorentzian_bridge",
        passed,
        detail: format!(
            "volterra_vs_closed={:.3e} cm_vs_volterra={:.3e} cm_vs_closed={:.3e}",
            b.volterra_vs_closed, b.cm_vs_volterra, b.cm_vs_closed
        ),
        notes: vec![format!(
            "with G^2 = Gamma0*kappa/2: volterra_vs_closed={:.3e} cm_vs_volterra={:.3e} cm_vs_closed={:.3e}",
            k.volterra_vs_closed, k.cm_vs_volterra, k.cm_vs_closed
        )],
    }
}

fn multi_lorentzian() -> Outcome {
    let a = TriParams {
        delta1: 0.5,
        delta2: -1.0,
        big_g1: 1.0,
        big_g2: 0.7,
        c: 0.0,
        gamma1: 2.0,
        gamma2: 1.0,
    };
    let b = TriParams {
        big_g1: 1.0,
        big_g2: 0.0,
        c: 0.5,
        gamma1: 4.0,
        gamma2: 1.0,
        ..Default::default()
    };
    let da = multi_case_deviation(&a, SdCase::A, 10.0, 1e-2).unwrap();
    let db = multi_case_deviation(&b, SdCase::B, 10.0, 1e-2).unwrap();
    let (lp, lm, _) = case_b_rates(&b).unwrap();
    let (wp, wm) = case_b_weights(&b).unwrap();
    Outcome {
        id: 8,
        name: "multi_lorentzian_cases",
        passed: da <= 1e-4 && db <= 1e-4,
        detail: format!("case_a={da:.3e} case_b={db:.3e}"),
        notes: vec![format!(
            "case (b) pairing: (lambda+={lp:.4}, W+={wp:.4}) and (lambda-={lm:.4}, -W-={:.4})",
            -wm
        )],
    }
}

fn rtn() -> Outcome {
    let dev = rtn_deviation(1.0, 2.0, 5.0, 500).unwrap();
    Outcome {
        id: 9,
        name: "rtn_equivalence",
        passed: dev <= 1e-6,
        detail: format!("max_dev={dev:.3e}"),
        notes: Vec::new(),
    }
}

fn state_validity() -> Outcome {
    let (trace_dev, min_eig) = state_validity_extremes().unwrap();
    Outcome {
        id: 10,
        name: "state_validity",
        passed: trace_dev <= 1e-9 && min_eig >= -1e-9,
        detail: format!("max_trace_dev={trace_dev:.3e} min_eigenvalue={min_eig:.3e}"),
        notes: Vec::new(),
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_vec(n, n, data).unwrap()
}

fn degenerate_basis() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let h = random_matrix(&mut rng, 2).hermitian_part();
        let u = expm(&h.scale(C64::new(0.0, -1.0))).unwrap();
        let rhos: Vec<ComplexMatrix> = (0..5)
            .map(|_| {
                let a = random_matrix(&mut rng, 2);
                let p = a.matmul_adjoint(&a);
                let tr = p.trace().re;
                p.scale_real(1.0 / tr)
            })
            .collect();
        worst = worst.max(degenerate_basis_deviation(&u, &rhos).unwrap());
    }
    Outcome {
        id: 11,
        name: "degenerate_basis_invariance",
        passed: worst <= 1e-12,
        detail: format!("max_dev={worst:.3e}"),
        notes: Vec::new(),
    }
}

#[test]
fn acceptance_criteria() {
    let outcomes = [
        coarse_and_fine_steps(),
        brute_force(),
        convergence(),
        dephasing_routes(),
        dephasing_continuum(),
        dephasing_density(),
        lorentzian(),
        multi_lorentzian(),
        rtn(),
        state_validity(),
        degenerate_basis(),
    ];
    for o in &outcomes {
        report(o);
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let passed = outcomes.len() - failed.len();
    let _ = writeln!(
        std::io::stderr().lock(),
        "acceptance: {passed}/{} passed, failed {failed:?}",
        outcomes.len()
    );
    // Only the Lorentzian bridge under the printed coupling map is known to fail.
    assert_eq!(failed, vec![7], "unexpected acceptance outcome");
}
