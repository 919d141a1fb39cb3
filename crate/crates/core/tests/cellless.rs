mod common;

use common::*;
use fairpower::cellless::*;
use fairpower::*;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

fn quick_model() -> (Network, CellLessModel) {
    let cfg = NetworkConfig {
        mc_draws: 2000,
        ..NetworkConfig::desk_scale()
    };
    build_model(&cfg).unwrap()
}

#[test]
fn cellless_model_is_standard() {
    let (_, m) = quick_model();
    let r = check_standard_interference(&m, 1000, ScaleRange::default(), 3).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(utility_property_failure(&m, 300, 4), None);
}

#[test]
fn imperfect_csi_model_is_standard() {
    let cfg = NetworkConfig {
        mc_draws: 1000,
        csi_error_variance: 10.0,
        ..NetworkConfig::desk_scale()
    };
    let (_, m) = build_model(&cfg).unwrap();
    assert!(
        check_standard_interference(&m, 300, ScaleRange::default(), 1)
            .unwrap()
            .passed
    );
}

#[test]
fn fk_is_midpoint_concave() {
    let (_, m) = quick_model();
    let mut r = rng(8);
    for _ in 0..300 {
        let p: Vec<f64> = (0..8).map(|_| log_uniform(&mut r, 1e-6, 1.0)).collect();
        let q: Vec<f64> = (0..8).map(|_| log_uniform(&mut r, 1e-6, 1.0)).collect();
        let mid: Vec<f64> = p.iter().zip(&q).map(|(a, b)| 0.5 * (a + b)).collect();
        let (fp, fq, fm) = (m.eval(&p).unwrap(), m.eval(&q).unwrap(), m.eval(&mid).unwrap());
        for k in 0..8 {
            let chord = 0.5 * (fp[k] + fq[k]);
            assert!(fm[k] >= chord * (1.0 - 1e-9), "user {k}: {} < {chord}", fm[k]);
        }
    }
}

#[test]
fn random_lsfd_never_beats_the_closed_form() {
    let (_, m) = quick_model();
    let mut r = rng(9);
    for _ in 0..200 {
        let p: Vec<f64> = (0..8).map(|_| log_uniform(&mut r, 1e-4, 1.0)).collect();
        for um in m.moments() {
            let f = eval_fk(um, &p).unwrap();
            let best = optimal_lsfd(um, &p).unwrap();
            assert!((lsfd_quotient(um, &p, &best).unwrap() - f).abs() <= 1e-9 * f);
            let a = DVector::from_fn(best.len(), |_, _| {
                Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
            });
            assert!(lsfd_quotient(um, &p, &a).unwrap() >= f * (1.0 - 1e-9));
        }
    }
}

#[test]
fn rates_grow_under_uniform_scaling() {
    let (_, m) = quick_model();
    let mut r = rng(10);
    for _ in 0..100 {
        let p: Vec<f64> = (0..8).map(|_| log_uniform(&mut r, 1e-4, 0.1)).collect();
        let alpha = 1.0 + 9.0 * r.random::<f64>();
        let base = eval_rates(&m, &PowerVector::new(p.clone()).unwrap()).unwrap();
        let scaled = eval_rates(&m, &PowerVector::new(p.iter().map(|v| v * alpha).collect()).unwrap()).unwrap();
        assert!(base.iter().zip(&scaled).all(|(a, b)| b >= a));
    }
}

#[test]
fn policies_are_mutually_non_dominating() {
    let (net, m) = quick_model();
    let norm = MonotoneNorm::linf(dbm_to_watts(20.0)).unwrap();
    let outcomes = run_policies(
        &m,
        &net,
        &norm,
        &[
            PowerPolicy::FullPower,
            PowerPolicy::RandomBox { seed: 1 },
            PowerPolicy::FractionalExponent { exponent: -1.0 },
        ],
    )
    .unwrap();
    for a in &outcomes {
        for b in &outcomes {
            assert_eq!(dominance_compare(&a.rates, &b.rates).unwrap(), Dominance::Neither);
        }
    }
}

#[test]
fn max_min_power_control_on_cellless_model() {
    let (_, m) = quick_model();
    let norm = MonotoneNorm::linf(0.1).unwrap();
    let s = solve_weighted_maxmin(&m, &WeightVector::uniform(8), &norm, &SolverOptions::default()).unwrap();
    assert!(s.converged);
    assert!((norm.eval(&s.p_star).unwrap() - 0.1).abs() <= 1e-10 * 0.1);
    for u in s.utilities.iter() {
        assert!((u / s.c_star - 1.0).abs() <= 1e-8);
    }
    let cert = certify_boundary(&m, &norm, &s.p_star, BOUNDARY_TOL, true).unwrap();
    assert!(cert.on_boundary);
    assert!((cert.solver_crosscheck.unwrap().c_star - 1.0).abs() < 1e-6);
}

#[test]
fn identical_seeds_give_identical_models_and_rates() {
    let (net_a, a) = quick_model();
    let (net_b, b) = quick_model();
    assert_eq!(net_a, net_b);
    assert_eq!(a, b);
    let norm = MonotoneNorm::linf(0.1).unwrap();
    let p = apply_policy(PowerPolicy::RandomBox { seed: 5 }, &net_a, &norm).unwrap();
    let ra = eval_rates(&a, &p).unwrap();
    let rb = eval_rates(&b, &p).unwrap();
    assert_eq!(
        ra.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        rb.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
}

#[test]
fn moments_do_not_depend_on_thread_count() {
    let cfg = NetworkConfig {
        mc_draws: 3500,
        ..NetworkConfig::desk_scale()
    };
    let net = generate_network(&cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let single = pool.install(|| estimate_moments(&net, &cfg).unwrap());
    let many = estimate_moments(&net, &cfg).unwrap();
    assert_eq!(single, many);
}
