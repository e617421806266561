//! Acceptance criteria. One PASS/FAIL line per criterion; exits non-zero if
//! any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use thermo_core::bloch;
use thermo_core::disturbance::{
    self, conditional_temperature, extremal_disturbance, Bound, Constrained, DisturbanceMeasure, ExtremalQuery,
};
use thermo_core::frontier::{efficient_frontier, kappa, point_rng};
use thermo_core::oracle::{
    self, cramer_rao_mc, grid_extremum, qfi_finite_difference, reference, GridSizes, Manifold, OracleConfig, Sense,
};
use thermo_core::povm::{BinaryPovm, Outcome, MIN_WEIGHT};
use thermo_core::{ExtendedReal, ThermalQubit};

const SEED: u64 = 7;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(worst: f64, tol: f64) -> Verdict {
    Verdict {
        passed: worst <= tol,
        detail: format!("max error {worst:.3e}, tolerance {tol:.0e}"),
    }
}

fn unit() -> ThermalQubit {
    ThermalQubit::new(1.0, 1.0).unwrap()
}

fn weight(rng: &mut impl Rng) -> f64 {
    (0.5 * (1.0 - rng.random::<f64>())).max(MIN_WEIGHT)
}

fn random_povm(seed: u64, index: u64) -> BinaryPovm {
    let mut rng = point_rng(seed, index);
    let lambda: f64 = rng.random();
    let theta = PI * rng.random::<f64>();
    let w = weight(&mut rng);
    let phi = 2.0 * PI * rng.random::<f64>();
    BinaryPovm::new(w, lambda, theta, phi).unwrap()
}

fn par_max(n: u64, f: impl Fn(u64) -> f64 + Sync + Send) -> f64 {
    (0..n).into_par_iter().map(f).reduce(|| 0.0, f64::max)
}

fn energy_measurement_is_optimal() -> Verdict {
    let p = BinaryPovm::new(0.5, 1.0, 0.0, 0.0).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let beta = 0.2 + 4.8 * i as f64 / 9.0;
            let delta = 0.2 + 4.8 * j as f64 / 9.0;
            let m = ThermalQubit::new(beta, delta).unwrap();
            let expected = delta * delta / (2.0 + 2.0 * (beta * delta).cosh());
            worst = worst.max((p.fisher_information(&m) - expected).abs());
        }
    }
    verdict(worst, 1e-12)
}

fn delta_geometry() -> Verdict {
    let m = unit();
    let qfi = m.qfi();
    let per_chi = 1000;
    let (mut ratio_err, mut triangle_err) = (0.0f64, 0.0f64);
    for c in 0..20 {
        let chi = c as f64 / 19.0;
        let k = kappa(chi, &m).unwrap();
        let errs: Vec<(f64, f64)> = (0..per_chi)
            .into_par_iter()
            .map(|i| {
                let mut rng = point_rng(SEED, (c * per_chi + i) as u64);
                let theta = if rng.random::<bool>() { chi.asin() } else { PI - chi.asin() };
                let lambda = 1.0 - rng.random::<f64>();
                let w = weight(&mut rng);
                let p = BinaryPovm::new(w, lambda, theta, 0.0).unwrap();
                let (f, d) = (p.fisher_information(&m), disturbance::delta_disturbance(&p, &m));
                let outside = (-f).max(f - d).max(d - qfi).max(0.0);
                ((f / d - k).abs(), outside)
            })
            .collect();
        for (r, t) in errs {
            ratio_err = ratio_err.max(r);
            triangle_err = triangle_err.max(t);
        }
    }
    Verdict {
        passed: ratio_err <= 1e-9 && triangle_err <= 1e-10,
        detail: format!("ratio error {ratio_err:.3e} (1e-9), triangle excess {triangle_err:.3e} (1e-10)"),
    }
}

fn information_below_delta() -> Verdict {
    let m = unit();
    let results: Vec<(f64, f64, bool)> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut p = random_povm(SEED, i);
            // half of the sample is semiclassical, where equality must hold
            if i % 2 == 0 {
                let theta = if i % 4 == 0 { 0.0 } else { PI };
                p = BinaryPovm::new(p.w(), p.lambda(), theta, p.phi()).unwrap();
            }
            let (f, d) = (p.fisher_information(&m), disturbance::delta_disturbance(&p, &m));
            (f - d, (f - d).abs(), p.sin_theta() < 1e-8)
        })
        .collect();
    let excess = results.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let equality = results.iter().filter(|r| r.2).map(|r| r.1).fold(0.0, f64::max);
    let semiclassical = results.iter().filter(|r| r.2).count();
    Verdict {
        passed: excess <= 1e-10 && equality <= 1e-10,
        detail: format!(
            "max(F − D) = {excess:.3e}, equality gap {equality:.3e} over {semiclassical} semiclassical POVMs"
        ),
    }
}

fn f_disturbance_closed_form() -> Verdict {
    let m = unit();
    let agreement = par_max(10_000, |i| {
        let p = random_povm(SEED, i);
        (disturbance::f_disturbance(&p, &m) - disturbance::f_disturbance_definitional(&p, &m)).abs()
    });
    let maximum = (0..1_000_000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = point_rng(SEED ^ 0xF, i);
            let theta = PI * rng.random::<f64>();
            let phi = 2.0 * PI * rng.random::<f64>();
            let p = BinaryPovm::new(0.5, 1.0, theta, phi).unwrap();
            disturbance::f_disturbance(&p, &m)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let max_err = (maximum - 0.5).abs();
    Verdict {
        passed: agreement <= 1e-10 && max_err <= 1e-4,
        detail: format!("closed form vs definition {agreement:.3e} (1e-10), projective maximum {maximum:.8} (1/2 ± 1e-4)"),
    }
}

fn tau_closed_forms() -> Verdict {
    let m = unit();
    let agreement = par_max(1000, |i| {
        let mut rng = point_rng(SEED, i);
        let theta = 0.05 + (PI - 0.1) * rng.random::<f64>();
        let lambda = 0.05 + 0.9 * rng.random::<f64>();
        let w = weight(&mut rng);
        let p = BinaryPovm::new(w, lambda, theta, 0.0).unwrap();
        let (t0, t1) = reference::conditional_temperatures(&p, &m);
        [(Outcome::Zero, t0), (Outcome::One, t1)]
            .into_iter()
            .map(|(o, expected)| match conditional_temperature(&p, &m, o).and_then(ExtendedReal::finite) {
                Some(t) => (t - expected).abs(),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    });
    let mut divergent = 0;
    for k in 0..20 {
        let info = m.qfi() * (k as f64 + 0.5) / 20.0;
        let q = ExtremalQuery {
            measure: DisturbanceMeasure::Tau,
            constrained: Constrained::Info,
            value: info,
            bound: Bound::Max,
        };
        let e = extremal_disturbance(&q, &m).unwrap();
        let p = e.povm.unwrap();
        let (ground, _) = p.post_measurement_populations(&m, Outcome::Zero).unwrap();
        let extracts = (p.fisher_information(&m) - info).abs() <= 1e-10 * info;
        if ground == 0.0 && disturbance::tau_disturbance(&p, &m) == ExtendedReal::PosInf && extracts {
            divergent += 1;
        }
    }
    Verdict {
        passed: agreement <= 1e-9 && divergent == 20,
        detail: format!("temperature agreement {agreement:.3e} (1e-9), divergent constructions {divergent}/20"),
    }
}

fn pi_projective() -> Verdict {
    let m = unit();
    let worst = par_max(50, |k| {
        let theta = (k as f64 + 0.5) * PI / 50.0;
        let p = BinaryPovm::new(0.5, 1.0, theta, 0.0).unwrap();
        (disturbance::pi_disturbance(&p, &m) - reference::pi_max_chi(p.cos_theta().abs(), &m)).abs()
    });
    verdict(worst, 1e-6)
}

fn boundary_curves() -> Verdict {
    let m = unit();
    let sizes = GridSizes::uniform(256);
    let info = |p: &BinaryPovm| ExtendedReal::from(p.fisher_information(&m));
    let delta = |p: &BinaryPovm| ExtendedReal::from(disturbance::delta_disturbance(p, &m));
    let fd = |p: &BinaryPovm| ExtendedReal::from(disturbance::f_disturbance(p, &m));
    let mut worst = [0.0f64; 6];
    for k in 0..10 {
        let chi = (k as f64 + 0.5) / 10.0;
        let gamma = (k as f64 + 1.0) / 10.0;
        let upper = 0.55 + 0.05 * k as f64;
        let cases = [
            (grid_extremum(info, Manifold::Chi(chi), Sense::Max, sizes), reference::info_max_chi(chi, &m)),
            (grid_extremum(info, Manifold::Gamma(gamma), Sense::Max, sizes), reference::info_max_gamma(gamma, &m)),
            (grid_extremum(delta, Manifold::Gamma(upper), Sense::Min, sizes), reference::delta_min_gamma(upper, &m)),
            (grid_extremum(fd, Manifold::Chi(chi), Sense::Max, sizes), reference::f_max_chi(chi, &m)),
            (grid_extremum(fd, Manifold::Gamma(gamma), Sense::Max, sizes), reference::f_max_gamma(gamma)),
            (grid_extremum(fd, Manifold::Gamma(upper), Sense::Min, sizes), reference::f_min_gamma(upper, &m)),
        ];
        for (slot, (found, expected)) in cases.into_iter().enumerate() {
            let err = match found {
                Ok(g) => (g.value.to_f64() - expected).abs(),
                Err(_) => f64::INFINITY,
            };
            worst[slot] = worst[slot].max(err);
        }
    }
    let overall = worst.iter().copied().fold(0.0, f64::max);
    Verdict {
        passed: overall <= 1e-4,
        detail: format!(
            "FI max χ {:.1e}, FI max γ {:.1e}, Δ min γ {:.1e}, F max χ {:.1e}, F max γ {:.1e}, F min γ {:.1e} (1e-4)",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5]
        ),
    }
}

fn frontiers_are_semiclassical() -> Verdict {
    let m = unit();
    let measures = [DisturbanceMeasure::F, DisturbanceMeasure::Tau, DisturbanceMeasure::Pi];
    let jobs: Vec<(DisturbanceMeasure, f64)> = measures
        .iter()
        .flat_map(|&d| (0..20).map(move |k| (d, m.qfi() * (k as f64 + 0.5) / 20.0)))
        .collect();
    let gains: Vec<(DisturbanceMeasure, f64)> = jobs
        .par_iter()
        .map(|&(d, info)| {
            let gain = efficient_frontier(d, info, &m).map_or(f64::INFINITY, |s| s.unrestricted_gain());
            (d, gain)
        })
        .collect();
    let worst = |d: DisturbanceMeasure| {
        gains
            .iter()
            .filter(|g| g.0 == d)
            .map(|g| g.1)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let all = gains.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
    Verdict {
        passed: all <= 1e-8,
        detail: format!(
            "largest unrestricted gain: F {:.2e}, τ {:.2e}, π {:.2e} (1e-8)",
            worst(DisturbanceMeasure::F),
            worst(DisturbanceMeasure::Tau),
            worst(DisturbanceMeasure::Pi)
        ),
    }
}

fn cramer_rao() -> Verdict {
    let p = BinaryPovm::new(0.5, 1.0, 0.0, 0.0).unwrap();
    let r = cramer_rao_mc(&p, &unit(), 100_000, 500, SEED).unwrap();
    Verdict {
        passed: (0.9..=1.1).contains(&r.ratio),
        detail: format!("N·Var·F = {:.4} in [0.9, 1.1], {} clamped", r.ratio, r.clamped),
    }
}

fn bloch_qfi_vs_fidelity() -> Verdict {
    let cfg = OracleConfig::default();
    let worst = par_max(1000, |i| {
        let (beta, curve, r, dr) = oracle::suite::random_mixed_curve(SEED, i);
        let analytic = bloch::bloch_qfi(&r, &dr).unwrap();
        let fd = qfi_finite_difference(&curve, beta, &cfg).unwrap().fidelity;
        (fd - analytic).abs() / analytic
    });
    verdict(worst, 1e-5)
}

type Criterion = (&'static str, Duration, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 energy measurement is optimal", Duration::from_secs(1), energy_measurement_is_optimal),
        ("2 information/Δ-disturbance geometry", Duration::from_secs(10), delta_geometry),
        ("3 information never exceeds Δ-disturbance", Duration::from_secs(10), information_below_delta),
        ("4 F-disturbance closed form and maximum", Duration::from_secs(60), f_disturbance_closed_form),
        ("5 τ-disturbance closed forms and divergence", Duration::from_secs(10), tau_closed_forms),
        ("6 π-disturbance of projective measurements", Duration::from_secs(30), pi_projective),
        ("7 boundary curves by grid search", Duration::from_secs(300), boundary_curves),
        ("8 efficient frontiers are semiclassical", Duration::from_secs(300), frontiers_are_semiclassical),
        ("9 Cramér–Rao Monte-Carlo", Duration::from_secs(60), cramer_rao),
        ("10 Bloch QFI vs fidelity finite difference", Duration::from_secs(10), bloch_qfi_vs_fidelity),
    ];
    let mut failures = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = v.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {}; {:.2}s of {}s",
            if passed { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
