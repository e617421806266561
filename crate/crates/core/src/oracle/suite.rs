//! Self-verification suite behind the `verify` command.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::{cramer_rao_mc, grid_extremum, qfi_finite_difference, reference, GridSizes, Manifold, OracleConfig, Sense};
use crate::bloch::{self, DensityMatrix};
use crate::disturbance::{
    self, conditional_temperature, extremal_disturbance, Bound, Constrained, DisturbanceMeasure, ExtremalQuery,
};
use crate::error::Result;
use crate::extended::ExtendedReal;
use crate::frontier::{efficient_frontier, kappa, point_rng};
use crate::povm::{BinaryPovm, Outcome, MIN_WEIGHT};
use crate::thermal::ThermalQubit;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteMode {
    Fast,
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Scale {
    samples: usize,
    grid: usize,
    frontier_targets: usize,
    mc_samples: usize,
}

impl Scale {
    fn new(mode: SuiteMode, cfg: &OracleConfig) -> Self {
        match mode {
            SuiteMode::Fast => Self {
                samples: 500,
                grid: 65,
                frontier_targets: 20,
                mc_samples: 10_000,
            },
            SuiteMode::Full => Self {
                samples: 10_000,
                grid: cfg.grid_sizes.w.max(cfg.grid_sizes.theta),
                frontier_targets: 20,
                mc_samples: cfg.mc_samples,
            },
        }
    }
}

fn random_povm(seed: u64, index: u64) -> BinaryPovm {
    let mut rng = point_rng(seed, index);
    let lambda: f64 = rng.random();
    let theta = PI * rng.random::<f64>();
    let w = (0.5 * (1.0 - rng.random::<f64>())).max(MIN_WEIGHT);
    let phi = 2.0 * PI * rng.random::<f64>();
    BinaryPovm::new(w, lambda, theta, phi).expect("sampled inside the cone")
}

fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= tol,
        detail: format!("max error {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn max_of(values: impl ParallelIterator<Item = f64>) -> f64 {
    values.reduce(|| 0.0, f64::max)
}

fn energy_measurement() -> Result<CheckOutcome> {
    let p = BinaryPovm::new(0.5, 1.0, 0.0, 0.0)?;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let beta = 0.2 + 4.8 * i as f64 / 9.0;
            let delta = 0.2 + 4.8 * j as f64 / 9.0;
            let m = ThermalQubit::new(beta, delta)?;
            let expected = delta * delta / (2.0 + 2.0 * (beta * delta).cosh());
            worst = worst.max(relative_error(p.fisher_information(&m), expected));
        }
    }
    Ok(outcome("energy measurement attains the QFI", worst, 1e-12))
}

fn delta_geometry(s: &Scale, seed: u64) -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let per_chi = (s.samples / 20).max(1);
    let qfi = m.qfi();
    let worst = max_of((0..20 * per_chi).into_par_iter().map(|i| {
        let chi = (i / per_chi) as f64 / 19.0;
        let mut rng = point_rng(seed, i as u64);
        let theta = if rng.random::<bool>() { chi.asin() } else { PI - chi.asin() };
        let lambda = 1.0 - rng.random::<f64>();
        let w = (0.5 * (1.0 - rng.random::<f64>())).max(MIN_WEIGHT);
        let p = BinaryPovm::new(w, lambda, theta, 0.0).expect("inside the cone");
        let (f, d) = (p.fisher_information(&m), disturbance::delta_disturbance(&p, &m));
        let ratio = (f / d - kappa(chi, &m).expect("chi in range")).abs();
        let outside = (-f).max(f - d).max(d - qfi).max(0.0);
        ratio.max(outside * 10.0)
    }));
    Ok(outcome("information/Δ ratio and triangle", worst, 1e-9))
}

fn information_below_delta(s: &Scale, seed: u64) -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let worst = max_of((0..s.samples as u64).into_par_iter().map(|i| {
        let mut p = random_povm(seed, i);
        if i % 2 == 0 {
            let theta = if i % 4 == 0 { 0.0 } else { PI };
            p = BinaryPovm::new(p.w(), p.lambda(), theta, p.phi()).expect("inside the cone");
        }
        let (f, d) = (p.fisher_information(&m), disturbance::delta_disturbance(&p, &m));
        let excess = (f - d).max(0.0);
        if p.sin_theta() < 1e-8 {
            excess.max((f - d).abs())
        } else {
            excess
        }
    }));
    Ok(outcome("information never exceeds Δ", worst, 1e-10))
}

fn f_closed_form(s: &Scale, seed: u64) -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let worst = max_of((0..s.samples as u64).into_par_iter().map(|i| {
        let p = random_povm(seed, i);
        (disturbance::f_disturbance(&p, &m) - disturbance::f_disturbance_definitional(&p, &m)).abs()
    }));
    Ok(outcome("F-disturbance closed form vs definition", worst, 1e-10))
}

fn tau_closed_form(s: &Scale, seed: u64) -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let worst = max_of((0..s.samples.min(1000) as u64).into_par_iter().map(|i| {
        let mut rng = point_rng(seed, i);
        let theta = 0.05 + (PI - 0.1) * rng.random::<f64>();
        let lambda = 0.05 + 0.9 * rng.random::<f64>();
        let w = (0.5 * (1.0 - rng.random::<f64>())).max(MIN_WEIGHT);
        let p = BinaryPovm::new(w, lambda, theta, 0.0).expect("inside the cone");
        let (t0, t1) = reference::conditional_temperatures(&p, &m);
        let mut err: f64 = 0.0;
        for (o, expected) in [(Outcome::Zero, t0), (Outcome::One, t1)] {
            match conditional_temperature(&p, &m, o).and_then(ExtendedReal::finite) {
                Some(t) => err = err.max(relative_error(t, expected)),
                None => err = f64::INFINITY,
            }
        }
        err
    }));
    Ok(outcome("τ conditional temperatures vs Λ±/W± forms", worst, 1e-9))
}

fn tau_divergence() -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let mut failures = 0;
    for k in 0..20 {
        let info = m.qfi() * (k as f64 + 0.5) / 20.0;
        let q = ExtremalQuery {
            measure: DisturbanceMeasure::Tau,
            constrained: Constrained::Info,
            value: info,
            bound: Bound::Max,
        };
        let e = extremal_disturbance(&q, &m)?;
        let p = e.povm.expect("divergent construction carries a POVM");
        let (ground, _) = p.post_measurement_populations(&m, Outcome::Zero)?;
        let ok = ground == 0.0
            && disturbance::tau_disturbance(&p, &m) == ExtendedReal::PosInf
            && relative_error(p.fisher_information(&m), info) <= 1e-10
            && relative_error(p.w(), reference::tau_divergent_weight(info, &m)) <= 1e-12;
        if !ok {
            failures += 1;
        }
    }
    Ok(CheckOutcome {
        name: "τ divergence construction",
        passed: failures == 0,
        detail: format!("{failures} of 20 targets failed"),
    })
}

fn pi_projective() -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let worst = max_of((0..50).into_par_iter().map(|k| {
        let theta = (k as f64 + 0.5) * PI / 50.0;
        let p = BinaryPovm::new(0.5, 1.0, theta, 0.0).expect("projective");
        (disturbance::pi_disturbance(&p, &m) - reference::pi_max_chi(p.cos_theta().abs(), &m)).abs()
    }));
    Ok(outcome("π-disturbance of projective POVMs", worst, 1e-6))
}

fn boundary_curves(s: &Scale) -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let sizes = GridSizes::uniform(s.grid);
    let info = |p: &BinaryPovm| ExtendedReal::from(p.fisher_information(&m));
    let delta = |p: &BinaryPovm| ExtendedReal::from(disturbance::delta_disturbance(p, &m));
    let fd = |p: &BinaryPovm| ExtendedReal::from(disturbance::f_disturbance(p, &m));
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let chi = (k as f64 + 0.5) / 10.0;
        let gamma = (k as f64 + 1.0) / 10.0;
        let upper_gamma = 0.55 + 0.05 * k as f64;
        let cases = [
            (grid_extremum(info, Manifold::Chi(chi), Sense::Max, sizes)?, reference::info_max_chi(chi, &m)),
            (grid_extremum(info, Manifold::Gamma(gamma), Sense::Max, sizes)?, reference::info_max_gamma(gamma, &m)),
            (
                grid_extremum(delta, Manifold::Gamma(upper_gamma), Sense::Min, sizes)?,
                reference::delta_min_gamma(upper_gamma, &m),
            ),
            (grid_extremum(fd, Manifold::Chi(chi), Sense::Max, sizes)?, reference::f_max_chi(chi, &m)),
            (grid_extremum(fd, Manifold::Gamma(gamma), Sense::Max, sizes)?, reference::f_max_gamma(gamma)),
            (
                grid_extremum(fd, Manifold::Gamma(upper_gamma), Sense::Min, sizes)?,
                reference::f_min_gamma(upper_gamma, &m),
            ),
        ];
        for (found, expected) in cases {
            worst = worst.max((found.value.to_f64() - expected).abs());
        }
    }
    Ok(outcome("boundary curves by grid search", worst, 1e-4))
}

fn frontier_is_semiclassical(s: &Scale) -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let n = s.frontier_targets;
    let jobs: Vec<(DisturbanceMeasure, f64)> = [DisturbanceMeasure::F, DisturbanceMeasure::Tau, DisturbanceMeasure::Pi]
        .into_iter()
        .flat_map(|measure| (0..n).map(move |k| (measure, (k as f64 + 0.5) / n as f64)))
        .collect();
    let gains: Vec<f64> = jobs
        .par_iter()
        .map(|&(measure, fraction)| {
            efficient_frontier(measure, fraction * m.qfi(), &m).map(|sol| sol.unrestricted_gain())
        })
        .collect::<Result<_>>()?;
    let worst = gains.into_iter().fold(0.0, f64::max);
    Ok(outcome("efficient POVMs have θ = 0", worst, 1e-8))
}

fn cramer_rao(s: &Scale, cfg: &OracleConfig) -> Result<CheckOutcome> {
    let m = ThermalQubit::new(1.0, 1.0)?;
    let p = BinaryPovm::new(0.5, 1.0, 0.0, 0.0)?;
    let report = cramer_rao_mc(&p, &m, s.mc_samples, cfg.mc_trials, cfg.seed)?;
    Ok(CheckOutcome {
        name: "Cramér–Rao efficiency of the MLE",
        passed: (0.9..=1.1).contains(&report.ratio),
        detail: format!(
            "N·Var·F = {:.4} over {} trials of {} ({} clamped)",
            report.ratio, cfg.mc_trials, s.mc_samples, report.clamped
        ),
    })
}

/// `r(β) = c[−tanh(βδ/2)·a + k·sech(βδ/2)·b]` for random orthonormal `a, b`,
/// `c ∈ [0.3, 0.999]`, `k ∈ [0, 0.9]`; returns `β`, the curve, `r` and `dr/dβ`.
pub fn random_mixed_curve(seed: u64, index: u64) -> (f64, impl Fn(f64) -> Result<DensityMatrix>, [f64; 3], [f64; 3]) {
    let mut rng = point_rng(seed, index);
    let beta = 0.1 + 2.9 * rng.random::<f64>();
    let delta = 0.1 + 2.9 * rng.random::<f64>();
    let c = 0.3 + 0.699 * rng.random::<f64>();
    let k = 0.9 * rng.random::<f64>();
    let polar = (1.0 - 2.0 * rng.random::<f64>()).acos();
    let azimuth = 2.0 * PI * rng.random::<f64>();
    let twist = 2.0 * PI * rng.random::<f64>();
    let a = [polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos()];
    let e1 = [polar.cos() * azimuth.cos(), polar.cos() * azimuth.sin(), -polar.sin()];
    let e2 = [-azimuth.sin(), azimuth.cos(), 0.0];
    let b = bloch::add3(&bloch::scale(&e1, twist.cos()), &bloch::scale(&e2, twist.sin()));
    let point = move |x: f64, y: f64| bloch::add3(&bloch::scale(&a, c * x), &bloch::scale(&b, c * k * y));
    let half = 0.5 * beta * delta;
    let (t, sh) = (half.tanh(), 1.0 / half.cosh());
    let r = point(-t, sh);
    let dr = point(-0.5 * delta * sh * sh, -0.5 * delta * sh * t);
    let curve = move |b: f64| {
        let x = 0.5 * b * delta;
        DensityMatrix::new(point(-x.tanh(), 1.0 / x.cosh()))
    };
    (beta, curve, r, dr)
}

fn bloch_qfi(s: &Scale, cfg: &OracleConfig) -> Result<CheckOutcome> {
    let worst = (0..s.samples.min(1000) as u64)
        .into_par_iter()
        .map(|i| {
            let (beta, curve, r, dr) = random_mixed_curve(cfg.seed, i);
            let analytic = bloch::bloch_qfi(&r, &dr)?;
            let fd = qfi_finite_difference(curve, beta, cfg)?.fidelity;
            Ok((fd - analytic).abs() / analytic)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(outcome("Bloch QFI vs fidelity finite difference", worst, 1e-5))
}

/// Runs every check; an `Err` reports a check that could not be evaluated.
pub fn run_suite(mode: SuiteMode, cfg: &OracleConfig) -> Result<Vec<CheckOutcome>> {
    cfg.validate()?;
    let s = Scale::new(mode, cfg);
    let seed = cfg.seed;
    Ok(vec![
        energy_measurement()?,
        delta_geometry(&s, seed)?,
        information_below_delta(&s, seed)?,
        f_closed_form(&s, seed)?,
        tau_closed_form(&s, seed)?,
        tau_divergence()?,
        pi_projective()?,
        boundary_curves(&s)?,
        frontier_is_semiclassical(&s)?,
        cramer_rao(&s, cfg)?,
        bloch_qfi(&s, cfg)?,
    ])
}
