//! Trade-off regions in the (information, disturbance) plane and their
//! efficient frontiers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::disturbance::extremal::{balanced_parameter_for_info, extremal_disturbance};
use crate::disturbance::{disturbance, Bound, Constrained, DisturbanceMeasure, Extremal, ExtremalQuery};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::optimize::{golden_section, nelder_mead_box};
use crate::povm::{BinaryPovm, MIN_WEIGHT};
use crate::thermal::{sech, ThermalQubit};

/// Number of `λ` samples in the semiclassical frontier scan.
pub const LAMBDA_GRID: usize = 512;
/// Points per axis in the unrestricted `(λ, θ)` scan.
pub const UNRESTRICTED_GRID: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TradeoffPoint {
    pub info: f64,
    pub disturbance: ExtendedReal,
    pub povm: BinaryPovm,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontierSolution {
    pub measure: DisturbanceMeasure,
    pub info_target: f64,
    /// Minimal disturbance over the `θ = 0` family.
    pub d_min: ExtendedReal,
    pub lambda_opt: f64,
    pub w_opt: f64,
    pub converged: bool,
    /// `|F(λ_opt, w_opt) − info_target|`.
    pub residual: f64,
    /// Minimum found when `θ` is also free; `None` for the Δ measure, whose
    /// frontier is exact.
    pub unrestricted_d_min: Option<ExtendedReal>,
    pub unrestricted_povm: Option<BinaryPovm>,
    /// Scan candidates with infinite disturbance, excluded from the minimum.
    pub infinite_candidates: usize,
}

impl FrontierSolution {
    pub fn povm(&self) -> BinaryPovm {
        BinaryPovm::new(self.w_opt, self.lambda_opt, 0.0, 0.0).expect("frontier POVMs lie in the cone")
    }

    /// How much the unrestricted search improves on the `θ = 0` optimum
    /// (non-positive when the semiclassical family is efficient).
    pub fn unrestricted_gain(&self) -> f64 {
        match (self.d_min, self.unrestricted_d_min) {
            (ExtendedReal::Finite(a), Some(ExtendedReal::Finite(b))) => a - b,
            _ => 0.0,
        }
    }
}

/// `κ(χ) = 2(1 − χ²)/(2 − χ² + χ² cosh βδ)`, the slope `F/D^Δ` shared by
/// every POVM with `sin θ = χ`.
pub fn kappa(chi: f64, model: &ThermalQubit) -> Result<f64> {
    if !(0.0..=1.0).contains(&chi) {
        return Err(Error::OutOfRange {
            what: "chi",
            value: chi,
            range: "[0, 1]",
        });
    }
    if chi == 0.0 {
        return Ok(1.0);
    }
    let c2 = chi * chi;
    let cosh = (model.beta() * model.delta()).cosh();
    Ok(2.0 * (1.0 - c2) / (2.0 - c2 + c2 * cosh))
}

/// Independent generator for sample `index` of a seeded run.
pub fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` POVMs with `(λ, θ, w)` uniform on `[0,1] × [0,π] × (0,1/2]`, `φ = 0`,
/// and their (information, disturbance) pairs. Output depends only on
/// `(measure, n, seed, model)`, not on the thread count.
pub fn sample_region(
    measure: DisturbanceMeasure,
    n: usize,
    seed: u64,
    model: &ThermalQubit,
) -> Result<Vec<TradeoffPoint>> {
    if n == 0 {
        return Err(Error::InvalidConfig("sample count must be at least 1".into()));
    }
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = point_rng(seed, i);
            let lambda: f64 = rng.random();
            let theta = std::f64::consts::PI * rng.random::<f64>();
            let w = (0.5 * (1.0 - rng.random::<f64>())).max(MIN_WEIGHT);
            let povm = BinaryPovm::new(w, lambda, theta, 0.0)?;
            Ok(TradeoffPoint {
                info: povm.fisher_information(model),
                disturbance: disturbance(measure, &povm, model),
                povm,
            })
        })
        .collect()
}

fn check_target(info: f64, model: &ThermalQubit) -> Result<()> {
    let qfi = model.qfi();
    if !(info > 0.0 && info < qfi * (1.0 - 1e-10)) {
        return Err(Error::Infeasible { target: info, qfi });
    }
    Ok(())
}

/// The weight at which `(λ, θ)` extracts `info`, from inverting the Fisher
/// information: `w = F·Q/(A + F·Q²)`, `A = δ²λ²cos²θ sech⁴(βδ/2)/4`,
/// `Q = 1 − λ cosθ tanh(βδ/2)`. `None` outside the cone.
pub fn weight_for_info(info: f64, lambda: f64, cos_theta: f64, model: &ThermalQubit) -> Option<f64> {
    let s2 = sech(model.half_gap()).powi(2);
    let d = model.delta();
    let a = 0.25 * d * d * lambda * lambda * cos_theta * cos_theta * s2 * s2;
    if a <= 0.0 {
        return None;
    }
    let q = 1.0 - lambda * cos_theta * model.polarization();
    let w = info * q / (a + info * q * q);
    (MIN_WEIGHT..=0.5 + 1e-12).contains(&w).then_some(w.min(0.5))
}

/// Smallest `λ` at which `θ = 0` POVMs reach `info` (attained at `w = 1/2`).
pub fn lambda_min(info: f64, model: &ThermalQubit) -> f64 {
    balanced_parameter_for_info(info, model)
}

fn score(d: ExtendedReal) -> f64 {
    d.to_f64()
}

/// Minimal disturbance at fixed extracted information `info`.
///
/// Δ: the frontier is the diagonal `D = F` and is returned exactly. F, τ, π:
/// a scan over `λ ∈ [λ_min, 1]` along `θ = 0` with `w(λ)` from
/// [`weight_for_info`], a golden-section polish around the best grid point,
/// and an independent search over `(λ, θ)` recorded as
/// `unrestricted_d_min`. Ties between grid points go to the smaller `λ`.
pub fn efficient_frontier(
    measure: DisturbanceMeasure,
    info: f64,
    model: &ThermalQubit,
) -> Result<FrontierSolution> {
    check_target(info, model)?;
    let lmin = lambda_min(info, model);

    if measure == DisturbanceMeasure::Delta {
        let povm = BinaryPovm::new(0.5, lmin, 0.0, 0.0)?;
        return Ok(FrontierSolution {
            measure,
            info_target: info,
            d_min: ExtendedReal::Finite(info),
            lambda_opt: lmin,
            w_opt: 0.5,
            converged: true,
            residual: (povm.fisher_information(model) - info).abs(),
            unrestricted_d_min: None,
            unrestricted_povm: None,
            infinite_candidates: 0,
        });
    }

    let along = |lambda: f64| -> (ExtendedReal, f64) {
        match weight_for_info(info, lambda, 1.0, model)
            .and_then(|w| BinaryPovm::new(w, lambda, 0.0, 0.0).ok().map(|p| (w, p)))
        {
            Some((w, p)) => (disturbance(measure, &p, model), w),
            None => (ExtendedReal::PosInf, f64::NAN),
        }
    };

    let step = (1.0 - lmin) / (LAMBDA_GRID - 1) as f64;
    let grid: Vec<(f64, ExtendedReal)> = (0..LAMBDA_GRID)
        .map(|k| {
            let lambda = if k + 1 == LAMBDA_GRID { 1.0 } else { lmin + step * k as f64 };
            (lambda, along(lambda).0)
        })
        .collect();
    let infinite_candidates = grid.iter().filter(|(_, d)| !d.is_finite()).count();
    let mut best: Option<usize> = None;
    for (k, (_, d)) in grid.iter().enumerate() {
        if d.is_finite() && best.is_none_or(|b| *d < grid[b].1) {
            best = Some(k);
        }
    }
    let Some(kbest) = best else {
        return Err(Error::Infeasible {
            target: info,
            qfi: model.qfi(),
        });
    };

    let lo = grid[kbest.saturating_sub(1)].0;
    let hi = grid[(kbest + 1).min(LAMBDA_GRID - 1)].0;
    let polished = golden_section(|l| score(along(l).0), lo, hi, 1e-13);
    let lambda_opt = if polished.value < score(grid[kbest].1) {
        polished.x
    } else {
        grid[kbest].0
    };
    let (d_min, w_opt) = along(lambda_opt);
    let povm = BinaryPovm::new(w_opt, lambda_opt, 0.0, 0.0)?;
    let residual = (povm.fisher_information(model) - info).abs();

    let (unrestricted_d_min, unrestricted_povm) = unrestricted_minimum(measure, info, model, lambda_opt);

    Ok(FrontierSolution {
        measure,
        info_target: info,
        d_min,
        lambda_opt,
        w_opt,
        converged: d_min.is_finite() && residual <= 1e-9 * info.max(1e-300),
        residual,
        unrestricted_d_min: Some(unrestricted_d_min),
        unrestricted_povm,
        infinite_candidates,
    })
}

/// Minimum over `(λ, θ)` with `w` solved from the information constraint:
/// a grid scan, then Nelder–Mead from both the grid optimum and the
/// semiclassical optimum.
fn unrestricted_minimum(
    measure: DisturbanceMeasure,
    info: f64,
    model: &ThermalQubit,
    lambda_semiclassical: f64,
) -> (ExtendedReal, Option<BinaryPovm>) {
    let pi = std::f64::consts::PI;
    let povm_at = |x: &[f64]| -> Option<BinaryPovm> {
        let (lambda, theta) = (x[0], x[1]);
        let w = weight_for_info(info, lambda, theta.cos(), model)?;
        BinaryPovm::new(w, lambda, theta, 0.0).ok()
    };
    let objective = |x: &[f64]| -> f64 {
        povm_at(x).map_or(f64::INFINITY, |p| score(disturbance(measure, &p, model)))
    };

    let n = UNRESTRICTED_GRID;
    let cells: Vec<[f64; 2]> = (1..=n)
        .flat_map(|i| (0..=n).map(move |j| [i as f64 / n as f64, pi * j as f64 / n as f64]))
        .collect();
    let values: Vec<f64> = cells.iter().map(|x| objective(x)).collect();
    let mut starts = vec![vec![lambda_semiclassical, 0.0]];
    if let Some((k, _)) = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
    {
        starts.push(cells[k].to_vec());
    }

    let mut best: (f64, Option<BinaryPovm>) = (f64::INFINITY, None);
    for start in starts {
        let m = nelder_mead_box(objective, &start, &[0.0, 0.0], &[1.0, pi], 0.05, 1e-16, 400);
        let v0 = objective(&start);
        let (x, v) = if m.value <= v0 { (m.x, m.value) } else { (start, v0) };
        if v < best.0 {
            best = (v, povm_at(&x));
        }
    }
    (ExtendedReal::from_f64(best.0), best.1)
}

/// Maximal disturbance at fixed extracted information.
pub fn max_disturbance_given_info(
    measure: DisturbanceMeasure,
    info: f64,
    model: &ThermalQubit,
) -> Result<Extremal> {
    check_target(info, model)?;
    extremal_disturbance(
        &ExtremalQuery {
            measure,
            constrained: Constrained::Info,
            value: info,
            bound: Bound::Max,
        },
        model,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disturbance::delta_disturbance;
    use proptest::prelude::*;
    use rand::Rng;

    fn unit_model() -> ThermalQubit {
        ThermalQubit::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn kappa_endpoints() {
        let m = unit_model();
        assert_eq!(kappa(0.0, &m).unwrap(), 1.0);
        assert_eq!(kappa(1.0, &m).unwrap(), 0.0);
        assert!(kappa(1.2, &m).is_err());
    }

    #[test]
    fn kappa_is_the_info_to_delta_ratio() {
        let m = unit_model();
        let k = kappa(0.6, &m).unwrap();
        let mut rng = point_rng(11, 0);
        for _ in 0..100 {
            let p = BinaryPovm::new(0.5 * (1.0 - rng.random::<f64>()), rng.random(), 0.6f64.asin(), 0.0).unwrap();
            let d = delta_disturbance(&p, &m);
            if d > 0.0 {
                assert!((p.fisher_information(&m) / d - k).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn region_rejects_empty_and_is_deterministic() {
        let m = unit_model();
        assert!(sample_region(DisturbanceMeasure::Delta, 0, 1, &m).is_err());
        let a = sample_region(DisturbanceMeasure::F, 10, 42, &m).unwrap();
        let b = sample_region(DisturbanceMeasure::F, 10, 42, &m).unwrap();
        assert_eq!(a, b);
        let c = sample_region(DisturbanceMeasure::F, 10, 43, &m).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn delta_region_lies_in_the_triangle() {
        let m = unit_model();
        for p in sample_region(DisturbanceMeasure::Delta, 2000, 3, &m).unwrap() {
            let d = p.disturbance.finite().unwrap();
            assert!(p.info <= d * (1.0 + 1e-12) && d <= m.qfi() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn weight_inversion_reproduces_information() {
        let m = ThermalQubit::new(1.4, 0.9).unwrap();
        let info = 0.3 * m.qfi();
        for (l, t) in [(0.9, 0.0), (1.0, 0.3), (0.95, 2.9)] {
            let w = weight_for_info(info, l, f64::cos(t), &m).unwrap();
            let p = BinaryPovm::new(w, l, t, 0.0).unwrap();
            assert!((p.fisher_information(&m) - info).abs() < 1e-14 * m.qfi().max(1.0));
        }
        let lmin = lambda_min(info, &m);
        let p = BinaryPovm::new(0.5, lmin, 0.0, 0.0).unwrap();
        assert!((p.fisher_information(&m) - info).abs() < 1e-14);
        assert!(weight_for_info(info, 0.5 * lmin, 1.0, &m).is_none());
    }

    #[test]
    fn delta_frontier_is_the_diagonal() {
        let m = unit_model();
        let s = efficient_frontier(DisturbanceMeasure::Delta, 0.1 * m.qfi(), &m).unwrap();
        assert_eq!(s.d_min, ExtendedReal::Finite(0.1 * m.qfi()));
        assert!(s.converged);
    }

    #[test]
    fn infeasible_targets() {
        let m = unit_model();
        for t in [0.0, -1.0, m.qfi(), 2.0 * m.qfi()] {
            assert!(matches!(
                efficient_frontier(DisturbanceMeasure::F, t, &m),
                Err(Error::Infeasible { .. })
            ));
        }
    }

    #[test]
    fn f_frontier_vanishes_with_information_and_is_monotone() {
        let m = unit_model();
        let small = efficient_frontier(DisturbanceMeasure::F, 1e-6 * m.qfi(), &m).unwrap();
        assert!(small.d_min.finite().unwrap() < 1e-5);
        let mut last = 0.0;
        for k in 1..=10 {
            let s = efficient_frontier(DisturbanceMeasure::F, m.qfi() * k as f64 / 11.0, &m).unwrap();
            let d = s.d_min.finite().unwrap();
            assert!(d >= last - 1e-12);
            assert!(s.converged);
            assert!(s.unrestricted_gain() <= 1e-8);
            last = d;
        }
    }

    #[test]
    fn tau_frontier_excludes_divergent_candidates() {
        let m = unit_model();
        let s = efficient_frontier(DisturbanceMeasure::Tau, 0.4 * m.qfi(), &m).unwrap();
        assert!(s.d_min.is_finite());
        assert!(s.infinite_candidates >= 1);
    }

    #[test]
    fn off_axis_povms_can_beat_theta_zero() {
        let m = unit_model();
        let cases = [
            (DisturbanceMeasure::Tau, 0.925, 1.0, 2.9),
            (DisturbanceMeasure::Pi, 0.005, 0.9801374782251497, 1.7088379646207528),
        ];
        for (measure, fraction, lambda, theta) in cases {
            let info = fraction * m.qfi();
            let s = efficient_frontier(measure, info, &m).unwrap();
            let w = weight_for_info(info, lambda, f64::cos(theta), &m).unwrap();
            let p = BinaryPovm::new(w, lambda, theta, 0.0).unwrap();
            let off_axis = disturbance(measure, &p, &m).finite().unwrap();
            assert!(off_axis < s.d_min.finite().unwrap() - 1e-4, "{measure}: {off_axis} vs {}", s.d_min);
            assert!(s.unrestricted_gain() > 1e-4);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn region_points_dominate_frontier(seed in 0u64..1000) {
            let m = unit_model();
            for p in sample_region(DisturbanceMeasure::F, 4, seed, &m).unwrap() {
                if p.info > 1e-4 * m.qfi() && p.info < 0.999 * m.qfi() {
                    let f = efficient_frontier(DisturbanceMeasure::F, p.info, &m).unwrap();
                    prop_assert!(p.disturbance >= ExtendedReal::Finite(f.d_min.finite().unwrap() - 1e-6));
                }
            }
        }
    }
}
