//! Brute-force validators: finite-difference information, exhaustive grid
//! extremisation, a regularised I-projection and a Monte-Carlo
//! Cramér–Rao experiment. These reach the quantities through definitions
//! rather than closed forms.

pub mod dense;
pub mod reference;
pub mod suite;

use rand::distr::{Bernoulli, Distribution};
use rayon::prelude::*;

use crate::bloch::{self, DensityMatrix, Vec3, TOL};
use crate::disturbance::extremal::{gamma_weight_range, povm_on_gamma};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::frontier::point_rng;
use crate::optimize::{bisect, scan_then_golden};
use crate::povm::{BinaryPovm, Outcome, MIN_WEIGHT};
use crate::thermal::{gibbs_state, thermal_relative_entropy, ThermalQubit};

/// Points per axis for [`grid_extremum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSizes {
    pub w: usize,
    pub lambda: usize,
    pub theta: usize,
}

impl GridSizes {
    pub const fn uniform(n: usize) -> Self {
        Self {
            w: n,
            lambda: n,
            theta: n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Finite-difference step, relative to `β`.
    pub fd_step: f64,
    pub grid_sizes: GridSizes,
    pub mc_samples: usize,
    pub mc_trials: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            fd_step: 1e-5,
            grid_sizes: GridSizes::uniform(256),
            mc_samples: 100_000,
            mc_trials: 500,
            seed: 7,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1e-8..=1e-3).contains(&self.fd_step) {
            return Err(Error::InvalidConfig(format!(
                "fd_step = {} must lie in [1e-8, 1e-3]",
                self.fd_step
            )));
        }
        let g = self.grid_sizes;
        let counts = [("grid w", g.w), ("grid lambda", g.lambda), ("grid theta", g.theta)];
        let counts = counts
            .into_iter()
            .chain([("mc_samples", self.mc_samples), ("mc_trials", self.mc_trials)]);
        for (name, n) in counts {
            if n < 2 {
                return Err(Error::InvalidConfig(format!("{name} = {n} must be at least 2")));
            }
        }
        Ok(())
    }
}

/// Richardson combination of two stencils with error `O(h²)`.
fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// `Σ_x p_x (∂_β log p_x)²` by central differences of `log tr(ρ_β Π_x)`.
pub fn fi_finite_difference(povm: &BinaryPovm, model: &ThermalQubit, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    let beta = model.beta();
    let h = cfg.fd_step * beta;
    let prob = |b: f64, o: Outcome| -> Result<f64> {
        let rho = model.with_beta(b)?.equilibrium_state();
        Ok(povm.probability(&rho, o))
    };
    let rho = model.equilibrium_state();
    let mut total = 0.0;
    for o in Outcome::BOTH {
        let p = povm.probability(&rho, o);
        if p <= 10.0 * cfg.fd_step {
            return Err(Error::ZeroProbabilityOutcome {
                outcome: o.index(),
                probability: p,
            });
        }
        let (lo, hi) = (prob(beta - h, o)?, prob(beta + h, o)?);
        let relative_change = (hi - lo).abs() / p;
        if relative_change > 0.1 {
            return Err(Error::StepTooLarge { relative_change });
        }
        let slope = |step: f64| -> Result<f64> {
            Ok((prob(beta + step, o)?.ln() - prob(beta - step, o)?.ln()) / (2.0 * step))
        };
        let d = richardson(slope(h)?, slope(0.5 * h)?);
        total += p * d * d;
    }
    Ok(total)
}

/// Two independent finite-difference QFI estimates along a state curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiEstimate {
    /// Central-difference Bloch derivative fed to [`bloch::bloch_qfi`];
    /// `None` when the state is within `1e-6` of pure.
    pub bloch: Option<f64>,
    /// `8(1 − F(ρ_{β−h}, ρ_{β+h}))/(2h)²`.
    pub fidelity: f64,
}

pub fn qfi_finite_difference(
    curve: impl Fn(f64) -> Result<DensityMatrix>,
    beta: f64,
    cfg: &OracleConfig,
) -> Result<QfiEstimate> {
    cfg.validate()?;
    let h = cfg.fd_step * beta.abs().max(1.0);
    let centre = curve(beta)?;

    let fidelity_route = |step: f64| -> Result<f64> {
        let d = bloch::infidelity(&curve(beta - step)?, &curve(beta + step)?);
        Ok(2.0 * d / (step * step))
    };
    let fidelity = richardson(fidelity_route(h)?, fidelity_route(0.5 * h)?);

    let bloch = if centre.bloch_norm() > 1.0 - 1e-6 {
        None
    } else {
        let slope = |step: f64| -> Result<Vec3> {
            let (lo, hi) = (curve(beta - step)?, curve(beta + step)?);
            Ok(std::array::from_fn(|k| (hi.r[k] - lo.r[k]) / (2.0 * step)))
        };
        let (coarse, fine) = (slope(h)?, slope(0.5 * h)?);
        let dr: Vec3 = std::array::from_fn(|k| richardson(coarse[k], fine[k]));
        Some(bloch::bloch_qfi(&centre.r, &dr)?)
    };
    Ok(QfiEstimate { bloch, fidelity })
}

/// Constraint surface for [`grid_extremum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Manifold {
    Free,
    /// `sin θ = χ`: both branches `θ = asin χ` and `π − asin χ`.
    Chi(f64),
    /// `2(1 + λ²)w² = γ`: `w` on its feasible range, `λ` solved.
    Gamma(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridExtremum {
    pub value: ExtendedReal,
    pub povm: BinaryPovm,
}

/// `n` points from `a` to `b` inclusive.
fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { b } else { a + step * i as f64 })
}

type RowBuilder = Box<dyn Fn(f64) -> Vec<BinaryPovm> + Sync>;

/// Exhaustive scan of `objective` over the conical coordinates restricted
/// to `manifold` (`φ = 0`). Ties resolve to the first grid point in scan
/// order, so the result does not depend on the thread count.
pub fn grid_extremum(
    objective: impl Fn(&BinaryPovm) -> ExtendedReal + Sync,
    manifold: Manifold,
    sense: Sense,
    sizes: GridSizes,
) -> Result<GridExtremum> {
    let check = |name: &str, n: usize| {
        if n < 64 {
            Err(Error::InvalidConfig(format!("{name} grid has {n} points; at least 64 required")))
        } else {
            Ok(())
        }
    };
    let pi = std::f64::consts::PI;
    let (weights, row): (Vec<f64>, RowBuilder) = match manifold {
        Manifold::Free => {
            check("w", sizes.w)?;
            check("lambda", sizes.lambda)?;
            check("theta", sizes.theta)?;
            let row = move |w: f64| {
                linspace(0.0, 1.0, sizes.lambda)
                    .flat_map(|l| linspace(0.0, pi, sizes.theta).map(move |t| (l, t)))
                    .filter_map(|(l, t)| BinaryPovm::new(w, l, t, 0.0).ok())
                    .collect()
            };
            (linspace(MIN_WEIGHT, 0.5, sizes.w).collect(), Box::new(row))
        }
        Manifold::Chi(chi) => {
            if !(0.0..=1.0).contains(&chi) {
                return Err(Error::EmptyFeasibleSet);
            }
            check("w", sizes.w)?;
            check("lambda", sizes.lambda)?;
            let branches = [chi.asin(), pi - chi.asin()];
            let row = move |w: f64| {
                linspace(0.0, 1.0, sizes.lambda)
                    .flat_map(|l| branches.map(|t| (l, t)))
                    .filter_map(|(l, t)| BinaryPovm::new(w, l, t, 0.0).ok())
                    // λ = 0 erases θ and has χ = 0
                    .filter(|p| chi == 0.0 || p.lambda() > 0.0)
                    .collect()
            };
            (linspace(MIN_WEIGHT, 0.5, sizes.w).collect(), Box::new(row))
        }
        Manifold::Gamma(gamma) => {
            if !(gamma > 0.0 && gamma <= 1.0) {
                return Err(Error::EmptyFeasibleSet);
            }
            check("w", sizes.w)?;
            check("theta", sizes.theta)?;
            let (lo, hi) = gamma_weight_range(gamma);
            let row = move |w: f64| {
                linspace(0.0, pi, sizes.theta)
                    .filter_map(|t| povm_on_gamma(gamma, w, t).ok())
                    .collect()
            };
            (linspace(lo, hi, sizes.w).collect(), Box::new(row))
        }
    };

    let better = |a: ExtendedReal, b: ExtendedReal| match sense {
        Sense::Min => a < b,
        Sense::Max => a > b,
    };
    let pick = |best: Option<GridExtremum>, next: GridExtremum| match best {
        Some(b) if !better(next.value, b.value) => Some(b),
        _ => Some(next),
    };
    let row_best: Vec<Option<GridExtremum>> = weights
        .par_iter()
        .map(|&w| {
            row(w)
                .iter()
                .map(|p| GridExtremum {
                    value: objective(p),
                    povm: *p,
                })
                .fold(None, pick)
        })
        .collect();
    row_best
        .into_iter()
        .flatten()
        .fold(None, pick)
        .ok_or(Error::EmptyFeasibleSet)
}

/// `argmin_η D(ρ_η ‖ σ_ε)` with `σ_ε = (1−ε)σ + ε·I/2`, by a dense scan of
/// the relative entropy evaluated with explicit matrix logarithms.
pub fn i_projection_regularized(sigma: &DensityMatrix, model: &ThermalQubit, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            what: "epsilon",
            value: eps,
            range: "(0, 1)",
        });
    }
    let regularized = DensityMatrix::new(bloch::scale(&sigma.r, 1.0 - eps))?;
    let delta = model.delta();
    let half = 60.0 / delta;
    let objective = |eta: f64| {
        let rho = gibbs_state(ExtendedReal::Finite(eta), delta);
        dense::relative_entropy(&rho, &regularized)
    };
    Ok(scan_then_golden(objective, -half, half, 4096, 1e-12 * half).x)
}

/// π-disturbance with every conditional state regularised by `ε`.
pub fn pi_disturbance_regularized(povm: &BinaryPovm, model: &ThermalQubit, eps: f64) -> Result<f64> {
    let probabilities = povm.outcome_probabilities(model);
    let mut total = 0.0;
    for o in Outcome::BOTH {
        if probabilities[o.index()] <= TOL {
            continue;
        }
        let post = povm.post_measurement_state(model, o)?;
        let eta = i_projection_regularized(&post, model, eps)?;
        total += probabilities[o.index()] * thermal_relative_entropy(ExtendedReal::Finite(eta), model);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CramerRaoReport {
    /// Sample variance of the per-trial estimates.
    pub empirical_variance: f64,
    /// `1/(N·F_β)`.
    pub fisher_prediction: f64,
    /// `N·Var(β̂)·F_β`.
    pub ratio: f64,
    /// Trials whose estimate hit the edge of the inversion window.
    pub clamped: usize,
}

/// Repeated maximum-likelihood estimation of `β` from `n_per_trial`
/// simulated outcomes. Trial `k` draws from `point_rng(seed, k)`.
pub fn cramer_rao_mc(
    povm: &BinaryPovm,
    model: &ThermalQubit,
    n_per_trial: usize,
    trials: usize,
    seed: u64,
) -> Result<CramerRaoReport> {
    if povm.lambda() * povm.cos_theta() == 0.0 {
        return Err(Error::NonInvertibleStatistic);
    }
    if n_per_trial < 1000 {
        return Err(Error::InvalidConfig(format!(
            "n_per_trial = {n_per_trial} must be at least 1000"
        )));
    }
    if trials < 2 {
        return Err(Error::InvalidConfig(format!("trials = {trials} must be at least 2")));
    }
    let info = povm.fisher_information(model);
    if info <= 0.0 {
        return Err(Error::NonInvertibleStatistic);
    }
    let p0_at = |b: f64| -> f64 {
        let m = model.with_beta(b).expect("window keeps beta positive");
        povm.outcome_probabilities(&m)[0]
    };
    let (lo, hi) = (1e-4 / model.delta(), 50.0 / model.delta());
    let (p_lo, p_hi) = (p0_at(lo), p0_at(hi));
    let bernoulli = Bernoulli::new(p0_at(model.beta()).clamp(0.0, 1.0))
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let estimates: Vec<(f64, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = point_rng(seed, k);
            let zeros = (0..n_per_trial).filter(|_| bernoulli.sample(&mut rng)).count();
            let freq = zeros as f64 / n_per_trial as f64;
            let (below, above) = (freq - p_lo, freq - p_hi);
            if below * above >= 0.0 {
                // frequency outside the attainable range: take the nearer end
                let at_hi = above.abs() < below.abs();
                return (if at_hi { hi } else { lo }, true);
            }
            let root = bisect(|b| p0_at(b) - freq, lo, hi, 1e-14 * hi).expect("sign change checked");
            (root, false)
        })
        .collect();

    let n = estimates.len() as f64;
    let mean = estimates.iter().map(|e| e.0).sum::<f64>() / n;
    let empirical_variance = estimates.iter().map(|e| (e.0 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let fisher_prediction = 1.0 / (n_per_trial as f64 * info);
    Ok(CramerRaoReport {
        empirical_variance,
        fisher_prediction,
        ratio: empirical_variance / fisher_prediction,
        clamped: estimates.iter().filter(|e| e.1).count(),
    })
}
