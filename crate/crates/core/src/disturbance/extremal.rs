//! Extremal disturbance at fixed non-commutativity `χ`, purity `γ`, or
//! extracted information.
//!
//! Supported queries (anything else is [`Error::UnsupportedQuery`]):
//!
//! | measure | min χ | max χ | min γ | max γ | min info | max info |
//! |---|---|---|---|---|---|---|
//! | Δ | 0 | `F^Q` | 0 for γ ≤ 1/2, closed form above | `F_max(γ)` | info | `F^Q` |
//! | F | 0 | closed form | 0 / closed form | closed form | – | closed form |
//! | τ | 0 | closed form | 0 / named POVM | +∞ | – | +∞ |
//! | π | 0 | closed form | 0 / numeric | numeric | – | projective maximum |
//!
//! Minimum-at-fixed-information queries for F, τ and π are answered by
//! [`crate::frontier::efficient_frontier`]. The `min χ` infimum is approached
//! by weak measurements (`λ → 0`) and carries no POVM.
//!
//! The τ / min / γ entry is the τ-disturbance of the nonclassical POVM
//! `w = 1/2`, `θ = π/2`, `λ = √(2γ − 1)`,
//! `(1/δ)|βδ − log(L₊/L₋)|` with `L± = 1 ± √(2 − 2γ) tanh(βδ/2)`; it bounds
//! the minimum from above and is not the global minimum over the γ surface.

use std::f64::consts::FRAC_PI_2;

use super::{delta_disturbance, f_disturbance, pi_disturbance, tau_disturbance, DisturbanceMeasure};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::optimize::nelder_mead_box;
use crate::povm::BinaryPovm;
use crate::thermal::{sech, ThermalQubit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constrained {
    Chi,
    Gamma,
    Info,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalQuery {
    pub measure: DisturbanceMeasure,
    pub constrained: Constrained,
    pub value: f64,
    pub bound: Bound,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremal {
    pub value: ExtendedReal,
    pub povm: Option<BinaryPovm>,
}

impl Extremal {
    fn at(povm: BinaryPovm, value: impl Into<ExtendedReal>) -> Self {
        Self {
            value: value.into(),
            povm: Some(povm),
        }
    }
}

fn validate(q: &ExtremalQuery, model: &ThermalQubit) -> Result<()> {
    let v = q.value;
    match q.constrained {
        Constrained::Chi if !(0.0..=1.0).contains(&v) => Err(Error::OutOfRange {
            what: "chi",
            value: v,
            range: "[0, 1]",
        }),
        Constrained::Gamma if !(v > 0.0 && v <= 1.0) => Err(Error::OutOfRange {
            what: "gamma",
            value: v,
            range: "(0, 1]",
        }),
        Constrained::Info if !(v > 0.0 && v < model.qfi()) => Err(Error::Infeasible {
            target: v,
            qfi: model.qfi(),
        }),
        _ => Ok(()),
    }
}

fn unsupported(q: &ExtremalQuery) -> Error {
    let what = match (q.constrained, q.bound) {
        (Constrained::Info, Bound::Min) => "use the efficient frontier for minima at fixed information",
        _ => "no bound is available",
    };
    Error::UnsupportedQuery(format!(
        "{} / {:?} / {:?}: {what}",
        q.measure, q.bound, q.constrained
    ))
}

fn projective_at_chi(chi: f64) -> Result<BinaryPovm> {
    BinaryPovm::new(0.5, 1.0, chi.asin(), 0.0)
}

/// Uninformative POVM of purity `γ ≤ 1/2`.
fn uninformative_at_gamma(gamma: f64) -> Result<BinaryPovm> {
    BinaryPovm::new((0.5 * gamma).sqrt(), 0.0, 0.0, 0.0)
}

/// `(w = 1/2, λ = √(2γ−1), θ)` for `γ > 1/2`.
fn balanced_at_gamma(gamma: f64, theta: f64) -> Result<BinaryPovm> {
    BinaryPovm::new(0.5, (2.0 * gamma - 1.0).max(0.0).sqrt(), theta, 0.0)
}

fn semiclassical_at_gamma(gamma: f64) -> Result<BinaryPovm> {
    BinaryPovm::new(0.5 * gamma.sqrt(), 1.0, 0.0, 0.0)
}

/// `|cos θ|` of the projective POVM extracting `info`: solving the Fisher
/// information at `w = 1/2, λ = 1` gives `c² = 4F/(δ² sech⁴ + 4F tanh²)`.
/// The same expression is `λ²` of the `w = 1/2, θ = 0` POVM.
pub(crate) fn balanced_parameter_for_info(info: f64, model: &ThermalQubit) -> f64 {
    let s2 = sech(model.half_gap()).powi(2);
    let t = model.polarization();
    let d2 = model.delta() * model.delta();
    (4.0 * info / (d2 * s2 * s2 + 4.0 * info * t * t)).sqrt().min(1.0)
}

/// `w = (1+e)³F / (2[(1+e)²F + δ²e²])`, `e = e^{βδ}`: the weight at which the
/// `λ = 1, θ = 0` POVM extracts information `F`.
pub(crate) fn divergent_weight(info: f64, model: &ThermalQubit) -> f64 {
    let e = (model.beta() * model.delta()).exp();
    let d2 = model.delta() * model.delta();
    let a = 1.0 + e;
    a * a * a * info / (2.0 * (a * a * info + d2 * e * e))
}

/// Feasible `w` range on the purity surface `2(1 + λ²)w² = γ`.
pub(crate) fn gamma_weight_range(gamma: f64) -> (f64, f64) {
    (0.5 * gamma.sqrt(), (0.5 * gamma).sqrt().min(0.5))
}

/// POVM on the purity surface with the given `w`.
pub(crate) fn povm_on_gamma(gamma: f64, w: f64, theta: f64) -> Result<BinaryPovm> {
    let l2 = gamma / (2.0 * w * w) - 1.0;
    BinaryPovm::new(w, l2.clamp(0.0, 1.0).sqrt(), theta, 0.0)
}

/// Grid scan plus Nelder–Mead polish of the π-disturbance on a purity surface.
fn pi_on_gamma(gamma: f64, bound: Bound, model: &ThermalQubit) -> Result<Extremal> {
    let sign = match bound {
        Bound::Min => 1.0,
        Bound::Max => -1.0,
    };
    let (lo, hi) = gamma_weight_range(gamma);
    let theta_max = std::f64::consts::PI;
    let eval = |x: &[f64]| -> f64 {
        match povm_on_gamma(gamma, x[0], x[1]) {
            Ok(p) => sign * pi_disturbance(&p, model),
            Err(_) => f64::INFINITY,
        }
    };
    let n = 48;
    let mut best = (f64::INFINITY, [lo, 0.0]);
    for i in 0..=n {
        let w = lo + (hi - lo) * i as f64 / n as f64;
        for j in 0..=n {
            let theta = theta_max * j as f64 / n as f64;
            let v = eval(&[w, theta]);
            if v < best.0 {
                best = (v, [w, theta]);
            }
        }
    }
    let polished = nelder_mead_box(eval, &best.1, &[lo, 0.0], &[hi, theta_max], 0.02, 1e-15, 400);
    let x = if polished.value <= best.0 { polished.x } else { best.1.to_vec() };
    let povm = povm_on_gamma(gamma, x[0], x[1])?;
    Ok(Extremal::at(povm, pi_disturbance(&povm, model)))
}

pub fn extremal_disturbance(q: &ExtremalQuery, model: &ThermalQubit) -> Result<Extremal> {
    use Bound::*;
    use Constrained::*;
    use DisturbanceMeasure::*;

    validate(q, model)?;
    let v = q.value;
    let weak_limit = Extremal {
        value: ExtendedReal::ZERO,
        povm: None,
    };

    Ok(match (q.measure, q.constrained, q.bound) {
        (_, Chi, Min) => weak_limit,
        (_, Gamma, Min) if v <= 0.5 => Extremal::at(uninformative_at_gamma(v)?, 0.0),

        (Delta, Chi, Max) => {
            let p = projective_at_chi(v)?;
            Extremal::at(p, delta_disturbance(&p, model))
        }
        (Delta, Gamma, Min) => {
            let p = balanced_at_gamma(v, 0.0)?;
            Extremal::at(p, delta_disturbance(&p, model))
        }
        (Delta, Gamma, Max) => {
            let p = semiclassical_at_gamma(v)?;
            Extremal::at(p, delta_disturbance(&p, model))
        }
        (Delta, Info, Min) => {
            let lambda = balanced_parameter_for_info(v, model);
            Extremal::at(BinaryPovm::new(0.5, lambda, 0.0, 0.0)?, v)
        }
        (Delta, Info, Max) => {
            let c = balanced_parameter_for_info(v, model);
            Extremal::at(BinaryPovm::new(0.5, 1.0, c.acos(), 0.0)?, model.qfi())
        }

        (F, Chi, Max) => {
            let p = projective_at_chi(v)?;
            Extremal::at(p, f_disturbance(&p, model))
        }
        (F, Gamma, Min) => {
            let p = balanced_at_gamma(v, 0.0)?;
            Extremal::at(p, f_disturbance(&p, model))
        }
        (F, Gamma, Max) => {
            let p = BinaryPovm::new(0.5 * v.sqrt(), 1.0, FRAC_PI_2, 0.0)?;
            Extremal::at(p, f_disturbance(&p, model))
        }
        (F, Info, Max) => {
            let c = balanced_parameter_for_info(v, model);
            let p = BinaryPovm::new(0.5, 1.0, c.acos(), 0.0)?;
            Extremal::at(p, f_disturbance(&p, model))
        }

        (Tau, Chi, Max) => {
            let p = projective_at_chi(v)?;
            Extremal::at(p, tau_disturbance(&p, model))
        }
        (Tau, Gamma, Min) => {
            let p = balanced_at_gamma(v, FRAC_PI_2)?;
            Extremal::at(p, tau_disturbance(&p, model))
        }
        (Tau, Gamma, Max) => Extremal::at(semiclassical_at_gamma(v)?, ExtendedReal::PosInf),
        (Tau, Info, Max) => {
            let p = BinaryPovm::new(divergent_weight(v, model), 1.0, 0.0, 0.0)?;
            Extremal::at(p, ExtendedReal::PosInf)
        }

        (Pi, Chi, Max) => {
            // The closed form is continuous at χ = 1; the equatorial pure
            // post-states themselves project to η = 0.
            let p = projective_at_chi(v)?;
            Extremal::at(p, projective_pi(p.cos_theta(), model))
        }
        (Pi, Gamma, bound) => pi_on_gamma(v, bound, model)?,
        (Pi, Info, Max) => {
            let c = balanced_parameter_for_info(v, model);
            let candidates = [
                BinaryPovm::new(0.5, 1.0, c.acos(), 0.0)?,
                BinaryPovm::new(0.5, 1.0, (-c).acos(), 0.0)?,
            ];
            let scored = candidates.map(|p| (pi_disturbance(&p, model), p));
            let (value, p) = if scored[1].0 > scored[0].0 { scored[1] } else { scored[0] };
            Extremal::at(p, value)
        }

        _ => return Err(unsupported(q)),
    })
}

/// `(1/2)[P⁰₋P₊ + P⁰₊P₋]` with `P⁰± = 1 ± |cosθ| tanh(βδ/2)` and
/// `P± = log(1 + e^{±βδ})`: the π-disturbance of a projective POVM. The
/// sign of `cos θ` only relabels the outcomes.
pub fn projective_pi(cos_theta: f64, model: &ThermalQubit) -> f64 {
    let x = model.beta() * model.delta();
    let t = model.polarization();
    let cos_theta = cos_theta.abs();
    let (pp, pm) = (crate::thermal::softplus(x), crate::thermal::softplus(-x));
    0.5 * ((1.0 - cos_theta * t) * pp + (1.0 + cos_theta * t) * pm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(measure: DisturbanceMeasure, constrained: Constrained, value: f64, bound: Bound) -> ExtremalQuery {
        ExtremalQuery {
            measure,
            constrained,
            value,
            bound,
        }
    }

    fn finite(e: &Extremal) -> f64 {
        e.value.finite().unwrap()
    }

    #[test]
    fn delta_examples() {
        let m = ThermalQubit::new(1.0, 1.0).unwrap();
        let e = extremal_disturbance(&query(DisturbanceMeasure::Delta, Constrained::Chi, 0.5, Bound::Max), &m).unwrap();
        assert!((finite(&e) - m.qfi()).abs() < 1e-15);
        let e = extremal_disturbance(&query(DisturbanceMeasure::Delta, Constrained::Gamma, 0.3, Bound::Min), &m).unwrap();
        assert_eq!(e.value, ExtendedReal::ZERO);
        let p = e.povm.unwrap();
        assert!((p.characterize().gamma - 0.3).abs() < 1e-15);
    }

    #[test]
    fn f_min_gamma_example() {
        let m = ThermalQubit::new(1.0, 1.0).unwrap();
        let e = extremal_disturbance(&query(DisturbanceMeasure::F, Constrained::Gamma, 0.8, Bound::Min), &m).unwrap();
        let expected = (1.0 - 0.4f64.sqrt()) / (1.0 + 1.0f64.cosh());
        assert!((finite(&e) - expected).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_at_general_temperature() {
        for (b, d) in [(1.0, 1.0), (0.6, 2.0), (2.5, 0.8)] {
            let m = ThermalQubit::new(b, d).unwrap();
            let cc = (b * d).cosh();
            let t = m.polarization();
            let s2 = sech(m.half_gap()).powi(2);
            for k in 1..10 {
                let chi = k as f64 / 10.0;
                let c = (1.0 - chi * chi).sqrt();
                let get = |measure, constrained, bound, value| {
                    extremal_disturbance(&query(measure, constrained, value, bound), &m).unwrap()
                };

                let f = get(DisturbanceMeasure::F, Constrained::Chi, Bound::Max, chi);
                let expected = (2.0 - chi * chi + chi * chi * cc) / (2.0 + 2.0 * cc);
                assert!((finite(&f) - expected).abs() < 1e-14);

                let tau = get(DisturbanceMeasure::Tau, Constrained::Chi, Bound::Max, chi);
                let lg = ((1.0 - c) / (1.0 + c)).ln() / (b * d);
                let (hm, hp) = ((1.0 - lg).abs(), (1.0 + lg).abs());
                let expected = 0.5 * b * (hm * (1.0 - c * t) + hp * (1.0 + c * t));
                assert!((finite(&tau) - expected).abs() < 1e-12, "{} vs {expected}", finite(&tau));

                let gamma = 0.5 + 0.05 * k as f64;
                let dd = get(DisturbanceMeasure::Delta, Constrained::Gamma, Bound::Min, gamma);
                let expected = d * d * (2.0 * gamma - 1.0) * s2 / (4.0 * (gamma + cc - gamma * cc));
                assert!((finite(&dd) - expected).abs() < 1e-14);

                let fmax = get(DisturbanceMeasure::F, Constrained::Gamma, Bound::Max, gamma);
                assert!((finite(&fmax) - 0.5 * (1.0 - (1.0 - gamma.sqrt()).sqrt())).abs() < 1e-14);

                let tmin = get(DisturbanceMeasure::Tau, Constrained::Gamma, Bound::Min, gamma);
                let r = (2.0 - 2.0 * gamma).sqrt() * t;
                let expected = (b * d - ((1.0 + r) / (1.0 - r)).ln()).abs() / d;
                assert!((finite(&tmin) - expected).abs() < 1e-12);

                let info = m.qfi() * chi;
                let fi = get(DisturbanceMeasure::F, Constrained::Info, Bound::Max, info);
                let expected = d * d / (2.0 * d * d - info + info * (2.0 * b * d).cosh());
                assert!((finite(&fi) - expected).abs() < 1e-12);
                assert!((fi.povm.unwrap().fisher_information(&m) - info).abs() < 1e-14);

                let tw = get(DisturbanceMeasure::Tau, Constrained::Info, Bound::Max, info);
                assert_eq!(tw.value, ExtendedReal::PosInf);
                assert!((tw.povm.unwrap().fisher_information(&m) - info).abs() < 1e-12 * m.qfi());
            }
        }
    }

    #[test]
    fn pi_max_chi_matches_projective_pipeline_off_equator() {
        let m = ThermalQubit::new(1.0, 1.0).unwrap();
        for chi in [0.0, 0.2, 0.7, 0.99] {
            let e = extremal_disturbance(&query(DisturbanceMeasure::Pi, Constrained::Chi, chi, Bound::Max), &m)
                .unwrap();
            let direct = pi_disturbance(&e.povm.unwrap(), &m);
            assert!((finite(&e) - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn pi_on_gamma_surface_is_small_but_positive() {
        let m = ThermalQubit::new(1.0, 1.0).unwrap();
        let e = extremal_disturbance(&query(DisturbanceMeasure::Pi, Constrained::Gamma, 0.8, Bound::Min), &m).unwrap();
        let v = finite(&e);
        assert!(v > 0.0 && v < 1e-2, "{v}");
        assert!((e.povm.unwrap().characterize().gamma - 0.8).abs() < 1e-12);
        let hi = extremal_disturbance(&query(DisturbanceMeasure::Pi, Constrained::Gamma, 0.8, Bound::Max), &m).unwrap();
        assert!(finite(&hi) > v);
    }

    #[test]
    fn unsupported_and_invalid_queries() {
        let m = ThermalQubit::new(1.0, 1.0).unwrap();
        for k in [DisturbanceMeasure::F, DisturbanceMeasure::Tau, DisturbanceMeasure::Pi] {
            assert!(matches!(
                extremal_disturbance(&query(k, Constrained::Info, 0.05, Bound::Min), &m),
                Err(Error::UnsupportedQuery(_))
            ));
        }
        assert!(matches!(
            extremal_disturbance(&query(DisturbanceMeasure::F, Constrained::Chi, 1.5, Bound::Max), &m),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            extremal_disturbance(&query(DisturbanceMeasure::Delta, Constrained::Info, 1.0, Bound::Max), &m),
            Err(Error::Infeasible { .. })
        ));
    }
}
