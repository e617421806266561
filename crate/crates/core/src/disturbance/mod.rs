//! The four disturbance measures of a binary POVM on the thermal qubit.
//!
//! - `Δ`: average loss of quantum Fisher information,
//!   `F^Q(ρ_β) − Σ_x p_x F^Q(ρ_{β|x})`.
//! - `F`: average fidelity deficit, `1 − Σ_x p_x F²(ρ_β, ρ_{β|x})`.
//! - `τ`: average spectral-temperature shift, `Σ_x p_x |β − τ(ρ_{β|x})|`.
//! - `π`: average relative entropy between the thermal I-projection of each
//!   conditional state and `ρ_β`.

pub mod extremal;

pub use extremal::{extremal_disturbance, Bound, Constrained, Extremal, ExtremalQuery};

use std::fmt;
use std::str::FromStr;

use crate::bloch::{fidelity, DensityMatrix, TOL};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::optimize::{bisect, scan_then_golden};
use crate::povm::{BinaryPovm, Outcome};
use crate::thermal::{sech, softplus, spectral_temperature, thermal_relative_entropy, ThermalQubit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DisturbanceMeasure {
    Delta,
    F,
    Tau,
    Pi,
}

impl DisturbanceMeasure {
    pub const ALL: [DisturbanceMeasure; 4] = [
        DisturbanceMeasure::Delta,
        DisturbanceMeasure::F,
        DisturbanceMeasure::Tau,
        DisturbanceMeasure::Pi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DisturbanceMeasure::Delta => "delta",
            DisturbanceMeasure::F => "f",
            DisturbanceMeasure::Tau => "tau",
            DisturbanceMeasure::Pi => "pi",
        }
    }
}

impl fmt::Display for DisturbanceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DisturbanceMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "delta" => Ok(DisturbanceMeasure::Delta),
            "f" => Ok(DisturbanceMeasure::F),
            "tau" => Ok(DisturbanceMeasure::Tau),
            "pi" => Ok(DisturbanceMeasure::Pi),
            other => Err(Error::InvalidConfig(format!(
                "unknown measure '{other}' (expected delta, f, tau or pi)"
            ))),
        }
    }
}

pub fn disturbance(measure: DisturbanceMeasure, povm: &BinaryPovm, model: &ThermalQubit) -> ExtendedReal {
    match measure {
        DisturbanceMeasure::Delta => ExtendedReal::Finite(delta_disturbance(povm, model)),
        DisturbanceMeasure::F => ExtendedReal::Finite(f_disturbance(povm, model)),
        DisturbanceMeasure::Tau => tau_disturbance(povm, model),
        DisturbanceMeasure::Pi => ExtendedReal::Finite(pi_disturbance(povm, model)),
    }
}

/// QFI of the conditional state `ρ_{β|x}` with `K± = 1 ± λ cosθ`:
///
/// - outcome 0: `δ²(1−λ²)e^{βδ} / (K₊ + e^{βδ}K₋)²`
/// - outcome 1: `δ²[(1−w)² − λ²w²]e^{βδ} / [1 − wK₊ + e^{βδ}(1 − wK₋)]²`
///
/// Both are evaluated after dividing through by `e^{2βδ}`. On the cone
/// surface `λ = 1` outcome 0 leaves a pure, `β`-independent state.
pub fn conditional_qfi(povm: &BinaryPovm, model: &ThermalQubit, outcome: Outcome) -> f64 {
    let (w, l, c) = (povm.w(), povm.lambda(), povm.cos_theta());
    let d2 = model.delta() * model.delta();
    let u = (-model.beta() * model.delta()).exp();
    let (kp, km) = (1.0 + l * c, 1.0 - l * c);
    let value = match outcome {
        Outcome::Zero => {
            if l >= 1.0 - TOL {
                return 0.0;
            }
            d2 * (1.0 - l * l) * u / (u * kp + km).powi(2)
        }
        Outcome::One => {
            let num = (1.0 - w - l * w) * (1.0 - w + l * w);
            if num <= 0.0 {
                return 0.0;
            }
            d2 * num * u / (u * (1.0 - w * kp) + (1.0 - w * km)).powi(2)
        }
    };
    value.max(0.0)
}

/// `Δ`-disturbance as the QFI balance over the conditional states. Loses
/// relative precision for weak measurements; see [`delta_disturbance`].
pub fn delta_disturbance_from_conditional(povm: &BinaryPovm, model: &ThermalQubit) -> f64 {
    let [p0, p1] = povm.outcome_probabilities(model);
    let lost = p0 * conditional_qfi(povm, model, Outcome::Zero)
        + p1 * conditional_qfi(povm, model, Outcome::One);
    (model.qfi() - lost).max(0.0)
}

/// `Δ`-disturbance, in the cancellation-free product form
/// `δ²λ²w sech⁴(βδ/2)(1 + cos²θ + sin²θ cosh βδ) / (8Q(1 − wQ))`,
/// `Q = 1 − λ cosθ tanh(βδ/2)`.
pub fn delta_disturbance(povm: &BinaryPovm, model: &ThermalQubit) -> f64 {
    let l = povm.lambda();
    if l == 0.0 {
        return 0.0;
    }
    let (c, s) = (povm.cos_theta(), povm.sin_theta());
    let s2 = sech(model.half_gap()).powi(2);
    // sech⁴(x)·cosh(2x) = 2sech²(x) − sech⁴(x)
    let angular = s2 * s2 * (1.0 + c * c) + s * s * (2.0 * s2 - s2 * s2);
    let q = 1.0 - l * c * model.polarization();
    let w = povm.w();
    let d = model.delta();
    (d * d * l * l * w * angular / (8.0 * q * (1.0 - w * q))).max(0.0)
}

/// `F`-disturbance in closed form,
/// `(1 + cos²θ + sin²θ cosh βδ)/(2(1 + cosh βδ)) · [1 − w√(1−λ²) − √((1−w)² − w²λ²)]`,
/// with the bracket rearranged to avoid cancellation at small `λ`.
pub fn f_disturbance(povm: &BinaryPovm, model: &ThermalQubit) -> f64 {
    let (w, l) = (povm.w(), povm.lambda());
    if l == 0.0 {
        return 0.0;
    }
    let (c, s) = (povm.cos_theta(), povm.sin_theta());
    let s2 = sech(model.half_gap()).powi(2);
    let prefactor = 0.25 * (1.0 + c * c) * s2 + s * s * (0.5 - 0.25 * s2);
    let l2 = l * l;
    let v = 1.0 - w;
    let bracket = w * l2 / (1.0 + (1.0 - l2).sqrt())
        + w * w * l2 / (v + (v * v - w * w * l2).max(0.0).sqrt());
    (prefactor * bracket).clamp(0.0, 1.0)
}

/// `F`-disturbance computed from its definition with explicit Lüders
/// updates and Uhlmann fidelities.
pub fn f_disturbance_definitional(povm: &BinaryPovm, model: &ThermalQubit) -> f64 {
    let rho = model.equilibrium_state();
    let probabilities = povm.outcome_probabilities(model);
    let mut kept = 0.0;
    for o in Outcome::BOTH {
        if let Ok(post) = povm.post_measurement_state(model, o) {
            kept += probabilities[o.index()] * fidelity(&rho, &post).powi(2);
        }
    }
    (1.0 - kept).max(0.0)
}

/// Spectral temperature of the conditional state for outcome `x`; `None`
/// when the outcome has probability exactly zero.
pub fn conditional_temperature(
    povm: &BinaryPovm,
    model: &ThermalQubit,
    outcome: Outcome,
) -> Option<ExtendedReal> {
    let (g, e) = povm.unnormalised_populations(model, outcome).ok()?;
    let total = g + e;
    if !(total > 0.0) {
        return None;
    }
    spectral_temperature(&[g / total, e / total], &model.energies()).ok()
}

/// `τ`-disturbance; `+∞` when an outcome of nonzero probability leaves an
/// energy eigenstate behind.
pub fn tau_disturbance(povm: &BinaryPovm, model: &ThermalQubit) -> ExtendedReal {
    let probabilities = povm.outcome_probabilities(model);
    let mut total = ExtendedReal::ZERO;
    for o in Outcome::BOTH {
        let Some(tau) = conditional_temperature(povm, model, o) else {
            continue;
        };
        let shift = tau.subtracted_from(model.beta()).abs();
        total = total
            .checked_add(shift.weighted(probabilities[o.index()]))
            .expect("absolute shifts are never -inf");
    }
    total
}

/// Result of projecting a state onto the thermal family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IProjection {
    pub eta: ExtendedReal,
    /// `dD(ρ_η‖σ)/dη` at the returned point; zero for the pure-state limits.
    pub gradient: f64,
    /// The minimiser sits on the edge of the search window.
    pub at_bound: bool,
}

/// `D(ρ_η ‖ σ)` for full-rank `σ`, together with its `η`-derivative.
struct ProjectionObjective {
    delta: f64,
    /// `log σ = l0·I + l·σ`; only `l0` and `l_z` enter.
    l0: f64,
    lz: f64,
}

impl ProjectionObjective {
    fn new(sigma: &DensityMatrix, delta: f64) -> Self {
        let e = sigma.eigen_decompose();
        let (lu, ll) = (e.upper.ln(), e.lower.ln());
        Self {
            delta,
            l0: 0.5 * (lu + ll),
            lz: 0.5 * (lu - ll) * e.axis[2],
        }
    }

    fn value(&self, eta: f64) -> f64 {
        let y = eta * self.delta;
        let (lg, le) = (-softplus(-y), -softplus(y));
        let (pg, pe) = (lg.exp(), le.exp());
        let neg_entropy = pg * lg + pe * le;
        neg_entropy - (self.l0 + self.lz * (pe - pg))
    }

    fn gradient(&self, eta: f64) -> f64 {
        // d/dt of the objective is atanh(t) − l_z with t = −tanh(ηδ/2)
        let s = sech(0.5 * eta * self.delta);
        -0.5 * self.delta * s * s * (-0.5 * eta * self.delta - self.lz)
    }
}

/// Window half-width for the projection search, `50/δ`.
fn eta_window(model: &ThermalQubit) -> f64 {
    50.0 / model.delta()
}

/// Thermal I-projection `argmin_η D(ρ_η ‖ σ)` with diagnostics.
///
/// Full-rank `σ`: a 256-point scan over `[−50/δ, 50/δ]`, golden-section
/// refinement, then bisection on the analytic derivative to `1e-10` in `η`.
/// Pure `σ`: `−sign(σ_z)·∞`, or `0` on the equator.
pub fn i_projection_detailed(sigma: &DensityMatrix, model: &ThermalQubit) -> IProjection {
    if sigma.is_pure() {
        let z = sigma.r[2];
        let eta = if z.abs() <= TOL {
            ExtendedReal::ZERO
        } else if z > 0.0 {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::PosInf
        };
        return IProjection {
            eta,
            gradient: 0.0,
            at_bound: false,
        };
    }
    let objective = ProjectionObjective::new(sigma, model.delta());
    let half = eta_window(model);
    let coarse = scan_then_golden(|eta| objective.value(eta), -half, half, 256, 1e-10 * half);
    // the derivative has the sign of η − η*, so any bracket around the
    // golden-section estimate that is wider than one scan cell contains the root
    let step = (4.0 * coarse.bracket).max(4.0 * half / 255.0);
    let (lo, hi) = ((coarse.x - step).max(-half), (coarse.x + step).min(half));
    let eta = bisect(|eta| objective.gradient(eta), lo, hi, 1e-12).unwrap_or(coarse.x);
    IProjection {
        eta: ExtendedReal::Finite(eta),
        gradient: objective.gradient(eta),
        at_bound: (half - eta.abs()) <= 1e-9 * half,
    }
}

pub fn i_projection(sigma: &DensityMatrix, model: &ThermalQubit) -> ExtendedReal {
    i_projection_detailed(sigma, model).eta
}

/// `π`-disturbance `Σ_x p_x D(ρ_{η*_x} ‖ ρ_β)`.
pub fn pi_disturbance(povm: &BinaryPovm, model: &ThermalQubit) -> f64 {
    if povm.lambda() == 0.0 {
        return 0.0;
    }
    let probabilities = povm.outcome_probabilities(model);
    let mut total = 0.0;
    for o in Outcome::BOTH {
        if let Ok(post) = povm.post_measurement_state(model, o) {
            let eta = i_projection(&post, model);
            total += probabilities[o.index()] * thermal_relative_entropy(eta, model);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::quantum_relative_entropy;
    use crate::thermal::gibbs_state;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn unit_model() -> ThermalQubit {
        ThermalQubit::new(1.0, 1.0).unwrap()
    }

    fn povm(w: f64, l: f64, t: f64) -> BinaryPovm {
        BinaryPovm::new(w, l, t, 0.0).unwrap()
    }

    #[test]
    fn measure_names_round_trip() {
        for m in DisturbanceMeasure::ALL {
            assert_eq!(m.to_string().parse::<DisturbanceMeasure>().unwrap(), m);
        }
        assert!("trace".parse::<DisturbanceMeasure>().is_err());
    }

    #[test]
    fn delta_examples() {
        let m = unit_model();
        assert_eq!(delta_disturbance(&povm(0.3, 0.0, 0.0), &m), 0.0);
        for t in [0.0, 0.4, FRAC_PI_2, 2.5, PI] {
            let d = delta_disturbance(&povm(0.5, 1.0, t), &m);
            assert!((d - m.qfi()).abs() < 1e-15, "theta={t}");
            let d = delta_disturbance_from_conditional(&povm(0.5, 1.0, t), &m);
            assert!((d - m.qfi()).abs() < 1e-15, "theta={t}");
        }
    }

    #[test]
    fn f_examples() {
        let m = unit_model();
        assert_eq!(f_disturbance(&povm(0.3, 0.0, 0.0), &m), 0.0);
        assert!((f_disturbance(&povm(0.5, 1.0, FRAC_PI_2), &m) - 0.5).abs() < 1e-15);
        let p = povm(0.4, 0.9, 1.0);
        assert!((f_disturbance(&p, &m) - f_disturbance_definitional(&p, &m)).abs() < 1e-10);
    }

    #[test]
    fn tau_examples() {
        let m = unit_model();
        assert_eq!(tau_disturbance(&povm(0.3, 0.0, 0.0), &m), ExtendedReal::ZERO);
        assert_eq!(tau_disturbance(&povm(0.5, 1.0, 0.0), &m), ExtendedReal::PosInf);
        let t = tau_disturbance(&povm(0.3, 0.5, 0.9), &m);
        assert!(t.is_finite() && t > ExtendedReal::ZERO);
    }

    #[test]
    fn i_projection_examples() {
        let m = unit_model();
        let eta = i_projection(&m.equilibrium_state(), &m).finite().unwrap();
        assert!((eta - 1.0).abs() < 1e-10);
        let excited = DensityMatrix::new([0.0, 0.0, 1.0]).unwrap();
        assert_eq!(i_projection(&excited, &m), ExtendedReal::NegInf);
        let ground = DensityMatrix::new([0.0, 0.0, -1.0]).unwrap();
        assert_eq!(i_projection(&ground, &m), ExtendedReal::PosInf);
        let equator = DensityMatrix::new([1.0, 0.0, 0.0]).unwrap();
        assert_eq!(i_projection(&equator, &m), ExtendedReal::ZERO);
        let eta = i_projection(&DensityMatrix::maximally_mixed(), &m).finite().unwrap();
        assert!(eta.abs() < 1e-10);
    }

    #[test]
    fn i_projection_of_nearly_pure_states_approaches_the_limit() {
        // ε-regularised excited state: η* ≈ −(2/δ) atanh(1 − 2ε) → −∞
        let m = unit_model();
        let mut last = 0.0;
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let sigma = DensityMatrix::new([0.0, 0.0, 1.0 - 2.0 * eps]).unwrap();
            let eta = i_projection(&sigma, &m).finite().unwrap();
            assert!(eta < last);
            last = eta;
            let d = thermal_relative_entropy(ExtendedReal::Finite(eta), &m);
            let limit = thermal_relative_entropy(ExtendedReal::NegInf, &m);
            assert!((d - limit).abs() < 2.0 * eps * (1.0 - eps.ln()));
        }
    }

    #[test]
    fn i_projection_is_stationary() {
        for (r, d) in [([0.3, -0.2, 0.5], 1.0), ([0.0, 0.6, -0.7], 3.0), ([0.05, 0.05, 0.99], 0.2)] {
            let m = ThermalQubit::new(1.0, d).unwrap();
            let sigma = DensityMatrix::new(r).unwrap();
            let p = i_projection_detailed(&sigma, &m);
            assert!(p.gradient.abs() < 1e-8, "gradient {}", p.gradient);
            assert!(!p.at_bound);
        }
    }

    #[test]
    fn pi_examples() {
        let m = unit_model();
        assert_eq!(pi_disturbance(&povm(0.3, 0.0, 0.0), &m), 0.0);
        let t = m.polarization();
        let (pp, pm) = (softplus(1.0), softplus(-1.0));
        for theta in [0.0, 0.3, 1.2, 2.0, PI] {
            // the curve depends on χ = sin θ only, i.e. on |cos θ|
            let c = theta.cos().abs();
            let closed = 0.5 * ((1.0 - c * t) * pp + (1.0 + c * t) * pm);
            let d = pi_disturbance(&povm(0.5, 1.0, theta), &m);
            assert!((d - closed).abs() < 1e-12, "theta={theta}: {d} vs {closed}");
        }
    }

    fn interior_povm() -> impl Strategy<Value = BinaryPovm> {
        (1e-3..=0.5, 0.0..=1.0f64, 0.0..=PI, 0.0..TAU)
            .prop_map(|(w, l, t, p)| BinaryPovm::new(w, l, t, p).unwrap())
    }

    proptest! {
        #[test]
        fn delta_forms_agree(p in interior_povm(), beta in 0.1..5.0f64, delta in 0.2..3.0f64) {
            let m = ThermalQubit::new(beta, delta).unwrap();
            let a = delta_disturbance(&p, &m);
            let b = delta_disturbance_from_conditional(&p, &m);
            prop_assert!((a - b).abs() <= 1e-13 * m.qfi().max(1e-300) + 1e-16);
        }

        #[test]
        fn delta_bracketed_by_info_and_qfi(p in interior_povm(), beta in 0.1..5.0f64) {
            let m = ThermalQubit::new(beta, 1.0).unwrap();
            let d = delta_disturbance(&p, &m);
            prop_assert!(d <= m.qfi() * (1.0 + 1e-12));
            prop_assert!(p.fisher_information(&m) <= d * (1.0 + 1e-12));
        }

        #[test]
        fn f_closed_form_matches_definition(p in interior_povm(), beta in 0.1..5.0f64) {
            let m = ThermalQubit::new(beta, 1.0).unwrap();
            let a = f_disturbance(&p, &m);
            prop_assert!((0.0..=0.5 + 1e-15).contains(&a));
            prop_assert!((a - f_disturbance_definitional(&p, &m)).abs() < 1e-10);
        }

        #[test]
        fn measures_are_phi_invariant(p in interior_povm(), phi in 0.0..TAU) {
            let m = unit_model();
            let q = p.with_phi(phi).unwrap();
            for k in DisturbanceMeasure::ALL {
                match (disturbance(k, &p, &m), disturbance(k, &q, &m)) {
                    (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
                        prop_assert!((a - b).abs() <= 1e-13, "{k}: {a} vs {b}");
                    }
                    (a, b) => prop_assert_eq!(a, b),
                }
            }
        }

        #[test]
        fn uninformative_povms_do_not_disturb(w in 1e-3..=0.5f64, beta in 0.1..5.0f64) {
            let m = ThermalQubit::new(beta, 1.0).unwrap();
            let p = BinaryPovm::new(w, 0.0, 0.0, 0.0).unwrap();
            for k in DisturbanceMeasure::ALL {
                let d = disturbance(k, &p, &m).finite().unwrap();
                prop_assert!(d.abs() <= 1e-12, "{k}: {d}");
            }
        }

        #[test]
        fn i_projection_minimises_relative_entropy(r in prop::array::uniform3(-0.55..0.55f64), delta in 0.3..3.0f64) {
            let m = ThermalQubit::new(1.0, delta).unwrap();
            let sigma = DensityMatrix::new(r).unwrap();
            let eta = i_projection(&sigma, &m).finite().unwrap();
            let at = |e: f64| quantum_relative_entropy(&gibbs_state(ExtendedReal::Finite(e), delta), &sigma).finite().unwrap();
            let best = at(eta);
            for k in -20..=20 {
                prop_assert!(at(eta + 0.05 * k as f64) >= best - 1e-12);
            }
        }
    }
}
