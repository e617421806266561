//! Closed-form curves in an alternate parametrisation, used as cross-checks.
//!
//! Several of these scale with `β²` where the library's forms scale with
//! `δ²`; the two coincide at `β = δ = 1`. [`tau_min_gamma`] is half the
//! value attained by the POVM it describes.

use crate::povm::BinaryPovm;
use crate::thermal::ThermalQubit;

fn bd(m: &ThermalQubit) -> (f64, f64, f64) {
    (m.beta(), m.delta(), m.beta() * m.delta())
}

/// `2β²(1−χ²) / (4 − χ² + 4cosh βδ + χ² cosh 2βδ)`.
pub fn info_max_chi(chi: f64, m: &ThermalQubit) -> f64 {
    let (b, _, x) = bd(m);
    let c2 = chi * chi;
    2.0 * b * b * (1.0 - c2) / (4.0 - c2 + 4.0 * x.cosh() + c2 * (2.0 * x).cosh())
}

/// `β²√γ e^{2βδ} / ((1+e^{βδ})²(1+e^{βδ}−√γ))`; also the maximal
/// `Δ`-disturbance at fixed purity.
pub fn info_max_gamma(gamma: f64, m: &ThermalQubit) -> f64 {
    let (b, _, x) = bd(m);
    let (e, g) = (x.exp(), gamma.sqrt());
    b * b * g * e * e / ((1.0 + e).powi(2) * (1.0 + e - g))
}

/// `β²(2γ−1) sech²(βδ/2) / (4(γ + cosh βδ − γ cosh βδ))`.
pub fn delta_min_gamma(gamma: f64, m: &ThermalQubit) -> f64 {
    let (b, _, x) = bd(m);
    let s = 1.0 / (0.5 * x).cosh();
    b * b * (2.0 * gamma - 1.0) * s * s / (4.0 * (gamma + x.cosh() - gamma * x.cosh()))
}

/// `(2 − χ² + χ² cosh βδ) / (2 + 2cosh βδ)`.
pub fn f_max_chi(chi: f64, m: &ThermalQubit) -> f64 {
    let (_, _, x) = bd(m);
    let c2 = chi * chi;
    (2.0 - c2 + c2 * x.cosh()) / (2.0 + 2.0 * x.cosh())
}

/// `(1 − √(1 − √γ))/2`.
pub fn f_max_gamma(gamma: f64) -> f64 {
    0.5 * (1.0 - (1.0 - gamma.sqrt()).sqrt())
}

/// `(1 − √(2 − 2γ)) / (1 + cosh βδ)` for `γ ≥ 1/2`.
pub fn f_min_gamma(gamma: f64, m: &ThermalQubit) -> f64 {
    let (_, _, x) = bd(m);
    (1.0 - (2.0 - 2.0 * gamma).sqrt()) / (1.0 + x.cosh())
}

/// `β²δ² / (2β²δ² − F + F cosh 2βδ)`.
pub fn f_max_info(info: f64, m: &ThermalQubit) -> f64 {
    let (_, _, x) = bd(m);
    x * x / (2.0 * x * x - info + info * (2.0 * x).cosh())
}

/// `(1+e^{βδ})³F / (2[(1+e^{βδ})²F + β²δ²e^{2βδ}])`.
pub fn tau_divergent_weight(info: f64, m: &ThermalQubit) -> f64 {
    let (_, _, x) = bd(m);
    let e = x.exp();
    (1.0 + e).powi(3) * info / (2.0 * ((1.0 + e).powi(2) * info + x * x * e * e))
}

/// `(β/2)(H₋H̃₋ + H₊H̃₊)` with `H± = |1 ± log((1−c)/(1+c))/(βδ)|`,
/// `H̃± = 1 ± c tanh(βδ/2)`, `c = √(1−χ²)`.
pub fn tau_max_chi(chi: f64, m: &ThermalQubit) -> f64 {
    let (b, _, x) = bd(m);
    let c = (1.0 - chi * chi).sqrt();
    let t = (0.5 * x).tanh();
    let l = ((1.0 - c) / (1.0 + c)).ln() / x;
    0.5 * b * ((1.0 - l).abs() * (1.0 - c * t) + (1.0 + l).abs() * (1.0 + c * t))
}

/// `(1/(2δ))|βδ − log(L₊/L₋)|`, `L± = 1 ± √(2−2γ) tanh(βδ/2)`.
pub fn tau_min_gamma(gamma: f64, m: &ThermalQubit) -> f64 {
    let (_, d, x) = bd(m);
    let r = (2.0 - 2.0 * gamma).sqrt() * (0.5 * x).tanh();
    (x - ((1.0 + r) / (1.0 - r)).ln()).abs() / (2.0 * d)
}

/// `(1/2)[P^θ₋P₊ + P^θ₊P₋]`, `P± = log(1 + e^{±βδ})`,
/// `P^θ± = 1 ± cosθ tanh(βδ/2)`. Valid for `θ ≤ π/2`.
pub fn pi_max_chi(cos_theta: f64, m: &ThermalQubit) -> f64 {
    let x = m.beta() * m.delta();
    let t = (0.5 * x).tanh();
    let (pp, pm) = ((1.0 + x.exp()).ln(), (1.0 + (-x).exp()).ln());
    0.5 * ((1.0 - cos_theta * t) * pp + (1.0 + cos_theta * t) * pm)
}

/// Spectral temperatures of the two conditional states in the `Λ±`, `W±`
/// parametrisation; singular at `θ ∈ {0, π}`.
pub fn conditional_temperatures(p: &BinaryPovm, m: &ThermalQubit) -> (f64, f64) {
    let (_, d, x) = bd(m);
    let e = x.exp();
    let (w, l, t) = (p.w(), p.lambda(), p.theta());
    let angular = 1.0 / t.tan() + 1.0 / t.sin();
    let half = (0.5 * t).tan();
    let squared = |a: f64, b: f64| (a * angular + b * half).powi(2);

    let (lp, lm) = ((1.0 + l).sqrt(), (1.0 - l).sqrt());
    let (lpt, lmt) = (squared(lp, lm), squared(lm, lp));
    let k = 2.0 * (1.0 - lp * lm);
    let tau0 = ((k + e * lmt) / (k * e + lpt)).ln() / d;

    let (wp, wm) = ((1.0 - w + l * w).sqrt(), (1.0 - w - l * w).sqrt());
    let (wpt, wmt) = (squared(wp, wm), squared(wm, wp));
    let k = 2.0 * (1.0 - w - wp * wm);
    let tau1 = ((k + e * wpt) / (k * e + wmt)).ln() / d;
    (tau0, tau1)
}

/// `p0|β − τ0| + p1|β − τ1|` from [`conditional_temperatures`].
pub fn tau_disturbance(p: &BinaryPovm, m: &ThermalQubit) -> f64 {
    let (t0, t1) = conditional_temperatures(p, m);
    let [p0, p1] = p.outcome_probabilities(m);
    p0 * (m.beta() - t0).abs() + p1 * (m.beta() - t1).abs()
}
