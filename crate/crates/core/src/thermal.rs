//! The thermal qubit `ρ_β = e^{-βH}/Z_β` with `H = δσz/2`.
//!
//! Basis convention: `|0⟩` is the excited level (`E = +δ/2`, top-left matrix
//! entry) and `|1⟩` the ground level. Population pairs are always reported in
//! energy order, `(ground, excited)`.

use crate::bloch::{BlochHermitian, DensityMatrix};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

/// `ln(1 + e^x)` without overflow.
pub(crate) fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// `ln(2 cosh x)` without overflow.
pub(crate) fn ln_two_cosh(x: f64) -> f64 {
    x.abs() + (-2.0 * x.abs()).exp().ln_1p()
}

pub(crate) fn sech(x: f64) -> f64 {
    if x.abs() > 700.0 {
        0.0
    } else {
        1.0 / x.cosh()
    }
}

/// Statistical model `β ↦ ρ_β` for a qubit with level splitting `δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalQubit {
    beta: f64,
    delta: f64,
}

impl ThermalQubit {
    pub fn new(beta: f64, delta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidModel(format!("beta = {beta} must be finite and > 0")));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidModel(format!("delta = {delta} must be finite and > 0")));
        }
        Ok(Self { beta, delta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The same splitting at another inverse temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(beta, self.delta)
    }

    /// `βδ/2`.
    pub fn half_gap(&self) -> f64 {
        0.5 * self.beta * self.delta
    }

    /// `tanh(βδ/2)`, the magnitude of the equilibrium Bloch vector.
    pub fn polarization(&self) -> f64 {
        self.half_gap().tanh()
    }

    pub fn hamiltonian(&self) -> BlochHermitian {
        BlochHermitian::new(0.0, 0.0, 0.0, 0.5 * self.delta)
    }

    /// Energies in increasing order, `[-δ/2, δ/2]`.
    pub fn energies(&self) -> [f64; 2] {
        [-0.5 * self.delta, 0.5 * self.delta]
    }

    pub fn partition_function(&self) -> f64 {
        2.0 * self.half_gap().cosh()
    }

    pub fn log_partition_function(&self) -> f64 {
        ln_two_cosh(self.half_gap())
    }

    /// `⟨H⟩_β = -(δ/2) tanh(βδ/2)`.
    pub fn mean_energy(&self) -> f64 {
        -0.5 * self.delta * self.polarization()
    }

    pub fn equilibrium_state(&self) -> DensityMatrix {
        DensityMatrix {
            r: [0.0, 0.0, -self.polarization()],
        }
    }

    /// `∂_β r = (0, 0, -(δ/2) sech²(βδ/2))`.
    pub fn bloch_derivative(&self) -> [f64; 3] {
        let s = sech(self.half_gap());
        [0.0, 0.0, -0.5 * self.delta * s * s]
    }

    /// `(p_ground, p_excited) = (1/(1+e^{-βδ}), 1/(1+e^{βδ}))`.
    pub fn populations(&self) -> (f64, f64) {
        let x = self.beta * self.delta;
        ((-softplus(-x)).exp(), (-softplus(x)).exp())
    }

    /// `δ²/(2 + 2 cosh βδ)`.
    pub fn qfi(&self) -> f64 {
        let s = sech(self.half_gap());
        0.25 * self.delta * self.delta * s * s
    }

    /// `L = ⟨H⟩_β·I − H`.
    pub fn sld(&self) -> BlochHermitian {
        BlochHermitian::new(self.mean_energy(), 0.0, 0.0, -0.5 * self.delta)
    }
}

/// Gibbs state at any extended inverse temperature `η`, including negative
/// values and the two pure limits (`-∞`: excited, `+∞`: ground).
pub fn gibbs_state(eta: ExtendedReal, delta: f64) -> DensityMatrix {
    let rz = match eta {
        ExtendedReal::NegInf => 1.0,
        ExtendedReal::PosInf => -1.0,
        ExtendedReal::Finite(e) => -(0.5 * e * delta).tanh(),
    };
    DensityMatrix { r: [0.0, 0.0, rz] }
}

/// Spectral temperature of a population vector over a non-degenerate,
/// increasing spectrum:
///
/// `τ = (1 − (p_0 + p_{d−1})/2)^{-1} Σ_{i=0}^{d−2} ((p_i + p_{i+1})/2) log(p_i/p_{i+1}) / (E_{i+1} − E_i)`.
///
/// For a qubit this is `log(p_g/p_e)/δ`, `+∞` on the ground state and `-∞`
/// on the excited state.
pub fn spectral_temperature(populations: &[f64], energies: &[f64]) -> Result<ExtendedReal> {
    let d = populations.len();
    if d != energies.len() {
        return Err(Error::InvalidPopulations(format!(
            "{d} populations for {} energy levels",
            energies.len()
        )));
    }
    if d < 2 {
        return Err(Error::InvalidPopulations("at least two levels are required".into()));
    }
    if let Some(p) = populations.iter().find(|p| !(p.is_finite() && **p >= -1e-12)) {
        return Err(Error::InvalidPopulations(format!("population {p} is negative")));
    }
    let total: f64 = populations.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidPopulations(format!("populations sum to {total}")));
    }
    for i in 0..d - 1 {
        let gap = energies[i + 1] - energies[i];
        if gap == 0.0 {
            return Err(Error::DegenerateSpectrum { index: i });
        }
        if !(gap > 0.0) {
            return Err(Error::InvalidModel(format!(
                "energies must be strictly increasing (E[{i}] = {}, E[{}] = {})",
                energies[i],
                i + 1,
                energies[i + 1]
            )));
        }
    }

    let p = |i: usize| populations[i].max(0.0);
    let prefactor = 1.0 / (1.0 - 0.5 * (p(0) + p(d - 1)));
    let mut sum = ExtendedReal::ZERO;
    for i in 0..d - 1 {
        let (lo, hi) = (p(i), p(i + 1));
        let weight = 0.5 * (lo + hi) * prefactor;
        let gap = energies[i + 1] - energies[i];
        let term = match (lo > 0.0, hi > 0.0) {
            (true, true) => ExtendedReal::Finite((lo / hi).ln() / gap),
            (false, true) => ExtendedReal::NegInf,
            (true, false) => ExtendedReal::PosInf,
            (false, false) => ExtendedReal::ZERO,
        };
        sum = sum
            .checked_add(term.weighted(weight))
            .ok_or(Error::IndeterminateTemperature)?;
    }
    Ok(sum)
}

/// `D(ρ_η ‖ ρ_β) = (β − η)⟨H⟩_η + log(Z_β/Z_η)`.
///
/// Evaluated as the classical relative entropy of the energy populations,
/// which is the same quantity for commuting states and stays finite-precision
/// safe for large `|η|`. At `η = ∓∞` it is `log(1 + e^{±βδ})`.
pub fn thermal_relative_entropy(eta: ExtendedReal, model: &ThermalQubit) -> f64 {
    let x = model.beta() * model.delta();
    // log p_g, log p_e of ρ_β
    let (lpg, lpe) = (-softplus(-x), -softplus(x));
    match eta {
        ExtendedReal::NegInf => softplus(x),
        ExtendedReal::PosInf => softplus(-x),
        ExtendedReal::Finite(e) => {
            let y = e * model.delta();
            let (lqg, lqe) = (-softplus(-y), -softplus(y));
            let d = lqg.exp() * (lqg - lpg) + lqe.exp() * (lqe - lpe);
            d.max(0.0)
        }
    }
}
