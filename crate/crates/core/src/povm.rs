//! Binary qubit POVMs `{Π0, Π1 = I − Π0}` in conical coordinates.
//!
//! `Π0 = w·I + λw(sinθ cosφ, sinθ sinφ, cosθ)·σ` with `0 < w ≤ 1/2`,
//! `0 ≤ λ ≤ 1`: the cone `|(x, y, z)| ≤ w` of Cartesian coefficients. Larger
//! `w` is an outcome relabelling and is not represented separately.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use crate::bloch::{self, BlochHermitian, DensityMatrix, Vec3, TOL};
use crate::error::{Error, Result};
use crate::thermal::{sech, ThermalQubit};

/// Smallest admissible `w`; `w = 0` is the zero effect.
pub const MIN_WEIGHT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Zero,
    One,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Zero, Outcome::One];

    pub fn index(self) -> usize {
        match self {
            Outcome::Zero => 0,
            Outcome::One => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryPovm {
    w: f64,
    lambda: f64,
    theta: f64,
    phi: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MeasurementClass {
    pub projective: bool,
    pub semiclassical: bool,
    pub irreversible: bool,
    pub uninformative: bool,
    pub nonclassical: bool,
}

impl MeasurementClass {
    pub fn labels(&self) -> Vec<&'static str> {
        [
            (self.projective, "projective"),
            (self.semiclassical, "semiclassical"),
            (self.irreversible, "irreversible"),
            (self.uninformative, "uninformative"),
            (self.nonclassical, "nonclassical"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect()
    }
}

impl fmt::Display for MeasurementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels().join("|"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Characterization {
    /// `tr Π0² = 2(1 + λ²)w²`.
    pub gamma: f64,
    /// `sin θ`.
    pub chi: f64,
    pub class: MeasurementClass,
}

/// Which quantity is held fixed along a maximum-information boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryConstraint {
    Chi,
    Gamma,
}

fn range_error(what: &'static str, value: f64, range: &'static str) -> Error {
    Error::OutOfRange { what, value, range }
}

impl BinaryPovm {
    /// Builds a POVM from conical coordinates. `w` and `λ` may exceed their
    /// upper bounds by `TOL` (clamped); `φ` is reduced modulo `2π`.
    pub fn new(w: f64, lambda: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(MIN_WEIGHT..=0.5 + TOL).contains(&w) {
            return Err(Error::OutsideCone(format!(
                "w = {w} must lie in [{MIN_WEIGHT:e}, 1/2]"
            )));
        }
        if !(lambda.is_finite() && (0.0..=1.0 + TOL).contains(&lambda)) {
            return Err(Error::OutsideCone(format!("lambda = {lambda} must lie in [0, 1]")));
        }
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(Error::OutsideCone(format!("theta = {theta} must lie in [0, pi]")));
        }
        if !phi.is_finite() {
            return Err(Error::OutsideCone(format!("phi = {phi} must be finite")));
        }
        let lambda = lambda.min(1.0);
        let (theta, phi) = if lambda == 0.0 {
            (0.0, 0.0)
        } else {
            (theta, phi.rem_euclid(TAU))
        };
        Ok(Self {
            w: w.min(0.5),
            lambda,
            theta,
            phi,
        })
    }

    /// Builds a POVM from `Π0 = w·I + x σx + y σy + z σz`.
    pub fn from_cartesian(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        if !(w.is_finite() && w > 0.0 && w <= 0.5 + TOL) {
            return Err(Error::OutsideCone(format!("w = {w} must lie in (0, 1/2]")));
        }
        if w < MIN_WEIGHT {
            return Err(Error::OutsideCone(format!("w = {w} is below the minimum {MIN_WEIGHT:e}")));
        }
        let v = [x, y, z];
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::OutsideCone(format!("non-finite coefficients {v:?}")));
        }
        let r = bloch::norm(&v);
        if r > w + TOL {
            return Err(Error::OutsideCone(format!(
                "|(x, y, z)| = {r} exceeds w = {w}"
            )));
        }
        if r == 0.0 {
            return Self::new(w, 0.0, 0.0, 0.0);
        }
        let theta = (z / r).clamp(-1.0, 1.0).acos();
        let phi = y.atan2(x);
        Self::new(w, (r / w).min(1.0), theta, phi)
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `cos θ`, exactly zero at `θ = π/2`.
    pub fn cos_theta(&self) -> f64 {
        if self.theta == FRAC_PI_2 {
            0.0
        } else {
            self.theta.cos()
        }
    }

    /// `sin θ`, exactly zero at `θ = π`.
    pub fn sin_theta(&self) -> f64 {
        if self.theta == PI {
            0.0
        } else {
            self.theta.sin()
        }
    }

    /// Unit direction of the Bloch part of `Π0`.
    pub fn direction(&self) -> Vec3 {
        let s = self.sin_theta();
        [s * self.phi.cos(), s * self.phi.sin(), self.cos_theta()]
    }

    /// `(w, x, y, z)`.
    pub fn cartesian(&self) -> (f64, f64, f64, f64) {
        let n = self.direction();
        let a = self.lambda * self.w;
        (self.w, a * n[0], a * n[1], a * n[2])
    }

    pub fn element(&self, outcome: Outcome) -> BlochHermitian {
        let (w, x, y, z) = self.cartesian();
        let p0 = BlochHermitian::new(w, x, y, z);
        match outcome {
            Outcome::Zero => p0,
            Outcome::One => BlochHermitian::identity() - p0,
        }
    }

    /// The same POVM with a different azimuth.
    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Self::new(self.w, self.lambda, self.theta, phi)
    }

    pub fn characterize(&self) -> Characterization {
        let gamma = 2.0 * (1.0 + self.lambda * self.lambda) * self.w * self.w;
        let chi = self.sin_theta();
        let irreversible = self.lambda >= 1.0 - TOL;
        let uninformative = self.lambda <= TOL;
        let class = MeasurementClass {
            projective: irreversible && self.w >= 0.5 - TOL,
            semiclassical: chi <= TOL || uninformative,
            irreversible,
            uninformative,
            nonclassical: !uninformative && (self.theta - FRAC_PI_2).abs() <= TOL,
        };
        Characterization { gamma, chi, class }
    }

    /// `tr(σ Π_x)` for an arbitrary state.
    pub fn probability(&self, state: &DensityMatrix, outcome: Outcome) -> f64 {
        state.expectation(&self.element(outcome)).clamp(0.0, 1.0)
    }

    /// `(p0, p1)` with `p0 = w − λw cosθ tanh(βδ/2)`.
    pub fn outcome_probabilities(&self, model: &ThermalQubit) -> [f64; 2] {
        let p0 = self.w - self.lambda * self.w * self.cos_theta() * model.polarization();
        let p0 = p0.clamp(0.0, 1.0);
        [p0, 1.0 - p0]
    }

    /// Lüders update `√Π_x σ √Π_x / tr(σ Π_x)` of an arbitrary state.
    pub fn update(&self, state: &DensityMatrix, outcome: Outcome) -> Result<DensityMatrix> {
        let root = self.element(outcome).principal_sqrt()?;
        let unnormalised = root.sandwich(&state.operator());
        let probability = unnormalised.trace();
        if probability <= TOL {
            return Err(Error::ZeroProbabilityOutcome {
                outcome: outcome.index(),
                probability,
            });
        }
        let r = bloch::scale(&unnormalised.c, 1.0 / unnormalised.c0);
        let n = bloch::norm(&r);
        // rank-1 outputs can overshoot the sphere by rounding
        let r = if n > 1.0 { bloch::scale(&r, 1.0 / n) } else { r };
        DensityMatrix::new(r)
    }

    pub fn post_measurement_state(
        &self,
        model: &ThermalQubit,
        outcome: Outcome,
    ) -> Result<DensityMatrix> {
        let p = self.outcome_probabilities(model)[outcome.index()];
        if p <= TOL {
            return Err(Error::ZeroProbabilityOutcome {
                outcome: outcome.index(),
                probability: p,
            });
        }
        self.update(&model.equilibrium_state(), outcome)
    }

    /// Energy-basis populations `(ground, excited)` of the conditional state.
    ///
    /// With `√Π_x = s0 + s·σ` the diagonal of `√Π ρ_β √Π` is
    /// `ρ_ee(s0+sz)² + ρ_gg(sx²+sy²)` (excited) and `ρ_gg(s0−sz)² + ρ_ee(sx²+sy²)`
    /// (ground); a population that vanishes exactly stays exactly zero.
    pub fn post_measurement_populations(
        &self,
        model: &ThermalQubit,
        outcome: Outcome,
    ) -> Result<(f64, f64)> {
        let (ground, excited) = self.unnormalised_populations(model, outcome)?;
        let total = ground + excited;
        if total <= TOL {
            return Err(Error::ZeroProbabilityOutcome {
                outcome: outcome.index(),
                probability: total,
            });
        }
        Ok((ground / total, excited / total))
    }

    /// Diagonal of `√Π_x ρ_β √Π_x` as `(ground, excited)`; sums to `p_x`.
    pub(crate) fn unnormalised_populations(
        &self,
        model: &ThermalQubit,
        outcome: Outcome,
    ) -> Result<(f64, f64)> {
        let s = self.element(outcome).principal_sqrt()?;
        let (gg, ee) = model.populations();
        let transverse = s.c[0] * s.c[0] + s.c[1] * s.c[1];
        let ground = gg * (s.c0 - s.c[2]).powi(2) + ee * transverse;
        let excited = ee * (s.c0 + s.c[2]).powi(2) + gg * transverse;
        Ok((ground, excited))
    }

    /// Classical Fisher information about `β` of the outcome statistics,
    /// `δ²λ²w cos²θ sech⁴(βδ/2) / (4Q(1 − wQ))`, `Q = 1 − λ cosθ tanh(βδ/2)`.
    pub fn fisher_information(&self, model: &ThermalQubit) -> f64 {
        let c = self.cos_theta();
        if self.lambda == 0.0 || c == 0.0 {
            return 0.0;
        }
        let s2 = sech(model.half_gap()).powi(2);
        let q = 1.0 - self.lambda * c * model.polarization();
        let d = model.delta();
        let num = d * d * self.lambda * self.lambda * self.w * c * c * s2 * s2;
        (num / (4.0 * q * (1.0 - self.w * q))).max(0.0)
    }
}

impl fmt::Display for BinaryPovm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(w={}, lambda={}, theta={}, phi={})",
            self.w, self.lambda, self.theta, self.phi
        )
    }
}

/// Maximum Fisher information at fixed non-commutativity `χ` or purity `γ`,
/// with the POVM attaining it.
///
/// At fixed `χ` the optimum is projective, `w = 1/2`, `λ = 1`,
/// `cos θ = +√(1−χ²)`; at fixed `γ` it is semiclassical,
/// `Π0 = diag(√γ, 0)`, i.e. `w = √γ/2`, `λ = 1`, `θ = 0`. The value is the
/// Fisher information of that POVM.
pub fn max_info_curve(
    constraint: BoundaryConstraint,
    value: f64,
    model: &ThermalQubit,
) -> Result<(f64, BinaryPovm)> {
    let povm = match constraint {
        BoundaryConstraint::Chi => {
            if !(0.0..=1.0).contains(&value) {
                return Err(range_error("chi", value, "[0, 1]"));
            }
            BinaryPovm::new(0.5, 1.0, value.asin(), 0.0)?
        }
        BoundaryConstraint::Gamma => {
            if !(value > 0.0 && value <= 1.0) {
                return Err(range_error("gamma", value, "(0, 1]"));
            }
            BinaryPovm::new(0.5 * value.sqrt(), 1.0, 0.0, 0.0)?
        }
    };
    Ok((povm.fisher_information(model), povm))
}
