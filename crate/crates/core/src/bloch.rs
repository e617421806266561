//! Qubit operator algebra in the Pauli basis.
//!
//! A Hermitian 2x2 matrix is stored as `c0·I + c·σ`. Every matrix function the
//! rest of the crate needs (square root, logarithm, conjugation) has a closed
//! form in this representation, so no general eigensolver is involved.

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use std::ops::{Add, Mul, Sub};

/// Absolute tolerance for positivity and support checks.
pub const TOL: f64 = 1e-10;

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// `c0·I + cx·σx + cy·σy + cz·σz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochHermitian {
    pub c0: f64,
    pub c: Vec3,
}

/// Spectral decomposition `A = upper·P₊ + lower·P₋` with
/// `P± = (I ± axis·σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub upper: f64,
    pub lower: f64,
    /// Unit Bloch axis of the `upper` eigenvector; `+z` when degenerate.
    pub axis: Vec3,
}

impl EigenPair {
    /// Recomposes `f(upper)·P₊ + f(lower)·P₋`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> BlochHermitian {
        let (fu, fl) = (f(self.upper), f(self.lower));
        BlochHermitian {
            c0: 0.5 * (fu + fl),
            c: scale(&self.axis, 0.5 * (fu - fl)),
        }
    }
}

impl BlochHermitian {
    pub const fn new(c0: f64, cx: f64, cy: f64, cz: f64) -> Self {
        Self {
            c0,
            c: [cx, cy, cz],
        }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.c0
    }

    pub fn det(&self) -> f64 {
        self.c0 * self.c0 - dot(&self.c, &self.c)
    }

    pub fn eigen_decompose(&self) -> EigenPair {
        let r = norm(&self.c);
        let axis = if r > 0.0 {
            scale(&self.c, 1.0 / r)
        } else {
            [0.0, 0.0, 1.0]
        };
        EigenPair {
            upper: self.c0 + r,
            lower: self.c0 - r,
            axis,
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.c0 - norm(&self.c)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// `tr(A·B)`.
    pub fn trace_product(&self, other: &Self) -> f64 {
        2.0 * (self.c0 * other.c0 + dot(&self.c, &other.c))
    }

    /// The anticommutator half-sum `(A·B + B·A)/2`, which is Hermitian.
    pub fn jordan_product(&self, other: &Self) -> Self {
        Self {
            c0: self.c0 * other.c0 + dot(&self.c, &other.c),
            c: add3(&scale(&other.c, self.c0), &scale(&self.c, other.c0)),
        }
    }

    /// `A·B·A` for Hermitian `A` and `B`.
    pub fn sandwich(&self, inner: &Self) -> Self {
        let (a0, a) = (self.c0, &self.c);
        let (b0, b) = (inner.c0, &inner.c);
        let ab = dot(a, b);
        let aa = dot(a, a);
        let c0 = a0 * a0 * b0 + 2.0 * a0 * ab + b0 * aa;
        let mut c = scale(b, a0 * a0 - aa);
        c = add3(&c, &scale(a, 2.0 * a0 * b0 + 2.0 * ab));
        Self { c0, c }
    }

    /// Principal square root via `√A = (A + √det·I)/√(tr A + 2√det)`.
    pub fn principal_sqrt(&self) -> Result<Self> {
        let min_ev = self.min_eigenvalue();
        if min_ev < -TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min_ev,
            });
        }
        let s = self.det().max(0.0).sqrt();
        let denom_sq = self.trace() + 2.0 * s;
        if denom_sq <= 0.0 {
            return Ok(Self::zero());
        }
        let inv = 1.0 / denom_sq.sqrt();
        Ok(Self {
            c0: (self.c0 + s) * inv,
            c: scale(&self.c, inv),
        })
    }
}

impl Add for BlochHermitian {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            c0: self.c0 + rhs.c0,
            c: add3(&self.c, &rhs.c),
        }
    }
}

impl Sub for BlochHermitian {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            c0: self.c0 - rhs.c0,
            c: sub3(&self.c, &rhs.c),
        }
    }
}

impl Mul<f64> for BlochHermitian {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            c0: self.c0 * rhs,
            c: scale(&self.c, rhs),
        }
    }
}

/// A qubit state `(I + r·σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    pub r: Vec3,
}

impl DensityMatrix {
    pub fn new(r: Vec3) -> Result<Self> {
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite Bloch vector {r:?}")));
        }
        let n = norm(&r);
        if n > 1.0 + TOL {
            return Err(Error::InvalidState(format!("|r| = {n} exceeds 1")));
        }
        Ok(Self { r })
    }

    pub const fn maximally_mixed() -> Self {
        Self { r: [0.0; 3] }
    }

    /// Normalises a positive operator to unit trace.
    pub fn from_operator(op: &BlochHermitian) -> Result<Self> {
        if op.c0 <= 0.0 {
            return Err(Error::InvalidState(format!("trace {} is not positive", op.trace())));
        }
        if !op.is_psd(TOL * op.c0.max(1.0)) {
            return Err(Error::NotPsd {
                min_eigenvalue: op.min_eigenvalue(),
            });
        }
        Self::new(scale(&op.c, 1.0 / op.c0))
    }

    pub fn operator(&self) -> BlochHermitian {
        BlochHermitian {
            c0: 0.5,
            c: scale(&self.r, 0.5),
        }
    }

    pub fn bloch_norm(&self) -> f64 {
        norm(&self.r)
    }

    /// `tr ρ² = (1 + |r|²)/2`.
    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + dot(&self.r, &self.r))
    }

    pub fn det(&self) -> f64 {
        0.25 * (1.0 - dot(&self.r, &self.r))
    }

    pub fn is_pure(&self) -> bool {
        self.bloch_norm() >= 1.0 - TOL
    }

    /// `tr(ρ·A)`.
    pub fn expectation(&self, op: &BlochHermitian) -> f64 {
        op.c0 + dot(&self.r, &op.c)
    }

    pub fn eigen_decompose(&self) -> EigenPair {
        self.operator().eigen_decompose()
    }
}

/// `1 - F²` for two qubit states, written without cancellation:
/// with `a = 1-|r|²`, `b = 1-|s|²`, `1 - F² = [(√a-√b)² + |r-s|²]/4`.
pub fn infidelity_squared(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let a = (1.0 - dot(&rho.r, &rho.r)).max(0.0);
    let b = (1.0 - dot(&sigma.r, &sigma.r)).max(0.0);
    let diff = sub3(&sigma.r, &rho.r);
    let root_sum = a.sqrt() + b.sqrt();
    let root_gap = if root_sum > 0.0 {
        // a - b = |s|² - |r|² = (s - r)·(s + r)
        dot(&diff, &add3(&sigma.r, &rho.r)) / root_sum
    } else {
        0.0
    };
    (0.25 * (root_gap * root_gap + dot(&diff, &diff))).clamp(0.0, 1.0)
}

/// Uhlmann fidelity `tr√(√ρ σ √ρ)`, via the qubit identity
/// `F² = tr(ρσ) + 2√(det ρ · det σ)`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    (1.0 - infidelity_squared(rho, sigma)).sqrt()
}

/// `1 - F`, accurate when the states are close.
pub fn infidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let d = infidelity_squared(rho, sigma);
    d / (1.0 + (1.0 - d).sqrt())
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `D(ρ‖σ) = tr ρ log ρ − tr ρ log σ` in nats; `+∞` when the support of `ρ`
/// is not contained in that of `σ`.
pub fn quantum_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> ExtendedReal {
    let er = rho.eigen_decompose();
    let es = sigma.eigen_decompose();
    let neg_entropy = xlogx(er.upper) + xlogx(er.lower);
    // ⟨s±|ρ|s±⟩ = (1 ± r·ŝ)/2
    let proj = dot(&rho.r, &es.axis);
    let mut cross = 0.0;
    for (q, weight) in [(es.upper, 0.5 * (1.0 + proj)), (es.lower, 0.5 * (1.0 - proj))] {
        if q <= TOL {
            if weight > TOL {
                return ExtendedReal::PosInf;
            }
            if q <= 0.0 {
                continue;
            }
        }
        cross += weight * q.ln();
    }
    ExtendedReal::Finite((neg_entropy - cross).max(0.0))
}

fn check_model(r: &Vec3) -> Result<f64> {
    let n = norm(r);
    if n >= 1.0 - TOL {
        return Err(Error::SingularModel { bloch_norm: n });
    }
    Ok(n)
}

/// Quantum Fisher information of a one-parameter qubit model from its Bloch
/// vector `r` and derivative `dr`, without diagonalising.
///
/// In the Pauli-coefficient variables `ρ_i = r_i/2` this is
/// `4[Σ∂ρ_i² + 4Σ_{i≠j}(∂ρ_i∂ρ_jρ_iρ_j − ∂ρ_i²ρ_j²)] / (1 − 4Σρ_i²)`,
/// i.e. `|dr|² + (r·dr)²/(1−|r|²)`.
pub fn bloch_qfi(r: &Vec3, dr: &Vec3) -> Result<f64> {
    check_model(r)?;
    let rho = scale(r, 0.5);
    let drho = scale(dr, 0.5);
    let mut diag = 0.0;
    let mut mixed = 0.0;
    for i in 0..3 {
        diag += drho[i] * drho[i];
        for j in 0..3 {
            if i != j {
                mixed += drho[i] * drho[j] * rho[i] * rho[j] - drho[i] * drho[i] * rho[j] * rho[j];
            }
        }
    }
    let denom = 1.0 - 4.0 * dot(&rho, &rho);
    Ok((4.0 * (diag + 4.0 * mixed) / denom).max(0.0))
}

/// Symmetric logarithmic derivative of a Bloch curve, solving
/// `∂ρ = (ρL + Lρ)/2` in the Pauli basis.
///
/// The 4x4 system `∂ρ_μ = M_{μν} L^ν` has `M_{00} = 1/2`, `M_{0i} = M_{i0} = ρ_i`,
/// `M_{ij} = δ_{ij}/2`; eliminating the spatial block gives
/// `L⁰ = -r·dr/(1-|r|²)` and `L = dr − L⁰ r`.
pub fn sld_bloch(r: &Vec3, dr: &Vec3) -> Result<BlochHermitian> {
    check_model(r)?;
    let l0 = -dot(r, dr) / (1.0 - dot(r, r));
    Ok(BlochHermitian {
        c0: l0,
        c: sub3(dr, &scale(r, l0)),
    })
}
