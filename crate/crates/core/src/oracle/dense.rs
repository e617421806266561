//! Explicit complex 2x2 matrices, used to check the Pauli-basis algebra
//! along an independent code path.

use num_complex::Complex64;

use crate::bloch::{BlochHermitian, DensityMatrix};
use crate::error::Result;

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C; 2]; 2]);

impl Mat2 {
    pub fn zero() -> Self {
        Mat2([[C::new(0.0, 0.0); 2]; 2])
    }

    /// `c0·I + c·σ` with `σx = [[0,1],[1,0]]`, `σy = [[0,−i],[i,0]]`,
    /// `σz = diag(1, −1)`.
    pub fn from_bloch(a: &BlochHermitian) -> Self {
        let [x, y, z] = a.c;
        Mat2([
            [C::new(a.c0 + z, 0.0), C::new(x, -y)],
            [C::new(x, y), C::new(a.c0 - z, 0.0)],
        ])
    }

    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self::from_bloch(&rho.operator())
    }

    /// Pauli coefficients of the Hermitian part.
    pub fn to_bloch(&self) -> BlochHermitian {
        let m = &self.0;
        let c0 = 0.5 * (m[0][0].re + m[1][1].re);
        let z = 0.5 * (m[0][0].re - m[1][1].re);
        let off = 0.5 * (m[1][0] + m[0][1].conj());
        BlochHermitian::new(c0, off.re, off.im, z)
    }

    pub fn trace(&self) -> C {
        self.0[0][0] + self.0[1][1]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    /// Eigenvalues (ascending) and unit eigenvectors of a Hermitian matrix.
    pub fn eigh(&self) -> ([f64; 2], [[C; 2]; 2]) {
        let m = &self.0;
        let (a, d, b) = (m[0][0].re, m[1][1].re, m[0][1]);
        let mean = 0.5 * (a + d);
        let half = 0.5 * (a - d);
        let radius = (half * half + b.norm_sqr()).sqrt();
        let values = [mean - radius, mean + radius];
        if b.norm() == 0.0 {
            let e0 = [C::new(1.0, 0.0), C::new(0.0, 0.0)];
            let e1 = [C::new(0.0, 0.0), C::new(1.0, 0.0)];
            return if a <= d { (values, [e0, e1]) } else { (values, [e1, e0]) };
        }
        let vector = |lambda: f64| {
            // (A − λ)v = 0 with v = (b, λ − a)
            let v = [b, C::new(lambda - a, 0.0)];
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / n, v[1] / n]
        };
        (values, [vector(values[0]), vector(values[1])])
    }

    /// `Σ f(λ_k) |v_k⟩⟨v_k|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        let (values, vectors) = self.eigh();
        let mut out = Self::zero();
        for k in 0..2 {
            let fk = f(values[k]);
            for i in 0..2 {
                for j in 0..2 {
                    out.0[i][j] += vectors[k][i] * vectors[k][j].conj() * fk;
                }
            }
        }
        out
    }

    pub fn sqrt_psd(&self) -> Self {
        self.map_spectrum(|x| x.max(0.0).sqrt())
    }
}

/// `tr √(√ρ σ √ρ)` by explicit matrix square roots.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let r = Mat2::from_state(rho).sqrt_psd();
    let inner = r.mul(&Mat2::from_state(sigma)).mul(&r);
    inner.sqrt_psd().trace().re.clamp(0.0, 1.0)
}

/// `√Π ρ √Π / tr(ρΠ)` by explicit matrix products.
pub fn luders_update(effect: &BlochHermitian, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let s = Mat2::from_bloch(effect).sqrt_psd();
    let out = s.mul(&Mat2::from_state(rho)).mul(&s.adjoint());
    let p = out.trace().re;
    DensityMatrix::from_operator(&out.scale(1.0 / p).to_bloch())
}

/// `tr ρ log ρ − tr ρ log σ` for full-rank `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let r = Mat2::from_state(rho);
    let log_r = r.map_spectrum(|x| if x > 0.0 { x.ln() } else { 0.0 });
    let log_s = Mat2::from_state(sigma).map_spectrum(f64::ln);
    let diff = Mat2([
        [log_r.0[0][0] - log_s.0[0][0], log_r.0[0][1] - log_s.0[0][1]],
        [log_r.0[1][0] - log_s.0[1][0], log_r.0[1][1] - log_s.0[1][1]],
    ]);
    r.mul(&diff).trace().re
}
