//! Reals extended with `±∞`.
//!
//! Spectral temperatures and the τ-disturbance genuinely diverge, so they are
//! carried as an explicit value rather than as an IEEE infinity that could
//! silently turn into NaN under `0·∞`.

use std::fmt;

/// A real number or one of the two infinities. Variant order gives the usual
/// total order `-∞ < x < +∞`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Maps IEEE infinities onto the corresponding variant.
    ///
    /// Panics on NaN, which is never a meaningful extended real.
    pub fn from_f64(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN is not an extended real");
        if x == f64::INFINITY {
            ExtendedReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::Finite(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// IEEE representation, with the infinities mapped to `±f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }

    pub fn abs(self) -> Self {
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x.abs()),
            _ => ExtendedReal::PosInf,
        }
    }

    /// `a - self` for a finite `a`.
    pub fn subtracted_from(self, a: f64) -> Self {
        match self {
            ExtendedReal::NegInf => ExtendedReal::PosInf,
            ExtendedReal::Finite(x) => ExtendedReal::Finite(a - x),
            ExtendedReal::PosInf => ExtendedReal::NegInf,
        }
    }

    /// Multiplies by a non-negative weight with the measure-theoretic
    /// convention `0·∞ = 0`.
    pub fn weighted(self, weight: f64) -> Self {
        debug_assert!(weight >= 0.0);
        if weight == 0.0 {
            return ExtendedReal::ZERO;
        }
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(weight * x),
            inf => inf,
        }
    }

    /// Sum of two extended reals; `None` for `+∞ + -∞`.
    pub fn checked_add(self, other: Self) -> Option<Self> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        ExtendedReal::from_f64(x)
    }
}

/// Finite values print with 17 significant digits; the infinities print as
/// `inf` and `-inf`.
impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::Finite(x) => write!(f, "{x:.16e}"),
            ExtendedReal::PosInf => f.write_str("inf"),
        }
    }
}
