//! Schatten p-norms (quasi-norms for 0 < p < 1).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{clamp_psd, hermitian_eigenvalues, singular_values, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// 0 < p < 1: no triangle inequality.
    QuasiNorm,
    /// 1 ≤ p < ∞.
    Norm,
}

/// A validated exponent `p ∈ (0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::Parameter(format!("p must be a finite positive number, got {p}")));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn regime(self) -> Regime {
        if self.0 < 1.0 {
            Regime::QuasiNorm
        } else {
            Regime::Norm
        }
    }

    pub fn is_two(self) -> bool {
        self.0 == 2.0
    }

    pub fn is_le_two(self) -> bool {
        self.0 <= 2.0
    }

    pub fn is_ge_two(self) -> bool {
        self.0 >= 2.0
    }

    pub fn is_le_one(self) -> bool {
        self.0 <= 1.0
    }

    pub fn is_ge_one(self) -> bool {
        self.0 >= 1.0
    }

    /// `p / 2`, the exponent that acts on `|A|²`.
    pub fn half(self) -> Self {
        Self(self.0 / 2.0)
    }
}

impl TryFrom<f64> for PExponent {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PExponent> for f64 {
    fn from(p: PExponent) -> f64 {
        p.0
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn pow(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else if p == 0.5 {
        x.sqrt()
    } else {
        x.powf(p)
    }
}

/// `(Σ x_k^p)^{1/p}` for nonnegative `x`, scaled by the largest entry so
/// extreme exponents neither overflow nor underflow. Zeros contribute 0.
pub fn lp_norm(values: &[f64], p: PExponent) -> f64 {
    let p = p.value();
    let top = values.iter().copied().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let sum: f64 = values.iter().filter(|&&x| x > 0.0).map(|&x| pow(x / top, p)).sum();
    top * pow(sum, 1.0 / p)
}

/// `Σ x_k^p` for nonnegative `x`; zeros contribute exactly 0.
pub fn lp_power_sum(values: &[f64], p: PExponent) -> f64 {
    values.iter().filter(|&&x| x > 0.0).map(|&x| pow(x, p.value())).sum()
}

/// `‖A‖_p = (Σ σ_k^p)^{1/p}`.
pub fn schatten_norm(a: &ComplexMatrix, p: PExponent) -> f64 {
    lp_norm(singular_values(a).values(), p)
}

/// `‖A‖_p^p = tr |A|^p`, computed without the outer root.
pub fn schatten_power(a: &ComplexMatrix, p: PExponent) -> f64 {
    lp_power_sum(singular_values(a).values(), p)
}

/// Schatten norm of a Hermitian PSD matrix from its eigenvalues.
pub fn schatten_norm_psd(h: &ComplexMatrix, p: PExponent) -> Result<f64> {
    let eig = hermitian_eigenvalues(h)?;
    Ok(lp_norm(&clamp_psd(eig.values())?, p))
}

/// Frobenius norm, summed entrywise.
pub fn hilbert_schmidt_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn p(x: f64) -> PExponent {
        PExponent::new(x).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn exponent_validation_and_flags() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(PExponent::new(bad).is_err());
        }
        assert_eq!(p(0.5).regime(), Regime::QuasiNorm);
        assert_eq!(p(1.0).regime(), Regime::Norm);
        let two = p(2.0);
        assert!(two.is_two() && two.is_le_two() && two.is_ge_two());
        assert!(p(1.9).is_le_two() && !p(1.9).is_ge_two());
        assert!(!p(2.1).is_le_two() && p(2.1).is_ge_two());
    }

    #[test]
    fn identity_norm() {
        for d in 1..5 {
            for q in [0.25, 0.5, 1.0, 2.0, 3.0, 10.0] {
                let got = schatten_norm(&ComplexMatrix::identity(d), p(q));
                assert!(rel(got, (d as f64).powf(1.0 / q)) < 1e-14, "d={d} p={q}");
            }
        }
    }

    #[test]
    fn diagonal_examples() {
        let d = ComplexMatrix::from_real_diag(&[3.0, -4.0]);
        assert_eq!(schatten_norm(&d, p(1.0)), 7.0);
        assert_eq!(schatten_norm(&d, p(2.0)), 5.0);
        let want = (2.0 + 3f64.sqrt()).powi(2);
        assert!(rel(schatten_norm(&d, p(0.5)), want) < 1e-14);
    }

    #[test]
    fn psd_examples() {
        assert!(rel(schatten_norm_psd(&ComplexMatrix::identity(2), p(0.5)).unwrap(), 4.0) < 1e-15);
        assert_eq!(schatten_norm_psd(&ComplexMatrix::zeros(3, 3), p(0.7)).unwrap(), 0.0);
        let not_psd = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(matches!(schatten_norm_psd(&not_psd, p(1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn hilbert_schmidt_examples() {
        let m = ComplexMatrix::from_real(2, 2, &[3.0, 4.0, 0.0, 0.0]).unwrap();
        assert_eq!(hilbert_schmidt_norm(&m), 5.0);
        assert!(rel(hilbert_schmidt_norm(&ComplexMatrix::identity(3)), 3f64.sqrt()) < 1e-15);
    }

    #[test]
    fn zero_matrix_is_zero_everywhere() {
        for q in [0.1, 1.0, 7.0] {
            assert_eq!(schatten_norm(&ComplexMatrix::zeros(2, 2), p(q)), 0.0);
            assert_eq!(schatten_power(&ComplexMatrix::zeros(2, 2), p(q)), 0.0);
        }
    }

    #[test]
    fn overflow_guard_handles_extreme_scales() {
        let big = ComplexMatrix::from_diag(&[C64::new(1e200, 0.0), C64::new(1e200, 0.0)]);
        let got = schatten_norm(&big, p(4.0));
        assert!(rel(got, 1e200 * 2f64.powf(0.25)) < 1e-14);
        let tiny = ComplexMatrix::from_real_diag(&[1e-200, 1e-200]);
        assert!(rel(schatten_norm(&tiny, p(0.25)), 1e-200 * 16.0) < 1e-14);
    }
}
