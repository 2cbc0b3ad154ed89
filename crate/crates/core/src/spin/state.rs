use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|‖ψ‖ − 1|` for states flagged as normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Complex amplitude vector in the Dicke (or Fock) basis.
///
/// Derivative vectors such as `∂_ω ψ` are carried with `normalized = false`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
    normalized: bool,
}

impl StateVector {
    /// Wraps `amplitudes` as a normalized state, rejecting vectors whose norm is off by more
    /// than [`NORM_TOLERANCE`].
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    pub fn unnormalized(amplitudes: DVector<Complex64>) -> Self {
        Self {
            amplitudes,
            normalized: false,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::unnormalized(DVector::zeros(dim))
    }

    /// The `k`-th basis vector.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidDimension(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_dim(other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Population `|ψ_k|²` of each basis level.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Sum of two vectors; the result is never flagged as normalized.
    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        self.check_dim(other.dim())?;
        Ok(Self::unnormalized(&self.amplitudes + &other.amplitudes))
    }

    pub fn scale(&self, factor: Complex64) -> StateVector {
        Self::unnormalized(&self.amplitudes * factor)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if !self.normalized || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_input() {
        let v = DVector::from_element(2, Complex64::new(1.0, 0.0));
        assert!(matches!(
            StateVector::normalized(v),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn fidelity_ignores_global_phase() {
        let a = StateVector::basis(3, 1).unwrap();
        let b = a.scale(Complex64::from_polar(1.0, 0.7));
        assert!((a.fidelity(&b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inner_checks_dimension() {
        let a = StateVector::basis(3, 0).unwrap();
        let b = StateVector::basis(4, 0).unwrap();
        assert_eq!(
            a.inner(&b),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        );
    }
}
