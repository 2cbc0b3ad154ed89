use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::StateVector;
use crate::error::{Error, Result};

/// Relative elementwise tolerance for the Hermiticity check.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Absolute elementwise tolerance for the unitarity check.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Hermitian,
    Unitary,
    General,
}

/// Dense complex square matrix tagged with the role it plays (generator, propagator or
/// anything else).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator {
    matrix: DMatrix<Complex64>,
    kind: OperatorKind,
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for k in i..n {
            dev = dev.max((m[(i, k)] - m[(k, i)].conj()).norm());
        }
    }
    dev
}

fn require_square(m: &DMatrix<Complex64>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::InvalidDimension(format!(
            "operator must be a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

impl ComplexOperator {
    /// Tags `matrix` as Hermitian after checking `max|A − A†| ≤ 1e−12 · max|A|`.
    pub fn hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        require_square(&matrix)?;
        let deviation = hermiticity_deviation(&matrix);
        let tolerance = HERMITIAN_TOLERANCE * max_abs(&matrix);
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                deviation,
                tolerance,
            });
        }
        Ok(Self {
            matrix,
            kind: OperatorKind::Hermitian,
        })
    }

    /// Tags `matrix` as unitary after checking `max|A†A − I| ≤ 1e−10`.
    pub fn unitary(matrix: DMatrix<Complex64>) -> Result<Self> {
        require_square(&matrix)?;
        let n = matrix.nrows();
        let product = matrix.adjoint() * &matrix;
        let deviation = max_abs(&(product - DMatrix::<Complex64>::identity(n, n)));
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARY_TOLERANCE,
            });
        }
        Ok(Self {
            matrix,
            kind: OperatorKind::Unitary,
        })
    }

    pub fn general(matrix: DMatrix<Complex64>) -> Result<Self> {
        require_square(&matrix)?;
        Ok(Self {
            matrix,
            kind: OperatorKind::General,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(dim, dim),
            kind: OperatorKind::Hermitian,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            kind: OperatorKind::Hermitian,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Succeeds when the operator is tagged Hermitian or, failing that, when its entries pass
    /// the Hermiticity check anyway.
    pub fn require_hermitian(&self) -> Result<()> {
        if self.kind == OperatorKind::Hermitian {
            return Ok(());
        }
        Self::hermitian(self.matrix.clone()).map(|_| ())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            kind: self.kind,
        }
    }

    /// Multiplication by a real scalar keeps Hermitian operators Hermitian.
    pub fn scale(&self, factor: f64) -> Self {
        let kind = match self.kind {
            OperatorKind::Hermitian => OperatorKind::Hermitian,
            _ => OperatorKind::General,
        };
        Self {
            matrix: &self.matrix * Complex64::new(factor, 0.0),
            kind,
        }
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        Self {
            matrix: &self.matrix * factor,
            kind: OperatorKind::General,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        let kind = if self.kind == OperatorKind::Hermitian && other.kind == OperatorKind::Hermitian
        {
            OperatorKind::Hermitian
        } else {
            OperatorKind::General
        };
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
            kind,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        let kind = if self.kind == OperatorKind::Unitary && other.kind == OperatorKind::Unitary {
            OperatorKind::Unitary
        } else {
            OperatorKind::General
        };
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
            kind,
        })
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
            kind: OperatorKind::General,
        })
    }

    /// Largest elementwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim())?;
        Ok(max_abs(&(&self.matrix - &other.matrix)))
    }

    /// Applies the operator; the result is flagged normalized only for a unitary acting on a
    /// normalized state.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        psi.check_dim(self.dim())?;
        let out = &self.matrix * psi.amplitudes();
        if self.kind == OperatorKind::Unitary && psi.is_normalized() {
            StateVector::normalized(out)
        } else {
            Ok(StateVector::unnormalized(out))
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_check_rejects_asymmetric_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(2.0, 0.0)]);
        assert!(matches!(
            ComplexOperator::hermitian(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn unitary_check() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
        assert!(ComplexOperator::unitary(h).is_ok());
        let not = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            ComplexOperator::unitary(not),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn general_operator_that_is_hermitian_passes_requirement() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(2.0, 0.0)]);
        let op = ComplexOperator::general(m).unwrap();
        assert!(op.require_hermitian().is_ok());
    }

    #[test]
    fn empty_and_rectangular_rejected() {
        assert!(ComplexOperator::general(DMatrix::zeros(0, 0)).is_err());
        assert!(ComplexOperator::general(DMatrix::zeros(2, 3)).is_err());
    }
}
