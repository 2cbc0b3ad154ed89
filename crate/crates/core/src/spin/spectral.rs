//! Propagators of Hermitian generators through their eigendecomposition.
//!
//! For `H = Q Λ Q†` the propagator is `e^{−i s d H} = Q e^{−i s d Λ} Q†`, where `s` is a
//! strength multiplier and `d` a duration. Keeping the decomposition around lets a protocol
//! reuse one diagonalization for every strength, duration and sign of the generator.
//!
//! The ω-derivative of `e^{−i d (s H + ω G)}` at `ω = 0` is the top-right block of the
//! exponential of the block-upper-triangular matrix `−i d [[s H, G], [0, s H]]`. In the
//! eigenbasis of `H` that block is the Hadamard product of `−i d Q†GQ` with the divided
//! differences of the exponential,
//!
//! ```text
//! Φ_jk = (e^{a_j} − e^{a_k}) / (a_j − a_k),   a_j = −i s d λ_j
//!      = e^{−i s d (λ_j + λ_k)/2} · sinc(s d (λ_j − λ_k)/2),
//! ```
//!
//! which stays finite and accurate for degenerate eigenvalues.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::operator::ComplexOperator;
use super::state::StateVector;
use crate::error::{Error, Result};

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 0;

/// Eigendecomposition `H = Q Λ Q†` of a Hermitian generator.
#[derive(Clone, Debug)]
pub struct Spectral {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// An operator expressed in the eigenbasis of a [`Spectral`] decomposition, `Q† G Q`.
#[derive(Clone, Debug)]
pub struct RotatedOperator {
    matrix: DMatrix<Complex64>,
}

impl RotatedOperator {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sin() / y
    }
}

impl Spectral {
    pub fn new(generator: &ComplexOperator) -> Result<Self> {
        generator.require_hermitian()?;
        let dim = generator.dim();
        let eig = SymmetricEigen::try_new(generator.matrix().clone(), EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or(Error::Eigen(dim))?;
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// `Q† G Q`.
    pub fn rotate(&self, op: &ComplexOperator) -> Result<RotatedOperator> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.dim(),
            });
        }
        let q = &self.eigenvectors;
        Ok(RotatedOperator {
            matrix: q.adjoint() * op.matrix() * q,
        })
    }

    fn phases(&self, scale: f64, duration: f64) -> DVector<Complex64> {
        self.eigenvalues
            .map(|l| Complex64::from_polar(1.0, -scale * duration * l))
    }

    /// Dense propagator `e^{−i·scale·duration·H}`.
    pub fn propagator(&self, scale: f64, duration: f64) -> Result<ComplexOperator> {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (k, phase) in self.phases(scale, duration).iter().enumerate() {
            let mut col = scaled.column_mut(k);
            col *= *phase;
        }
        ComplexOperator::unitary(scaled * q.adjoint())
    }

    /// `e^{−i·scale·duration·H} ψ`.
    pub fn evolve(&self, scale: f64, duration: f64, psi: &StateVector) -> Result<StateVector> {
        psi.check_dim(self.dim())?;
        let mut coeffs = self.eigenvectors.ad_mul(psi.amplitudes());
        coeffs.component_mul_assign(&self.phases(scale, duration));
        let out = &self.eigenvectors * coeffs;
        if psi.is_normalized() {
            StateVector::normalized(out)
        } else {
            Ok(StateVector::unnormalized(out))
        }
    }

    /// Returns `(φ, ∂_ω φ)` for `φ = e^{−i·duration·(scale·H + ω G)} ψ` at `ω = 0`, with `G`
    /// supplied in this eigenbasis.
    pub fn evolve_with_derivative(
        &self,
        scale: f64,
        duration: f64,
        rotated: &RotatedOperator,
        psi: &StateVector,
    ) -> Result<(StateVector, StateVector)> {
        psi.check_dim(self.dim())?;
        let n = self.dim();
        if rotated.matrix.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rotated.matrix.nrows(),
            });
        }
        let coeffs = self.eigenvectors.ad_mul(psi.amplitudes());
        let phases = self.phases(scale, duration);

        let evolved = coeffs.component_mul(&phases);
        let phi = &self.eigenvectors * &evolved;

        let sd = scale * duration;
        let prefactor = Complex64::new(0.0, -duration);
        let mut dcoeffs = DVector::<Complex64>::zeros(n);
        for j in 0..n {
            let lj = self.eigenvalues[j];
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let lk = self.eigenvalues[k];
                let divided = Complex64::from_polar(sinc(0.5 * sd * (lj - lk)), -0.5 * sd * (lj + lk));
                acc += rotated.matrix[(j, k)] * divided * coeffs[k];
            }
            dcoeffs[j] = acc * prefactor;
        }
        let dphi = &self.eigenvectors * dcoeffs;

        let phi = if psi.is_normalized() {
            StateVector::normalized(phi)?
        } else {
            StateVector::unnormalized(phi)
        };
        Ok((phi, StateVector::unnormalized(dphi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_series_matches_direct_form_at_crossover() {
        let y = 1e-4;
        assert!((sinc(y * 0.999) - (y * 0.999).sin() / (y * 0.999)).abs() < 1e-16);
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn propagator_of_zero_generator_is_identity() {
        let spec = Spectral::new(&ComplexOperator::zeros(3)).unwrap();
        let u = spec.propagator(1.0, 2.5).unwrap();
        assert!(u.max_abs_diff(&ComplexOperator::identity(3)).unwrap() < 1e-15);
    }

    #[test]
    fn non_hermitian_generator_rejected() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let op = ComplexOperator::general(m).unwrap();
        assert!(matches!(Spectral::new(&op), Err(Error::NotHermitian { .. })));
    }
}
