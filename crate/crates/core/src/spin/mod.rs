//! Collective spin operators on the symmetric (Dicke) subspace, states, propagators and exact
//! parameter derivatives of propagators.
//!
//! Operators follow the standard convention `J_μ = ½ Σᵢ σᵢ^(μ)`, so the `N`-spin symmetric
//! sector has total spin `j = N/2` and `J_z` eigenvalues in `[−N/2, N/2]`. Basis index `k`
//! corresponds to `m = −j + k`. Dynamics use `ħ = 1`.

mod operator;
mod spectral;
mod state;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use operator::{ComplexOperator, OperatorKind, HERMITIAN_TOLERANCE, UNITARY_TOLERANCE};
pub use spectral::{RotatedOperator, Spectral};
pub use state::{StateVector, NORM_TOLERANCE};

use crate::error::{Error, Result};

/// The `N`-spin symmetric sector, of dimension `N + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DickeSpace {
    n_spins: usize,
}

impl DickeSpace {
    pub fn new(n_spins: usize) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::InvalidDimension(
                "the number of spins must be at least 1".into(),
            ));
        }
        Ok(Self { n_spins })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    /// Total spin `j = N/2`.
    pub fn j(&self) -> f64 {
        self.n_spins as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m(&self, k: usize) -> f64 {
        k as f64 - self.j()
    }
}

/// `J_x`, `J_y`, `J_z`, `J_+`, `J_−` on one Dicke space.
#[derive(Clone, Debug)]
pub struct CollectiveOperators {
    pub jx: ComplexOperator,
    pub jy: ComplexOperator,
    pub jz: ComplexOperator,
    pub jplus: ComplexOperator,
    pub jminus: ComplexOperator,
}

pub fn collective_operators(space: &DickeSpace) -> CollectiveOperators {
    let dim = space.dim();
    let j = space.j();
    let mut jz = DMatrix::<Complex64>::zeros(dim, dim);
    let mut jplus = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim {
        let m = space.m(k);
        jz[(k, k)] = Complex64::new(m, 0.0);
        if k + 1 < dim {
            jplus[(k + 1, k)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jminus = jplus.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let jx = (&jplus + &jminus) * half;
    // (J+ − J−)/(2i) = −i(J+ − J−)/2
    let jy = (&jplus - &jminus) * Complex64::new(0.0, -0.5);

    // The tags below hold by construction; the checked constructors are kept for Jx, Jy, Jz.
    CollectiveOperators {
        jx: ComplexOperator::hermitian(jx).expect("Jx is Hermitian"),
        jy: ComplexOperator::hermitian(jy).expect("Jy is Hermitian"),
        jz: ComplexOperator::hermitian(jz).expect("Jz is Hermitian"),
        jplus: ComplexOperator::general(jplus).expect("square"),
        jminus: ComplexOperator::general(jminus).expect("square"),
    }
}

/// The coherent spin state `|↓⟩^⊗N`, i.e. the `m = −j` basis vector.
pub fn initial_state(space: &DickeSpace) -> StateVector {
    StateVector::basis(space.dim(), 0).expect("index 0 is always in range")
}

/// The `J_x = +N/2` eigenstate `|+⟩^⊗N`, with binomial amplitudes `√C(N, k) / 2^{N/2}`.
pub fn plus_state(space: &DickeSpace) -> StateVector {
    let n = space.n_spins();
    let half_log2 = 0.5 * n as f64 * std::f64::consts::LN_2;
    let mut log_binom = 0.0;
    let mut amps = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            log_binom += ((n - k + 1) as f64 / k as f64).ln();
        }
        amps.push(Complex64::new((0.5 * log_binom - half_log2).exp(), 0.0));
    }
    let v = nalgebra::DVector::from_vec(amps);
    let norm = v.norm();
    StateVector::normalized(v / Complex64::new(norm, 0.0)).expect("renormalized")
}

/// `e^{−i·duration·H} ψ` by Hermitian eigendecomposition.
pub fn propagate(h: &ComplexOperator, duration: f64, psi: &StateVector) -> Result<StateVector> {
    if h.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi.dim(),
        });
    }
    Spectral::new(h)?.evolve(1.0, duration, psi)
}

/// Returns `(φ, ∂_ω φ)` for `φ = e^{−i·duration·(H0 + ω G)} ψ` evaluated at `ω = 0`.
pub fn propagate_with_derivative(
    h0: &ComplexOperator,
    g: &ComplexOperator,
    duration: f64,
    psi: &StateVector,
) -> Result<(StateVector, StateVector)> {
    if h0.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: h0.dim(),
            found: g.dim(),
        });
    }
    g.require_hermitian()?;
    let spectral = Spectral::new(h0)?;
    let rotated = spectral.rotate(g)?;
    spectral.evolve_with_derivative(1.0, duration, &rotated, psi)
}

/// `⟨ψ|A|ψ⟩`.
pub fn expectation(a: &ComplexOperator, psi: &StateVector) -> Result<Complex64> {
    let applied = a.apply(psi)?;
    psi.inner(&applied)
}

/// `⟨A²⟩ − ⟨A⟩²` for Hermitian `A` and normalized `ψ`, clamped at zero.
pub fn variance(a: &ComplexOperator, psi: &StateVector) -> Result<f64> {
    a.require_hermitian()?;
    psi.require_normalized()?;
    let applied = a.apply(psi)?;
    let mean = psi.inner(&applied)?.re;
    let second = applied.amplitudes().norm_squared();
    Ok((second - mean * mean).max(0.0))
}
