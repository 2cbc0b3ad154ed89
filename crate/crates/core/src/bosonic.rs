//! The `N → ∞` limit.
//!
//! Under `J_−/√N → a`, `J_+/√N → a†`, `|↓⟩^⊗N → |0⟩` the spin protocols become displacement,
//! quadrature squeezing and Kerr-like shearing of a single bosonic mode. This module holds the
//! analytic sensitivities in that limit and a truncated Fock-space simulator that evolves the
//! mapped generators directly:
//!
//! - field: `J_y/√N → i(a − a†)/2`
//! - two-axis twisting: `i(J_−² − J_+²)/N → i(a² − a†²)`
//! - one-axis twisting: `J_x²/N → (a + a†)²/4`
//! - echo readout: `J_y/(√N/2) → P = −ia† + ia`

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrology::{echo_readout, qfi, EchoReadout, Method, SensitivityRecord, SpinCount};
use crate::protocols::{validate_point, ProtocolModel, Scheme, SchemeState};
use crate::spin::{ComplexOperator, StateVector};

pub const DEFAULT_TRUNCATION: usize = 400;
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;

/// Fock space truncated to `truncation_dim` levels `|0⟩ … |D−1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockSpace {
    truncation_dim: usize,
    tail_tolerance: f64,
}

impl Default for FockSpace {
    fn default() -> Self {
        Self {
            truncation_dim: DEFAULT_TRUNCATION,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }
}

impl FockSpace {
    pub fn new(truncation_dim: usize) -> Result<Self> {
        if truncation_dim < 2 {
            return Err(Error::InvalidDimension(format!(
                "Fock truncation needs at least 2 levels, got {truncation_dim}"
            )));
        }
        Ok(Self {
            truncation_dim,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        })
    }

    pub fn with_tail_tolerance(mut self, tail_tolerance: f64) -> Result<Self> {
        if tail_tolerance.is_nan() || tail_tolerance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance must be positive, got {tail_tolerance}"
            )));
        }
        self.tail_tolerance = tail_tolerance;
        Ok(self)
    }

    pub fn truncation_dim(&self) -> usize {
        self.truncation_dim
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Rejects states with population of at least `tail_tolerance` in either of the top two
    /// levels.
    pub fn check_tail(&self, psi: &StateVector) -> Result<()> {
        let d = self.truncation_dim;
        for level in [d - 2, d - 1] {
            let population = psi.amplitudes()[level].norm_sqr();
            if population >= self.tail_tolerance {
                return Err(Error::Truncation {
                    population,
                    level,
                    tolerance: self.tail_tolerance,
                });
            }
        }
        Ok(())
    }
}

/// Annihilation operator on the truncated space.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Protocol model on a truncated Fock space.
#[derive(Clone, Debug)]
pub struct FockModel {
    space: FockSpace,
    model: ProtocolModel,
}

impl FockModel {
    pub fn new(space: FockSpace) -> Result<Self> {
        let d = space.truncation_dim();
        let a = annihilation(d);
        let ad = a.adjoint();
        let i = Complex64::new(0.0, 1.0);
        let minus = &a - &ad;
        let x = &a + &ad;

        let field = ComplexOperator::hermitian(&minus * (i * 0.5))?;
        let tat = ComplexOperator::hermitian((&a * &a - &ad * &ad) * i)?;
        let oat = ComplexOperator::hermitian(&x * &x * Complex64::new(0.25, 0.0))?;
        let readout = ComplexOperator::hermitian(&minus * i)?;
        let vacuum = StateVector::basis(d, 0)?;
        let model = ProtocolModel::new(vacuum, field, tat, oat, readout)?;
        Ok(Self { space, model })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn model(&self) -> &ProtocolModel {
        &self.model
    }

    /// Final state and derivative at `ω = 0`, rejecting any intermediate state that leaks
    /// into the top of the truncation.
    pub fn final_state(&self, scheme: Scheme, twist_times_tau: f64, sensing_fraction: f64) -> Result<SchemeState> {
        let space = self.space;
        self.model.state_at_zero_field_observed(
            scheme,
            twist_times_tau,
            sensing_fraction,
            &mut |psi| space.check_tail(psi),
        )
    }

    /// Slope and spread of `P` for B′ or C′.
    pub fn echo_readout(&self, scheme: Scheme, twist_times_tau: f64, sensing_fraction: f64) -> Result<EchoReadout> {
        if !scheme.is_echo() {
            return Err(Error::WrongMethod {
                scheme: scheme.to_string(),
                method: "echo".into(),
            });
        }
        let state = self.final_state(scheme, twist_times_tau, sensing_fraction)?;
        echo_readout(&state, self.model.readout())
    }

    pub fn simulate(&self, scheme: Scheme, twist_times_tau: f64, sensing_fraction: f64) -> Result<SensitivityRecord> {
        let (sensitivity, method) = if scheme.is_echo() {
            let readout = self.echo_readout(scheme, twist_times_tau, sensing_fraction)?;
            (readout.sensitivity(), Method::Echo)
        } else {
            let state = self.final_state(scheme, twist_times_tau, sensing_fraction)?;
            (qfi(&state)?.sqrt(), Method::Qfi)
        };
        Ok(SensitivityRecord {
            scheme,
            n_spins: SpinCount::Infinite,
            twist_strength: twist_times_tau,
            sensing_fraction,
            sensitivity,
            method,
        })
    }
}

/// One-shot Fock simulation; builds a fresh [`FockModel`].
pub fn fock_simulate(
    scheme: Scheme,
    twist_times_tau: f64,
    sensing_fraction: f64,
    space: FockSpace,
) -> Result<SensitivityRecord> {
    validate_point(twist_times_tau, sensing_fraction)?;
    FockModel::new(space)?.simulate(scheme, twist_times_tau, sensing_fraction)
}

/// Analytic `N → ∞` sensitivity at one sensing fraction.
///
/// - A: `1`
/// - B: `(t/τ) e^{2ητ(1−t/τ)}`
/// - C: `(t/τ + 1/(2ητ)) e^{2ητ(1−t/τ)} − 1/(2ητ)`
/// - B′: `χτ (t/τ)(1 − t/τ)/2`
/// - C′: `(χτ/4)(1 − (t/τ)²)`
pub fn closed_form(scheme: Scheme, twist_times_tau: f64, sensing_fraction: f64) -> Result<f64> {
    validate_point(twist_times_tau, sensing_fraction)?;
    let x = twist_times_tau;
    let f = sensing_fraction;
    Ok(match scheme {
        Scheme::A => 1.0,
        Scheme::B => f * (2.0 * x * (1.0 - f)).exp(),
        Scheme::C => {
            if x == 0.0 {
                return Err(Error::SingularParameter(
                    "scheme C closed form has a removable singularity at ητ = 0; use closed_form_c_limit".into(),
                ));
            }
            // (e^{u} − 1)/(2x) written with expm1 so small ητ does not cancel
            let u = 2.0 * x * (1.0 - f);
            f * u.exp() + u.exp_m1() / (2.0 * x)
        }
        Scheme::BPrime => 0.5 * x * f * (1.0 - f),
        Scheme::CPrime => 0.25 * x * (1.0 - f * f),
    })
}

/// `ητ → 0` limit of the scheme C closed form, which is the benchmark value 1 at every
/// sensing fraction.
pub fn closed_form_c_limit(sensing_fraction: f64) -> Result<f64> {
    validate_point(0.0, sensing_fraction)?;
    Ok(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedFormOptimum {
    pub value: f64,
    pub t_opt: f64,
}

/// Maximum of [`closed_form`] over the sensing fraction and where it occurs.
pub fn closed_form_optimum(scheme: Scheme, twist_times_tau: f64) -> Result<ClosedFormOptimum> {
    validate_point(twist_times_tau, 0.0)?;
    let x = twist_times_tau;
    let (value, t_opt) = match scheme {
        Scheme::A => (1.0, 1.0),
        Scheme::B => {
            if x > 0.5 {
                ((2.0 * x - 1.0).exp() / (2.0 * x), 1.0 / (2.0 * x))
            } else {
                (1.0, 1.0)
            }
        }
        Scheme::C => {
            if x == 0.0 {
                return Err(Error::SingularParameter(
                    "scheme C optimum is undefined at ητ = 0".into(),
                ));
            }
            ((2.0 * x).exp_m1() / (2.0 * x), 0.0)
        }
        Scheme::BPrime => (x / 8.0, 0.5),
        Scheme::CPrime => (x / 4.0, 0.0),
    };
    Ok(ClosedFormOptimum { value, t_opt })
}

/// Ratio of the optimized C and B closed forms: `e(1 − e^{−2ητ})` above `ητ = 0.5`,
/// `(e^{2ητ} − 1)/(2ητ)` at or below it. Never below 1, tends to `e`.
pub fn enhancement_ratio(eta_tau: f64) -> Result<f64> {
    if !(eta_tau.is_finite() && eta_tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "enhancement ratio needs ητ > 0, got {eta_tau}"
        )));
    }
    Ok(if eta_tau > 0.5 {
        -std::f64::consts::E * (-2.0 * eta_tau).exp_m1()
    } else {
        (2.0 * eta_tau).exp_m1() / (2.0 * eta_tau)
    })
}

/// A closed-form evaluation with its optional optimum, as emitted by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedFormPoint {
    pub scheme: Scheme,
    pub twist_times_tau: f64,
    pub sensing_fraction: f64,
    pub value: f64,
    pub optimum: Option<ClosedFormOptimum>,
}

pub fn closed_form_point(
    scheme: Scheme,
    twist_times_tau: f64,
    sensing_fraction: f64,
    with_optimum: bool,
) -> Result<ClosedFormPoint> {
    let value = closed_form(scheme, twist_times_tau, sensing_fraction)?;
    let optimum = if with_optimum {
        Some(closed_form_optimum(scheme, twist_times_tau)?)
    } else {
        None
    };
    Ok(ClosedFormPoint {
        scheme,
        twist_times_tau,
        sensing_fraction,
        value,
        optimum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form(Scheme::B, 1.0, 0.5).unwrap() - 0.5 * E).abs() < 1e-14);
        assert!((closed_form(Scheme::BPrime, 8.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        for chi in [0.0, 3.0, 50.0] {
            assert_eq!(closed_form(Scheme::CPrime, chi, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn scheme_c_direct_formula() {
        for (x, f) in [(1.0f64, 0.2f64), (0.3, 0.0), (4.0, 0.7)] {
            let direct = (f + 1.0 / (2.0 * x)) * (2.0 * x * (1.0 - f)).exp() - 1.0 / (2.0 * x);
            assert!(rel(closed_form(Scheme::C, x, f).unwrap(), direct) < 1e-13);
        }
    }

    #[test]
    fn scheme_c_singular_at_zero() {
        assert!(matches!(
            closed_form(Scheme::C, 0.0, 0.3),
            Err(Error::SingularParameter(_))
        ));
        assert!(closed_form_optimum(Scheme::C, 0.0).is_err());
        // the stable form approaches the limit value
        let near = closed_form(Scheme::C, 1e-9, 0.3).unwrap();
        assert!((near - closed_form_c_limit(0.3).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn full_sensing_reduces_to_benchmark() {
        for x in [0.01, 0.5, 2.0, 7.0] {
            assert!((closed_form(Scheme::B, x, 1.0).unwrap() - 1.0).abs() < 1e-15);
            assert!((closed_form(Scheme::C, x, 1.0).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn optimum_examples() {
        let b = closed_form_optimum(Scheme::B, 0.5).unwrap();
        assert_eq!((b.value, b.t_opt), (1.0, 1.0));
        let upper_branch = (2.0f64 * 0.5 - 1.0).exp() / (2.0 * 0.5);
        assert_eq!(upper_branch, 1.0);
        let c = closed_form_optimum(Scheme::C, 1.0).unwrap();
        assert!((c.value - 3.194528049465325).abs() < 1e-12);
        assert_eq!(c.t_opt, 0.0);
        let bp = closed_form_optimum(Scheme::BPrime, 8.0).unwrap();
        assert_eq!((bp.value, bp.t_opt), (1.0, 0.5));
    }

    #[test]
    fn optimum_dominates_dense_grid() {
        for scheme in [Scheme::B, Scheme::C, Scheme::BPrime, Scheme::CPrime] {
            for x in [0.1, 0.5, 0.8, 2.0, 9.0] {
                let opt = closed_form_optimum(scheme, x).unwrap();
                let grid_max = (0..=20_000)
                    .map(|k| closed_form(scheme, x, k as f64 / 20_000.0).unwrap())
                    .fold(f64::MIN, f64::max);
                assert!(opt.value >= grid_max - 1e-9, "{scheme} {x}");
                assert!(rel(opt.value, grid_max) < 1e-7, "{scheme} {x}");
                assert!(rel(closed_form(scheme, x, opt.t_opt).unwrap(), opt.value) < 1e-12);
            }
        }
    }

    #[test]
    fn enhancement_ratio_examples() {
        assert!((enhancement_ratio(1e-6).unwrap() - 1.0).abs() < 1e-5);
        let r1 = enhancement_ratio(1.0).unwrap();
        assert!((r1 - E * (1.0 - (-2.0f64).exp())).abs() < 1e-14);
        let ratio = closed_form_optimum(Scheme::C, 1.0).unwrap().value
            / closed_form_optimum(Scheme::B, 1.0).unwrap().value;
        assert!(rel(r1, ratio) < 1e-13);
        assert!((enhancement_ratio(5.0).unwrap() - E).abs() / E < 0.01);
        assert!(enhancement_ratio(0.0).is_err());
    }

    #[test]
    fn tail_check_flags_top_levels() {
        let space = FockSpace::new(4).unwrap();
        assert!(space.check_tail(&StateVector::basis(4, 1).unwrap()).is_ok());
        match space.check_tail(&StateVector::basis(4, 3).unwrap()) {
            Err(Error::Truncation { level, population, .. }) => {
                assert_eq!(level, 3);
                assert_eq!(population, 1.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(FockSpace::new(1).is_err());
    }

    #[test]
    fn vacuum_displacement_benchmark() {
        for d in [4, 10, 30] {
            let r = fock_simulate(Scheme::A, 0.0, 0.5, FockSpace::new(d).unwrap()).unwrap();
            assert!((r.sensitivity - 1.0).abs() < 1e-12, "D={d}");
            assert_eq!(r.n_spins, SpinCount::Infinite);
        }
    }

    #[test]
    fn small_truncation_is_rejected() {
        let err = fock_simulate(Scheme::B, 3.0, 0.2, FockSpace::new(12).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }), "{err:?}");
    }

    #[test]
    fn fock_scheme_b_moderate_squeezing() {
        let r = fock_simulate(Scheme::B, 0.5, 0.5, FockSpace::new(120).unwrap()).unwrap();
        let cf = closed_form(Scheme::B, 0.5, 0.5).unwrap();
        assert!(rel(r.sensitivity, cf) < 1e-8, "{} vs {cf}", r.sensitivity);
    }
}
