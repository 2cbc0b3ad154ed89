//! Sensitivity figures of merit.
//!
//! Schemes A, B and C are scored by the pure-state quantum Fisher information
//! `F = 4[⟨∂ψ|∂ψ⟩ − |⟨ψ|∂ψ⟩|²]`, reported as the dimensionless `√F/τ`. The echo schemes B′
//! and C′ are scored by error propagation on the readout observable,
//! `τ |∂_ω⟨J_y⟩| / ΔJ_y` at `ω = 0`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::protocols::{ProtocolConfig, Scheme, SchemeState, SpinModel};
use crate::spin::{collective_operators, plus_state, variance, ComplexOperator, DickeSpace, StateVector};

/// Tolerance on the `ΔJ_y = √N/2` identity at zero field.
pub const ECHO_STD_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Qfi,
    Echo,
    ClosedForm,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Qfi => "qfi",
            Method::Echo => "echo",
            Method::ClosedForm => "closed_form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Number of spins, or the bosonic `N → ∞` limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinCount {
    Finite(usize),
    Infinite,
}

impl SpinCount {
    pub fn finite(self) -> Option<usize> {
        match self {
            SpinCount::Finite(n) => Some(n),
            SpinCount::Infinite => None,
        }
    }
}

impl fmt::Display for SpinCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinCount::Finite(n) => write!(f, "{n}"),
            SpinCount::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for SpinCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(SpinCount::Infinite);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(SpinCount::Finite(n)),
            _ => Err(Error::InvalidParameter(format!(
                "spin count must be a positive integer or 'inf', got '{s}'"
            ))),
        }
    }
}

impl Serialize for SpinCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpinCount::Finite(n) => serializer.serialize_u64(*n as u64),
            SpinCount::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// One evaluated point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SensitivityRecord {
    pub scheme: Scheme,
    pub n_spins: SpinCount,
    pub twist_strength: f64,
    pub sensing_fraction: f64,
    /// `(√ν τ δω)^{−1}`; equals `√F/τ` on the QFI path.
    pub sensitivity: f64,
    pub method: Method,
}

/// Quantum Fisher information of a pure state family at `ω = 0`.
pub fn qfi(state: &SchemeState) -> Result<f64> {
    if state.omega != 0.0 {
        return Err(Error::ContractViolation(format!(
            "quantum Fisher information needs the state at omega = 0, got {}",
            state.omega
        )));
    }
    state.psi.require_normalized()?;
    let dd = state.dpsi.amplitudes().norm_squared();
    let overlap = state.psi.inner(&state.dpsi)?.norm_sqr();
    Ok((4.0 * (dd - overlap)).max(0.0))
}

/// Slope and spread of the echo readout observable at `ω = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EchoReadout {
    /// `∂_ω⟨A⟩ = 2 Re⟨ψ|A|∂ψ⟩`
    pub slope: f64,
    /// `ΔA`
    pub std_dev: f64,
}

impl EchoReadout {
    /// `|slope| / ΔA` (with `τ = 1`), defined as 0 when the slope vanishes.
    pub fn sensitivity(&self) -> f64 {
        if self.slope == 0.0 {
            0.0
        } else {
            self.slope.abs() / self.std_dev
        }
    }
}

pub fn echo_readout(state: &SchemeState, observable: &ComplexOperator) -> Result<EchoReadout> {
    if state.omega != 0.0 {
        return Err(Error::ContractViolation(format!(
            "echo readout needs the state at omega = 0, got {}",
            state.omega
        )));
    }
    let applied = observable.apply(&state.dpsi)?;
    let slope = 2.0 * state.psi.inner(&applied)?.re;
    let std_dev = variance(observable, &state.psi)?.sqrt();
    Ok(EchoReadout { slope, std_dev })
}

fn require_scheme(cfg: &ProtocolConfig, echo: bool) -> Result<()> {
    if cfg.scheme.is_echo() != echo {
        return Err(Error::WrongMethod {
            scheme: cfg.scheme.to_string(),
            method: if echo { "echo" } else { "qfi" }.into(),
        });
    }
    Ok(())
}

fn zero_field(cfg: &ProtocolConfig) -> ProtocolConfig {
    let mut cfg = *cfg;
    cfg.omega = 0.0;
    cfg
}

impl SpinModel {
    /// `√F/τ` for schemes A, B, C.
    pub fn qfi_sensitivity(&self, cfg: &ProtocolConfig) -> Result<SensitivityRecord> {
        require_scheme(cfg, false)?;
        let state = self.final_state(&zero_field(cfg))?;
        Ok(SensitivityRecord {
            scheme: cfg.scheme,
            n_spins: SpinCount::Finite(cfg.n_spins),
            twist_strength: cfg.twist_strength,
            sensing_fraction: cfg.sensing_fraction,
            sensitivity: qfi(&state)?.sqrt(),
            method: Method::Qfi,
        })
    }

    /// Slope and spread of `J_y` for B′ or C′.
    pub fn echo_readout(&self, cfg: &ProtocolConfig) -> Result<EchoReadout> {
        require_scheme(cfg, true)?;
        let state = self.final_state(&zero_field(cfg))?;
        let readout = echo_readout(&state, &self.operators().jy)?;
        let expected = (cfg.n_spins as f64).sqrt() / 2.0;
        if (readout.std_dev - expected).abs() > ECHO_STD_TOLERANCE {
            return Err(Error::ContractViolation(format!(
                "ΔJy at zero field is {} but should be √N/2 = {expected}",
                readout.std_dev
            )));
        }
        Ok(readout)
    }

    /// `τ |∂_ω⟨J_y⟩| / ΔJ_y` for B′ and C′.
    pub fn echo_sensitivity(&self, cfg: &ProtocolConfig) -> Result<SensitivityRecord> {
        let readout = self.echo_readout(cfg)?;
        Ok(SensitivityRecord {
            scheme: cfg.scheme,
            n_spins: SpinCount::Finite(cfg.n_spins),
            twist_strength: cfg.twist_strength,
            sensing_fraction: cfg.sensing_fraction,
            sensitivity: readout.sensitivity(),
            method: Method::Echo,
        })
    }

    /// QFI for A/B/C, echo for B′/C′.
    pub fn sensitivity(&self, cfg: &ProtocolConfig) -> Result<SensitivityRecord> {
        if cfg.scheme.is_echo() {
            self.echo_sensitivity(cfg)
        } else {
            self.qfi_sensitivity(cfg)
        }
    }
}

pub fn qfi_sensitivity(cfg: &ProtocolConfig) -> Result<SensitivityRecord> {
    require_scheme(cfg, false)?;
    cfg.validate()?;
    SpinModel::new(cfg.n_spins)?.qfi_sensitivity(cfg)
}

pub fn echo_sensitivity(cfg: &ProtocolConfig) -> Result<SensitivityRecord> {
    require_scheme(cfg, true)?;
    cfg.validate()?;
    SpinModel::new(cfg.n_spins)?.echo_sensitivity(cfg)
}

/// Closed form of the B′ echo sensitivity at finite `N`:
/// `(t/τ)(N−1)|sin θ cos^{N−2} θ|` with `θ = χτ(1 − t/τ)/(2N)`.
pub fn closed_form_bprime(n_spins: usize, chi_tau: f64, sensing_fraction: f64) -> Result<f64> {
    if n_spins == 0 {
        return Err(Error::InvalidDimension(
            "the number of spins must be at least 1".into(),
        ));
    }
    crate::protocols::validate_point(chi_tau, sensing_fraction)?;
    let n = n_spins as f64;
    let theta = chi_tau * (1.0 - sensing_fraction) / (2.0 * n);
    if n_spins == 1 {
        return Ok(0.0);
    }
    let power = theta.cos().powi((n_spins - 2) as i32);
    Ok(sensing_fraction * (n - 1.0) * (theta.sin() * power).abs())
}

/// `X(α, β, γ) = ⟨+|^⊗N e^{γJ−} e^{βJz} e^{αJ+} |+⟩^⊗N
///             = [½e^{−β/2} + ½e^{β/2}(α+1)(γ+1)]^N`.
pub fn generating_function(alpha: Complex64, beta: Complex64, gamma: Complex64, n_spins: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let base = 0.5 * (-beta / 2.0).exp() + 0.5 * (beta / 2.0).exp() * (alpha + one) * (gamma + one);
    base.powu(n_spins as u32)
}

/// `⟨+|^⊗N J−² e^{βJz} |+⟩^⊗N` at `β = −2i·phase`, i.e. the second γ-derivative of the
/// generating function: `N(N−1)/4 · cos^{N−2}(phase) · e^{−2i·phase}`.
pub fn moment_oracle(n_spins: usize, phase: f64) -> Result<Complex64> {
    if n_spins < 2 {
        return Err(Error::InvalidDimension(format!(
            "the J−² moment needs N ≥ 2, got {n_spins}"
        )));
    }
    let n = n_spins as f64;
    let magnitude = n * (n - 1.0) / 4.0 * phase.cos().powi((n_spins - 2) as i32);
    Ok(Complex64::from_polar(1.0, -2.0 * phase) * magnitude)
}

/// The same moment by dense matrices on the Dicke space.
pub fn moment_dense(n_spins: usize, phase: f64) -> Result<Complex64> {
    let space = DickeSpace::new(n_spins)?;
    let ops = collective_operators(&space);
    let plus = plus_state(&space);
    let beta = Complex64::new(0.0, -2.0 * phase);
    let weighted: Vec<Complex64> = plus
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| a * (beta * space.m(k)).exp())
        .collect();
    let weighted = StateVector::unnormalized(nalgebra::DVector::from_vec(weighted));
    let jm2 = ops.jminus.mul(&ops.jminus)?;
    plus.inner(&jm2.apply(&weighted)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn scheme_a_benchmark() {
        let r = qfi_sensitivity(&ProtocolConfig::new(Scheme::A, 100, 0.0, 0.5).unwrap()).unwrap();
        assert!((r.sensitivity - 1.0).abs() < 1e-9);
        assert_eq!(r.method, Method::Qfi);
    }

    #[test]
    fn zero_twist() {
        // B without twisting only senses for t; C without twisting senses for the whole budget
        for t in [0.0, 0.3, 1.0] {
            let b = qfi_sensitivity(&ProtocolConfig::new(Scheme::B, 2, 0.0, t).unwrap()).unwrap();
            assert!((b.sensitivity - t).abs() < 1e-12);
            let c = qfi_sensitivity(&ProtocolConfig::new(Scheme::C, 2, 0.0, t).unwrap()).unwrap();
            assert!((c.sensitivity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn concurrent_scheme_beats_benchmark_at_weak_twist() {
        let r = qfi_sensitivity(&ProtocolConfig::new(Scheme::C, 10, 0.4, 0.0).unwrap()).unwrap();
        assert!(r.sensitivity > 1.0, "{}", r.sensitivity);
    }

    #[test]
    fn wrong_method_errors() {
        let echo = ProtocolConfig::new(Scheme::BPrime, 4, 1.0, 0.5).unwrap();
        assert!(matches!(qfi_sensitivity(&echo), Err(Error::WrongMethod { .. })));
        let q = ProtocolConfig::new(Scheme::C, 4, 1.0, 0.5).unwrap();
        assert!(matches!(echo_sensitivity(&q), Err(Error::WrongMethod { .. })));
    }

    #[test]
    fn qfi_rejects_nonzero_field_state() {
        let cfg = ProtocolConfig::new(Scheme::C, 4, 1.0, 0.5).unwrap().with_omega(0.1);
        let st = crate::protocols::final_state(&cfg).unwrap();
        assert!(matches!(qfi(&st), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn bprime_vanishes_at_full_sensing() {
        for n in [2, 7, 30] {
            let r = echo_sensitivity(&ProtocolConfig::new(Scheme::BPrime, n, 13.0, 1.0).unwrap()).unwrap();
            assert_eq!(r.sensitivity, 0.0);
            assert_eq!(closed_form_bprime(n, 13.0, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn bprime_matches_closed_form() {
        let cf = closed_form_bprime(10, 50.0, 0.9).unwrap();
        let direct = 0.9 * 9.0 * (0.25f64.sin() * 0.25f64.cos().powi(8)).abs();
        assert!((cf - direct).abs() < 1e-15);
        let r = echo_sensitivity(&ProtocolConfig::new(Scheme::BPrime, 10, 50.0, 0.9).unwrap()).unwrap();
        assert!(rel(r.sensitivity, cf) < 1e-6, "{} vs {cf}", r.sensitivity);
        assert_eq!(r.method, Method::Echo);
    }

    #[test]
    fn closed_form_bprime_n2_has_no_cosine_factor() {
        for (chi, t) in [(3.0, 0.2), (40.0, 0.7)] {
            let theta: f64 = chi * (1.0 - t) / 4.0;
            assert!((closed_form_bprime(2, chi, t).unwrap() - t * theta.sin().abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_bprime_large_n_limit() {
        let v = closed_form_bprime(1_000_000, 8.0, 0.5).unwrap();
        assert!((v - 1.0).abs() < 1e-4, "{v}");
    }

    #[test]
    fn generating_function_special_cases() {
        let z = Complex64::new(0.0, 0.0);
        for n in [1, 4, 9] {
            assert!((generating_function(z, z, z, n) - 1.0).norm() < 1e-15);
            let a = Complex64::new(0.3, -0.2);
            let g = Complex64::new(-0.1, 0.4);
            let collapsed = ((Complex64::new(1.0, 0.0) + (a + 1.0) * (g + 1.0)) / 2.0).powu(n as u32);
            assert!((generating_function(a, z, g, n) - collapsed).norm() < 1e-14);
            let b = Complex64::new(0.7, 0.0);
            let cosh = (0.35f64).cosh().powi(n as i32);
            assert!((generating_function(z, b, z, n) - cosh).norm() < 1e-13);
        }
    }

    #[test]
    fn moment_oracle_examples() {
        assert!((moment_oracle(2, 0.0).unwrap() - 0.5).norm() < 1e-15);
        assert!(moment_oracle(5, std::f64::consts::FRAC_PI_2).unwrap().norm() < 1e-14);
        assert!(moment_oracle(1, 0.3).is_err());
        let a = moment_oracle(8, 0.3).unwrap();
        let b = moment_dense(8, 0.3).unwrap();
        assert!((a - b).norm() / a.norm() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn spin_count_parsing() {
        assert_eq!("inf".parse::<SpinCount>().unwrap(), SpinCount::Infinite);
        assert_eq!("12".parse::<SpinCount>().unwrap(), SpinCount::Finite(12));
        assert!("0".parse::<SpinCount>().is_err());
        assert!("2.5".parse::<SpinCount>().is_err());
        assert_eq!(serde_json::to_string(&SpinCount::Infinite).unwrap(), "\"inf\"");
    }
}
