//! The five sensing protocols and their final states under a fixed time budget.
//!
//! All times are in units of the total budget `τ`, so a configuration is fully described by
//! `N`, the twist strength times `τ` (`ητ` or `χτ`) and the sensing fraction `t/τ`. Operator
//! products are applied right to left: the rightmost factor acts first on `|↓⟩^⊗N`.
//!
//! | scheme | final state | preparation time `t′` |
//! |---|---|---|
//! | A  | `D_ω(τ)|↓⟩` | — |
//! | B  | `D_ω(t) S_η(t′)|↓⟩` | `τ − t` |
//! | C  | `D_ω(t) U_{ω,η}(t′)|↓⟩` | `τ − t` |
//! | B′ | `T_{−χ}(t′) D_ω(t) T_χ(t′)|↓⟩` | `(τ − t)/2` |
//! | C′ | `V_{ω,−χ}(t′) D_ω(t) V_{ω,χ}(t′)|↓⟩` | `(τ − t)/2` |
//!
//! with `D_ω(t) = e^{−itωG}`, `S_η = e^{−it′ηT}`, `U_{ω,η} = e^{−it′(ωG + ηT)}`,
//! `T_χ = e^{−it′χO}` and `V_{ω,χ} = e^{−it′(ωG + χO)}`, where `G = J_y/√N`,
//! `T = i(J_−² − J_+²)/N` and `O = J_x²/N`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{
    self, collective_operators, initial_state, CollectiveOperators, ComplexOperator, DickeSpace,
    RotatedOperator, Spectral, StateVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    A,
    B,
    C,
    #[serde(rename = "Bprime")]
    BPrime,
    #[serde(rename = "Cprime")]
    CPrime,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::A, Scheme::B, Scheme::C, Scheme::BPrime, Scheme::CPrime];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::A => "A",
            Scheme::B => "B",
            Scheme::C => "C",
            Scheme::BPrime => "Bprime",
            Scheme::CPrime => "Cprime",
        }
    }

    /// Echo-readout schemes are scored by error propagation on the readout observable; the
    /// others by the quantum Fisher information.
    pub fn is_echo(self) -> bool {
        matches!(self, Scheme::BPrime | Scheme::CPrime)
    }

    /// Preparation time `t′/τ` for a given sensing fraction `t/τ`.
    pub fn preparation_time(self, sensing_fraction: f64) -> f64 {
        match self {
            Scheme::A => 0.0,
            Scheme::B | Scheme::C => 1.0 - sensing_fraction,
            Scheme::BPrime | Scheme::CPrime => 0.5 * (1.0 - sensing_fraction),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Scheme::A),
            "B" | "b" => Ok(Scheme::B),
            "C" | "c" => Ok(Scheme::C),
            "Bprime" | "bprime" | "B'" | "b'" | "Bp" => Ok(Scheme::BPrime),
            "Cprime" | "cprime" | "C'" | "c'" | "Cp" => Ok(Scheme::CPrime),
            other => Err(Error::InvalidParameter(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `ω J_y/√N`
    Field,
    /// `iη(J_−² − J_+²)/N`
    Tat,
    /// `χ J_x²/N`
    Oat,
}

/// One of the three protocol Hamiltonians at the given strength.
pub fn hamiltonian(space: &DickeSpace, kind: GeneratorKind, strength: f64) -> Result<ComplexOperator> {
    if !strength.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "generator strength must be finite, got {strength}"
        )));
    }
    let ops = collective_operators(space);
    Ok(unit_generator(space, &ops, kind).scale(strength))
}

fn unit_generator(space: &DickeSpace, ops: &CollectiveOperators, kind: GeneratorKind) -> ComplexOperator {
    let n = space.n_spins() as f64;
    let matrix = match kind {
        GeneratorKind::Field => ops.jy.matrix() / Complex64::new(n.sqrt(), 0.0),
        GeneratorKind::Tat => {
            let jm = ops.jminus.matrix();
            let jp = ops.jplus.matrix();
            (jm * jm - jp * jp) * Complex64::new(0.0, 1.0 / n)
        }
        GeneratorKind::Oat => {
            let jx = ops.jx.matrix();
            jx * jx / Complex64::new(n, 0.0)
        }
    };
    ComplexOperator::hermitian(matrix).expect("protocol generators are Hermitian")
}

/// Scheme plus the dimensionless parameters fixing one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub scheme: Scheme,
    pub n_spins: usize,
    /// `ητ` for B/C, `χτ` for B′/C′; ignored for A.
    pub twist_strength: f64,
    /// `t/τ ∈ [0, 1]`
    pub sensing_fraction: f64,
    /// Scaled field; sensitivities are always evaluated at 0.
    pub omega: f64,
}

impl ProtocolConfig {
    pub fn new(scheme: Scheme, n_spins: usize, twist_strength: f64, sensing_fraction: f64) -> Result<Self> {
        let cfg = Self {
            scheme,
            n_spins,
            twist_strength,
            sensing_fraction,
            omega: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins == 0 {
            return Err(Error::InvalidDimension(
                "the number of spins must be at least 1".into(),
            ));
        }
        validate_point(self.twist_strength, self.sensing_fraction)?;
        if !self.omega.is_finite() {
            return Err(Error::InvalidParameter("omega must be finite".into()));
        }
        Ok(())
    }

    pub fn preparation_time(&self) -> f64 {
        self.scheme.preparation_time(self.sensing_fraction)
    }
}

pub(crate) fn validate_point(twist: f64, sensing_fraction: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&sensing_fraction) {
        return Err(Error::InvalidParameter(format!(
            "sensing fraction must lie in [0, 1], got {sensing_fraction}"
        )));
    }
    if !(twist.is_finite() && twist >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "twist strength must be finite and non-negative, got {twist}"
        )));
    }
    Ok(())
}

/// Final state and its ω-derivative at `ω = 0`.
#[derive(Clone, Debug)]
pub struct SchemeState {
    pub psi: StateVector,
    pub dpsi: StateVector,
    /// Field value at which `psi` was evaluated.
    pub omega: f64,
}

/// Generators and cached spectral decompositions shared by every run on one Hilbert space.
///
/// The same machinery drives the Dicke-space simulator and the truncated Fock-space
/// simulator; only the operators differ.
#[derive(Clone, Debug)]
pub struct ProtocolModel {
    initial: StateVector,
    field: ComplexOperator,
    readout: ComplexOperator,
    tat: ComplexOperator,
    oat: ComplexOperator,
    tat_spectral: Spectral,
    oat_spectral: Spectral,
    field_in_tat: RotatedOperator,
    field_in_oat: RotatedOperator,
}

impl ProtocolModel {
    /// `field` is the unit-strength field generator, `tat`/`oat` the unit-strength twisting
    /// generators and `readout` the echo observable.
    pub fn new(
        initial: StateVector,
        field: ComplexOperator,
        tat: ComplexOperator,
        oat: ComplexOperator,
        readout: ComplexOperator,
    ) -> Result<Self> {
        initial.require_normalized()?;
        for op in [&field, &tat, &oat, &readout] {
            op.require_hermitian()?;
            if op.dim() != initial.dim() {
                return Err(Error::DimensionMismatch {
                    expected: initial.dim(),
                    found: op.dim(),
                });
            }
        }
        let tat_spectral = Spectral::new(&tat)?;
        let oat_spectral = Spectral::new(&oat)?;
        let field_in_tat = tat_spectral.rotate(&field)?;
        let field_in_oat = oat_spectral.rotate(&field)?;
        Ok(Self {
            initial,
            field,
            readout,
            tat,
            oat,
            tat_spectral,
            oat_spectral,
            field_in_tat,
            field_in_oat,
        })
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn field(&self) -> &ComplexOperator {
        &self.field
    }

    pub fn readout(&self) -> &ComplexOperator {
        &self.readout
    }

    /// `ψ` and `∂_ω ψ` at `ω = 0`.
    pub fn state_at_zero_field(&self, scheme: Scheme, twist: f64, sensing_fraction: f64) -> Result<SchemeState> {
        self.state_at_zero_field_observed(scheme, twist, sensing_fraction, &mut |_| Ok(()))
    }

    /// As [`Self::state_at_zero_field`], handing every intermediate and final state to
    /// `observe`.
    pub fn state_at_zero_field_observed(
        &self,
        scheme: Scheme,
        twist: f64,
        sensing_fraction: f64,
        observe: &mut dyn FnMut(&StateVector) -> Result<()>,
    ) -> Result<SchemeState> {
        validate_point(twist, sensing_fraction)?;
        let t = sensing_fraction;
        let tp = scheme.preparation_time(t);
        let psi0 = self.initial.clone();
        let zero = StateVector::zeros(self.dim());

        let (psi, dpsi) = match scheme {
            Scheme::A => self.sense(1.0, psi0, zero)?,
            Scheme::B => {
                let prepared = self.tat_spectral.evolve(twist, tp, &psi0)?;
                observe(&prepared)?;
                self.sense(t, prepared, zero)?
            }
            Scheme::C => {
                let (prepared, dprepared) =
                    self.tat_spectral
                        .evolve_with_derivative(twist, tp, &self.field_in_tat, &psi0)?;
                observe(&prepared)?;
                self.sense(t, prepared, dprepared)?
            }
            Scheme::BPrime => {
                let prepared = self.oat_spectral.evolve(twist, tp, &psi0)?;
                observe(&prepared)?;
                let (sensed, dsensed) = self.sense(t, prepared, zero)?;
                let psi = self.oat_spectral.evolve(-twist, tp, &sensed)?;
                let dpsi = self.oat_spectral.evolve(-twist, tp, &dsensed)?;
                (psi, dpsi)
            }
            Scheme::CPrime => {
                let (prepared, dprepared) =
                    self.oat_spectral
                        .evolve_with_derivative(twist, tp, &self.field_in_oat, &psi0)?;
                observe(&prepared)?;
                let (sensed, dsensed) = self.sense(t, prepared, dprepared)?;
                // product rule: V₂(∂ψ) + (∂V₂)ψ, the echo reverses χ but not ω
                let (psi, dpsi_echo) = self.oat_spectral.evolve_with_derivative(
                    -twist,
                    tp,
                    &self.field_in_oat,
                    &sensed,
                )?;
                let dpsi = self.oat_spectral.evolve(-twist, tp, &dsensed)?.add(&dpsi_echo)?;
                (psi, dpsi)
            }
        };
        observe(&psi)?;
        Ok(SchemeState {
            psi,
            dpsi,
            omega: 0.0,
        })
    }

    /// Field-only stage `D_ω(t)` at `ω = 0`: identity on `ψ`, adds `−i t G ψ` to `∂ψ`.
    fn sense(&self, t: f64, psi: StateVector, dpsi: StateVector) -> Result<(StateVector, StateVector)> {
        let kick = self.field.apply(&psi)?.scale(Complex64::new(0.0, -t));
        let dpsi = dpsi.add(&kick)?;
        Ok((psi, dpsi))
    }

    /// `ψ` at an arbitrary field value, built from full exponentials of the summed generators.
    /// Used for finite-difference cross-checks.
    pub fn state_at_field(&self, scheme: Scheme, twist: f64, sensing_fraction: f64, omega: f64) -> Result<StateVector> {
        validate_point(twist, sensing_fraction)?;
        let t = sensing_fraction;
        let tp = scheme.preparation_time(t);
        let field = self.field.scale(omega);
        let psi0 = &self.initial;
        let with_twist = |gen: &ComplexOperator, strength: f64| -> Result<ComplexOperator> {
            gen.scale(strength).add(&field)
        };
        match scheme {
            Scheme::A => spin::propagate(&field, 1.0, psi0),
            Scheme::B => {
                let s = spin::propagate(&self.tat.scale(twist), tp, psi0)?;
                spin::propagate(&field, t, &s)
            }
            Scheme::C => {
                let u = spin::propagate(&with_twist(&self.tat, twist)?, tp, psi0)?;
                spin::propagate(&field, t, &u)
            }
            Scheme::BPrime => {
                let a = spin::propagate(&self.oat.scale(twist), tp, psi0)?;
                let b = spin::propagate(&field, t, &a)?;
                spin::propagate(&self.oat.scale(-twist), tp, &b)
            }
            Scheme::CPrime => {
                let a = spin::propagate(&with_twist(&self.oat, twist)?, tp, psi0)?;
                let b = spin::propagate(&field, t, &a)?;
                spin::propagate(&with_twist(&self.oat, -twist)?, tp, &b)
            }
        }
    }
}

/// Protocol model on the Dicke space of `N` spins.
#[derive(Clone, Debug)]
pub struct SpinModel {
    space: DickeSpace,
    operators: CollectiveOperators,
    model: ProtocolModel,
}

impl SpinModel {
    pub fn new(n_spins: usize) -> Result<Self> {
        let space = DickeSpace::new(n_spins)?;
        let operators = collective_operators(&space);
        let model = ProtocolModel::new(
            initial_state(&space),
            unit_generator(&space, &operators, GeneratorKind::Field),
            unit_generator(&space, &operators, GeneratorKind::Tat),
            unit_generator(&space, &operators, GeneratorKind::Oat),
            operators.jy.clone(),
        )?;
        Ok(Self {
            space,
            operators,
            model,
        })
    }

    pub fn space(&self) -> &DickeSpace {
        &self.space
    }

    pub fn operators(&self) -> &CollectiveOperators {
        &self.operators
    }

    pub fn model(&self) -> &ProtocolModel {
        &self.model
    }

    pub fn final_state(&self, cfg: &ProtocolConfig) -> Result<SchemeState> {
        cfg.validate()?;
        if cfg.n_spins != self.space.n_spins() {
            return Err(Error::InvalidParameter(format!(
                "config has N = {} but the model was built for N = {}",
                cfg.n_spins,
                self.space.n_spins()
            )));
        }
        let mut state =
            self.model
                .state_at_zero_field(cfg.scheme, cfg.twist_strength, cfg.sensing_fraction)?;
        if cfg.omega != 0.0 {
            state.psi = self.model.state_at_field(
                cfg.scheme,
                cfg.twist_strength,
                cfg.sensing_fraction,
                cfg.omega,
            )?;
            state.omega = cfg.omega;
        }
        Ok(state)
    }
}

/// Final state for one configuration. Builds a fresh [`SpinModel`]; reuse a model when
/// evaluating many points at the same `N`.
pub fn final_state(cfg: &ProtocolConfig) -> Result<SchemeState> {
    cfg.validate()?;
    SpinModel::new(cfg.n_spins)?.final_state(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::StateVector;

    fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
        a.fidelity(b).unwrap()
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("B'".parse::<Scheme>().unwrap(), Scheme::BPrime);
        assert_eq!("Cprime".parse::<Scheme>().unwrap(), Scheme::CPrime);
        assert!("D".parse::<Scheme>().is_err());
        for s in Scheme::ALL {
            assert_eq!(s.label().parse::<Scheme>().unwrap(), s);
        }
    }

    #[test]
    fn config_rejects_bad_fraction() {
        assert!(matches!(
            ProtocolConfig::new(Scheme::B, 4, 1.0, 1.2),
            Err(Error::InvalidParameter(_))
        ));
        assert!(ProtocolConfig::new(Scheme::B, 4, -1.0, 0.2).is_err());
        assert!(ProtocolConfig::new(Scheme::B, 0, 1.0, 0.2).is_err());
    }

    #[test]
    fn preparation_budget() {
        assert_eq!(Scheme::B.preparation_time(0.25), 0.75);
        assert_eq!(Scheme::CPrime.preparation_time(0.25), 0.375);
    }

    #[test]
    fn tat_vanishes_for_single_spin() {
        let h = hamiltonian(&DickeSpace::new(1).unwrap(), GeneratorKind::Tat, 3.0).unwrap();
        assert!(h.max_abs_diff(&ComplexOperator::zeros(2)).unwrap() == 0.0);
    }

    #[test]
    fn oat_single_spin_is_global_phase() {
        let chi = 2.6;
        let h = hamiltonian(&DickeSpace::new(1).unwrap(), GeneratorKind::Oat, chi).unwrap();
        let expected = ComplexOperator::identity(2).scale(chi / 4.0);
        assert!(h.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn field_generator_n2() {
        let space = DickeSpace::new(2).unwrap();
        let h = hamiltonian(&space, GeneratorKind::Field, 1.0).unwrap();
        let jy = collective_operators(&space).jy.scale(1.0 / 2f64.sqrt());
        assert!(h.max_abs_diff(&jy).unwrap() < 1e-15);
        assert_eq!(h.kind(), spin::OperatorKind::Hermitian);
    }

    #[test]
    fn scheme_a_state() {
        let space = DickeSpace::new(9).unwrap();
        let st = final_state(&ProtocolConfig::new(Scheme::A, 9, 0.0, 0.3).unwrap()).unwrap();
        assert!((fidelity(&st.psi, &initial_state(&space)) - 1.0).abs() < 1e-15);
        let jy = collective_operators(&space).jy;
        let expected = jy.apply(&initial_state(&space)).unwrap().scale(Complex64::new(0.0, -1.0 / 3.0));
        assert!((st.dpsi.amplitudes() - expected.amplitudes()).norm() < 1e-14);
    }

    #[test]
    fn scheme_b_full_sensing_is_scheme_a() {
        let a = final_state(&ProtocolConfig::new(Scheme::A, 10, 4.0, 1.0).unwrap()).unwrap();
        let b = final_state(&ProtocolConfig::new(Scheme::B, 10, 4.0, 1.0).unwrap()).unwrap();
        assert!((a.psi.amplitudes() - b.psi.amplitudes()).norm() < 1e-14);
        assert!((a.dpsi.amplitudes() - b.dpsi.amplitudes()).norm() < 1e-14);
    }

    #[test]
    fn echo_cancels_at_zero_field() {
        let space = DickeSpace::new(10).unwrap();
        for scheme in [Scheme::BPrime, Scheme::CPrime] {
            for t in [0.0, 0.37, 0.9] {
                let st = final_state(&ProtocolConfig::new(scheme, 10, 50.0, t).unwrap()).unwrap();
                assert!((fidelity(&st.psi, &initial_state(&space)) - 1.0).abs() < 1e-12);
                assert!((st.psi.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn model_rejects_wrong_n() {
        let model = SpinModel::new(3).unwrap();
        let cfg = ProtocolConfig::new(Scheme::B, 4, 1.0, 0.5).unwrap();
        assert!(model.final_state(&cfg).is_err());
    }

    #[test]
    fn nonzero_field_state_is_normalized_and_differs() {
        let cfg = ProtocolConfig::new(Scheme::C, 6, 1.0, 0.4).unwrap();
        let at0 = final_state(&cfg).unwrap();
        let at = final_state(&cfg.with_omega(0.3)).unwrap();
        assert!((at.psi.norm() - 1.0).abs() < 1e-10);
        assert!(fidelity(&at0.psi, &at.psi) < 1.0 - 1e-6);
        assert_eq!(at.omega, 0.3);
    }
}
