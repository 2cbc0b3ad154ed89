mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use squeezesense::spin::{
    collective_operators, initial_state, plus_state, propagate, propagate_with_derivative,
    variance, ComplexOperator, DickeSpace, StateVector,
};
use squeezesense::Error;

use common::{c, expm_minus_i, fd_derivative, spin_matrices};

#[test]
fn operators_match_ladder_construction() {
    for n in 1..=12 {
        let ops = collective_operators(&DickeSpace::new(n).unwrap());
        let (jx, jy, jz) = spin_matrices(n);
        assert!((ops.jx.matrix() - jx).camax() < 1e-14);
        assert!((ops.jy.matrix() - jy).camax() < 1e-14);
        assert!((ops.jz.matrix() - jz).camax() < 1e-14);
    }
}

#[test]
fn spin_half_is_pauli_over_two() {
    let ops = collective_operators(&DickeSpace::new(1).unwrap());
    let h = |re: [[f64; 2]; 2], im: [[f64; 2]; 2]| {
        DMatrix::from_fn(2, 2, |i, k| Complex64::new(re[i][k], im[i][k]))
    };
    // basis order |↓⟩, |↑⟩
    assert_eq!(ops.jx.matrix(), &h([[0.0, 0.5], [0.5, 0.0]], [[0.0; 2]; 2]));
    assert_eq!(ops.jz.matrix(), &h([[-0.5, 0.0], [0.0, 0.5]], [[0.0; 2]; 2]));
    assert_eq!(ops.jy.matrix(), &h([[0.0; 2]; 2], [[0.0, 0.5], [-0.5, 0.0]]));
}

#[test]
fn coherent_states() {
    for n in [1, 4, 17] {
        let space = DickeSpace::new(n).unwrap();
        let ops = collective_operators(&space);
        let down = initial_state(&space);
        assert_eq!(down.populations()[0], 1.0);
        // |+⟩^⊗N is the +N/2 eigenstate of Jx with ΔJy² = N/4
        let plus = plus_state(&space);
        let jx_plus = ops.jx.apply(&plus).unwrap();
        let diff = jx_plus.amplitudes() - plus.amplitudes() * c(n as f64 / 2.0);
        assert!(diff.norm() < 1e-12, "N={n}");
        assert!((variance(&ops.jy, &plus).unwrap() - n as f64 / 4.0).abs() < 1e-12);
        assert!((variance(&ops.jy, &down).unwrap() - n as f64 / 4.0).abs() < 1e-12);
    }
}

#[test]
fn propagation_matches_taylor_exponential() {
    let mut rng = common::rng(11);
    for n in [1, 3, 8, 15] {
        let (jx, jy, jz) = spin_matrices(n);
        let h = &jx * &jx * c(0.3) + &jy * c(-1.1) + &jz * &jx * c(0.2) + &jx * &jz * c(0.2);
        let op = ComplexOperator::hermitian(h.clone()).unwrap();
        let psi = common::random_state(&mut rng, n + 1);
        let ours = propagate(&op, 1.7, &StateVector::normalized(psi.clone()).unwrap()).unwrap();
        let reference = expm_minus_i(&h, 1.7) * psi;
        assert!((ours.amplitudes() - reference).norm() < 1e-11, "N={n}");
    }
}

#[test]
fn rejects_malformed_inputs() {
    assert!(matches!(DickeSpace::new(0), Err(Error::InvalidDimension(_))));
    let v = nalgebra::DVector::from_element(3, c(1.0));
    assert!(matches!(StateVector::normalized(v), Err(Error::NotNormalized { .. })));
    let mut m = DMatrix::from_element(2, 2, c(0.0));
    m[(0, 1)] = c(1.0);
    assert!(matches!(ComplexOperator::hermitian(m.clone()), Err(Error::NotHermitian { .. })));
    assert!(matches!(ComplexOperator::unitary(m), Err(Error::NotUnitary { .. })));
    let h = ComplexOperator::identity(3);
    let psi = StateVector::basis(2, 0).unwrap();
    assert!(matches!(propagate(&h, 1.0, &psi), Err(Error::DimensionMismatch { .. })));
    assert!(StateVector::basis(2, 2).is_err());
}

#[test]
fn zero_generator_derivative_is_linear_kick() {
    // with H0 = 0, ∂_ω e^{−idωG}ψ = −i d G ψ
    let space = DickeSpace::new(6).unwrap();
    let ops = collective_operators(&space);
    let psi = plus_state(&space);
    let (phi, dphi) = propagate_with_derivative(&ComplexOperator::zeros(7), &ops.jz, 0.8, &psi).unwrap();
    assert!((phi.amplitudes() - psi.amplitudes()).norm() < 1e-14);
    let expected = ops.jz.matrix() * psi.amplitudes() * Complex64::new(0.0, -0.8);
    assert!((dphi.amplitudes() - expected).norm() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivative_matches_finite_differences(
        n in 1usize..=12,
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        d in 0.05f64..2.0,
        seed in any::<u64>(),
    ) {
        let (jx, jy, jz) = spin_matrices(n);
        let h0 = &jx * &jx * c(a) + &jz * c(b);
        let g = jy.clone();
        let psi = common::random_state(&mut common::rng(seed), n + 1);
        let (_, dphi) = propagate_with_derivative(
            &ComplexOperator::hermitian(h0.clone()).unwrap(),
            &ComplexOperator::hermitian(g.clone()).unwrap(),
            d,
            &StateVector::normalized(psi.clone()).unwrap(),
        ).unwrap();
        let fd = fd_derivative(&h0, &g, d, &psi, 1e-4);
        prop_assert!((dphi.amplitudes() - &fd).norm() <= 1e-7 * fd.norm().max(1.0));
    }

    #[test]
    fn propagation_is_unitary(n in 1usize..=20, a in -5.0f64..5.0, d in 0.0f64..10.0, seed in any::<u64>()) {
        let (jx, _, jz) = spin_matrices(n);
        let h = ComplexOperator::hermitian(&jx * &jx * c(a) + jz).unwrap();
        let psi = StateVector::normalized(common::random_state(&mut common::rng(seed), n + 1)).unwrap();
        let out = propagate(&h, d, &psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}
