//! The exact field derivative of a propagator, checked against finite differences, on a
//! Hamiltonian assembled by hand from the collective operators.
//!
//!     cargo run --release --example derivative_engine

use squeezesense::spin::{
    collective_operators, plus_state, propagate, propagate_with_derivative, DickeSpace,
};

fn main() -> squeezesense::Result<()> {
    let space = DickeSpace::new(12)?;
    let ops = collective_operators(&space);
    // H0 = 0.3 Jx² + 0.8 Jz, perturbed by ω Jy
    let h0 = ops.jx.mul(&ops.jx)?.scale(0.3).add(&ops.jz.scale(0.8))?;
    let psi = plus_state(&space);
    let duration = 1.4;

    let (phi, dphi) = propagate_with_derivative(&h0, &ops.jy, duration, &psi)?;
    println!("‖φ‖ = {:.15}", phi.norm());
    println!("Re⟨φ|∂φ⟩ = {:.3e}", phi.inner(&dphi)?.re);

    for h in [1e-2, 1e-3, 1e-4, 1e-5] {
        let plus = propagate(&h0.add(&ops.jy.scale(h))?, duration, &psi)?;
        let minus = propagate(&h0.add(&ops.jy.scale(-h))?, duration, &psi)?;
        let fd = (plus.amplitudes() - minus.amplitudes()) / num_complex::Complex64::new(2.0 * h, 0.0);
        let err = (dphi.amplitudes() - fd).norm() / dphi.norm();
        println!("central difference, h = {h:.0e}: relative error {err:.2e}");
    }
    Ok(())
}
