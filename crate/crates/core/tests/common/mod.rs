//! Oracles shared by the integration tests. Nothing here goes through the library's
//! eigendecomposition: exponentials are scaling-and-squaring Taylor series.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `e^{−i d H}` by scaling and squaring a degree-24 Taylor series.
pub fn expm_minus_i(h: &CMat, d: f64) -> CMat {
    let n = h.nrows();
    let a = h * Complex64::new(0.0, -d);
    let norm: f64 = a.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
    let a = &a / c(2f64.powi(squarings as i32));
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..=24 {
        term = &term * &a / c(k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Richardson-extrapolated central difference of `ω ↦ e^{−i d (H0 + ωG)} ψ` at `ω = 0`.
pub fn fd_derivative(h0: &CMat, g: &CMat, d: f64, psi: &CVec, step: f64) -> CVec {
    let at = |w: f64| expm_minus_i(&(h0 + g * c(w)), d) * psi;
    let central = |h: f64| (at(h) - at(-h)) / c(2.0 * h);
    (central(step / 2.0) * c(4.0) - central(step)) / c(3.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> CVec {
    let v = CVec::from_fn(dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let norm = v.norm();
    v / c(norm)
}

/// Collective spin operators `(Jx, Jy, Jz)` for `N` spins, built from the ladder formula in
/// the `m = −j … j` ordering.
pub fn spin_matrices(n: usize) -> (CMat, CMat, CMat) {
    let j = n as f64 / 2.0;
    let dim = n + 1;
    let mut jp = CMat::zeros(dim, dim);
    let mut jz = CMat::zeros(dim, dim);
    for k in 0..dim {
        let m = -j + k as f64;
        jz[(k, k)] = c(m);
        if k + 1 < dim {
            jp[(k + 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    (jx, jy, jz)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
