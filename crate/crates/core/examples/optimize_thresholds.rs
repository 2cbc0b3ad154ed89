//! Optimizing the sensing fraction and locating the twist strength at which squeezing starts
//! to pay off against the unentangled benchmark.
//!
//!     cargo run --release --example optimize_thresholds

use squeezesense::bosonic::FockSpace;
use squeezesense::metrology::SpinCount;
use squeezesense::protocols::Scheme;
use squeezesense::sweep::{find_threshold_with, optimize_with, Engine, Evaluator, DEFAULT_T_GRID};

fn main() -> squeezesense::Result<()> {
    let ten = Evaluator::new(SpinCount::Finite(10), Engine::Spin, FockSpace::default())?;

    println!("optimized B' and C' at N = 10");
    for chi_tau in [4.0, 12.0, 50.0] {
        for scheme in [Scheme::BPrime, Scheme::CPrime] {
            let r = optimize_with(&ten, scheme, chi_tau, DEFAULT_T_GRID)?;
            println!(
                "  {:<6} χτ = {chi_tau:>4}: best {:.5} at t/τ = {:.5} ({:?})",
                scheme.label(),
                r.best_sensitivity,
                r.t_opt,
                r.boundary
            );
        }
    }

    println!("\nbreak-even twist strengths");
    let hundred = Evaluator::new(SpinCount::Finite(100), Engine::Spin, FockSpace::default())?;
    let cases = [
        ("B' N=10", &ten, Scheme::BPrime, (2.0, 30.0)),
        ("B' N=100", &hundred, Scheme::BPrime, (2.0, 30.0)),
        ("C' N=10", &ten, Scheme::CPrime, (1.0, 30.0)),
        ("B  N=inf", &Evaluator::ClosedForm, Scheme::B, (0.1, 2.0)),
        ("B' N=inf", &Evaluator::ClosedForm, Scheme::BPrime, (1.0, 30.0)),
        ("C' N=inf", &Evaluator::ClosedForm, Scheme::CPrime, (1.0, 30.0)),
    ];
    for (label, evaluator, scheme, interval) in cases {
        let x = find_threshold_with(evaluator, scheme, interval)?;
        println!("  {label:<9} {x:.4}");
    }
    Ok(())
}
