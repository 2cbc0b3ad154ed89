//! The N → ∞ limit three ways: analytic closed forms, the truncated Fock simulator, and a
//! large spin register.
//!
//!     cargo run --release --example bosonic_limit

use squeezesense::bosonic::{closed_form, closed_form_optimum, enhancement_ratio, FockModel, FockSpace};
use squeezesense::protocols::{ProtocolConfig, Scheme, SpinModel};

fn main() -> squeezesense::Result<()> {
    let fock = FockModel::new(FockSpace::default())?;
    let n = 400;
    let spin = SpinModel::new(n)?;

    println!("{:<7} {:>5} {:>5} {:>14} {:>14} {:>14}", "scheme", "x", "t/τ", "closed form", "Fock D=400", "spin N=400");
    for (scheme, x, t) in [
        (Scheme::B, 1.0, 0.5),
        (Scheme::C, 1.0, 0.2),
        (Scheme::BPrime, 8.0, 0.5),
        (Scheme::CPrime, 8.0, 0.5),
    ] {
        let exact = closed_form(scheme, x, t)?;
        let f = fock.simulate(scheme, x, t)?.sensitivity;
        let s = spin.sensitivity(&ProtocolConfig::new(scheme, n, x, t)?)?.sensitivity;
        println!("{:<7} {x:>5} {t:>5} {exact:>14.10} {f:>14.10} {s:>14.10}", scheme.label());
    }

    let dp = fock.echo_readout(Scheme::CPrime, 8.0, 0.5)?.std_dev;
    println!("\nquadrature spread after the C' echo: {dp:.12}");

    println!("\n{:>6} {:>12} {:>8} {:>12} {:>8} {:>8}", "ητ", "best B", "t_opt", "best C", "t_opt", "C/B");
    for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let b = closed_form_optimum(Scheme::B, x)?;
        let c = closed_form_optimum(Scheme::C, x)?;
        println!(
            "{x:>6} {:>12.6} {:>8.4} {:>12.6} {:>8.4} {:>8.5}",
            b.value,
            b.t_opt,
            c.value,
            c.t_opt,
            enhancement_ratio(x)?
        );
    }
    Ok(())
}
