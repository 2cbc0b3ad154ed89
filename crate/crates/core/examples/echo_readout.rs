//! Echo schemes B′ and C′: the J_y readout slope and spread at zero field, the resulting
//! sensitivity, and the finite-N closed form for B′.
//!
//!     cargo run --release --example echo_readout

use squeezesense::metrology::closed_form_bprime;
use squeezesense::protocols::{ProtocolConfig, Scheme, SpinModel};

fn main() -> squeezesense::Result<()> {
    let n = 10;
    let model = SpinModel::new(n)?;
    println!("ΔJy should equal √N/2 = {:.6} after every echo", (n as f64).sqrt() / 2.0);

    for chi_tau in [4.0, 50.0] {
        println!("\nN = {n}, χτ = {chi_tau}");
        println!("{:>5} {:>11} {:>9} {:>9} {:>11} {:>9}", "t/τ", "B' slope", "ΔJy", "B'", "closed form", "C'");
        for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let readout = model.echo_readout(&ProtocolConfig::new(Scheme::BPrime, n, chi_tau, t)?)?;
            let exact = closed_form_bprime(n, chi_tau, t)?;
            let cp = model.echo_sensitivity(&ProtocolConfig::new(Scheme::CPrime, n, chi_tau, t)?)?;
            println!(
                "{t:>5.1} {:>11.6} {:>9.6} {:>9.6} {exact:>11.6} {:>9.6}",
                readout.slope,
                readout.std_dev,
                readout.sensitivity(),
                cp.sensitivity
            );
        }
    }
    Ok(())
}
