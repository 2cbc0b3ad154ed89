//! Writes the plot-ready CSV files behind the four sensitivity figures into a directory
//! (default `figures/`). See the README for the column-to-axis mapping.
//!
//!     cargo run --release --example figure_data -- out_dir

use std::error::Error;
use std::fs;
use std::path::Path;

use squeezesense::bosonic::FockSpace;
use squeezesense::metrology::SpinCount;
use squeezesense::protocols::Scheme;
use squeezesense::report::{curve_csv, optimum_csv};
use squeezesense::sweep::{optimize_with, sweep_curve, Engine, Evaluator, SweepSpec, DEFAULT_T_GRID};

fn curve(dir: &Path, name: &str, scheme: Scheme, n: usize, twist: &[f64]) -> Result<(), Box<dyn Error>> {
    let spec = SweepSpec::new(scheme, SpinCount::Finite(n), twist.to_vec(), Engine::Spin);
    let csv = curve_csv(&sweep_curve(&spec)?, Engine::Spin);
    fs::write(dir.join(name), csv)?;
    println!("wrote {name}");
    Ok(())
}

fn optimum(dir: &Path, name: &str, scheme: Scheme, n: SpinCount, engine: Engine, twist: &[f64]) -> Result<(), Box<dyn Error>> {
    let ev = Evaluator::new(n, engine, FockSpace::default())?;
    let results = twist
        .iter()
        .map(|&x| optimize_with(&ev, scheme, x, DEFAULT_T_GRID))
        .collect::<squeezesense::Result<Vec<_>>>()?;
    let csv = optimum_csv(scheme, n, &results, engine);
    fs::write(dir.join(name), csv)?;
    println!("wrote {name}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    let dir = Path::new(&dir);
    fs::create_dir_all(dir)?;

    // sensitivity against t/τ, two-axis twisting
    for s in [Scheme::A, Scheme::B, Scheme::C] {
        let twist: &[f64] = if s == Scheme::A { &[0.0] } else { &[0.4, 4.0] };
        curve(dir, &format!("tat_curve_{}.csv", s.label()), s, 10, twist)?;
    }

    // optimized sensitivity and optimal t/τ against ητ
    let eta: Vec<f64> = (1..=40).map(|k| k as f64 * 0.05).collect();
    for s in [Scheme::B, Scheme::C] {
        optimum(dir, &format!("tat_optimum_{}_N10.csv", s.label()), s, SpinCount::Finite(10), Engine::Spin, &eta)?;
        optimum(dir, &format!("tat_optimum_{}_Ninf.csv", s.label()), s, SpinCount::Infinite, Engine::ClosedForm, &eta)?;
    }

    // echo sensitivity against t/τ, one-axis twisting
    for s in [Scheme::BPrime, Scheme::CPrime] {
        curve(dir, &format!("echo_curve_{}_N10.csv", s.label()), s, 10, &[4.0, 50.0])?;
        curve(dir, &format!("echo_curve_{}_N100.csv", s.label()), s, 100, &[50.0])?;
    }

    // optimized echo sensitivity and optimal t/τ against χτ
    let chi: Vec<f64> = (1..=60).map(|k| k as f64).collect();
    for s in [Scheme::BPrime, Scheme::CPrime] {
        for n in [10, 100] {
            optimum(dir, &format!("echo_optimum_{}_N{n}.csv", s.label()), s, SpinCount::Finite(n), Engine::Spin, &chi)?;
        }
    }
    Ok(())
}
