//! CSV and JSON rendering of results. Floats go through [`format_sig`] so output does not
//! depend on locale or platform formatting.

use std::fmt::Write as _;

use serde::Serialize;

use crate::metrology::{SensitivityRecord, SpinCount};
use crate::protocols::Scheme;
use crate::sweep::{Engine, OptimumResult};

pub const CURVE_HEADER: &str = "scheme,n_spins,twist_times_tau,t_over_tau,sensitivity,method,engine";
pub const OPTIMUM_HEADER: &str = "scheme,n_spins,twist_times_tau,best_sensitivity,t_opt,boundary,engine";

const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed, scientific
/// notation outside `[1e−5, 1e12)`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn curve_csv(records: &[SensitivityRecord], engine: Engine) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.scheme,
            r.n_spins,
            format_sig(r.twist_strength),
            format_sig(r.sensing_fraction),
            format_sig(r.sensitivity),
            r.method,
            engine
        );
    }
    out
}

pub fn optimum_csv(scheme: Scheme, n_spins: SpinCount, results: &[OptimumResult], engine: Engine) -> String {
    let mut out = String::from(OPTIMUM_HEADER);
    out.push('\n');
    for r in results {
        let boundary = match r.boundary {
            crate::sweep::Boundary::Interior => "interior",
            crate::sweep::Boundary::LeftEdge => "left_edge",
            crate::sweep::Boundary::RightEdge => "right_edge",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            scheme,
            n_spins,
            format_sig(r.twist_value),
            format_sig(r.best_sensitivity),
            format_sig(r.t_opt),
            boundary,
            engine
        );
    }
    out
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize to JSON");
    s.push('\n');
    s
}
