//! Sensitivity curves over the sensing fraction, optimization of the sensing fraction, and
//! break-even thresholds against the separable benchmark.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bosonic::{closed_form, FockModel, FockSpace};
use crate::error::{Error, Result};
use crate::metrology::{Method, SensitivityRecord, SpinCount};
use crate::protocols::{ProtocolConfig, Scheme, SpinModel};

pub const DEFAULT_T_GRID: usize = 201;
/// Golden-section refinement stops once the bracket is this narrow in `t/τ`.
pub const REFINE_TOLERANCE: f64 = 1e-6;
/// Grid values within this of the maximum count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;
/// An optimized sensitivity must exceed `1 + BREAK_EVEN_MARGIN` to beat scheme A.
pub const BREAK_EVEN_MARGIN: f64 = 1e-9;
/// Bisection on the twist strength stops at this bracket width.
pub const THRESHOLD_BRACKET: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Spin,
    Fock,
    ClosedForm,
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::Spin => "spin",
            Engine::Fock => "fock",
            Engine::ClosedForm => "closed_form",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "spin" => Ok(Engine::Spin),
            "fock" => Ok(Engine::Fock),
            "closed_form" | "closed-form" => Ok(Engine::ClosedForm),
            other => Err(Error::InvalidParameter(format!("unknown engine '{other}'"))),
        }
    }
}

/// A ready-to-evaluate backend: the spin simulator at fixed `N`, the Fock simulator at fixed
/// truncation, or the analytic limit.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Evaluator {
    Spin(SpinModel),
    Fock(FockModel),
    ClosedForm,
}

impl Evaluator {
    pub fn new(n_spins: SpinCount, engine: Engine, fock: FockSpace) -> Result<Self> {
        match (engine, n_spins) {
            (Engine::Spin, SpinCount::Finite(n)) => Ok(Evaluator::Spin(SpinModel::new(n)?)),
            (Engine::Spin, SpinCount::Infinite) => Err(Error::EngineMismatch(
                "the spin engine needs a finite number of spins".into(),
            )),
            (Engine::Fock, SpinCount::Infinite) => Ok(Evaluator::Fock(FockModel::new(fock)?)),
            (Engine::ClosedForm, SpinCount::Infinite) => Ok(Evaluator::ClosedForm),
            (engine, SpinCount::Finite(n)) => Err(Error::EngineMismatch(format!(
                "the {engine} engine describes N → ∞, got N = {n}"
            ))),
        }
    }

    pub fn engine(&self) -> Engine {
        match self {
            Evaluator::Spin(_) => Engine::Spin,
            Evaluator::Fock(_) => Engine::Fock,
            Evaluator::ClosedForm => Engine::ClosedForm,
        }
    }

    pub fn n_spins(&self) -> SpinCount {
        match self {
            Evaluator::Spin(model) => SpinCount::Finite(model.space().n_spins()),
            _ => SpinCount::Infinite,
        }
    }

    pub fn evaluate(&self, scheme: Scheme, twist: f64, sensing_fraction: f64) -> Result<SensitivityRecord> {
        match self {
            Evaluator::Spin(model) => {
                let cfg = ProtocolConfig::new(scheme, model.space().n_spins(), twist, sensing_fraction)?;
                model.sensitivity(&cfg)
            }
            Evaluator::Fock(model) => model.simulate(scheme, twist, sensing_fraction),
            Evaluator::ClosedForm => Ok(SensitivityRecord {
                scheme,
                n_spins: SpinCount::Infinite,
                twist_strength: twist,
                sensing_fraction,
                sensitivity: closed_form(scheme, twist, sensing_fraction)?,
                method: Method::ClosedForm,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub scheme: Scheme,
    pub n_spins: SpinCount,
    pub twist_values: Vec<f64>,
    pub t_grid: usize,
    pub engine: Engine,
    pub fock: FockSpace,
}

impl SweepSpec {
    pub fn new(scheme: Scheme, n_spins: SpinCount, twist_values: Vec<f64>, engine: Engine) -> Self {
        Self {
            scheme,
            n_spins,
            twist_values,
            t_grid: DEFAULT_T_GRID,
            engine,
            fock: FockSpace::default(),
        }
    }

    pub fn with_t_grid(mut self, t_grid: usize) -> Self {
        self.t_grid = t_grid;
        self
    }

    pub fn with_fock(mut self, fock: FockSpace) -> Self {
        self.fock = fock;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_grid < 3 {
            return Err(Error::InvalidParameter(format!(
                "the t grid needs at least 3 points, got {}",
                self.t_grid
            )));
        }
        if self.twist_values.is_empty() {
            return Err(Error::InvalidParameter("no twist values given".into()));
        }
        if let Some(bad) = self.twist_values.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "twist values must be finite and non-negative, got {bad}"
            )));
        }
        Ok(())
    }
}

/// `n` evenly spaced points on `[0, 1]`, endpoints exact.
pub fn unit_grid(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|k| k as f64 / last).collect()
}

/// One record per (twist value, grid point), twist outer and `t/τ` inner, both ascending in
/// the order given.
pub fn sweep_curve(spec: &SweepSpec) -> Result<Vec<SensitivityRecord>> {
    spec.validate()?;
    let evaluator = Evaluator::new(spec.n_spins, spec.engine, spec.fock)?;
    let grid = unit_grid(spec.t_grid);
    let points: Vec<(f64, f64)> = spec
        .twist_values
        .iter()
        .flat_map(|&x| grid.iter().map(move |&t| (x, t)))
        .collect();
    points
        .par_iter()
        .map(|&(x, t)| evaluator.evaluate(spec.scheme, x, t))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Interior,
    LeftEdge,
    RightEdge,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimumResult {
    pub twist_value: f64,
    pub best_sensitivity: f64,
    pub t_opt: f64,
    pub boundary: Boundary,
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
fn golden_max<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)?))
}

/// Grid scan followed by golden-section refinement around the best grid point.
pub fn optimize_with(evaluator: &Evaluator, scheme: Scheme, twist: f64, grid_points: usize) -> Result<OptimumResult> {
    if grid_points < 3 {
        return Err(Error::InvalidParameter(format!(
            "the t grid needs at least 3 points, got {grid_points}"
        )));
    }
    let grid = unit_grid(grid_points);
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| evaluator.evaluate(scheme, twist, t).map(|r| r.sensitivity))
        .collect::<Result<_>>()?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // ties go to the largest t/τ
    let best = values
        .iter()
        .rposition(|&v| v >= max - TIE_TOLERANCE)
        .expect("grid is non-empty");

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (t_refined, v_refined) = golden_max(
        |t| evaluator.evaluate(scheme, twist, t).map(|r| r.sensitivity),
        lo,
        hi,
        REFINE_TOLERANCE,
    )?;

    let (t_opt, best_sensitivity) = if v_refined > values[best] {
        (t_refined, v_refined)
    } else {
        (grid[best], values[best])
    };
    let boundary = if t_opt == 0.0 {
        Boundary::LeftEdge
    } else if t_opt == 1.0 {
        Boundary::RightEdge
    } else {
        Boundary::Interior
    };
    Ok(OptimumResult {
        twist_value: twist,
        best_sensitivity,
        t_opt,
        boundary,
    })
}

/// Best sensitivity over the sensing fraction.
pub fn optimize_t(scheme: Scheme, n_spins: SpinCount, twist: f64, engine: Engine) -> Result<OptimumResult> {
    let evaluator = Evaluator::new(n_spins, engine, FockSpace::default())?;
    optimize_with(&evaluator, scheme, twist, DEFAULT_T_GRID)
}

/// Smallest twist strength in `interval` at which the optimized sensitivity beats scheme A,
/// by bisection on the predicate `best > 1 + 1e−9`.
pub fn find_threshold_with(evaluator: &Evaluator, scheme: Scheme, interval: (f64, f64)) -> Result<f64> {
    if scheme == Scheme::A {
        return Err(Error::InvalidParameter(
            "scheme A has no twist strength to threshold".into(),
        ));
    }
    let (mut lo, mut hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
        return Err(Error::Bracketing(format!(
            "invalid search interval [{lo}, {hi}]"
        )));
    }
    let beats = |x: f64| -> Result<bool> {
        Ok(optimize_with(evaluator, scheme, x, DEFAULT_T_GRID)?.best_sensitivity > 1.0 + BREAK_EVEN_MARGIN)
    };
    if beats(lo)? || !beats(hi)? {
        return Err(Error::Bracketing(format!(
            "scheme {scheme} does not cross the benchmark exactly once between {lo} and {hi}"
        )));
    }
    while hi - lo > THRESHOLD_BRACKET {
        let mid = 0.5 * (lo + hi);
        if beats(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn find_threshold(scheme: Scheme, n_spins: SpinCount, engine: Engine, interval: (f64, f64)) -> Result<f64> {
    let evaluator = Evaluator::new(n_spins, engine, FockSpace::default())?;
    find_threshold_with(&evaluator, scheme, interval)
}
