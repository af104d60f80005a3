//! Built-in self checks, run by `splitkdv selftest`.

use std::fmt;
use std::sync::Arc;

use crate::convergence::{logistic_problem, run_refinement_study, KdvStudyConfig, Oracle};
use crate::error::Result;
use crate::kdv::{conserved_quantities, soliton, AiryFlow, BurgersFlow, KdvReference};
use crate::logistic::{godunov_closed_form, LogisticFlowA, LogisticFlowB};
use crate::spectral::{sobolev_norm, PeriodicGrid, RealField};
use crate::splitting::{run_splitting, SplitScheme, TimeGrid};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelftestOptions {
    /// Runs the dispersive checks with the Airy phase conjugated.
    pub flip_airy_sign: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{status}  {:width$}  {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Smooth band-limited test field with deterministic coefficients.
pub fn band_limited_field(grid: &Arc<PeriodicGrid>, modes: usize) -> RealField {
    let l = grid.length();
    RealField::from_fn(grid.clone(), |x| {
        (1..=modes)
            .map(|m| {
                let k = 2.0 * std::f64::consts::PI * m as f64 / l;
                let a = (1.3 * m as f64).sin() / m as f64;
                let b = (0.7 * m as f64 + 0.4).cos() / m as f64;
                a * (k * x).cos() + b * (k * x).sin()
            })
            .sum::<f64>()
            + 0.25
    })
}

fn outcome(name: &'static str, r: Result<(bool, String)>) -> CheckResult {
    match r {
        Ok((passed, detail)) => CheckResult {
            name,
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn spectral_round_trip() -> Result<(bool, String)> {
    let grid = PeriodicGrid::new(2.0 * std::f64::consts::PI, 64)?;
    let f = band_limited_field(&grid, 20);
    let back = f.to_spectrum().to_field();
    let err = f
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((
        err <= 1e-12,
        format!("max |f - F^-1 F f| = {err:.3e} (tol 1e-12)"),
    ))
}

fn airy_unitarity(flip: bool) -> Result<(bool, String)> {
    let grid = PeriodicGrid::new(100.0, 512)?;
    let f = band_limited_field(&grid, 160);
    let airy = if flip {
        AiryFlow::with_flipped_dispersion(grid.clone())
    } else {
        AiryFlow::new(grid.clone())
    };
    let g = airy.evolve_field(&f, 1.0);
    let drift = (0..=12)
        .map(|s| {
            let (a, b) = (sobolev_norm(&f, s), sobolev_norm(&g, s));
            ((b - a) / a).abs()
        })
        .fold(0.0, f64::max);
    Ok((
        drift <= 1e-12,
        format!("max relative H^s drift, s = 0..12: {drift:.3e} (tol 1e-12)"),
    ))
}

fn logistic_equivalence() -> Result<(bool, String)> {
    let (u0, dt) = (0.5, 0.1);
    let traj = run_splitting(
        &LogisticFlowA,
        &LogisticFlowB,
        u0,
        &TimeGrid::new(1.0, dt)?,
        SplitScheme::Godunov,
    )?;
    let mut worst: f64 = 0.0;
    for (n, (_, u)) in traj.states().iter().enumerate() {
        let closed = godunov_closed_form(u0, dt, n)?;
        worst = worst.max(((u - closed) / closed).abs());
    }
    Ok((
        worst <= 1e-12,
        format!("engine vs closed form, n <= 10: {worst:.3e} (tol 1e-12)"),
    ))
}

fn logistic_slopes() -> Result<(bool, String)> {
    let problem = logistic_problem(0.5, 1.0);
    let ladder = [0.2, 0.1, 0.05, 0.025, 0.0125];
    let g = run_refinement_study(
        &problem,
        SplitScheme::Godunov,
        &ladder,
        0,
        &Oracle::ExactClosedForm,
        1,
    )?;
    let s = run_refinement_study(
        &problem,
        SplitScheme::Strang,
        &ladder,
        0,
        &Oracle::ExactClosedForm,
        1,
    )?;
    let (pg, ps) = (g.slope().unwrap_or(f64::NAN), s.slope().unwrap_or(f64::NAN));
    let ok = (pg - 1.0).abs() <= 0.05 && (ps - 2.0).abs() <= 0.1;
    Ok((
        ok,
        format!("godunov {pg:.4} (1 +- 0.05), strang {ps:.4} (2 +- 0.1)"),
    ))
}

fn oracle_cross_validation(flip: bool) -> Result<(bool, String)> {
    let cfg = KdvStudyConfig::default();
    let grid = cfg.grid()?;
    let params = cfg.soliton()?;
    let u0 = soliton(&grid, &params, 0.0)?;
    let mut reference = KdvReference::new(grid.clone());
    if flip {
        reference = reference.with_flipped_dispersion();
    }
    let computed = reference.evolve_field(&u0, cfg.final_time)?;
    let exact = soliton(&grid, &params, cfg.final_time)?;
    let err = sobolev_norm(&computed.checked_sub(&exact)?, 0);
    Ok((
        err <= 1e-8,
        format!(
            "reference vs soliton at T = {}: {err:.3e} (tol 1e-8)",
            cfg.final_time
        ),
    ))
}

fn burgers_momentum() -> Result<(bool, String)> {
    let cfg = KdvStudyConfig::default();
    let grid = cfg.grid()?;
    let f = soliton(&grid, &cfg.soliton()?, 0.0)?;
    let g = BurgersFlow::new(grid).evolve_field(&f, cfg.ladder()[0])?;
    let (a, b) = (
        conserved_quantities(&f).momentum,
        conserved_quantities(&g).momentum,
    );
    let drift = ((b - a) / a).abs();
    Ok((
        drift <= 1e-10,
        format!("relative momentum drift: {drift:.3e} (tol 1e-10)"),
    ))
}

pub fn run_selftest(options: SelftestOptions) -> SelftestReport {
    let flip = options.flip_airy_sign;
    SelftestReport {
        checks: vec![
            outcome("spectral round-trip", spectral_round_trip()),
            outcome("airy unitarity", airy_unitarity(flip)),
            outcome("logistic equivalence", logistic_equivalence()),
            outcome("logistic slopes", logistic_slopes()),
            outcome("oracle cross-validation", oracle_cross_validation(flip)),
            outcome("burgers momentum", burgers_momentum()),
        ],
    }
}
