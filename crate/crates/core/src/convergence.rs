//! Refinement studies: run a splitting scheme over a ladder of time steps,
//! measure the error at the final time against an oracle, and fit the
//! log-log slope `error ≈ K Δt^p`.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kdv::{soliton, AiryFlow, BurgersFlow, KdvReference, SolitonParams};
use crate::logistic::{exact_solution, LogisticFlowA, LogisticFlowB};
use crate::spectral::{sobolev_norm, PeriodicGrid, RealField};
use crate::splitting::{
    run_splitting, FlowMap, SplitScheme, SplitState, SplitTrajectory, TimeGrid,
};

/// Every rung of a fine-reference study must be at least this many reference substeps.
pub const REFERENCE_REFINEMENT: f64 = 16.0;

/// Minimum number of successful rungs for a fitted slope.
pub const MIN_SAMPLES_FOR_SLOPE: usize = 4;

/// Distance between two states in the `H^s` norm (absolute value for scalars).
pub trait Measure {
    fn distance(&self, other: &Self, norm_index: u32) -> Result<f64>;
}

impl Measure for f64 {
    fn distance(&self, other: &Self, _norm_index: u32) -> Result<f64> {
        Ok((self - other).abs())
    }
}

impl Measure for RealField {
    fn distance(&self, other: &Self, norm_index: u32) -> Result<f64> {
        Ok(sobolev_norm(&self.checked_sub(other)?, norm_index))
    }
}

/// Source of the "true" solution `u(t) = Φ_C(t; u0)`.
#[derive(Debug, Clone)]
pub enum Oracle {
    /// Closed-form logistic solution.
    ExactClosedForm,
    /// Exact KdV soliton; `u0` must be the soliton at `t = 0`.
    ExactSoliton(SolitonParams),
    /// Integrating-factor RK4 reference with a capped substep.
    FineReference(KdvReference),
}

/// Evaluates an oracle for a given state type.
pub trait OracleFor<S> {
    fn evaluate(&self, u0: &S, t: f64) -> Result<S>;

    /// Checks that the oracle is fine enough for a ladder whose smallest step is `min_dt`.
    fn check_ladder(&self, _min_dt: f64) -> Result<()> {
        Ok(())
    }
}

impl OracleFor<f64> for Oracle {
    fn evaluate(&self, u0: &f64, t: f64) -> Result<f64> {
        match self {
            Oracle::ExactClosedForm => Ok(exact_solution(*u0, t)),
            _ => Err(Error::Unsupported(
                "only the closed form applies to scalar states".into(),
            )),
        }
    }
}

impl OracleFor<RealField> for Oracle {
    fn evaluate(&self, u0: &RealField, t: f64) -> Result<RealField> {
        match self {
            Oracle::ExactClosedForm => Err(Error::Unsupported(
                "the logistic closed form does not apply to fields".into(),
            )),
            Oracle::ExactSoliton(params) => soliton(u0.grid(), params, t),
            Oracle::FineReference(reference) => reference.evolve_field(u0, t),
        }
    }

    fn check_ladder(&self, min_dt: f64) -> Result<()> {
        if let Oracle::FineReference(reference) = self {
            let limit = min_dt / REFERENCE_REFINEMENT;
            match reference.max_substep() {
                Some(h) if h <= limit * (1.0 + 1e-12) => {}
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "reference substep {other:?} must be at most {limit:e} (smallest step / {REFERENCE_REFINEMENT})"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// `‖v(T, T) - u(T)‖_{H^s}` at the trajectory's final time.
pub fn error_at_final_time<S, O>(
    traj: &SplitTrajectory<S>,
    oracle: &O,
    norm_index: u32,
) -> Result<f64>
where
    S: Measure,
    O: OracleFor<S> + ?Sized,
{
    let exact = oracle.evaluate(traj.initial_state(), traj.final_time())?;
    traj.final_state().distance(&exact, norm_index)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub dt: f64,
    pub error: f64,
    pub norm_index: u32,
    pub final_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    /// Largest `|e_i - ê_i| / ê_i` over the samples, `ê` being the fitted power law.
    pub residual: f64,
}

/// Least-squares line through `(log dt, log error)`.
pub fn estimate_slope(samples: &[ErrorSample]) -> Result<SlopeFit> {
    let points: Vec<(f64, f64)> = samples.iter().map(|s| (s.dt, s.error)).collect();
    fit_power_law(&points)
}

/// [`estimate_slope`] on raw `(dt, error)` pairs.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 2 {
        return Err(Error::SlopeUnavailable(format!(
            "need at least two samples, got {}",
            points.len()
        )));
    }
    if let Some((dt, e)) = points
        .iter()
        .find(|(dt, e)| !(*e > 0.0 && e.is_finite() && *dt > 0.0))
    {
        return Err(Error::SlopeUnavailable(format!(
            "non-positive sample (dt = {dt}, error = {e})"
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(dt, _)| dt.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, e)| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::SlopeUnavailable(
            "time steps are not distinct".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = points
        .iter()
        .zip(&xs)
        .map(|((_, e), x)| {
            let fit = (intercept + slope * x).exp();
            (e - fit).abs() / fit
        })
        .fold(0.0, f64::max);
    Ok(SlopeFit { slope, residual })
}

/// `log(e_i / e_{i+1}) / log(dt_i / dt_{i+1})` for consecutive samples.
pub fn local_slopes(samples: &[ErrorSample]) -> Vec<f64> {
    samples
        .windows(2)
        .map(|w| (w[0].error / w[1].error).ln() / (w[0].dt / w[1].dt).ln())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RungFailure {
    pub dt: f64,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub scheme: SplitScheme,
    pub problem: String,
    /// Successful rungs, sorted by `dt` descending.
    pub samples: Vec<ErrorSample>,
    /// Present when at least four rungs succeeded with positive errors.
    pub fit: Option<SlopeFit>,
    pub failures: Vec<RungFailure>,
}

impl ConvergenceReport {
    fn assemble(
        scheme: SplitScheme,
        problem: &str,
        mut samples: Vec<ErrorSample>,
        mut failures: Vec<RungFailure>,
    ) -> Self {
        samples.sort_by(|a, b| b.dt.total_cmp(&a.dt));
        failures.sort_by(|a, b| b.dt.total_cmp(&a.dt));
        let fit = if samples.len() >= MIN_SAMPLES_FOR_SLOPE {
            estimate_slope(&samples).ok()
        } else {
            None
        };
        Self {
            scheme,
            problem: problem.to_string(),
            samples,
            fit,
            failures,
        }
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }

    pub fn local_slopes(&self) -> Vec<f64> {
        local_slopes(&self.samples)
    }

    /// CSV with header `dt,error,local_slope` and a footer `# slope=<p> residual=<r>`.
    /// The first row has an empty local slope; failed rungs are listed as comments.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "dt,error,local_slope")?;
        let local = self.local_slopes();
        for (i, s) in self.samples.iter().enumerate() {
            match i.checked_sub(1).map(|j| local[j]) {
                Some(p) => writeln!(out, "{:.16e},{:.16e},{:.16e}", s.dt, s.error, p)?,
                None => writeln!(out, "{:.16e},{:.16e},", s.dt, s.error)?,
            }
        }
        for f in &self.failures {
            writeln!(out, "# failed dt={:.16e}: {}", f.dt, f.message)?;
        }
        match self.fit {
            Some(fit) => writeln!(
                out,
                "# slope={:.16e} residual={:.16e}",
                fit.slope, fit.residual
            )?,
            None => writeln!(out, "# slope=unavailable residual=unavailable")?,
        }
        Ok(())
    }
}

/// An instance `u_t = A(u) + B(u)` with its initial data and final time.
#[derive(Debug, Clone)]
pub struct RefinementProblem<S, A, B> {
    pub id: String,
    pub flow_a: A,
    pub flow_b: B,
    pub u0: S,
    pub final_time: f64,
}

fn check_ladder(final_time: f64, ladder: &[f64]) -> Result<()> {
    if ladder.len() < MIN_SAMPLES_FOR_SLOPE {
        return Err(Error::InvalidConfig(format!(
            "ladder needs at least {MIN_SAMPLES_FOR_SLOPE} entries, got {}",
            ladder.len()
        )));
    }
    for w in ladder.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidConfig(
                "ladder must be strictly decreasing".into(),
            ));
        }
    }
    for &dt in ladder {
        let grid = TimeGrid::new(final_time, dt)?;
        if !grid.is_exact() {
            return Err(Error::InvalidConfig(format!(
                "T/dt = {} is not an integer for dt = {dt}",
                final_time / dt
            )));
        }
    }
    Ok(())
}

/// Runs `scheme` on every rung of `ladder` and reports errors in each of
/// `norm_indices` (one report per index, from the same runs).
///
/// Rungs run concurrently on up to `jobs` threads; results do not depend on
/// the thread count. A rung that fails numerically (blow-up, non-finite
/// state) is recorded in the report's `failures`; configuration errors abort.
pub fn run_refinement_study_norms<S, A, B, O>(
    problem: &RefinementProblem<S, A, B>,
    scheme: SplitScheme,
    ladder: &[f64],
    norm_indices: &[u32],
    oracle: &O,
    jobs: usize,
) -> Result<Vec<ConvergenceReport>>
where
    S: SplitState + Measure + Send + Sync,
    A: FlowMap<S> + Sync,
    B: FlowMap<S> + Sync,
    O: OracleFor<S> + Sync + ?Sized,
{
    check_ladder(problem.final_time, ladder)?;
    let min_dt = ladder.iter().copied().fold(f64::INFINITY, f64::min);
    oracle.check_ladder(min_dt)?;
    let exact = oracle.evaluate(&problem.u0, problem.final_time)?;

    let run_rung = |dt: f64| -> Result<std::result::Result<Vec<f64>, RungFailure>> {
        let grid = TimeGrid::new(problem.final_time, dt)?;
        match run_splitting(
            &problem.flow_a,
            &problem.flow_b,
            problem.u0.clone(),
            &grid,
            scheme,
        ) {
            Ok(traj) => {
                let errors = norm_indices
                    .iter()
                    .map(|&s| traj.final_state().distance(&exact, s))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Ok(errors))
            }
            Err(e @ (Error::AtStep { .. } | Error::BlowUp { .. } | Error::NonFinite(_))) => {
                Ok(Err(RungFailure {
                    dt,
                    message: e.to_string(),
                }))
            }
            Err(e) => Err(e),
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let outcomes: Vec<_> = pool.install(|| ladder.par_iter().map(|&dt| run_rung(dt)).collect());

    let mut per_norm: Vec<Vec<ErrorSample>> = vec![Vec::new(); norm_indices.len()];
    let mut failures = Vec::new();
    for (&dt, outcome) in ladder.iter().zip(outcomes) {
        match outcome? {
            Ok(errors) => {
                for ((samples, &s), error) in per_norm.iter_mut().zip(norm_indices).zip(errors) {
                    samples.push(ErrorSample {
                        dt,
                        error,
                        norm_index: s,
                        final_time: problem.final_time,
                    });
                }
            }
            Err(failure) => failures.push(failure),
        }
    }
    Ok(per_norm
        .into_iter()
        .map(|samples| ConvergenceReport::assemble(scheme, &problem.id, samples, failures.clone()))
        .collect())
}

/// Single-norm refinement study; see [`run_refinement_study_norms`].
pub fn run_refinement_study<S, A, B, O>(
    problem: &RefinementProblem<S, A, B>,
    scheme: SplitScheme,
    ladder: &[f64],
    norm_index: u32,
    oracle: &O,
    jobs: usize,
) -> Result<ConvergenceReport>
where
    S: SplitState + Measure + Send + Sync,
    A: FlowMap<S> + Sync,
    B: FlowMap<S> + Sync,
    O: OracleFor<S> + Sync + ?Sized,
{
    let mut reports =
        run_refinement_study_norms(problem, scheme, ladder, &[norm_index], oracle, jobs)?;
    Ok(reports.remove(0))
}

/// Logistic problem `u' = u(u - 1)` from `u0` up to `final_time`.
pub fn logistic_problem(
    u0: f64,
    final_time: f64,
) -> RefinementProblem<f64, LogisticFlowA, LogisticFlowB> {
    RefinementProblem {
        id: format!("logistic(u0={u0})"),
        flow_a: LogisticFlowA,
        flow_b: LogisticFlowB,
        u0,
        final_time,
    }
}

/// KdV problem with arbitrary initial data, split into Airy and Burgers flows.
pub fn kdv_problem(
    id: &str,
    u0: RealField,
    final_time: f64,
) -> RefinementProblem<RealField, AiryFlow, BurgersFlow> {
    let grid = u0.grid().clone();
    RefinementProblem {
        id: id.to_string(),
        flow_a: AiryFlow::new(grid.clone()),
        flow_b: BurgersFlow::new(grid),
        u0,
        final_time,
    }
}

/// KdV problem starting from the soliton `params` at `t = 0`.
pub fn kdv_soliton_problem(
    grid: &Arc<PeriodicGrid>,
    params: &SolitonParams,
    final_time: f64,
) -> Result<RefinementProblem<RealField, AiryFlow, BurgersFlow>> {
    let u0 = soliton(grid, params, 0.0)?;
    Ok(kdv_problem(
        &format!(
            "kdv-soliton(kappa={}, L={}, N={})",
            params.kappa,
            grid.length(),
            grid.n()
        ),
        u0,
        final_time,
    ))
}

/// Fine reference whose substep is the smallest ladder step divided by `REFERENCE_REFINEMENT · extra`.
pub fn fine_reference_oracle(
    grid: &Arc<PeriodicGrid>,
    ladder: &[f64],
    extra_refinement: f64,
) -> Oracle {
    let min_dt = ladder.iter().copied().fold(f64::INFINITY, f64::min);
    Oracle::FineReference(
        KdvReference::new(grid.clone())
            .with_max_substep(min_dt / (REFERENCE_REFINEMENT * extra_refinement.max(1.0))),
    )
}

/// `T / {32, 64, 128, 256, 512}`.
pub fn default_kdv_ladder(final_time: f64) -> Vec<f64> {
    [32.0, 64.0, 128.0, 256.0, 512.0]
        .iter()
        .map(|d| final_time / d)
        .collect()
}

/// Default KdV study: soliton `κ = 0.4`, `x0 = L/2`, `L = 100`, `N = 512`, `T = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdvStudyConfig {
    pub kappa: f64,
    pub length: f64,
    pub n: usize,
    pub final_time: f64,
}

impl Default for KdvStudyConfig {
    fn default() -> Self {
        Self {
            kappa: 0.4,
            length: 100.0,
            n: 512,
            final_time: 1.0,
        }
    }
}

impl KdvStudyConfig {
    pub fn grid(&self) -> Result<Arc<PeriodicGrid>> {
        PeriodicGrid::new(self.length, self.n)
    }

    pub fn soliton(&self) -> Result<SolitonParams> {
        SolitonParams::new(self.kappa, 0.5 * self.length, self.length)
    }

    pub fn ladder(&self) -> Vec<f64> {
        default_kdv_ladder(self.final_time)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn samples(points: &[(f64, f64)]) -> Vec<ErrorSample> {
        points
            .iter()
            .map(|&(dt, error)| ErrorSample {
                dt,
                error,
                norm_index: 0,
                final_time: 1.0,
            })
            .collect()
    }

    #[test]
    fn exact_power_laws() {
        let fit = estimate_slope(&samples(&[(0.4, 0.4), (0.2, 0.2), (0.1, 0.1)])).unwrap();
        assert_abs_diff_eq!(fit.slope, 1.0, epsilon = 1e-12);
        assert!(fit.residual < 1e-12);
        let fit = estimate_slope(&samples(&[(0.4, 0.16), (0.2, 0.04), (0.1, 0.01)])).unwrap();
        assert_abs_diff_eq!(fit.slope, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for truth in [1.0, 2.0, 3.0] {
            for _ in 0..50 {
                let pts: Vec<(f64, f64)> = (0..5)
                    .map(|i| {
                        let dt = 0.2 / 2f64.powi(i);
                        let noise = 1.0 + rng.gen_range(-0.05..0.05);
                        (dt, 3.0 * dt.powf(truth) * noise)
                    })
                    .collect();
                let fit = fit_power_law(&pts).unwrap();
                assert!((fit.slope - truth).abs() < 0.1, "{} vs {truth}", fit.slope);
            }
        }
    }

    #[test]
    fn slope_unavailable_cases() {
        assert!(matches!(
            fit_power_law(&[(0.1, 0.0), (0.05, 1e-3)]),
            Err(Error::SlopeUnavailable(_))
        ));
        assert!(fit_power_law(&[(0.1, 1.0)]).is_err());
        assert!(fit_power_law(&[(0.1, 1.0), (0.1, 2.0)]).is_err());
    }

    #[test]
    fn local_slopes_of_quadratic() {
        let s = samples(&[(0.4, 0.16), (0.2, 0.04), (0.1, 0.01)]);
        for p in local_slopes(&s) {
            assert_abs_diff_eq!(p, 2.0, epsilon = 1e-12);
        }
    }

    /// `B` adds `d + c·d²` per call, so `T/dt` steps overshoot `u0 + T` by exactly `c·T·dt`.
    struct Overshoot(f64);

    impl FlowMap<f64> for Overshoot {
        fn label(&self) -> &str {
            "B"
        }
        fn evolve(&self, s: &f64, d: f64) -> Result<f64> {
            Ok(s + d + self.0 * d * d)
        }
    }

    struct Drift;

    impl OracleFor<f64> for Drift {
        fn evaluate(&self, u0: &f64, t: f64) -> Result<f64> {
            Ok(u0 + t)
        }
    }

    #[test]
    fn synthetic_first_order_problem() {
        let problem = RefinementProblem {
            id: "synthetic".into(),
            flow_a: crate::splitting::IdentityFlow,
            flow_b: Overshoot(0.5),
            u0: 0.0,
            final_time: 1.0,
        };
        let ladder = [0.125, 0.0625, 0.03125, 0.015625];
        let report =
            run_refinement_study(&problem, SplitScheme::Godunov, &ladder, 0, &Drift, 2).unwrap();
        assert_abs_diff_eq!(report.slope().unwrap(), 1.0, epsilon = 1e-10);
        for s in &report.samples {
            assert_abs_diff_eq!(s.error, 0.5 * s.dt, epsilon = 1e-14);
        }
    }

    #[test]
    fn ladder_validation() {
        let p = logistic_problem(0.5, 1.0);
        let o = Oracle::ExactClosedForm;
        let run = |ladder: &[f64]| run_refinement_study(&p, SplitScheme::Godunov, ladder, 0, &o, 1);
        assert!(run(&[0.2, 0.1, 0.05]).is_err());
        assert!(run(&[0.2, 0.1, 0.1, 0.05]).is_err());
        assert!(run(&[0.3, 0.1, 0.05, 0.025]).is_err());
        assert!(run(&[0.2, 0.1, 0.05, 0.025]).is_ok());
    }

    #[test]
    fn logistic_study_matches_closed_form_errors() {
        let p = logistic_problem(0.5, 1.0);
        let ladder = [0.2, 0.1, 0.05, 0.025];
        let report = run_refinement_study(
            &p,
            SplitScheme::Godunov,
            &ladder,
            0,
            &Oracle::ExactClosedForm,
            4,
        )
        .unwrap();
        for s in &report.samples {
            let n = (1.0 / s.dt).round() as usize;
            let expected = (crate::logistic::godunov_closed_form(0.5, s.dt, n).unwrap()
                - exact_solution(0.5, 1.0))
            .abs();
            assert!((s.error - expected).abs() <= 1e-12 * expected.max(1e-300) + 1e-15);
        }
        assert!((report.slope().unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn error_against_own_final_state_is_zero() {
        struct Echo(f64);
        impl OracleFor<f64> for Echo {
            fn evaluate(&self, _: &f64, _: f64) -> Result<f64> {
                Ok(self.0)
            }
        }
        let grid = TimeGrid::new(1.0, 0.1).unwrap();
        let traj = run_splitting(
            &LogisticFlowA,
            &LogisticFlowB,
            0.5,
            &grid,
            SplitScheme::Strang,
        )
        .unwrap();
        let e = error_at_final_time(&traj, &Echo(*traj.final_state()), 0).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn failing_rungs_are_recorded() {
        // u0 = 0.9, T = 4.8: the admissible step is about 0.215, the two coarsest rungs blow up.
        let p = logistic_problem(0.9, 4.8);
        let ladder = [0.6, 0.3, 0.15, 0.075, 0.0375, 0.01875];
        let report = run_refinement_study(
            &p,
            SplitScheme::Godunov,
            &ladder,
            0,
            &Oracle::ExactClosedForm,
            3,
        )
        .unwrap();
        let failed: Vec<f64> = report.failures.iter().map(|f| f.dt).collect();
        assert_eq!(failed, vec![0.6, 0.3]);
        assert_eq!(report.samples.len(), 4);
        assert!(report.fit.is_some());
    }

    #[test]
    fn report_csv_layout() {
        let p = logistic_problem(0.5, 1.0);
        let ladder = [0.2, 0.1, 0.05, 0.025];
        let report = run_refinement_study(
            &p,
            SplitScheme::Strang,
            &ladder,
            0,
            &Oracle::ExactClosedForm,
            1,
        )
        .unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "dt,error,local_slope");
        assert_eq!(lines.len(), 6);
        assert!(lines[1].ends_with(','));
        assert_eq!(lines[2].split(',').count(), 3);
        assert!(lines[5].starts_with("# slope=") && lines[5].contains(" residual="));
    }

    #[test]
    fn fine_reference_must_be_fine_enough() {
        let grid = PeriodicGrid::new(100.0, 64).unwrap();
        let coarse = Oracle::FineReference(KdvReference::new(grid.clone()).with_max_substep(1e-2));
        assert!(OracleFor::<RealField>::check_ladder(&coarse, 1.0 / 512.0).is_err());
        let fine = fine_reference_oracle(&grid, &default_kdv_ladder(1.0), 1.0);
        assert!(OracleFor::<RealField>::check_ladder(&fine, 1.0 / 512.0).is_ok());
        let unbounded = Oracle::FineReference(KdvReference::new(grid));
        assert!(OracleFor::<RealField>::check_ladder(&unbounded, 1.0 / 512.0).is_err());
    }
}
