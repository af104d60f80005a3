//! Equation-agnostic splitting engine.
//!
//! A problem `u_t = A(u) + B(u)` is described by two [`FlowMap`]s, one per
//! sub-equation. The engine composes them per time step according to a
//! [`SplitScheme`] and records the diagonal values `v(t_n, t_n)` of the
//! two-time-variable extension in a [`SplitTrajectory`]. The extension itself,
//! `v(t, tau)` on the union of (half-)squares around the diagonal, can be
//! evaluated afterwards with [`extension_eval`].
//!
//! Strang steps apply the middle A-flow as a single call `Φ_A(Δt)`. The
//! extension evaluates it as two half-calls `Φ_A(Δt/2)∘Φ_A(Δt/2)` (one per
//! half-square), which agrees with the single call for exact flows.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Relative tolerance (in units of the step) used to decide that a time lies
/// on a grid node or a square edge.
const NODE_TOL: f64 = 1e-9;

/// A state the engine can advance and check for finiteness.
pub trait SplitState: Clone {
    fn is_finite(&self) -> bool;
}

impl SplitState for f64 {
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Solution operator of one sub-equation.
///
/// Implementations must return the input unchanged for `duration == 0`.
pub trait FlowMap<S> {
    /// Short name used in diagnostics ("A", "B", "C").
    fn label(&self) -> &str;

    fn evolve(&self, state: &S, duration: f64) -> Result<S>;
}

impl<S, F: FlowMap<S> + ?Sized> FlowMap<S> for &F {
    fn label(&self) -> &str {
        (**self).label()
    }

    fn evolve(&self, state: &S, duration: f64) -> Result<S> {
        (**self).evolve(state, duration)
    }
}

/// The flow of `u_t = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityFlow;

impl<S: Clone> FlowMap<S> for IdentityFlow {
    fn label(&self) -> &str {
        "I"
    }

    fn evolve(&self, state: &S, _duration: f64) -> Result<S> {
        Ok(state.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitScheme {
    /// `Φ_A(Δt)∘Φ_B(Δt)`: B first, then A.
    Godunov,
    /// `Φ_B(Δt)∘Φ_A(Δt)`: A first, then B.
    GodunovReversed,
    /// `Φ_B(Δt/2)∘Φ_A(Δt)∘Φ_B(Δt/2)`.
    Strang,
}

impl SplitScheme {
    pub const ALL: [SplitScheme; 3] = [
        SplitScheme::Godunov,
        SplitScheme::GodunovReversed,
        SplitScheme::Strang,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SplitScheme::Godunov => "godunov",
            SplitScheme::GodunovReversed => "godunov-reversed",
            SplitScheme::Strang => "strang",
        }
    }

    /// Formal order of accuracy.
    pub fn order(self) -> u32 {
        match self {
            SplitScheme::Godunov | SplitScheme::GodunovReversed => 1,
            SplitScheme::Strang => 2,
        }
    }
}

impl fmt::Display for SplitScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "godunov" | "lie" => Ok(SplitScheme::Godunov),
            "godunov-reversed" | "reversed" => Ok(SplitScheme::GodunovReversed),
            "strang" => Ok(SplitScheme::Strang),
            other => Err(Error::InvalidConfig(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Uniform time grid `t_n = n·Δt`, `n = 0..=n_steps`, with `n_steps = floor(T/Δt)`.
///
/// A ratio `T/Δt` within `1e-9` (relative) of an integer is rounded to it, so
/// that e.g. `T = 0.3, Δt = 0.1` yields three steps despite `0.3/0.1 < 3` in
/// floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    final_time: f64,
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(final_time: f64, dt: f64) -> Result<Self> {
        if !(final_time.is_finite() && final_time > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "final time must be positive, got {final_time}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let ratio = final_time / dt;
        let rounded = ratio.round();
        let n = if (ratio - rounded).abs() <= NODE_TOL * rounded.max(1.0) {
            rounded
        } else {
            ratio.floor()
        };
        if n > u32::MAX as f64 {
            return Err(Error::InvalidConfig(format!("too many steps: {n}")));
        }
        Ok(Self {
            final_time,
            dt,
            n_steps: n as usize,
        })
    }

    /// Requested final time `T`.
    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// `t_n`, computed by multiplication.
    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// `t_{n_steps}`, the last time actually reached.
    pub fn achieved_final_time(&self) -> f64 {
        self.t(self.n_steps)
    }

    /// True when `T` is an integer multiple of `Δt` (up to the rounding tolerance).
    pub fn is_exact(&self) -> bool {
        (self.achieved_final_time() - self.final_time).abs() <= NODE_TOL * self.final_time
    }
}

/// Diagonal record `{(t_n, v(t_n, t_n))}` of a splitting run.
#[derive(Debug, Clone)]
pub struct SplitTrajectory<S> {
    scheme: SplitScheme,
    grid: TimeGrid,
    states: Vec<(f64, S)>,
}

impl<S> SplitTrajectory<S> {
    pub fn scheme(&self) -> SplitScheme {
        self.scheme
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn states(&self) -> &[(f64, S)] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, n: usize) -> &S {
        &self.states[n].1
    }

    pub fn initial_state(&self) -> &S {
        &self.states[0].1
    }

    pub fn final_state(&self) -> &S {
        &self.states[self.states.len() - 1].1
    }

    pub fn final_time(&self) -> f64 {
        self.states[self.states.len() - 1].0
    }
}

/// One Godunov step `Φ_A(Δt)∘Φ_B(Δt)`.
pub fn godunov_step<S, A, B>(flow_a: &A, flow_b: &B, state: &S, dt: f64) -> Result<S>
where
    S: Clone,
    A: FlowMap<S> + ?Sized,
    B: FlowMap<S> + ?Sized,
{
    check_dt(dt)?;
    if dt == 0.0 {
        return Ok(state.clone());
    }
    flow_a.evolve(&flow_b.evolve(state, dt)?, dt)
}

/// One Strang step `Φ_B(Δt/2)∘Φ_A(Δt)∘Φ_B(Δt/2)`, with the A-flow applied as a
/// single call.
pub fn strang_step<S, A, B>(flow_a: &A, flow_b: &B, state: &S, dt: f64) -> Result<S>
where
    S: Clone,
    A: FlowMap<S> + ?Sized,
    B: FlowMap<S> + ?Sized,
{
    check_dt(dt)?;
    if dt == 0.0 {
        return Ok(state.clone());
    }
    let half = 0.5 * dt;
    let s = flow_b.evolve(state, half)?;
    let s = flow_a.evolve(&s, dt)?;
    flow_b.evolve(&s, half)
}

/// One step of `scheme`.
pub fn split_step<S, A, B>(
    flow_a: &A,
    flow_b: &B,
    scheme: SplitScheme,
    state: &S,
    dt: f64,
) -> Result<S>
where
    S: Clone,
    A: FlowMap<S> + ?Sized,
    B: FlowMap<S> + ?Sized,
{
    match scheme {
        SplitScheme::Godunov => godunov_step(flow_a, flow_b, state, dt),
        // Swapping the flows turns B-then-A into A-then-B.
        SplitScheme::GodunovReversed => godunov_step(flow_b, flow_a, state, dt),
        SplitScheme::Strang => strang_step(flow_a, flow_b, state, dt),
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("invalid time step {dt}")))
    }
}

/// Runs `scheme` from `u0` over `grid` and returns the diagonal values.
///
/// Any sub-flow failure or non-finite state aborts the run; the returned error
/// carries the index of the step being taken.
pub fn run_splitting<S, A, B>(
    flow_a: &A,
    flow_b: &B,
    u0: S,
    grid: &TimeGrid,
    scheme: SplitScheme,
) -> Result<SplitTrajectory<S>>
where
    S: SplitState,
    A: FlowMap<S> + ?Sized,
    B: FlowMap<S> + ?Sized,
{
    if !u0.is_finite() {
        return Err(Error::NonFinite("initial state".into()));
    }
    let mut states = Vec::with_capacity(grid.n_steps() + 1);
    states.push((0.0, u0));
    for n in 0..grid.n_steps() {
        let current = &states[n].1;
        let next = split_step(flow_a, flow_b, scheme, current, grid.dt())
            .map_err(|e| Error::at_step(n, e))?;
        if !next.is_finite() {
            return Err(Error::at_step(
                n,
                Error::NonFinite(format!("state after step {n}")),
            ));
        }
        states.push((grid.t(n + 1), next));
    }
    Ok(SplitTrajectory {
        scheme,
        grid: *grid,
        states,
    })
}

/// Which rule of the two-time-variable extension applies on a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    /// `v = Φ_A(τ - t_n) Φ_B(t - t_n) v_n` on `[t_n, t_{n+1}]²`.
    Godunov,
    /// `v = Φ_B(t - t_n) Φ_A(τ - t_n) v_n` on `[t_n, t_{n+1}]²`.
    GodunovReversed,
    /// `v = Φ_A(τ - t_n) Φ_B(t - t_n) v_n` on `[t_n, t_{n+1/2}]²`.
    StrangFirstHalf,
    /// `v = Φ_B(t - t_{n+1/2}) Φ_A(τ - t_{n+1/2}) v_{n+1/2}` on `[t_{n+1/2}, t_{n+1}]²`.
    StrangSecondHalf,
}

/// A square of the extension's domain: `[start, start + len]²`, attached to step `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionCell {
    pub step: usize,
    pub start: f64,
    pub len: f64,
    pub kind: CellKind,
}

impl ExtensionCell {
    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    pub fn contains(&self, t: f64, tau: f64) -> bool {
        let tol = NODE_TOL * self.len;
        let inside = |x: f64| x >= self.start - tol && x <= self.end() + tol;
        inside(t) && inside(tau)
    }
}

/// Finds the square containing `(t, tau)`. Points on a shared corner belong to
/// the lower square.
pub fn extension_cell<S>(traj: &SplitTrajectory<S>, t: f64, tau: f64) -> Result<ExtensionCell> {
    let outside = || Error::OutsideDomain { t, tau };
    if !(t.is_finite() && tau.is_finite()) {
        return Err(outside());
    }
    let dt = traj.grid.dt();
    let n_steps = traj.grid.n_steps();
    let (len, n_cells) = match traj.scheme {
        SplitScheme::Godunov | SplitScheme::GodunovReversed => (dt, n_steps + 1),
        SplitScheme::Strang => (0.5 * dt, 2 * (n_steps + 1)),
    };
    let lo = t.min(tau);
    let hi = t.max(tau);
    if lo < -NODE_TOL * len {
        return Err(outside());
    }
    let idx = ((hi / len) - NODE_TOL).ceil() - 1.0;
    let idx = if idx < 0.0 { 0 } else { idx as usize };
    if idx >= n_cells {
        return Err(outside());
    }
    let cell = match traj.scheme {
        SplitScheme::Godunov => ExtensionCell {
            step: idx,
            start: traj.grid.t(idx),
            len,
            kind: CellKind::Godunov,
        },
        SplitScheme::GodunovReversed => ExtensionCell {
            step: idx,
            start: traj.grid.t(idx),
            len,
            kind: CellKind::GodunovReversed,
        },
        SplitScheme::Strang => {
            let step = idx / 2;
            if idx % 2 == 0 {
                ExtensionCell {
                    step,
                    start: traj.grid.t(step),
                    len,
                    kind: CellKind::StrangFirstHalf,
                }
            } else {
                ExtensionCell {
                    step,
                    start: traj.grid.t(step) + len,
                    len,
                    kind: CellKind::StrangSecondHalf,
                }
            }
        }
    };
    if !cell.contains(t, tau) {
        return Err(outside());
    }
    Ok(cell)
}

/// Evaluates the extension rule of `cell` at `(t, tau)` without snapping to
/// stored nodes. Offsets are clamped to `[0, cell.len]`.
pub fn eval_in_cell<S, A, B>(
    flow_a: &A,
    flow_b: &B,
    traj: &SplitTrajectory<S>,
    cell: &ExtensionCell,
    t: f64,
    tau: f64,
) -> Result<S>
where
    S: Clone,
    A: FlowMap<S> + ?Sized,
    B: FlowMap<S> + ?Sized,
{
    if !cell.contains(t, tau) {
        return Err(Error::OutsideDomain { t, tau });
    }
    let offset = |x: f64| snap_offset(x - cell.start, cell.len);
    let (st, stau) = (offset(t), offset(tau));
    let base = traj.state(cell.step);
    let run = || -> Result<S> {
        match cell.kind {
            CellKind::Godunov | CellKind::StrangFirstHalf => {
                flow_a.evolve(&flow_b.evolve(base, st)?, stau)
            }
            CellKind::GodunovReversed => flow_b.evolve(&flow_a.evolve(base, stau)?, st),
            CellKind::StrangSecondHalf => {
                let h = cell.len;
                let mid = flow_a.evolve(&flow_b.evolve(base, h)?, h)?;
                flow_b.evolve(&flow_a.evolve(&mid, stau)?, st)
            }
        }
    };
    run().map_err(|e| Error::at_step(cell.step, e))
}

fn snap_offset(offset: f64, len: f64) -> f64 {
    if offset <= NODE_TOL * len {
        0.0
    } else if offset >= len * (1.0 - NODE_TOL) {
        len
    } else {
        offset
    }
}

/// Index `m ≤ n_steps` with `t_m == t` (within the node tolerance), if any.
fn node_index<S>(traj: &SplitTrajectory<S>, t: f64) -> Option<usize> {
    let dt = traj.grid.dt();
    let m = (t / dt).round();
    if m < 0.0 || m > traj.grid.n_steps() as f64 {
        return None;
    }
    let m = m as usize;
    ((t - traj.grid.t(m)).abs() <= NODE_TOL * dt).then_some(m)
}

/// Evaluates the two-time-variable extension `v(t, tau)`.
///
/// On the diagonal nodes `(t_n, t_n)` the stored trajectory state is returned
/// as is. Elsewhere the point is located on a square (Godunov) or half-square
/// (Strang) of the admissible domain and the corresponding composition of
/// sub-flows is applied to the state at the start of that square.
pub fn extension_eval<S, A, B>(
    flow_a: &A,
    flow_b: &B,
    traj: &SplitTrajectory<S>,
    t: f64,
    tau: f64,
) -> Result<S>
where
    S: Clone,
    A: FlowMap<S> + ?Sized,
    B: FlowMap<S> + ?Sized,
{
    if (t - tau).abs() <= NODE_TOL * traj.grid.dt() {
        if let Some(m) = node_index(traj, t) {
            return Ok(traj.state(m).clone());
        }
    }
    let cell = extension_cell(traj, t, tau)?;
    eval_in_cell(flow_a, flow_b, traj, &cell, t, tau)
}

/// Evaluates the traditional extension in which each sub-flow runs at double
/// speed over one half of `[t_n, t_{n+1}]`. Defined for the Godunov schemes
/// only.
pub fn traditional_extension_eval<S, A, B>(
    flow_a: &A,
    flow_b: &B,
    traj: &SplitTrajectory<S>,
    t: f64,
) -> Result<S>
where
    S: Clone,
    A: FlowMap<S> + ?Sized,
    B: FlowMap<S> + ?Sized,
{
    let dt = traj.grid.dt();
    let tol = NODE_TOL * dt;
    if !(t.is_finite() && t >= -tol && t <= traj.grid.achieved_final_time() + tol) {
        return Err(Error::OutsideDomain { t, tau: t });
    }
    if let Some(m) = node_index(traj, t) {
        return Ok(traj.state(m).clone());
    }
    let n = ((t / dt) - NODE_TOL).ceil() as usize - 1;
    let base = traj.state(n);
    let sigma = snap_offset(t - traj.grid.t(n), dt);
    let half = 0.5 * dt;
    let run = |first: &dyn Fn(&S, f64) -> Result<S>, second: &dyn Fn(&S, f64) -> Result<S>| {
        if sigma <= half {
            first(base, 2.0 * sigma)
        } else {
            second(&first(base, dt)?, 2.0 * (sigma - half))
        }
    };
    let a = |s: &S, d: f64| flow_a.evolve(s, d);
    let b = |s: &S, d: f64| flow_b.evolve(s, d);
    let out = match traj.scheme {
        SplitScheme::Godunov => run(&b, &a),
        SplitScheme::GodunovReversed => run(&a, &b),
        SplitScheme::Strang => {
            return Err(Error::Unsupported(
                "the double-speed extension is defined for Godunov schemes".into(),
            ))
        }
    };
    out.map_err(|e| Error::at_step(n, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `u' = a·u`, exact.
    struct Exp(f64);

    impl FlowMap<f64> for Exp {
        fn label(&self) -> &str {
            "exp"
        }
        fn evolve(&self, s: &f64, d: f64) -> Result<f64> {
            Ok(s * (self.0 * d).exp())
        }
    }

    /// `u' = 1`, exact.
    struct Drift;

    impl FlowMap<f64> for Drift {
        fn label(&self) -> &str {
            "drift"
        }
        fn evolve(&self, s: &f64, d: f64) -> Result<f64> {
            Ok(s + d)
        }
    }

    struct Failing;

    impl FlowMap<f64> for Failing {
        fn label(&self) -> &str {
            "fail"
        }
        fn evolve(&self, s: &f64, d: f64) -> Result<f64> {
            if *s + d > 1.5 {
                Err(Error::BlowUp {
                    flow: "fail".into(),
                    detail: "too large".into(),
                })
            } else {
                Ok(s + d)
            }
        }
    }

    #[test]
    fn time_grid_counts_steps() {
        let g = TimeGrid::new(1.0, 0.1).unwrap();
        assert_eq!(g.n_steps(), 10);
        assert!(g.is_exact());
        let g = TimeGrid::new(0.3, 0.1).unwrap();
        assert_eq!(g.n_steps(), 3);
        let g = TimeGrid::new(1.0, 0.3).unwrap();
        assert_eq!(g.n_steps(), 3);
        assert!(!g.is_exact());
        assert!(g.t(3) <= 1.0 && 1.0 < g.t(4));
        assert_eq!(g.t(7), 7.0 * 0.3);
        let g = TimeGrid::new(0.05, 0.1).unwrap();
        assert_eq!(g.n_steps(), 0);
    }

    #[test]
    fn time_grid_rejects_bad_input() {
        assert!(TimeGrid::new(0.0, 0.1).is_err());
        assert!(TimeGrid::new(1.0, -0.1).is_err());
        assert!(TimeGrid::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn zero_step_is_identity() {
        assert_eq!(godunov_step(&Exp(-1.0), &Drift, &0.7, 0.0).unwrap(), 0.7);
        assert_eq!(strang_step(&Exp(-1.0), &Drift, &0.7, 0.0).unwrap(), 0.7);
    }

    #[test]
    fn identity_sub_flow_reduces_to_the_other_flow() {
        let a = Exp(-0.3);
        assert_eq!(
            godunov_step(&a, &IdentityFlow, &2.0, 0.25).unwrap(),
            a.evolve(&2.0, 0.25).unwrap()
        );
        let s = strang_step(&IdentityFlow, &Drift, &2.0, 0.25).unwrap();
        assert!((s - Drift.evolve(&2.0, 0.25).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn scheme_ordering() {
        // A = drift, B = scaling by e: the order matters.
        let a = Drift;
        let b = Exp(1.0);
        let g = split_step(&a, &b, SplitScheme::Godunov, &1.0, 1.0).unwrap();
        let r = split_step(&a, &b, SplitScheme::GodunovReversed, &1.0, 1.0).unwrap();
        assert!((g - (1.0_f64.exp() + 1.0)).abs() < 1e-15);
        assert!((r - 2.0 * 1.0_f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn empty_run_holds_initial_state() {
        let g = TimeGrid::new(0.05, 0.1).unwrap();
        let traj = run_splitting(&Drift, &Exp(1.0), 3.0, &g, SplitScheme::Strang).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.states()[0], (0.0, 3.0));
    }

    #[test]
    fn failure_carries_step_index() {
        // Step n advances 0.25·n by 0.25; the flow fails once the result exceeds 1.5.
        let g = TimeGrid::new(2.0, 0.25).unwrap();
        let err =
            run_splitting(&IdentityFlow, &Failing, 0.0, &g, SplitScheme::Godunov).unwrap_err();
        assert!(err.is_blow_up());
        assert_eq!(err.step(), Some(6));
    }

    #[test]
    fn non_finite_state_aborts() {
        let g = TimeGrid::new(1.0, 0.5).unwrap();
        let err =
            run_splitting(&Exp(1e4), &IdentityFlow, 1.0, &g, SplitScheme::Godunov).unwrap_err();
        assert_eq!(err.step(), Some(0));
        assert!(
            run_splitting(&Exp(1.0), &IdentityFlow, f64::NAN, &g, SplitScheme::Godunov).is_err()
        );
    }

    #[test]
    fn extension_on_diagonal_nodes_is_stored_state() {
        let (a, b) = (Exp(-0.7), Drift);
        for scheme in SplitScheme::ALL {
            let g = TimeGrid::new(1.0, 0.1).unwrap();
            let traj = run_splitting(&a, &b, 0.4, &g, scheme).unwrap();
            for n in 0..=g.n_steps() {
                let v = extension_eval(&a, &b, &traj, g.t(n), g.t(n)).unwrap();
                assert_eq!(v.to_bits(), traj.state(n).to_bits());
            }
        }
    }

    #[test]
    fn extension_top_corner_matches_step() {
        let (a, b) = (Exp(-0.7), Drift);
        let g = TimeGrid::new(1.0, 0.1).unwrap();
        let traj = run_splitting(&a, &b, 0.4, &g, SplitScheme::Godunov).unwrap();
        // the square above the last node extends past T
        let last = traj.final_state();
        let top = g.t(g.n_steps() + 1);
        let v = extension_eval(&a, &b, &traj, top, top).unwrap();
        assert_eq!(v, godunov_step(&a, &b, last, 0.1).unwrap());
    }

    #[test]
    fn shared_corner_is_consistent() {
        // (t_{n+1}, t_n) is not on the diagonal: it belongs only to square n.
        // (t_{n+1}, t_{n+1}) is shared; the lower square's formula must agree
        // with the stored state.
        let (a, b) = (Exp(-0.7), Drift);
        let g = TimeGrid::new(1.0, 0.1).unwrap();
        let traj = run_splitting(&a, &b, 0.4, &g, SplitScheme::Godunov).unwrap();
        for n in 0..g.n_steps() {
            let cell = extension_cell(&traj, g.t(n + 1), g.t(n + 1)).unwrap();
            assert_eq!(cell.step, n);
            let lower = eval_in_cell(&a, &b, &traj, &cell, g.t(n + 1), g.t(n + 1)).unwrap();
            assert!((lower - traj.state(n + 1)).abs() < 1e-14);
        }
    }

    #[test]
    fn strang_half_squares() {
        let (a, b) = (Exp(-0.7), Drift);
        let g = TimeGrid::new(1.0, 0.2).unwrap();
        let traj = run_splitting(&a, &b, 0.4, &g, SplitScheme::Strang).unwrap();
        let v0 = *traj.state(1);
        // first half-square of step 1: [0.2, 0.3]^2
        let v = extension_eval(&a, &b, &traj, 0.25, 0.22).unwrap();
        assert!((v - (v0 + 0.05) * (-0.7f64 * 0.02).exp()).abs() < 1e-15);
        // second half-square: [0.3, 0.4]^2
        let mid = (v0 + 0.1) * (-0.7f64 * 0.1).exp();
        let v = extension_eval(&a, &b, &traj, 0.33, 0.38).unwrap();
        assert!((v - (mid * (-0.7f64 * 0.08).exp() + 0.03)).abs() < 1e-15);
        // off the half-squares
        assert!(extension_eval(&a, &b, &traj, 0.25, 0.35).is_err());
    }

    #[test]
    fn extension_rejects_points_off_the_squares() {
        let g = TimeGrid::new(1.0, 0.1).unwrap();
        let traj = run_splitting(&Drift, &Exp(1.0), 0.1, &g, SplitScheme::Godunov).unwrap();
        assert!(extension_eval(&Drift, &Exp(1.0), &traj, 0.05, 0.25).is_err());
        assert!(extension_eval(&Drift, &Exp(1.0), &traj, -0.05, 0.0).is_err());
        assert!(extension_eval(&Drift, &Exp(1.0), &traj, 1.15, 1.15).is_err());
        assert!(extension_eval(&Drift, &Exp(1.0), &traj, 1.05, 1.08).is_ok());
    }

    #[test]
    fn traditional_extension_endpoints() {
        let (a, b) = (Exp(-0.7), Drift);
        let g = TimeGrid::new(1.0, 0.1).unwrap();
        let traj = run_splitting(&a, &b, 0.4, &g, SplitScheme::Godunov).unwrap();
        let v = traditional_extension_eval(&a, &b, &traj, 0.3).unwrap();
        assert_eq!(v, *traj.state(3));
        // midpoint: B for the full step
        let v = traditional_extension_eval(&a, &b, &traj, 0.35).unwrap();
        assert!((v - (traj.state(3) + 0.1)).abs() < 1e-15);
        let v = traditional_extension_eval(&a, &b, &traj, 0.375).unwrap();
        assert!((v - (traj.state(3) + 0.1) * (-0.7f64 * 0.05).exp()).abs() < 1e-15);
        assert!(traditional_extension_eval(&a, &b, &traj, 1.2).is_err());

        let traj = run_splitting(&a, &b, 0.4, &g, SplitScheme::Strang).unwrap();
        assert!(matches!(
            traditional_extension_eval(&a, &b, &traj, 0.35),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn scheme_parsing() {
        for s in SplitScheme::ALL {
            assert_eq!(s.as_str().parse::<SplitScheme>().unwrap(), s);
        }
        assert!("yoshida".parse::<SplitScheme>().is_err());
    }
}
