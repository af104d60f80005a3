//! The logistic ODE `u' = u(u - 1)` split as `A(u) = -u`, `B(u) = u²`.
//!
//! Every flow involved has a closed form, so this instance checks the
//! splitting engine to machine precision.

use crate::error::{Error, Result};
use crate::splitting::FlowMap;

/// `Φ_C(t) u0 = u0 / (u0 + e^t (1 - u0))`, the exact solution.
pub fn exact_solution(u0: f64, t: f64) -> f64 {
    u0 / (u0 + t.exp() * (1.0 - u0))
}

/// `Φ_A(t) u0 = u0 e^{-t}`.
pub fn flow_a(u0: f64, t: f64) -> f64 {
    u0 * (-t).exp()
}

/// `Φ_B(t) u0 = u0 / (1 - u0 t)`; blows up at `t* = 1/u0`.
pub fn flow_b(u0: f64, t: f64) -> Result<f64> {
    if u0 * t >= 1.0 {
        return Err(Error::BlowUp {
            flow: "B".into(),
            detail: format!("u' = u² from u0 = {u0} blows up at t = {}", 1.0 / u0),
        });
    }
    Ok(u0 / (1.0 - u0 * t))
}

/// Sufficient bound `2(1 - u0(1 - e^{-T}))` on the step; choose `Δt` strictly below it.
pub fn dt_admissible(u0: f64, final_time: f64) -> f64 {
    2.0 * (1.0 + u0 * (-final_time).exp_m1())
}

/// Closed form of `n` Godunov steps `(Φ_A(Δt)Φ_B(Δt))^n u0`:
///
/// `u0(1 - e^{-Δt}) / ((1 - e^{-Δt}) e^{t_n} + u0 Δt (1 - e^{t_n}))`.
pub fn godunov_closed_form(u0: f64, dt: f64, n: usize) -> Result<f64> {
    let tn = n as f64 * dt;
    let one_minus_decay = -(-dt).exp_m1();
    let denom = one_minus_decay * tn.exp() - u0 * dt * tn.exp_m1();
    if denom.abs() < 1e-14 {
        return Err(Error::Inadmissible {
            dt,
            bound: dt_admissible(u0, tn),
        });
    }
    Ok(u0 * one_minus_decay / denom)
}

/// `n` Strang steps `(Φ_B(Δt/2)Φ_A(Δt)Φ_B(Δt/2))^n u0`, by composing the exact flows.
pub fn strang_closed_form(u0: f64, dt: f64, n: usize) -> Result<f64> {
    let half = 0.5 * dt;
    (0..n).try_fold(u0, |u, _| flow_b(flow_a(flow_b(u, half)?, dt), half))
}

/// The alternative closed form
/// `u0(1 - e^{-Δt}) / ((1 - e^{-Δt}) e^{t_n} + u0 Δt (e^{t_n} - 1)(e^{Δt} + 1)/2)`.
///
/// It does not agree with [`strang_closed_form`]: at `n = 1` the denominator
/// reduces to `e^{Δt}(1 + u0 Δt (e^{Δt} + 1)/2)`, whereas the composition gives
/// `e^{Δt}(1 - u0 (Δt/2)(1 + e^{-Δt}))`; the two differ at first order in `Δt`.
/// Kept only to quantify that discrepancy.
pub fn strang_printed_formula(u0: f64, dt: f64, n: usize) -> f64 {
    let tn = n as f64 * dt;
    let one_minus_decay = -(-dt).exp_m1();
    let denom = one_minus_decay * tn.exp() + u0 * dt * tn.exp_m1() * (dt.exp() + 1.0) / 2.0;
    u0 * one_minus_decay / denom
}

/// Extension `v(t, τ) = v_n e^{-(τ - t_n)} / (1 - v_n (t - t_n))` on a Godunov square.
pub fn godunov_extension(vn: f64, t_offset: f64, tau_offset: f64) -> f64 {
    vn * (-tau_offset).exp() / (1.0 - vn * t_offset)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LogisticFlowA;

#[derive(Debug, Clone, Copy, Default)]
pub struct LogisticFlowB;

/// Exact flow of the full equation.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogisticExactFlow;

impl FlowMap<f64> for LogisticFlowA {
    fn label(&self) -> &str {
        "A"
    }

    fn evolve(&self, state: &f64, duration: f64) -> Result<f64> {
        Ok(flow_a(*state, duration))
    }
}

impl FlowMap<f64> for LogisticFlowB {
    fn label(&self) -> &str {
        "B"
    }

    fn evolve(&self, state: &f64, duration: f64) -> Result<f64> {
        flow_b(*state, duration)
    }
}

impl FlowMap<f64> for LogisticExactFlow {
    fn label(&self) -> &str {
        "C"
    }

    fn evolve(&self, state: &f64, duration: f64) -> Result<f64> {
        Ok(exact_solution(*state, duration))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub u0: f64,
    pub final_time: f64,
    pub dt: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            u0: 0.5,
            final_time: 1.0,
            dt: 0.05,
        }
    }
}

impl LogisticConfig {
    /// Checks `u0 ∈ (0, 1)`, `T > 0` and `0 < Δt < dt_admissible(u0, T)`.
    pub fn validate(&self) -> Result<()> {
        if !(self.u0 > 0.0 && self.u0 < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "u0 must lie in (0, 1), got {}",
                self.u0
            )));
        }
        if !(self.final_time.is_finite() && self.final_time > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "final time must be positive, got {}",
                self.final_time
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        let bound = dt_admissible(self.u0, self.final_time);
        if self.dt >= bound {
            return Err(Error::Inadmissible { dt: self.dt, bound });
        }
        Ok(())
    }
}
