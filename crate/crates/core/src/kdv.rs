//! KdV `u_t = u u_x - u_xxx` split into the Airy part `A(u) = -u_xxx` and the
//! Burgers part `B(u) = u u_x`.
//!
//! * [`AiryFlow`] is exact: a phase `e^{i k³ τ}` per Fourier mode.
//! * [`BurgersFlow`] is classical RK4 in physical space on the dealiased
//!   pseudospectral right-hand side, with a CFL-limited substep.
//! * [`KdvReference`] integrates the full equation with integrating-factor
//!   RK4 and serves as the fine reference solution.
//!
//! The module also carries the diagnostics of the splitting error: the
//! commutator `[A, B]`, the forcing `F = v_t - B(v)` of the two-time-variable
//! extension, the first three conserved quantities and the exact soliton.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    dealiased_product, dealiased_product_spectral, derivative, derivative_multiplier, PeriodicGrid,
    RealField,
};
use crate::splitting::{eval_in_cell, extension_cell, FlowMap, SplitTrajectory};

/// Minimum `κL` for soliton data; the tail at the domain edge is then below ~1e-12.
pub const MIN_SOLITON_KAPPA_L: f64 = 30.0;

/// A flow signals blow-up once `max|u|` exceeds this multiple of its initial value.
pub const BLOW_UP_GROWTH: f64 = 10.0;

fn check_grid(flow: &str, grid: &PeriodicGrid, f: &RealField) -> Result<()> {
    if grid.same_as(f.grid()) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "flow {flow} was built for a different grid"
        )))
    }
}

/// Exact flow of `v_τ = -v_xxx`.
#[derive(Debug, Clone)]
pub struct AiryFlow {
    grid: Arc<PeriodicGrid>,
    dispersion_sign: f64,
}

impl AiryFlow {
    pub fn new(grid: Arc<PeriodicGrid>) -> Self {
        Self {
            grid,
            dispersion_sign: 1.0,
        }
    }

    /// Airy flow with the phase `e^{-i k³ τ}` instead of `e^{i k³ τ}`, i.e. the
    /// flow of `v_τ = +v_xxx`. Only useful as a deliberately wrong flow in
    /// mutation tests.
    #[doc(hidden)]
    pub fn with_flipped_dispersion(grid: Arc<PeriodicGrid>) -> Self {
        Self {
            grid,
            dispersion_sign: -1.0,
        }
    }

    pub fn grid(&self) -> &Arc<PeriodicGrid> {
        &self.grid
    }

    pub fn evolve_field(&self, f: &RealField, tau: f64) -> RealField {
        let grid = f.grid();
        let mut coeffs = grid.forward(f.values());
        apply_airy_phase(grid, &mut coeffs, self.dispersion_sign * tau);
        RealField::from_parts(grid.clone(), grid.inverse(coeffs))
    }
}

/// Multiplies each mode by `e^{i k³ τ}`; the Nyquist mode, which `A` annihilates, is left alone.
fn apply_airy_phase(grid: &PeriodicGrid, coeffs: &mut [Complex64], tau: f64) {
    let nyq = grid.nyquist_slot();
    for (i, (c, &k)) in coeffs.iter_mut().zip(grid.wavenumbers()).enumerate() {
        if i != nyq {
            *c *= Complex64::from_polar(1.0, k * k * k * tau);
        }
    }
}

/// `v(τ)` for `v_τ + v_xxx = 0`, `v(0) = f`. `tau` may be negative.
pub fn airy_evolve(f: &RealField, tau: f64) -> RealField {
    AiryFlow::new(f.grid().clone()).evolve_field(f, tau)
}

impl FlowMap<RealField> for AiryFlow {
    fn label(&self) -> &str {
        "A"
    }

    fn evolve(&self, state: &RealField, duration: f64) -> Result<RealField> {
        check_grid("A", &self.grid, state)?;
        if duration == 0.0 {
            return Ok(state.clone());
        }
        Ok(self.evolve_field(state, duration))
    }
}

/// `P(P u · P u_x)`, the dealiased Burgers nonlinearity, from physical samples.
fn burgers_rhs(grid: &PeriodicGrid, u: &[f64]) -> Vec<f64> {
    let mut uh = grid.forward(u);
    grid.truncate(&mut uh);
    burgers_rhs_spectral(grid, uh)
}

/// Same as [`burgers_rhs`] from truncated coefficients.
fn burgers_rhs_spectral(grid: &PeriodicGrid, uh: Vec<Complex64>) -> Vec<f64> {
    let uxh: Vec<Complex64> = uh
        .iter()
        .enumerate()
        .map(|(i, c)| c * derivative_multiplier(grid, i, 1))
        .collect();
    dealiased_product_spectral(grid, uh, uxh)
}

/// RK4 solver for `v_t = v v_x`.
///
/// The substep count for a call of duration `t` on data `f` is
/// `max(1, ceil(t · k_max · max|f| / cfl))`, multiplied by `refinement`.
#[derive(Debug, Clone)]
pub struct BurgersFlow {
    grid: Arc<PeriodicGrid>,
    cfl: f64,
    refinement: usize,
}

impl BurgersFlow {
    pub const DEFAULT_CFL: f64 = 0.5;

    pub fn new(grid: Arc<PeriodicGrid>) -> Self {
        Self {
            grid,
            cfl: Self::DEFAULT_CFL,
            refinement: 1,
        }
    }

    /// Multiplies every substep count by `refinement` (at least 1).
    pub fn with_refinement(mut self, refinement: usize) -> Self {
        self.refinement = refinement.max(1);
        self
    }

    pub fn grid(&self) -> &Arc<PeriodicGrid> {
        &self.grid
    }

    pub fn substeps(&self, f: &RealField, t: f64) -> usize {
        let raw = (t * self.grid.k_max() * f.max_abs() / self.cfl).ceil();
        let base = if raw.is_finite() && raw >= 1.0 {
            raw as usize
        } else {
            1
        };
        base * self.refinement
    }

    /// Advances `f` by `t` with exactly `n_sub` RK4 substeps.
    pub fn evolve_with_substeps(&self, f: &RealField, t: f64, n_sub: usize) -> Result<RealField> {
        check_grid("B", &self.grid, f)?;
        if t < 0.0 || !t.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "Burgers flow needs a non-negative duration, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(f.clone());
        }
        let grid = &*self.grid;
        let n_sub = n_sub.max(1);
        let h = t / n_sub as f64;
        let limit = BLOW_UP_GROWTH * f.max_abs();
        let mut u = f.values().to_vec();
        let stage = |u: &[f64], k: &[f64], a: f64| -> Vec<f64> {
            u.iter().zip(k).map(|(x, y)| x + a * y).collect()
        };
        for step in 0..n_sub {
            let k1 = burgers_rhs(grid, &u);
            let k2 = burgers_rhs(grid, &stage(&u, &k1, 0.5 * h));
            let k3 = burgers_rhs(grid, &stage(&u, &k2, 0.5 * h));
            let k4 = burgers_rhs(grid, &stage(&u, &k3, h));
            for (i, x) in u.iter_mut().enumerate() {
                *x += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !peak.is_finite() || peak > limit {
                return Err(Error::BlowUp {
                    flow: "B".into(),
                    detail: format!(
                        "max|u| = {peak:e} after substep {} of {n_sub} (initial {:e})",
                        step + 1,
                        f.max_abs()
                    ),
                });
            }
        }
        Ok(RealField::from_parts(self.grid.clone(), u))
    }

    pub fn evolve_field(&self, f: &RealField, t: f64) -> Result<RealField> {
        self.evolve_with_substeps(f, t, self.substeps(f, t))
    }
}

/// `v(t)` for `v_t = v v_x`, `v(0) = f`, with the default substep policy.
pub fn burgers_evolve(f: &RealField, t: f64) -> Result<RealField> {
    BurgersFlow::new(f.grid().clone()).evolve_field(f, t)
}

impl FlowMap<RealField> for BurgersFlow {
    fn label(&self) -> &str {
        "B"
    }

    fn evolve(&self, state: &RealField, duration: f64) -> Result<RealField> {
        self.evolve_field(state, duration)
    }
}

/// Integrating-factor RK4 for the full KdV equation.
///
/// In the variables `ŵ_m = e^{-i k_m³ s} û_m` the stiff Airy term drops out
/// and RK4 only sees the dealiased nonlinearity. The substep is the smaller
/// of the advective CFL bound (`cfl / (k_max · max|u0|)`) and `max_substep`.
#[derive(Debug, Clone)]
pub struct KdvReference {
    grid: Arc<PeriodicGrid>,
    cfl: f64,
    max_substep: Option<f64>,
    nonlinear: bool,
    dispersion_sign: f64,
}

impl KdvReference {
    pub const DEFAULT_CFL: f64 = 0.25;

    pub fn new(grid: Arc<PeriodicGrid>) -> Self {
        Self {
            grid,
            cfl: Self::DEFAULT_CFL,
            max_substep: None,
            nonlinear: true,
            dispersion_sign: 1.0,
        }
    }

    pub fn with_max_substep(mut self, max_substep: f64) -> Self {
        self.max_substep = Some(max_substep);
        self
    }

    /// Drops the nonlinearity, reducing the integrator to the Airy flow.
    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    /// See [`AiryFlow::with_flipped_dispersion`].
    #[doc(hidden)]
    pub fn with_flipped_dispersion(mut self) -> Self {
        self.dispersion_sign = -1.0;
        self
    }

    pub fn grid(&self) -> &Arc<PeriodicGrid> {
        &self.grid
    }

    pub fn max_substep(&self) -> Option<f64> {
        self.max_substep
    }

    pub fn substeps(&self, f: &RealField, t: f64) -> usize {
        let cfl = (t * self.grid.k_max() * f.max_abs() / self.cfl).ceil();
        let cap = self
            .max_substep
            .map_or(0.0, |h| (t / h * (1.0 - 1e-12)).ceil());
        let n = cfl.max(cap);
        if n.is_finite() && n >= 1.0 {
            n as usize
        } else {
            1
        }
    }

    pub fn evolve_field(&self, f: &RealField, t: f64) -> Result<RealField> {
        self.evolve_with_substeps(f, t, self.substeps(f, t))
    }

    pub fn evolve_with_substeps(&self, f: &RealField, t: f64, n_sub: usize) -> Result<RealField> {
        check_grid("C", &self.grid, f)?;
        if t < 0.0 || !t.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "reference integrator needs a non-negative duration, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(f.clone());
        }
        let grid = &*self.grid;
        let n_sub = n_sub.max(1);
        let h = t / n_sub as f64;
        let nyq = grid.nyquist_slot();
        let phase = |scale: f64| -> Vec<Complex64> {
            grid.wavenumbers()
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    if i == nyq {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::from_polar(1.0, self.dispersion_sign * k * k * k * scale)
                    }
                })
                .collect()
        };
        let e_half = phase(0.5 * h);
        let e_full = phase(h);
        let limit = BLOW_UP_GROWTH * f.max_abs();

        // h·N(v̂) and, for the blow-up check, the peak of the truncated field.
        let nonlinear = |v: &[Complex64]| -> (Vec<Complex64>, f64) {
            let mut vt = v.to_vec();
            grid.truncate(&mut vt);
            if !self.nonlinear {
                let peak = grid.inverse(vt).iter().fold(0.0f64, |m, x| m.max(x.abs()));
                return (vec![Complex64::new(0.0, 0.0); v.len()], peak);
            }
            let peak_field = grid.inverse(vt.clone());
            let peak = peak_field.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let prod = burgers_rhs_spectral(grid, vt);
            let mut nh = grid.forward(&prod);
            grid.truncate(&mut nh);
            for c in nh.iter_mut() {
                *c *= h;
            }
            (nh, peak)
        };

        let mut v = grid.forward(f.values());
        for step in 0..n_sub {
            let (a, peak) = nonlinear(&v);
            if !peak.is_finite() || peak > limit {
                return Err(Error::BlowUp {
                    flow: "C".into(),
                    detail: format!("max|u| = {peak:e} at substep {step} of {n_sub}"),
                });
            }
            let arg_b: Vec<Complex64> = (0..v.len())
                .map(|i| e_half[i] * (v[i] + 0.5 * a[i]))
                .collect();
            let (b, _) = nonlinear(&arg_b);
            let arg_c: Vec<Complex64> = (0..v.len())
                .map(|i| e_half[i] * v[i] + 0.5 * b[i])
                .collect();
            let (c, _) = nonlinear(&arg_c);
            let arg_d: Vec<Complex64> = (0..v.len())
                .map(|i| e_full[i] * v[i] + e_half[i] * c[i])
                .collect();
            let (d, _) = nonlinear(&arg_d);
            for i in 0..v.len() {
                v[i] = e_full[i] * v[i]
                    + (e_full[i] * a[i] + 2.0 * e_half[i] * (b[i] + c[i]) + d[i]) / 6.0;
            }
        }
        let values = grid.inverse(v);
        let out = RealField::from_parts(self.grid.clone(), values);
        if !crate::splitting::SplitState::is_finite(&out) || out.max_abs() > limit {
            return Err(Error::BlowUp {
                flow: "C".into(),
                detail: format!("max|u| = {:e} at the end of the call", out.max_abs()),
            });
        }
        Ok(out)
    }
}

/// Reference solution with the default CFL policy and no substep cap.
pub fn kdv_reference_evolve(f: &RealField, t: f64) -> Result<RealField> {
    KdvReference::new(f.grid().clone()).evolve_field(f, t)
}

impl FlowMap<RealField> for KdvReference {
    fn label(&self) -> &str {
        "C"
    }

    fn evolve(&self, state: &RealField, duration: f64) -> Result<RealField> {
        self.evolve_field(state, duration)
    }
}

/// One-soliton parameters: `u = -12κ² sech²(κ(x - x0 - 4κ²t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    pub kappa: f64,
    pub x0: f64,
}

impl SolitonParams {
    /// Checks `κ > 0` and `κL ≥ 30` for the domain length the soliton will live on.
    pub fn new(kappa: f64, x0: f64, length: f64) -> Result<Self> {
        let p = Self { kappa, x0 };
        p.check(length)?;
        Ok(p)
    }

    pub fn check(&self, length: f64) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "soliton kappa must be positive, got {}",
                self.kappa
            )));
        }
        if self.kappa * length < MIN_SOLITON_KAPPA_L {
            return Err(Error::InvalidConfig(format!(
                "kappa·L = {} is below {MIN_SOLITON_KAPPA_L}; the soliton tail would not decay on the domain",
                self.kappa * length
            )));
        }
        Ok(())
    }

    pub fn speed(&self) -> f64 {
        4.0 * self.kappa * self.kappa
    }

    pub fn amplitude(&self) -> f64 {
        -12.0 * self.kappa * self.kappa
    }

    /// `∫ u dx = -24κ` on the whole line.
    pub fn mass(&self) -> f64 {
        -24.0 * self.kappa
    }
}

fn sech2(z: f64) -> f64 {
    let e = (-2.0 * z.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// Exact soliton at time `t`, wrapped periodically onto the grid.
pub fn soliton(grid: &Arc<PeriodicGrid>, params: &SolitonParams, t: f64) -> Result<RealField> {
    params.check(grid.length())?;
    let l = grid.length();
    let crest = params.x0 + params.speed() * t;
    let amp = params.amplitude();
    let kappa = params.kappa;
    Ok(RealField::from_fn(grid.clone(), |x| {
        let y = (x - crest).rem_euclid(l);
        let y = if y >= 0.5 * l { y - l } else { y };
        (-2..=2)
            .map(|j| sech2(kappa * (y + j as f64 * l)))
            .sum::<f64>()
            * amp
    }))
}

/// `[A, B](f, f) = -(3/2) ∂_x² (f_x)²`.
pub fn commutator_ab(f: &RealField) -> RealField {
    let fx = derivative(f, 1);
    let sq = dealiased_product(&fx, &fx).expect("same grid");
    derivative(&sq, 2).scaled(-1.5)
}

/// Default finite-difference step of [`forcing_f`] relative to `Δt`.
pub const FORCING_FD_FRACTION: f64 = 1.0 / 64.0;

/// `F(t, τ) = v_t(t, τ) - v v_x` on the extension of a splitting run, with
/// `v_t` by a central difference of width `fd_eps`.
///
/// `t ± fd_eps` must stay inside the (half-)square containing `(t, τ)`.
pub fn forcing_f<A, B>(
    traj: &SplitTrajectory<RealField>,
    flow_a: &A,
    flow_b: &B,
    t: f64,
    tau: f64,
    fd_eps: f64,
) -> Result<RealField>
where
    A: FlowMap<RealField> + ?Sized,
    B: FlowMap<RealField> + ?Sized,
{
    if !(fd_eps.is_finite() && fd_eps > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "finite-difference step must be positive, got {fd_eps}"
        )));
    }
    let cell = extension_cell(traj, t, tau)?;
    if t - fd_eps < cell.start || t + fd_eps > cell.end() {
        return Err(Error::OutsideDomain {
            t: if t - fd_eps < cell.start {
                t - fd_eps
            } else {
                t + fd_eps
            },
            tau,
        });
    }
    let plus = eval_in_cell(flow_a, flow_b, traj, &cell, t + fd_eps, tau)?;
    let minus = eval_in_cell(flow_a, flow_b, traj, &cell, t - fd_eps, tau)?;
    let v = eval_in_cell(flow_a, flow_b, traj, &cell, t, tau)?;
    let vt = plus.lin_comb(0.5 / fd_eps, &minus, -0.5 / fd_eps)?;
    let bv = RealField::from_parts(v.grid().clone(), burgers_rhs(v.grid(), v.values()));
    vt.checked_sub(&bv)
}

/// Mass, momentum and energy of a KdV state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedQuantities {
    /// `∫ u dx`
    pub mass: f64,
    /// `∫ u² dx`
    pub momentum: f64,
    /// `∫ (u³/6 + u_x²/2) dx`
    pub hamiltonian: f64,
}

pub fn conserved_quantities(f: &RealField) -> ConservedQuantities {
    let grid = f.grid();
    let l = grid.length();
    let coeffs = grid.forward(f.values());
    let nyq = grid.nyquist_slot();
    let mass = l * coeffs[0].re;
    let momentum = l * coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let grad = l * coeffs
        .iter()
        .zip(grid.wavenumbers())
        .enumerate()
        .filter(|(i, _)| *i != nyq)
        .map(|(_, (c, &k))| k * k * c.norm_sqr())
        .sum::<f64>();
    let cubic = grid.dx() * f.values().iter().map(|u| u * u * u).sum::<f64>();
    ConservedQuantities {
        mass,
        momentum,
        hamiltonian: cubic / 6.0 + 0.5 * grad,
    }
}
