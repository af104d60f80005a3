//! Operator splitting for evolution equations `u_t = A(u) + B(u)`.
//!
//! The crate provides an equation-agnostic splitting engine (Godunov, reversed
//! Godunov and Strang compositions, together with the two-time-variable
//! extension of the discrete solution), a periodic pseudospectral toolbox, the
//! KdV sub-flows (exact Airy flow and pseudospectral Burgers flow), the
//! logistic ODE with closed-form flows, and a refinement-study harness that
//! measures convergence orders in discrete Sobolev norms.
//!
//! ```
//! use splitkdv_core::logistic::{LogisticFlowA, LogisticFlowB, godunov_closed_form};
//! use splitkdv_core::splitting::{run_splitting, SplitScheme, TimeGrid};
//!
//! let grid = TimeGrid::new(1.0, 0.1).unwrap();
//! let traj = run_splitting(&LogisticFlowA, &LogisticFlowB, 0.5, &grid, SplitScheme::Godunov).unwrap();
//! let closed = godunov_closed_form(0.5, 0.1, 10).unwrap();
//! assert!((traj.final_state() - closed).abs() < 1e-12);
//! ```

pub mod convergence;
pub mod error;
pub mod kdv;
pub mod logistic;
pub mod selftest;
pub mod spectral;
pub mod splitting;

pub use error::{Error, Result};
